"""The chi_y genus, from Chern data or from Hodge numbers.

chi_p(M) is the Euler characteristic of the sheaf of holomorphic p-forms;
the chi_y genus is the generating polynomial sum_p chi_p y^p.  Two routes
are implemented and deliberately kept independent:

* from Chern data, via Hirzebruch-Riemann-Roch: chi_p is the integral of
  ch(Omega^p) Td(M), where ch(Omega^p) is the p-th elementary symmetric
  function of the alphabet {exp(-root)};
* from a Hodge diamond, via the signed column sums chi_p = sum_q (-1)^q h^{p,q}.

The expansion of chi_y in powers of (y + 1) packages the genus into the
coefficients a_0, ..., a_n; the even ones A_k = a_{2k} start with the Euler
number A_0 and satisfy the closed form
A_1 = n(3n-5)/24 * c_n[M] + 1/12 * c_1 c_{n-1}[M],
which this module also exposes directly as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .chern import (
    ChernVector,
    GradedClass,
    ManifoldModel,
    exp_alphabet_power_sums,
    integrate,
    power_sums_to_elementary,
    todd_class,
)


@dataclass(frozen=True)
class ChiYPolynomial:
    """chi_y = sum_p chi_p y^p for p = 0..n.

    Formal Chern input can produce non-integral chi_p; that is reported by
    :meth:`integrality_violations`, never rejected.
    """

    chi_p: tuple

    @property
    def n(self) -> int:
        return len(self.chi_p) - 1

    def evaluate(self, y):
        acc = self.chi_p[0]
        power = y if isinstance(y, Fraction) else Fraction(y)
        value = Fraction(1)
        for p in range(1, len(self.chi_p)):
            value = value * power
            acc = acc + self.chi_p[p] * value
        return acc

    def integrality_violations(self) -> list[int]:
        bad = []
        for p, value in enumerate(self.chi_p):
            if isinstance(value, Fraction) and value.denominator != 1:
                bad.append(p)
        return bad


@dataclass(frozen=True)
class MinusOneExpansion:
    """Coefficients a_j of chi_y = sum_j a_j (y+1)^j."""

    coefficients: tuple

    @property
    def n(self) -> int:
        return len(self.coefficients) - 1

    def A(self, k: int):
        """The even coefficient A_k = a_{2k}; zero beyond the polynomial degree."""
        if k < 0:
            raise ValueError("k must be non-negative")
        if 2 * k > self.n:
            return Fraction(0)
        return self.coefficients[2 * k]

    def reconstruct(self) -> ChiYPolynomial:
        """Invert the change of basis back to powers of y."""
        n = self.n
        chi = [Fraction(0)] * (n + 1)
        for j, a in enumerate(self.coefficients):
            for p in range(j + 1):
                chi[p] = chi[p] + a * math.comb(j, p)
        return ChiYPolynomial(tuple(chi))


class HodgeDiamond:
    """A validated (n+1) x (n+1) table of Hodge numbers h^{p,q}."""

    __slots__ = ("table",)

    def __init__(self, table):
        rows = tuple(tuple(row) for row in table)
        size = len(rows)
        if size == 0:
            raise ValueError("empty Hodge table")
        for row in rows:
            if len(row) != size:
                raise ValueError("Hodge table must be square")
            for h in row:
                if not isinstance(h, int) or h < 0:
                    raise ValueError(f"Hodge numbers must be non-negative integers, got {h!r}")
        n = size - 1
        for p in range(size):
            for q in range(size):
                if rows[p][q] != rows[q][p]:
                    raise ValueError(f"Hodge symmetry fails at ({p},{q})")
                if rows[p][q] != rows[n - p][n - q]:
                    raise ValueError(f"Serre duality fails at ({p},{q})")
        object.__setattr__(self, "table", rows)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("HodgeDiamond is immutable")

    def __eq__(self, other):
        if not isinstance(other, HodgeDiamond):
            return NotImplemented
        return self.table == other.table

    __hash__ = None

    @property
    def n(self) -> int:
        return len(self.table) - 1

    def h(self, p: int, q: int) -> int:
        return self.table[p][q]

    @classmethod
    def projective_space(cls, n: int) -> "HodgeDiamond":
        return cls([[1 if p == q else 0 for q in range(n + 1)] for p in range(n + 1)])

    @classmethod
    def from_text(cls, text: str) -> "HodgeDiamond":
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([int(tok) for tok in line.split()])
            except ValueError as exc:
                raise ValueError(f"malformed Hodge table line {line!r}") from exc
        if not rows:
            raise ValueError("no Hodge table rows found")
        return cls(rows)

    @classmethod
    def from_path(cls, path) -> "HodgeDiamond":
        return cls.from_text(Path(path).read_text())


def _omega_characters(m: ManifoldModel, up_to: int) -> list[GradedClass]:
    """Chern characters of Omega^0, ..., Omega^{up_to}: elementary symmetric
    functions of the alphabet {exp(-root)} of the tangent bundle."""
    n = m.n
    power = exp_alphabet_power_sums(m.chern, Fraction(-1), n)
    elementary = power_sums_to_elementary(power[:up_to] if up_to < n else power, up_to)
    return [GradedClass.one(n)] + elementary


def chi_p_from_chern(m: ManifoldModel, p: int):
    """chi_p via Hirzebruch-Riemann-Roch."""
    if not 0 <= p <= m.n:
        raise ValueError(f"p = {p} outside 0..{m.n}")
    omega = _omega_characters(m, p)
    return _pair_top(omega[p], todd_class(m.chern), m)


def _pair_top(a: GradedClass, b: GradedClass, m: ManifoldModel):
    # Only the x^n component of a*b is needed; avoid the full product.
    n = m.n
    acc = a.components[0] * b.components[n]
    for j in range(1, n + 1):
        acc = acc + a.components[j] * b.components[n - j]
    return acc


def chi_y_from_chern(m: ManifoldModel) -> ChiYPolynomial:
    """All chi_p at once, sharing the alphabet and the Todd class."""
    n = m.n
    omega = _omega_characters(m, n)
    todd = todd_class(m.chern)
    return ChiYPolynomial(tuple(_pair_top(omega[p], todd, m) for p in range(n + 1)))


def chi_y_from_hodge(h: HodgeDiamond) -> ChiYPolynomial:
    """chi_p = sum_q (-1)^q h^{p,q}; the independent route used as an oracle."""
    out = []
    for p in range(h.n + 1):
        acc = 0
        for q in range(h.n + 1):
            acc += h.h(p, q) if q % 2 == 0 else -h.h(p, q)
        out.append(Fraction(acc))
    return ChiYPolynomial(tuple(out))


def expand_at_minus_one(chi: ChiYPolynomial) -> MinusOneExpansion:
    """Exact change of basis y^p = sum_j C(p, j) (y+1)^j (-1)^{p-j}."""
    n = chi.n
    out = []
    for j in range(n + 1):
        acc = None
        for p in range(j, n + 1):
            term = math.comb(p, j) * chi.chi_p[p]
            if (p - j) % 2:
                term = -term
            acc = term if acc is None else acc + term
        out.append(acc)
    return MinusOneExpansion(tuple(out))


def a1_closed_form(m: ManifoldModel):
    """A_1 = n(3n-5)/24 * c_n[M] + 1/12 * c_1 c_{n-1}[M], straight from the
    coefficient identity; independent of the expansion pipeline."""
    n = m.n
    c = m.chern
    return Fraction(n * (3 * n - 5), 24) * c.scalar(n) + Fraction(1, 12) * (
        c.scalar(1) * c.scalar(n - 1)
    )


@dataclass(frozen=True)
class PinnedProducts:
    """The four Chern-number values pinned by A_0 and A_1 when both M and a
    hyperplane-like divisor D have the chi_y genus of projective space."""

    euler_m: Fraction  # c_n[M]
    euler_d: Fraction  # c_{n-1}(D)[D]
    c1_cn1_m: Fraction  # c_1 c_{n-1}[M]
    c1_cn2_d: Fraction  # c_1 c_{n-2}(D)[D]


def pinned_products(n: int) -> PinnedProducts:
    if n < 2:
        raise ValueError("needs n >= 2")
    return PinnedProducts(
        euler_m=Fraction(n + 1),
        euler_d=Fraction(n),
        c1_cn1_m=Fraction(n * (n + 1) ** 2, 2),
        c1_cn2_d=Fraction((n - 1) * n**2, 2),
    )
