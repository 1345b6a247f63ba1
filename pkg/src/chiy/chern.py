"""Chern-class calculus on manifolds with truncated-polynomial cohomology.

The ambient ring is Z[x]/(x^{n+1}) with x of degree one, so every cohomology
class is determined by the n+1 scalars multiplying 1, x, ..., x^n.  A
``ChernVector`` holds the scalars of c_1, ..., c_n of the tangent bundle; a
``ManifoldModel`` fixes on top of that the normalization x^n[M] = 1 used by
:func:`integrate`.

Newton's identities convert between Chern entries (elementary symmetric
functions of the formal roots) and power sums.  From power sums one obtains
the power sums of the exponential alphabet {exp(t * root)} and the Todd
class exp(sum t_m p_m x^m), where the t_m are the coefficients of
log(x / (1 - e^{-x})).  Everything is exact and works unchanged for rational
or polynomial scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .series import TruncatedSeries, bernoulli


def _coerce_scalar(value):
    return Fraction(value) if isinstance(value, int) else value


class ChernVector:
    """The scalars (c_1, ..., c_n) of the tangent Chern classes c_i = scalar * x^i."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(_coerce_scalar(e) for e in entries)
        if not entries:
            raise ValueError("a Chern vector needs at least one entry")
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("ChernVector is immutable")

    @property
    def n(self) -> int:
        return len(self.entries)

    def scalar(self, i: int):
        """The scalar of c_i, with c_0 = 1."""
        if i == 0:
            return Fraction(1)
        if not 1 <= i <= self.n:
            raise ValueError(f"c_{i} undefined in dimension {self.n}")
        return self.entries[i - 1]

    def __eq__(self, other):
        if not isinstance(other, ChernVector):
            return NotImplemented
        return self.entries == other.entries

    __hash__ = None

    def __repr__(self):
        return f"ChernVector({list(self.entries)!r})"


@dataclass(frozen=True)
class ManifoldModel:
    """Formal n-fold: a Chern vector plus the normalization x^n[M] = 1."""

    chern: ChernVector

    @property
    def n(self) -> int:
        return self.chern.n


class GradedClass(TruncatedSeries):
    """A cohomology class on an n-fold, graded by powers of x.

    This is a truncated series whose order equals the manifold dimension;
    component k is the scalar multiplying x^k.
    """

    @property
    def n(self) -> int:
        return self.order

    @property
    def components(self):
        return self.coefficients

    @classmethod
    def from_components(cls, n: int, components) -> "GradedClass":
        return cls(n, components)


def chern_to_power_sums(c: ChernVector) -> list:
    """Power sums p_1, ..., p_n of the formal roots via Newton's identities:
    p_k = c_1 p_{k-1} - c_2 p_{k-2} + ... + (-1)^{k-1} k c_k."""
    p: list = []
    for k in range(1, c.n + 1):
        acc = k * c.scalar(k) if k % 2 else -k * c.scalar(k)
        for i in range(1, k):
            term = c.scalar(i) * p[k - i - 1]
            acc = acc + term if i % 2 else acc - term
        p.append(acc)
    return p


def power_sums_to_elementary(power_sums, rank: int) -> list:
    """Elementary symmetric functions e_1, ..., e_rank from power sums, via
    k e_k = sum_{i=1}^{k} (-1)^{i-1} e_{k-i} p_i with e_0 = 1.

    The entries may be scalars or ``GradedClass`` values; they only need ring
    arithmetic and division by an integer.
    """
    if rank < 0:
        raise ValueError("rank must be non-negative")
    if len(power_sums) < rank:
        raise ValueError(f"need {rank} power sums, got {len(power_sums)}")
    e: list = []
    for k in range(1, rank + 1):
        acc = None
        for i in range(1, k + 1):
            term = power_sums[i - 1] if i == k else e[k - i - 1] * power_sums[i - 1]
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        e.append(acc / k)
    return e


def exp_alphabet_power_sums(c: ChernVector, t, rank: int) -> list[GradedClass]:
    """Power sums P_1, ..., P_rank of the alphabet {exp(t * root)}.

    P_k = sum_i exp(t k root_i) = sum_m (t k)^m p_m x^m / m!, where p_0 equals
    the fiber rank (n for the tangent bundle) and p_m are the root power sums.
    Components above degree n are truncated away.
    """
    if rank < 0:
        raise ValueError("rank must be non-negative")
    t = Fraction(t) if isinstance(t, int) else t
    p = chern_to_power_sums(c)
    out = []
    for k in range(1, rank + 1):
        components = [Fraction(rank)]
        for m in range(1, c.n + 1):
            components.append((t * k) ** m / math.factorial(m) * p[m - 1])
        out.append(GradedClass(c.n, components))
    return out


@lru_cache(maxsize=None)
def _todd_log_coefficients(order: int) -> tuple[Fraction, ...]:
    # Coefficients t_m of log(x / (1 - e^{-x})); the series itself is
    # sum (-1)^m B_m x^m / m!.
    q = TruncatedSeries(
        order,
        [(-1) ** m * bernoulli(m) / math.factorial(m) for m in range(order + 1)],
    )
    return q.log().coefficients


def todd_class(c: ChernVector) -> GradedClass:
    """Todd class of the bundle with Chern vector ``c``, as a graded class."""
    t = _todd_log_coefficients(c.n)
    p = chern_to_power_sums(c)
    components = [Fraction(0)]
    for m in range(1, c.n + 1):
        components.append(t[m] * p[m - 1])
    return GradedClass(c.n, components).exp()


def integrate(m: ManifoldModel, g: GradedClass):
    """Pair a graded class against the fundamental class: pick out the scalar
    of x^n under the normalization x^n[M] = 1."""
    if g.order != m.n:
        raise ValueError(f"class of order {g.order} on an n = {m.n} manifold")
    return g.components[m.n]


def projective_space_chern(n: int) -> ChernVector:
    """Chern vector of P^n: c_i = C(n+1, i)."""
    if n < 1:
        raise ValueError("projective space needs n >= 1")
    return ChernVector([math.comb(n + 1, i) for i in range(1, n + 1)])


def projective_space(n: int) -> ManifoldModel:
    return ManifoldModel(projective_space_chern(n))
