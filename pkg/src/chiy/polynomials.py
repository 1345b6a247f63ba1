"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial carries a fixed, ordered tuple of variable names and a sparse
term map from exponent tuples to ``fractions.Fraction`` coefficients.  Zero
coefficients are never stored, so structural equality of the term maps is
semantic equality.  Arithmetic is only defined between polynomials that
declare the same variable tuple; plain ``int`` and ``Fraction`` values coerce
to constants, which is what lets these objects serve as coefficients of the
truncated series in :mod:`chiy.series`.

The canonical term order used for display and serialization is graded
lexicographic, highest first.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]


def _as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _grlex_key(exponents: tuple[int, ...]) -> tuple:
    return (sum(exponents), exponents)


class MultivariatePolynomial:
    """Immutable sparse polynomial over the rationals.

    Build values with :meth:`variable`, :meth:`constant` and ordinary
    arithmetic rather than by passing raw term maps:

    >>> c2, c3 = MultivariatePolynomial.generators(("c2", "c3"))
    >>> str(c2 * c2 - 2 * c3 + 1)
    'c2^2 - 2*c3 + 1'
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], object]):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        width = len(variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exponents, coefficient in terms.items():
            exponents = tuple(exponents)
            if len(exponents) != width:
                raise ValueError(f"exponent tuple {exponents} does not match {width} variables")
            if any(e < 0 for e in exponents):
                raise ValueError("negative exponent")
            coefficient = _as_fraction(coefficient)
            if coefficient:
                clean[exponents] = coefficient
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("MultivariatePolynomial is immutable")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultivariatePolynomial":
        return cls(variables, {})

    @classmethod
    def one(cls, variables: Sequence[str]) -> "MultivariatePolynomial":
        return cls.constant(1, variables)

    @classmethod
    def constant(cls, value: object, variables: Sequence[str]) -> "MultivariatePolynomial":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): _as_fraction(value)})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "MultivariatePolynomial":
        variables = tuple(variables)
        if name not in variables:
            raise ValueError(f"{name!r} is not among the declared variables {variables}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: Fraction(1)})

    @classmethod
    def generators(cls, variables: Sequence[str]) -> tuple["MultivariatePolynomial", ...]:
        variables = tuple(variables)
        return tuple(cls.variable(name, variables) for name in variables)

    # ------------------------------------------------------------------
    # ring structure

    def _coerce(self, other: object) -> "MultivariatePolynomial | None":
        if isinstance(other, MultivariatePolynomial):
            if other.variables != self.variables:
                raise ValueError(
                    f"mixed variable contexts: {self.variables} vs {other.variables}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return MultivariatePolynomial.constant(other, self.variables)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = terms.get(exps)
            if acc is None:
                terms[exps] = coeff
            else:
                acc = acc + coeff
                if acc:
                    terms[exps] = acc
                else:
                    del terms[exps]
        return self._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _as_fraction(other)
            if not other:
                return MultivariatePolynomial.zero(self.variables)
            return self._raw(self.variables, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(key)
                if acc is None:
                    terms[key] = c1 * c2
                else:
                    acc = acc + c1 * c2
                    if acc:
                        terms[key] = acc
                    else:
                        del terms[key]
        return self._raw(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = MultivariatePolynomial.one(self.variables)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base if exponent > 1 else base
            exponent >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _as_fraction(other)
            if not other:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self * (1 / other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, MultivariatePolynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            value = _as_fraction(other)
            if not value:
                return not self.terms
            return self.terms == {(0,) * len(self.variables): value}
        return NotImplemented

    __hash__ = None  # mutable-looking equality; not meant for use as dict keys

    def __bool__(self):
        return bool(self.terms)

    @classmethod
    def _raw(cls, variables, terms):
        # Internal fast path: terms are already clean Fractions keyed by tuples.
        obj = object.__new__(cls)
        object.__setattr__(obj, "variables", variables)
        object.__setattr__(obj, "terms", terms)
        return obj

    # ------------------------------------------------------------------
    # structure queries

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial, raising otherwise."""
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Total degree, with the convention that the zero polynomial has degree 0."""
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        idx = self.variables.index(name)
        if not self.terms:
            return 0
        return max(e[idx] for e in self.terms)

    def used_variables(self) -> frozenset[str]:
        used = set()
        for exps in self.terms:
            for name, e in zip(self.variables, exps):
                if e:
                    used.add(name)
        return frozenset(used)

    def coefficient(self, exponents: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(exponents), Fraction(0))

    def univariate_coefficients(self, name: str) -> list["MultivariatePolynomial"]:
        """Coefficients of the powers of ``name``, lowest first, as polynomials
        in the remaining variables (same variable tuple, exponent zeroed)."""
        idx = self.variables.index(name)
        degree = self.degree_in(name)
        buckets: list[dict[tuple[int, ...], Fraction]] = [dict() for _ in range(degree + 1)]
        for exps, coeff in self.terms.items():
            stripped = exps[:idx] + (0,) + exps[idx + 1 :]
            buckets[exps[idx]][stripped] = buckets[exps[idx]].get(stripped, Fraction(0)) + coeff
        return [self._raw(self.variables, {e: c for e, c in b.items() if c}) for b in buckets]

    # ------------------------------------------------------------------
    # substitution and evaluation

    def substitute(self, mapping: Mapping[str, object]) -> "MultivariatePolynomial":
        """Replace variables by rationals or polynomials over the same tuple."""
        values: dict[int, MultivariatePolynomial] = {}
        for name, value in mapping.items():
            idx = self.variables.index(name)
            if isinstance(value, MultivariatePolynomial):
                if value.variables != self.variables:
                    raise ValueError("substitution value uses a different variable context")
                values[idx] = value
            else:
                values[idx] = MultivariatePolynomial.constant(value, self.variables)
        result = MultivariatePolynomial.zero(self.variables)
        power_cache: dict[tuple[int, int], MultivariatePolynomial] = {}
        for exps, coeff in self.terms.items():
            kept = tuple(0 if i in values else e for i, e in enumerate(exps))
            term = self._raw(self.variables, {kept: coeff})
            for idx, e in enumerate(exps):
                if e and idx in values:
                    key = (idx, e)
                    if key not in power_cache:
                        power_cache[key] = values[idx] ** e
                    term = term * power_cache[key]
            result = result + term
        return result

    def evaluate(self, assignment: Mapping[str, object]) -> Fraction:
        """Evaluate at a full rational assignment."""
        point = []
        for name in self.variables:
            if name not in assignment:
                if self.degree_in(name):
                    raise ValueError(f"missing value for {name}")
                point.append(Fraction(0))
            else:
                point.append(_as_fraction(assignment[name]))
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for value, e in zip(point, exps):
                if e:
                    term *= value**e
            total += term
        return total

    def restrict(self, variables: Sequence[str]) -> "MultivariatePolynomial":
        """Re-express over a smaller variable tuple; the dropped variables must
        not occur."""
        variables = tuple(variables)
        for name in self.variables:
            if name not in variables and self.degree_in(name):
                raise ValueError(f"cannot drop {name}: it occurs in {self}")
        index_of = {name: self.variables.index(name) for name in variables}
        terms = {}
        for exps, coeff in self.terms.items():
            terms[tuple(exps[index_of[name]] for name in variables)] = coeff
        return MultivariatePolynomial(variables, terms)

    # ------------------------------------------------------------------
    # presentation

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda item: _grlex_key(item[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            factors = []
            for name, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = str(magnitude) + "*" + "*".join(factors)
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultivariatePolynomial({self})"

    # ------------------------------------------------------------------
    # serialization (integers as decimal strings, terms in canonical order)

    def to_json_terms(self) -> list[dict]:
        return [
            {
                "coeff_num": str(coeff.numerator),
                "coeff_den": str(coeff.denominator),
                "exponents": list(exps),
            }
            for exps, coeff in self.sorted_terms()
        ]

    @classmethod
    def from_json_terms(cls, variables: Sequence[str], items: Iterable[Mapping]) -> "MultivariatePolynomial":
        terms = {}
        for item in items:
            coeff = Fraction(int(item["coeff_num"]), int(item["coeff_den"]))
            terms[tuple(int(e) for e in item["exponents"])] = coeff
        return cls(variables, terms)
