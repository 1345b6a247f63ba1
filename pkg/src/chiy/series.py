"""Bernoulli numbers and truncated power series over exact coefficient rings.

Every series carries an explicit truncation order: a ``TruncatedSeries`` of
order N stores the N+1 coefficients of 1, x, ..., x^N and silently discards
everything above.  Mixing orders is an error, never an implicit coercion.

Coefficients may live in any exact commutative ring that supports ``+``,
``*``, unary ``-``, ``==`` against 0 and 1, and division by a nonzero
rational scalar.  Two rings are used throughout this package: plain
``fractions.Fraction`` (integers are coerced on input) and
``chiy.polynomials.MultivariatePolynomial``.  Nothing here depends on which
one is in play, so numeric and symbolic computations share one code path.

The Bernoulli convention is the one attached to x/(e^x - 1), i.e.
B_1 = -1/2.  All objects are immutable and safe to share across workers.
"""

from __future__ import annotations

import math
from fractions import Fraction

_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m (convention B_1 = -1/2), computed by the
    recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0 and memoized."""
    if not isinstance(m, int) or m < 0:
        raise ValueError("Bernoulli index must be a non-negative integer")
    while len(_BERNOULLI) <= m:
        r = len(_BERNOULLI)
        acc = Fraction(0)
        for j in range(r):
            acc += math.comb(r + 1, j) * _BERNOULLI[j]
        _BERNOULLI.append(-acc / (r + 1))
    return _BERNOULLI[m]


def _coerce_scalar(value):
    return Fraction(value) if isinstance(value, int) else value


def _invert_constant(value) -> Fraction:
    """Invert a unit constant term.  For polynomial coefficients the constant
    must itself be a rational constant."""
    if isinstance(value, int):
        value = Fraction(value)
    if not isinstance(value, Fraction):
        constant_value = getattr(value, "constant_value", None)
        if constant_value is None:
            raise ValueError(f"cannot invert constant term {value!r}")
        value = constant_value()
    if value == 0:
        raise ValueError("constant term is zero, series is not invertible")
    return Fraction(1) / value


class TruncatedSeries:
    """A power series truncated above a fixed degree.

    >>> x = TruncatedSeries.monomial(3, 1)
    >>> (x.exp() * (-x).exp()).coefficients
    (Fraction(1, 1), Fraction(0, 1), Fraction(0, 1), Fraction(0, 1))
    """

    __slots__ = ("order", "coefficients")

    def __init__(self, order: int, coefficients):
        if order < 0:
            raise ValueError("series order must be non-negative")
        coefficients = tuple(_coerce_scalar(c) for c in coefficients)
        if len(coefficients) != order + 1:
            raise ValueError(
                f"order {order} series needs {order + 1} coefficients, got {len(coefficients)}"
            )
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coefficients", coefficients)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def zero(cls, order: int):
        return cls(order, (Fraction(0),) * (order + 1))

    @classmethod
    def one(cls, order: int):
        return cls(order, (Fraction(1),) + (Fraction(0),) * order)

    @classmethod
    def monomial(cls, order: int, degree: int, coefficient=1):
        if not 0 <= degree <= order:
            raise ValueError("monomial degree outside truncation order")
        coeffs = [Fraction(0)] * (order + 1)
        coeffs[degree] = coefficient
        return cls(order, coeffs)

    @property
    def constant_term(self):
        return self.coefficients[0]

    def _check_order(self, other: "TruncatedSeries"):
        if self.order != other.order:
            raise ValueError(f"mixed truncation orders {self.order} and {other.order}")

    def _wrap(self, coefficients):
        return type(self)(self.order, coefficients)

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_order(other)
            return self._wrap(a + b for a, b in zip(self.coefficients, other.coefficients))
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_order(other)
            return self._wrap(a - b for a, b in zip(self.coefficients, other.coefficients))
        return NotImplemented

    def __neg__(self):
        return self._wrap(-a for a in self.coefficients)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_order(other)
            a, b = self.coefficients, other.coefficients
            out = []
            for k in range(self.order + 1):
                acc = a[0] * b[k]
                for i in range(1, k + 1):
                    acc = acc + a[i] * b[k - i]
                out.append(acc)
            return self._wrap(out)
        # anything that is not a series acts as a ring scalar
        scalar = _coerce_scalar(other)
        return self._wrap(scalar * c for c in self.coefficients)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, scalar):
        if isinstance(scalar, TruncatedSeries):
            return NotImplemented
        if isinstance(scalar, int):
            scalar = Fraction(scalar)
        return self._wrap(c / scalar for c in self.coefficients)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and all(
            a == b for a, b in zip(self.coefficients, other.coefficients)
        )

    __hash__ = None

    def exp(self):
        """exp of a series with zero constant term."""
        if not self.constant_term == 0:
            raise ValueError("exp needs a zero constant term")
        result = self.one(self.order)
        term = self.one(self.order)
        for k in range(1, self.order + 1):
            term = (term * self) / k
            result = result + term
        return self._wrap(result.coefficients)

    def log(self):
        """log of a series with constant term one."""
        if not self.constant_term == 1:
            raise ValueError("log needs constant term one")
        u = self - self.one(self.order)
        result = self.zero(self.order)
        power = self.one(self.order)
        for k in range(1, self.order + 1):
            power = power * u
            sign = Fraction(1, k) if k % 2 else Fraction(-1, k)
            result = result + power * sign
        return self._wrap(result.coefficients)

    def inverse(self):
        """Multiplicative inverse; the constant term must be a nonzero rational."""
        lead = _invert_constant(self.constant_term)
        a = self.coefficients
        out = [lead * Fraction(1)]
        for k in range(1, self.order + 1):
            acc = a[1] * out[k - 1]
            for j in range(2, k + 1):
                acc = acc + a[j] * out[k - j]
            out.append(-lead * acc)
        return self._wrap(out)

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, {list(self.coefficients)!r})"
