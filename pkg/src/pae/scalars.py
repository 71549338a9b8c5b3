"""Exact arithmetic over Q and Q(i).

Every coefficient and every evaluation result in this package is an element
of Q(i), stored exactly.  Rationals are backed by ``fractions.Fraction``,
which maintains the canonical form we rely on (reduced, positive
denominator, zero as 0/1) and has arbitrary-precision integer components.
Intermediate coefficients in Jones-Wenzl expansions involve factorials of
double-digit integers, so fixed-width arithmetic is not an option.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Fraction

_RationalLike = Union[int, Fraction]

_FRACTION_ZERO = Fraction(0)


class GaussianRational:
    """An element a + b*i of Q(i), with a and b exact rationals.

    Instances are immutable, hashable, and totally ordered component-wise so
    that linear combinations keyed by scalars behave deterministically.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: _RationalLike = 0, im: _RationalLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- ring / field structure ------------------------------------------

    @staticmethod
    def _coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    @staticmethod
    def _raw(re: Fraction, im: Fraction) -> "GaussianRational":
        out = object.__new__(GaussianRational)
        object.__setattr__(out, "re", re)
        object.__setattr__(out, "im", im)
        return out

    def __add__(self, other):
        other = self._coerce(other)
        return self._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(-self.re, -self.im)

    def __sub__(self, other):
        other = self._coerce(other)
        return self._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.im == 0 and other.im == 0:
            out = object.__new__(GaussianRational)
            object.__setattr__(out, "re", self.re * other.re)
            object.__setattr__(out, "im", _FRACTION_ZERO)
            return out
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inv(self) -> "GaussianRational":
        """Multiplicative inverse; raises ZeroDivisionError on 0."""
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- predicates, ordering, hashing -----------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        """Component-wise key for deterministic ordering of terms."""
        return (self.re, self.im)

    # -- rendering --------------------------------------------------------

    def __str__(self):
        return render_gaussian(self)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
MINUS_I = GaussianRational(0, -1)
TWO = GaussianRational(2)


def gr(re: _RationalLike = 0, im: _RationalLike = 0) -> GaussianRational:
    """Shorthand constructor."""
    return GaussianRational(re, im)


def add(a: GaussianRational, b: GaussianRational) -> GaussianRational:
    return a + b


def sub(a: GaussianRational, b: GaussianRational) -> GaussianRational:
    return a - b


def mul(a: GaussianRational, b: GaussianRational) -> GaussianRational:
    return a * b


def neg(a: GaussianRational) -> GaussianRational:
    return -a


def conj(a: GaussianRational) -> GaussianRational:
    return a.conj()


def inv(a: GaussianRational) -> GaussianRational:
    return a.inv()


def render_rational(q: Fraction) -> str:
    """``a/b`` with the denominator shown only when it is not 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def render_gaussian(z: GaussianRational) -> str:
    """``RE + IM i`` with zero parts elided; plain ``0`` for zero.

    The imaginary unit is written with no separating ``*`` so that values
    round-trip through the DSL scalar syntax (``1/2i`` etc.).
    """
    if z.is_zero():
        return "0"
    parts = []
    if z.re != 0:
        parts.append(render_rational(z.re))
    if z.im != 0:
        if z.im == 1:
            imtxt = "i"
        elif z.im == -1:
            imtxt = "-i"
        else:
            imtxt = render_rational(z.im) + "i"
        if parts:
            if z.im > 0:
                parts.append("+ " + imtxt)
            else:
                parts.append("- " + imtxt.lstrip("-"))
        else:
            parts.append(imtxt)
    return " ".join(parts)


def is_canonical(z: GaussianRational) -> bool:
    """Canonicality predicate used by debug assertions in tests.

    Fraction guarantees this by construction; the predicate exists so the
    invariant is stated (and checked) rather than assumed.
    """
    for q in (z.re, z.im):
        if q.denominator <= 0:
            return False
        from math import gcd

        if gcd(abs(q.numerator), q.denominator) != 1 and q.numerator != 0:
            return False
        if q.numerator == 0 and q.denominator != 1:
            return False
    return True
