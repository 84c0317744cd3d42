"""Exact scalar arithmetic over the field Q(sqrt(3)).

All combinatorial predicates in this package run on exact numbers. Plain
rationals are handled by ``fractions.Fraction``; the spiral instance family
needs coordinates of the form a + b*sqrt(3) with rational a, b, which this
module provides as :class:`QSqrt3`. The two types mix freely in arithmetic,
and pure-rational data never pays for the extension field.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

SQRT3 = math.sqrt(3.0)

Scalar = Union[int, Fraction, "QSqrt3"]


class QSqrt3:
    """A number a + b*sqrt(3) with exact rational a, b.

    Comparisons, equality and hashing are exact. A value with b == 0
    compares and hashes equal to the corresponding Fraction, so mixed
    containers behave sensibly.
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = a if isinstance(a, Fraction) else Fraction(a)
        self.b = b if isinstance(b, Fraction) else Fraction(b)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt3(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt3(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt3(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        # (a1 + b1 r)(a2 + b2 r) with r^2 = 3
        return QSqrt3(self.a * o.a + 3 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o._inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self._inverse()

    def _inverse(self) -> "QSqrt3":
        # 1/(a + b r) = (a - b r)/(a^2 - 3 b^2); the norm is nonzero for
        # any nonzero element because sqrt(3) is irrational.
        norm = self.a * self.a - 3 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt3)")
        return QSqrt3(self.a / norm, -self.b / norm)

    def __neg__(self):
        return QSqrt3(-self.a, -self.b)

    def __pos__(self):
        return self

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    # -- order ---------------------------------------------------------

    def sign(self) -> int:
        """Exact sign in {-1, 0, +1}."""
        a, b = self.a, self.b
        if b == 0:
            return -1 if a < 0 else (0 if a == 0 else 1)
        if a == 0:
            return -1 if b < 0 else 1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with 3 b^2 (equality impossible here)
        if a * a > 3 * b * b:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def _cmp(self, other) -> int:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __ne__(self, other):
        r = self.__eq__(other)
        return NotImplemented if r is NotImplemented else not r

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, "sqrt3"))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- conversion ----------------------------------------------------

    def __float__(self):
        return float(self.a) + float(self.b) * SQRT3

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"QSqrt3({self.a!r}, {self.b!r})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt3"


def _coerce(value):
    if isinstance(value, QSqrt3):
        return value
    if isinstance(value, (int, Fraction)):
        return QSqrt3(value)
    return NotImplemented


def sign(value: Scalar) -> int:
    """Exact sign of an int, Fraction or QSqrt3."""
    if isinstance(value, QSqrt3):
        return value.sign()
    return -1 if value < 0 else (0 if value == 0 else 1)


def to_float(value: Scalar) -> float:
    return float(value)


def rational_part(value: Scalar) -> Fraction:
    if isinstance(value, QSqrt3):
        if value.b != 0:
            raise ValueError(f"{value} is not rational")
        return value.a
    return Fraction(value)
