"""Exact half-integers.

Slopes of functions on the target tree live in ``(1/2)Z``: they are integral
except on ramified edges.  A :class:`HalfInt` stores twice its value so that
all arithmetic stays in the integers.
"""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational


@total_ordering
class HalfInt:
    __slots__ = ("twice",)

    def __init__(self, twice: int = 0):
        if not isinstance(twice, int) or isinstance(twice, bool):
            raise TypeError(f"twice-value must be an int, got {twice!r}")
        object.__setattr__(self, "twice", twice)

    def __setattr__(self, name, value):
        raise AttributeError("HalfInt is immutable")

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Coerce an int, Fraction, HalfInt or ``"p/q"`` string."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, bool):
            raise TypeError("bool is not a half-integer")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, Rational):
            doubled = 2 * Fraction(value)
            if doubled.denominator != 1:
                raise ValueError(f"{value} is not a half-integer")
            return cls(int(doubled))
        raise TypeError(f"cannot make a half-integer from {value!r}")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def is_integral(self) -> bool:
        return self.twice % 2 == 0

    def __int__(self) -> int:
        if self.twice % 2:
            raise ValueError(f"{self} is not integral")
        return self.twice // 2

    def __add__(self, other):
        if isinstance(other, HalfInt):
            return HalfInt(self.twice + other.twice)
        if isinstance(other, int):
            return HalfInt(self.twice + 2 * other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, HalfInt):
            return HalfInt(self.twice - other.twice)
        if isinstance(other, int):
            return HalfInt(self.twice - 2 * other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return HalfInt(2 * other - self.twice)
        return NotImplemented

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return HalfInt(self.twice * other)
        return NotImplemented

    __rmul__ = __mul__

    def double(self) -> int:
        return self.twice

    def _key(self, other):
        if isinstance(other, HalfInt):
            return Fraction(other.twice, 2)
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        return None

    def __eq__(self, other):
        key = self._key(other)
        if key is None:
            return NotImplemented
        return self.fraction == key

    def __lt__(self, other):
        key = self._key(other)
        if key is None:
            return NotImplemented
        return self.fraction < key

    def __hash__(self):
        return hash(self.fraction)

    def __bool__(self):
        return self.twice != 0

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


ZERO = HalfInt(0)


def fraction_str(value) -> str:
    """Serialize an exact rational as ``"p"`` or ``"p/q"``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
