"""Exact arithmetic on dyadic rationals and rationals with odd denominator.

Mixed quantities (an odd-denominator sampling constant times a dyadic grid
point) are carried as :class:`fractions.Fraction`, whose reduced denominator
always factors as ``2**e * b`` with ``b`` odd; :func:`split_denominator`
recovers that factorisation.
"""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from itertools import combinations
from math import gcd
from numbers import Rational
from typing import Iterable, Union

__all__ = [
    "DyadicRational",
    "OddDenomRational",
    "Exact",
    "as_fraction",
    "parse_exact",
    "format_exact",
    "split_denominator",
    "in_lattice",
    "pairwise_lattice_distinct",
]


def _trailing_zeros(n: int) -> int:
    return (n & -n).bit_length() - 1


@total_ordering
class DyadicRational:
    """The number ``numerator / 2**exponent`` in canonical form.

    Canonical means ``exponent == 0`` or ``numerator`` odd, so equal values
    have equal fields.
    """

    __slots__ = ("_num", "_exp")

    def __init__(self, numerator: int, exponent: int = 0) -> None:
        if exponent < 0:
            raise ValueError("exponent must be non-negative")
        numerator, exponent = int(numerator), int(exponent)
        if numerator == 0:
            exponent = 0
        elif exponent:
            shift = min(_trailing_zeros(numerator), exponent)
            numerator >>= shift
            exponent -= shift
        self._num = numerator
        self._exp = exponent

    @property
    def numerator(self) -> int:
        return self._num

    @property
    def exponent(self) -> int:
        return self._exp

    @classmethod
    def from_fraction(cls, x: Fraction | int) -> DyadicRational:
        x = Fraction(x)
        den = x.denominator
        if den & (den - 1):
            raise ValueError(f"{x} is not dyadic")
        return cls(x.numerator, den.bit_length() - 1)

    def canonical(self) -> DyadicRational:
        return DyadicRational(self._num, self._exp)

    def to_fraction(self) -> Fraction:
        return Fraction(self._num, 1 << self._exp)

    def _coerce(self, other) -> DyadicRational | None:
        if isinstance(other, DyadicRational):
            return other
        if isinstance(other, int):
            return DyadicRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        e = max(self._exp, o._exp)
        return DyadicRational((self._num << (e - self._exp)) + (o._num << (e - o._exp)), e)

    __radd__ = __add__

    def __neg__(self) -> DyadicRational:
        return DyadicRational(-self._num, self._exp)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DyadicRational(self._num * o._num, self._exp + o._exp)

    __rmul__ = __mul__

    def scale2(self, power: int) -> DyadicRational:
        """Multiply by ``2**power`` (``power`` may be negative)."""
        if power >= 0:
            return DyadicRational(self._num << power, self._exp)
        return DyadicRational(self._num, self._exp - power)

    def __eq__(self, other) -> bool:
        if isinstance(other, DyadicRational):
            return self._num == other._num and self._exp == other._exp
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Fraction):
                return self.to_fraction() < other
            return NotImplemented
        e = max(self._exp, o._exp)
        return (self._num << (e - self._exp)) < (o._num << (e - o._exp))

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __repr__(self) -> str:
        return f"DyadicRational({self._num}, {self._exp})"

    def __str__(self) -> str:
        return format_exact(self)


class OddDenomRational:
    """Reduced fraction ``a / b`` with ``b`` a positive odd integer."""

    __slots__ = ("a", "b")

    def __init__(self, a: int, b: int = 1) -> None:
        a, b = int(a), int(b)
        if b <= 0:
            raise ValueError("denominator must be positive")
        g = gcd(a, b)
        a, b = a // g, b // g
        if b % 2 == 0:
            raise ValueError(f"denominator of {a}/{b} is even")
        self.a = a
        self.b = b

    @classmethod
    def from_fraction(cls, x: Fraction | int) -> OddDenomRational:
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    def to_fraction(self) -> Fraction:
        return Fraction(self.a, self.b)

    def __add__(self, other):
        if isinstance(other, OddDenomRational):
            return OddDenomRational(self.a * other.b + other.a * self.b, self.b * other.b)
        if isinstance(other, int):
            return OddDenomRational(self.a + other * self.b, self.b)
        if isinstance(other, DyadicRational):
            return self.to_fraction() + other.to_fraction()
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> OddDenomRational:
        return OddDenomRational(-self.a, self.b)

    def __sub__(self, other):
        if isinstance(other, (OddDenomRational, int, DyadicRational)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, OddDenomRational):
            return OddDenomRational(self.a * other.a, self.b * other.b)
        if isinstance(other, int):
            return OddDenomRational(self.a * other, self.b)
        if isinstance(other, DyadicRational):
            return self.to_fraction() * other.to_fraction()
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, n: int) -> Fraction:
        return self.to_fraction() / n

    def __eq__(self, other) -> bool:
        if isinstance(other, OddDenomRational):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction, DyadicRational)):
            return self.to_fraction() == as_fraction(other)
        return NotImplemented

    def __lt__(self, other) -> bool:
        return self.to_fraction() < as_fraction(other)

    def __gt__(self, other) -> bool:
        return self.to_fraction() > as_fraction(other)

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __float__(self) -> float:
        return self.a / self.b

    def __repr__(self) -> str:
        return f"OddDenomRational({self.a}, {self.b})"

    def __str__(self) -> str:
        return format_exact(self)


Exact = Union[int, Fraction, DyadicRational, OddDenomRational]


def as_fraction(x: Exact) -> Fraction:
    if isinstance(x, (DyadicRational, OddDenomRational)):
        return x.to_fraction()
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_exact(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_exact(text: str | int) -> Fraction:
    """Parse ``"p/q"`` or an integer literal without any float round-trip."""
    if isinstance(text, int):
        return Fraction(text)
    text = str(text).strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"expected 'p/q', got {text!r}")
    return Fraction(text)


def format_exact(x: Exact) -> str:
    f = as_fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def split_denominator(x: Exact) -> tuple[int, int]:
    """Return ``(e, b)`` with reduced denominator ``2**e * b`` and ``b`` odd."""
    den = as_fraction(x).denominator
    e = _trailing_zeros(den)
    return e, den >> e


def in_lattice(x: Exact, J: int) -> bool:
    """True iff ``x`` lies in the lattice ``2**-(J+1) Z``."""
    if J < 0:
        raise ValueError("J must be non-negative")
    return (as_fraction(x) * (1 << (J + 1))).denominator == 1


def pairwise_lattice_distinct(t: Iterable[Exact], J: int) -> bool:
    """True iff no two offsets differ by an element of ``2**-(J+1) Z``."""
    ts = [as_fraction(v) for v in t]
    if not ts:
        raise ValueError("need at least one offset")
    return not any(in_lattice(u - v, J) for u, v in combinations(ts, 2))
