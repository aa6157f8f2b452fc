"""Exact coefficient fields: the rationals and prime fields GF(p).

Field elements are ordinary Python objects supporting +, -, *, /, ==, hash;
rationals are `fractions.Fraction`, prime-field elements are `FpElement`.
A `Field` object carries the constructors and the characteristic, so the
linear algebra and polynomial layers stay generic.
"""

from __future__ import annotations

from fractions import Fraction


class FpElement:
    """An element of GF(p).  Immutable; arithmetic stays within one p."""

    __slots__ = ("r", "p")

    def __init__(self, r: int, p: int):
        self.r = r % p
        self.p = p

    def _lift(self, other) -> "FpElement":
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise ValueError("mixed characteristics")
            return other
        if isinstance(other, int):
            return FpElement(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement(self.r + other.r, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement(self.r - other.r, self.p)

    def __rsub__(self, other):
        other = self._lift(other)
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement(self.r * other.r, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if other.r == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return FpElement(self.r * pow(other.r, -1, self.p), self.p)

    def __rtruediv__(self, other):
        other = self._lift(other)
        return other / self

    def __neg__(self):
        return FpElement(-self.r, self.p)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.r == other % self.p
        return isinstance(other, FpElement) and self.p == other.p and self.r == other.r

    def __hash__(self):
        return hash((self.r, self.p))

    def __bool__(self):
        return self.r != 0

    def __repr__(self):
        return f"{self.r} (mod {self.p})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """Exact field descriptor: ℚ or GF(p)."""

    def __init__(self, characteristic: int = 0):
        if characteristic != 0 and not _is_prime(characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {characteristic}")
        self.characteristic = characteristic

    @property
    def zero(self):
        return self.of(0)

    @property
    def one(self):
        return self.of(1)

    def of(self, x):
        """Coerce an int, Fraction, field element or 'p/q' string."""
        p = self.characteristic
        if isinstance(x, str):
            x = Fraction(x)
        if p == 0:
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            raise TypeError(f"cannot coerce {x!r} into Q")
        if isinstance(x, FpElement):
            if x.p != p:
                raise ValueError("mixed characteristics")
            return x
        if isinstance(x, int):
            return FpElement(x, p)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} not invertible mod {p}")
            return FpElement(x.numerator, p) / FpElement(x.denominator, p)
        raise TypeError(f"cannot coerce {x!r} into GF({p})")

    def __eq__(self, other):
        return isinstance(other, Field) and self.characteristic == other.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        if self.characteristic == 0:
            return "QQ"
        return f"GF({self.characteristic})"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)
