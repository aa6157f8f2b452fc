"""Laurent polynomials in v with integer coefficients.

These carry all grading bookkeeping: Hecke algebra coefficients, graded
ranks of Hom spaces (nonnegative coefficients), defect generating
functions.  Immutable; no zero coefficients are ever stored.
"""

from __future__ import annotations


class LaurentPoly:
    __slots__ = ("c", "_hash")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, a in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
                if a != 0:
                    c[e] = c.get(e, 0) + a
                    if c[e] == 0:
                        del c[e]
        self.c = c
        self._hash = None

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly({0: 1})

    @staticmethod
    def v(n: int = 1, coeff: int = 1) -> "LaurentPoly":
        """coeff * v^n"""
        return LaurentPoly({n: coeff})

    def is_zero(self) -> bool:
        return not self.c

    def coeff(self, n: int) -> int:
        return self.c.get(n, 0)

    def __add__(self, other):
        other = _lift(other)
        c = dict(self.c)
        for e, a in other.c.items():
            c[e] = c.get(e, 0) + a
            if c[e] == 0:
                del c[e]
        return _wrap(c)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) + (-self)

    def __neg__(self):
        return _wrap({e: -a for e, a in self.c.items()})

    def __mul__(self, other):
        other = _lift(other)
        c: dict[int, int] = {}
        for e1, a1 in self.c.items():
            for e2, a2 in other.c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + a1 * a2
                if c[e] == 0:
                    del c[e]
        return _wrap(c)

    __rmul__ = __mul__

    def bar(self) -> "LaurentPoly":
        """The involution v -> v^{-1}."""
        return _wrap({-e: a for e, a in self.c.items()})

    def shifted(self, n: int) -> "LaurentPoly":
        """Multiply by v^n."""
        return _wrap({e + n: a for e, a in self.c.items()})

    def min_degree(self) -> int:
        if not self.c:
            raise ValueError("zero polynomial has no degree")
        return min(self.c)

    def max_degree(self) -> int:
        if not self.c:
            raise ValueError("zero polynomial has no degree")
        return max(self.c)

    def is_bar_symmetric(self) -> bool:
        return self.bar() == self

    def nonneg_part(self) -> "LaurentPoly":
        """Terms with exponent >= 0 -- no mathematical meaning, display helper."""
        return _wrap({e: a for e, a in self.c.items() if e >= 0})

    def in_v_times_N(self) -> bool:
        """All exponents >= 1 (the strict positivity of KL lower terms)."""
        return all(e >= 1 for e in self.c)

    def symmetric_completion_of_nonpositive_part(self) -> "LaurentPoly":
        """The unique bar-symmetric polynomial agreeing with self in degrees <= 0.

        Used by the triangular Kazhdan-Lusztig solver: the correction to
        subtract so the remaining coefficient lands in v Z[v].
        """
        c: dict[int, int] = {}
        for e, a in self.c.items():
            if e < 0:
                c[e] = c.get(e, 0) + a
                c[-e] = c.get(-e, 0) + a
            elif e == 0:
                c[0] = c.get(0, 0) + a
        return _wrap({e: a for e, a in c.items() if a != 0})

    def __eq__(self, other):
        if isinstance(other, int):
            return self.c == ({} if other == 0 else {0: other})
        return isinstance(other, LaurentPoly) and self.c == other.c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.c.items()))
        return self._hash

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c):
            a = self.c[e]
            if e == 0:
                parts.append(f"{a}")
                continue
            va = "v" if e == 1 else ("v^-1" if e == -1 else f"v^{e}")
            if a == 1:
                parts.append(va)
            elif a == -1:
                parts.append(f"-{va}")
            else:
                parts.append(f"{a}{va}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def _wrap(c: dict) -> LaurentPoly:
    p = LaurentPoly()
    p.c = c
    return p


def _lift(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly({0: x})
    raise TypeError(f"cannot lift {x!r} to LaurentPoly")


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()
V = LaurentPoly.v(1)
