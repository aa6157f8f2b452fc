"""Multivariate polynomials over an exact field, graded with variables in degree 2.

A polynomial is a dict monomial-exponent-tuple -> nonzero coefficient.
Only what the calculus needs: arithmetic, linear substitution (for the
reflection action), exact division by a linear form (for Demazure
operators), and homogeneous-piece bookkeeping.  Internal degrees are
twice the monomial degree throughout.
"""

from __future__ import annotations

import itertools

from .fields import Field


class DivisionNotExact(ArithmeticError):
    pass


class PolyRing:
    def __init__(self, field: Field, nvars: int, names=None):
        self.field = field
        self.nvars = nvars
        self.names = tuple(names) if names else tuple(f"x{i}" for i in range(nvars))

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return Poly(self, {(0,) * self.nvars: self.field.one})

    def const(self, c) -> "Poly":
        c = self.field.of(c)
        if c == 0:
            return self.zero
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, i: int) -> "Poly":
        exp = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, {exp: self.field.one})

    def linear(self, coeffs) -> "Poly":
        """Linear form sum coeffs[i] * x_i."""
        terms = {}
        for i, c in enumerate(coeffs):
            c = self.field.of(c)
            if not (c == 0):
                terms[tuple(1 if j == i else 0 for j in range(self.nvars))] = c
        return Poly(self, terms)

    def monomials(self, d: int) -> list[tuple]:
        """Exponent tuples of monomial degree d (internal degree 2d), sorted."""
        if d < 0:
            return []
        out = []
        for combo in itertools.combinations_with_replacement(range(self.nvars), d):
            exp = [0] * self.nvars
            for i in combo:
                exp[i] += 1
            out.append(tuple(exp))
        return sorted(out)

    def monomial(self, exp: tuple) -> "Poly":
        return Poly(self, {tuple(exp): self.field.one})

    def graded_dim(self, internal_degree: int) -> int:
        """dim of the internal-degree-d piece (stars and bars; odd pieces vanish)."""
        if internal_degree < 0 or internal_degree % 2:
            return 0
        d = internal_degree // 2
        # C(nvars + d - 1, d)
        num, den = 1, 1
        for k in range(d):
            num *= self.nvars + d - 1 - k
            den *= k + 1
        return num // den

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.field == other.field
                and self.nvars == other.nvars)

    def __hash__(self):
        return hash(("PolyRing", self.field, self.nvars))

    def __repr__(self):
        return f"{self.field}[{', '.join(self.names)}]"


class Poly:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if not (c == 0)}
        self._hash = None

    def is_zero(self) -> bool:
        return not self.terms

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            nc = terms.get(e)
            nc = c if nc is None else nc + c
            if nc == 0:
                terms.pop(e, None)
            else:
                terms[e] = nc
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        other = self._lift(other)
        terms: dict[tuple, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                nc = terms.get(e)
                nc = c if nc is None else nc + c
                if nc == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = nc
        return Poly(self.ring, terms)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = self.ring.field.of(c)
        if c == 0:
            return self.ring.zero
        return Poly(self.ring, {e: c * v for e, v in self.terms.items()})

    def coeff(self, exp: tuple):
        return self.terms.get(tuple(exp), self.ring.field.zero)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def poly_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def internal_degree(self) -> int:
        """2 * monomial degree; requires homogeneity."""
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        degs = {sum(e) for e in self.terms}
        if len(degs) > 1:
            raise ValueError(f"not homogeneous: monomial degrees {sorted(degs)}")
        return 2 * degs.pop()

    def is_homogeneous(self, internal_degree: int | None = None) -> bool:
        if not self.terms:
            return True
        degs = {sum(e) for e in self.terms}
        if len(degs) > 1:
            return False
        if internal_degree is None:
            return True
        return 2 * degs.pop() == internal_degree

    def homogeneous_part(self, internal_degree: int) -> "Poly":
        if internal_degree % 2:
            return self.ring.zero
        d = internal_degree // 2
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def substitute_linear(self, images: list["Poly"]) -> "Poly":
        """Substitute x_i -> images[i] (each of monomial degree <= 1)."""
        out = self.ring.zero
        power_cache: dict[tuple[int, int], Poly] = {}

        def power(i, k):
            key = (i, k)
            if key not in power_cache:
                p = self.ring.one
                for _ in range(k):
                    p = p * images[i]
                power_cache[key] = p
            return power_cache[key]

        for e, c in self.terms.items():
            term = self.ring.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def divide_by_linear(self, linear: "Poly") -> "Poly":
        """Exact division by a linear form; raises DivisionNotExact otherwise."""
        if linear.is_zero() or linear.poly_degree() != 1:
            raise DivisionNotExact("divisor must be a nonzero linear form")
        # pivot variable: smallest index with nonzero linear coefficient
        pivot = None
        for e, c in sorted(linear.terms.items()):
            if sum(e) == 1:
                pivot = e.index(1)
                break
        if pivot is None:
            raise DivisionNotExact("divisor has no linear part")
        lead_coeff = linear.terms[tuple(1 if j == pivot else 0
                                        for j in range(self.ring.nvars))]
        rem = self
        quot = self.ring.zero
        while not rem.is_zero():
            # lex-leading monomial with pivot variable first
            lead = max(rem.terms, key=lambda e: (e[pivot], e))
            if lead[pivot] == 0:
                raise DivisionNotExact("nonzero remainder")
            qexp = tuple(k - (1 if j == pivot else 0) for j, k in enumerate(lead))
            qc = rem.terms[lead] / lead_coeff
            qterm = Poly(self.ring, {qexp: qc})
            quot = quot + qterm
            rem = rem - qterm * linear
        return quot

    def __eq__(self, other):
        if isinstance(other, int):
            if other == 0:
                return not self.terms
            other = self.ring.const(other)
        return isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset((e, c) for e, c in self.terms.items()))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (self.ring.names[i] if k == 1 else f"{self.ring.names[i]}^{k}")
                for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(f"{c}")
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)
