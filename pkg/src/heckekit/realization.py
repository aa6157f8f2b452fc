"""Realizations of a Coxeter system over an exact field.

A realization is (V, coroots in V, roots in V*) with the diagonal pairing
pinned to 2 (balanced) and Demazure surjectivity, i.e. for each simple
reflection a covector delta_s with <delta_s, alpha_s^vee> = 1.  R is the
symmetric algebra on V* with V* in degree 2; the Demazure operator is
d_s(f) = (f - s(f)) / alpha_s, exact division.

delta_s defaults to alpha_s / 2 when 2 is invertible, otherwise to the
first basis covector with nonzero pairing against alpha_s^vee, scaled to
pairing 1.  Only existence is contracted, so any deterministic choice
works; everything downstream is normalized against the barbell.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coxeter import CoxeterSystem
from .fields import Field
from .polyring import DivisionNotExact, Poly, PolyRing


class InvalidRealization(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(f"{c.name}: {c.detail}"
                                   for c in report.checks if not c.passed))


class DegreeBoundTooLarge(MemoryError):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __repr__(self):
        lines = [f"[{'ok' if c.passed else 'FAIL'}] {c.name}"
                 + (f": {c.detail}" if c.detail else "") for c in self.checks]
        return "\n".join(lines)


class Realization:
    def __init__(self, system: CoxeterSystem, field: Field, dim_v: int,
                 coroots, roots, names=None):
        if dim_v < 1:
            raise ValueError("V must have positive dimension")
        self.system = system
        self.field = field
        self.dim_v = dim_v
        self.coroots = tuple(tuple(field.of(c) for c in row) for row in coroots)
        self.roots = tuple(tuple(field.of(c) for c in row) for row in roots)
        if len(self.coroots) != system.rank or len(self.roots) != system.rank:
            raise ValueError("need one root and one coroot per generator")
        for row in self.coroots + self.roots:
            if len(row) != dim_v:
                raise ValueError("root/coroot length must match dim V")
        self.ring = PolyRing(field, dim_v, names)
        self._root_polys = tuple(self.ring.linear(r) for r in self.roots)
        self._deltas: dict[int, Poly] = {}
        self._s_images: dict[int, list[Poly]] = {}
        # memo tables; idempotent fills, safe to race
        self._s_cache: dict = {}
        self._dem_cache: dict = {}
        self._dec_cache: dict = {}

    # -- basic data -----------------------------------------------------

    def root(self, s: int) -> Poly:
        return self._root_polys[s]

    def pairing(self, s: int, t: int):
        """<alpha_s, alpha_t^vee> (the Cartan-style table)."""
        return self.covector_pairing(self.roots[s], t)

    def covector_pairing(self, covector, t: int):
        acc = self.field.zero
        for c, z in zip(covector, self.coroots[t]):
            acc = acc + c * z
        return acc

    def linear_pairing(self, linear: Poly, t: int):
        """<l, alpha_t^vee> for a linear form l in R^2."""
        acc = self.field.zero
        for e, c in linear.terms.items():
            if sum(e) != 1:
                raise ValueError("not a linear form")
            acc = acc + c * self.coroots[t][e.index(1)]
        return acc

    # -- reflection action ----------------------------------------------

    def s_matrix(self, s: int) -> list[list]:
        """The reflection s on V: v -> v - <alpha_s, v> alpha_s^vee."""
        n = self.dim_v
        mat = [[self.field.of(1 if i == j else 0) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                mat[i][j] = mat[i][j] - self.roots[s][j] * self.coroots[s][i]
        return mat

    def _images_of_vars(self, s: int) -> list[Poly]:
        # action on V*: lambda -> lambda - <lambda, alpha_s^vee> alpha_s
        if s not in self._s_images:
            images = []
            for i in range(self.dim_v):
                xi = self.ring.var(i)
                images.append(xi - self.root(s).scale(self.coroots[s][i]))
            self._s_images[s] = images
        return self._s_images[s]

    def s_action(self, f: Poly, s: int) -> Poly:
        key = (s, f)
        out = self._s_cache.get(key)
        if out is None:
            out = f.substitute_linear(self._images_of_vars(s))
            self._s_cache[key] = out
        return out

    def w_action(self, f: Poly, w) -> Poly:
        for i in reversed(w.word):
            f = self.s_action(f, i)
        return f

    # -- Demazure operators ----------------------------------------------

    def demazure(self, f: Poly, s: int) -> Poly:
        """(f - s(f)) / alpha_s; the division must be exact."""
        key = (s, f)
        out = self._dem_cache.get(key)
        if out is not None:
            return out
        diff = f - self.s_action(f, s)
        if diff.is_zero():
            out = self.ring.zero
        else:
            try:
                out = diff.divide_by_linear(self.root(s))
            except DivisionNotExact as err:  # a realization/arithmetic bug
                raise DivisionNotExact(f"Demazure division failed for s={s}: {err}")
        self._dem_cache[key] = out
        return out

    def delta(self, s: int) -> Poly:
        """A covector with <delta_s, alpha_s^vee> = 1 (so d_s(delta_s) = 1)."""
        if s not in self._deltas:
            two = self.field.of(2)
            if not (two == 0):
                self._deltas[s] = self.root(s).scale(self.field.one / two)
            else:
                for i in range(self.dim_v):
                    pair = self.coroots[s][i]
                    if not (pair == 0):
                        self._deltas[s] = self.ring.var(i).scale(self.field.one / pair)
                        break
                else:
                    raise InvalidRealization(ValidationReport((Check(
                        f"demazure-surjectivity[{self.system.labels[s]}]", False,
                        "coroot is zero, no delta exists"),)))
        return self._deltas[s]

    def invariant_decompose(self, f: Poly, s: int) -> tuple[Poly, Poly]:
        """f = g + delta_s h with g, h s-invariant: h = d_s f, g = f - delta_s h."""
        key = (s, f)
        out = self._dec_cache.get(key)
        if out is None:
            hpart = self.demazure(f, s)
            gpart = f - self.delta(s) * hpart
            out = (gpart, hpart)
            self._dec_cache[key] = out
        return out

    # -- graded pieces ----------------------------------------------------

    def graded_dim(self, d: int) -> int:
        return self.ring.graded_dim(d)

    def truncated_ring(self, bound: int, max_monomials: int = 2_000_000):
        """Monomial bases for all internal degrees <= bound.

        Returns dict degree -> ordered tuple of exponent tuples; the
        multiplication closes degreewise by exponent addition.
        """
        if bound < 0:
            raise ValueError("bound must be >= 0")
        total = sum(self.graded_dim(d) for d in range(0, bound + 1, 2))
        if total > max_monomials:
            raise DegreeBoundTooLarge(f"{total} monomials exceed cap {max_monomials}")
        return {d: tuple(self.ring.monomials(d // 2))
                for d in range(0, bound + 1, 2)}

    # -- validation --------------------------------------------------------

    def _matrix_order(self, mat, cap: int = 64) -> int | None:
        n = self.dim_v
        ident = [[self.field.of(1 if i == j else 0) for j in range(n)] for i in range(n)]

        def mul(a, b):
            return [[sum((a[i][k] * b[k][j] for k in range(n)), self.field.zero)
                     for j in range(n)] for i in range(n)]

        acc = mat
        for k in range(1, cap + 1):
            if acc == ident:
                return k
            acc = mul(acc, mat)
        return None

    def validate(self) -> ValidationReport:
        checks = []
        labels = self.system.labels
        for s in range(self.system.rank):
            val = self.pairing(s, s)
            checks.append(Check(
                f"balanced[{labels[s]}]", val == self.field.of(2),
                f"<alpha,alpha^vee> = {val!r}"))
        for s in range(self.system.rank):
            nonzero = any(not (c == 0) for c in self.coroots[s])
            detail = "" if nonzero else "coroot vanishes"
            checks.append(Check(f"demazure-surjectivity[{labels[s]}]", nonzero, detail))
            rootzero = self._root_polys[s].is_zero()
            checks.append(Check(f"root-nonzero[{labels[s]}]", not rootzero,
                                "" if not rootzero else "root vanishes"))
        for s in range(self.system.rank):
            for t in range(s + 1, self.system.rank):
                m = self.system.m(s, t)
                prod = self._mat_mul(self.s_matrix(s), self.s_matrix(t))
                order = self._matrix_order(prod)
                if m is None:
                    ok = order is None
                    detail = f"computed order {order}, declared infinite"
                else:
                    ok = order == m
                    detail = f"computed order {order}, declared {m}"
                checks.append(Check(f"braid-order[{labels[s]}{labels[t]}]", ok, detail))
        for s in range(self.system.rank):
            mat = self.s_matrix(s)
            sq = self._mat_mul(mat, mat)
            ident = [[self.field.of(1 if i == j else 0) for j in range(self.dim_v)]
                     for i in range(self.dim_v)]
            checks.append(Check(f"involution[{labels[s]}]", sq == ident))
        return ValidationReport(tuple(checks))

    def _mat_mul(self, a, b):
        n = self.dim_v
        return [[sum((a[i][k] * b[k][j] for k in range(n)), self.field.zero)
                 for j in range(n)] for i in range(n)]

    def validated(self) -> "Realization":
        report = self.validate()
        if not report.ok:
            raise InvalidRealization(report)
        return self

    def __repr__(self):
        return (f"Realization({'x'.join(self.system.labels)}, {self.field}, "
                f"dim V = {self.dim_v})")
