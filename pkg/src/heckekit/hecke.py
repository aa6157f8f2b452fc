"""The Hecke algebra of (W, S) in Soergel's normalization.

Standard basis H_w with H_s^2 = H_e + (v^{-1} - v) H_s, so H_s is
invertible with H_s^{-1} = H_s + (v - v^{-1}).  The Kazhdan-Lusztig
element of a simple reflection is H_s + v, and v tracks the grading
shift class of the categorification (shift by (1) multiplies a class
by v).

The KL basis is computed by triangular bar-invariance solving: take a
bar-invariant seed KL_s * KL_w' and strip, from the longest lower terms
down, the bar-symmetric completion of each coefficient's nonpositive
part.  The classical mu-recursion lives in the test suite as an
independent oracle.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path

from .coxeter import CoxeterSystem, Element, Expression
from .laurent import LaurentPoly, ONE, V


class IntervalTooLarge(RuntimeError):
    pass


class HeckeElement:
    """Finitely supported map W -> Z[v, v^{-1}] in the standard basis."""

    __slots__ = ("system", "c")

    def __init__(self, system: CoxeterSystem, coeffs=None):
        self.system = system
        c: dict[Element, LaurentPoly] = {}
        if coeffs:
            for w, p in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
                if not isinstance(p, LaurentPoly):
                    p = LaurentPoly({0: p})
                if not p.is_zero():
                    q = c.get(w)
                    p = p if q is None else q + p
                    if p.is_zero():
                        c.pop(w, None)
                    else:
                        c[w] = p
        self.c = c

    def coeff(self, w: Element) -> LaurentPoly:
        return self.c.get(w, LaurentPoly.zero())

    def support(self):
        return sorted(self.c.keys(), key=lambda w: (w.length, w.word))

    def is_zero(self) -> bool:
        return not self.c

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        c = dict(self.c)
        for w, p in other.c.items():
            q = c.get(w)
            p = p if q is None else q + p
            if p.is_zero():
                c.pop(w, None)
            else:
                c[w] = p
        return _wrap(self.system, c)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + other.scaled(LaurentPoly({0: -1}))

    def __neg__(self) -> "HeckeElement":
        return self.scaled(LaurentPoly({0: -1}))

    def scaled(self, p) -> "HeckeElement":
        if not isinstance(p, LaurentPoly):
            p = LaurentPoly({0: p})
        if p.is_zero():
            return HeckeElement(self.system)
        return _wrap(self.system, {w: q * p for w, q in self.c.items()})

    def _times_simple(self, i: int) -> "HeckeElement":
        """Right multiplication by H_{s_i}."""
        quad = LaurentPoly({-1: 1, 1: -1})  # v^{-1} - v
        c: dict[Element, LaurentPoly] = {}

        def add(w, p):
            q = c.get(w)
            p = p if q is None else q + p
            if p.is_zero():
                c.pop(w, None)
            else:
                c[w] = p

        for x, p in self.c.items():
            xs = x.times_simple(i)
            if xs.length > x.length:
                add(xs, p)
            else:
                add(xs, p)
                add(x, p * quad)
        return _wrap(self.system, c)

    def __mul__(self, other: "HeckeElement") -> "HeckeElement":
        if isinstance(other, LaurentPoly):
            return self.scaled(other)
        out = HeckeElement(self.system)
        for y, p in other.c.items():
            term = self.scaled(p)
            for i in y.word:
                term = term._times_simple(i)
            out = out + term
        return out

    def __rmul__(self, other):
        if isinstance(other, (LaurentPoly, int)):
            return self.scaled(other)
        return NotImplemented

    def bar(self) -> "HeckeElement":
        """The bar involution: v -> v^{-1}, H_s -> H_s^{-1}."""
        system = self.system
        s_inv = {}
        out = HeckeElement(system)
        for x, p in self.c.items():
            term = unit(system).scaled(p.bar())
            for i in x.word:
                if i not in s_inv:
                    s_inv[i] = _wrap(system, {
                        system.simple(i): ONE,
                        system.identity: LaurentPoly({1: 1, -1: -1}),  # v - v^{-1}
                    })
                term = term * s_inv[i]
            out = out + term
        return out

    def __eq__(self, other):
        return isinstance(other, HeckeElement) and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for w in self.support():
            parts.append(f"({self.c[w]})H[{w}]")
        return " + ".join(parts)


def _wrap(system, c) -> HeckeElement:
    h = HeckeElement(system)
    h.c = {w: p for w, p in c.items() if not p.is_zero()}
    return h


def unit(system: CoxeterSystem) -> HeckeElement:
    return HeckeElement(system, {system.identity: ONE})


def h(w: Element) -> HeckeElement:
    return HeckeElement(w.system, {w: ONE})


def mul_standard(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    return a * b


def bar(a: HeckeElement) -> HeckeElement:
    return a.bar()


def bs_class(expr: Expression) -> HeckeElement:
    """Product of (H_s + v) along the expression: the class of B_expr."""
    system = expr.system
    out = unit(system)
    for i in expr.letters:
        out = out._times_simple(i) + out.scaled(V)
    return out


def standard_pairing(a: HeckeElement, b: HeckeElement) -> LaurentPoly:
    """Bookkeeping pairing <H_x, H_y> = delta_{x,y}, bilinear over Z[v,v^-1].

    Its one contract: <bsClass(v), bsClass(w)> equals the graded rank of
    Hom(B_v, B_w) computed from double leaves.
    """
    out = LaurentPoly.zero()
    for w, p in a.c.items():
        q = b.c.get(w)
        if q is not None:
            out = out + p * q
    return out


class KLTable:
    """Cache of Kazhdan-Lusztig basis elements, optionally file-persisted.

    The cache file is content-addressed by a hash of the Coxeter matrix;
    records are re-verified (bar invariance, triangularity, positivity)
    on load and silently discarded when corrupt.
    """

    def __init__(self, system: CoxeterSystem, cache_dir: str | None = None,
                 interval_cap: int = 100_000):
        self.system = system
        self.table: dict[Element, HeckeElement] = {}
        self.interval_cap = interval_cap
        self.cache_dir = cache_dir or os.environ.get("HECKEKIT_CACHE")
        if self.cache_dir:
            self._load()

    # -- computation ----------------------------------------------------

    def get(self, w: Element) -> HeckeElement:
        cached = self.table.get(w)
        if cached is not None:
            return cached
        system = self.system
        if w.length == 0:
            result = unit(system)
        else:
            interval = system.bruhat_lower_set(w)
            if len(interval) > self.interval_cap:
                raise IntervalTooLarge(f"Bruhat interval of {w} exceeds cap")
            i = w.word[0]
            wp = system.element(w.word[1:])
            rem = (h(system.simple(i)) + unit(system).scaled(V)) * self.get(wp)
            # corrections may perturb shorter terms, so re-scan after each one
            while True:
                bad = [x for x in rem.support()
                       if x != w and not rem.coeff(x).in_v_times_N()]
                if not bad:
                    break
                x = max(bad, key=lambda x: (x.length, x.word))
                corr = rem.coeff(x).symmetric_completion_of_nonpositive_part()
                rem = rem - self.get(x).scaled(corr)
            result = rem
        self._verify(w, result)
        self.table[w] = result
        if self.cache_dir:
            self._save()
        return result

    def _verify(self, w: Element, cand: HeckeElement) -> None:
        if cand.coeff(w) != ONE:
            raise AssertionError(f"KL element of {w}: top coefficient not 1")
        for x, p in cand.c.items():
            if x != w and not p.in_v_times_N():
                raise AssertionError(f"KL element of {w}: coefficient at {x} not in vZ[v]")
            if x != w and not self.system.bruhat_leq(x, w):
                raise AssertionError(f"KL element of {w}: support not below {w}")
        if cand.bar() != cand:
            raise AssertionError(f"KL element of {w}: not bar-invariant")

    # -- persistence ----------------------------------------------------

    def _key(self) -> str:
        desc = repr((self.system.labels, self.system.matrix)).encode()
        return hashlib.sha256(desc).hexdigest()[:16]

    def _path(self) -> Path:
        return Path(self.cache_dir) / f"klcache-{self._key()}.txt"

    def _save(self) -> None:
        path = self._path()
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = ["heckekit-klcache/v1", f"system={self._key()}"]
        for w in sorted(self.table, key=lambda w: (w.length, w.word)):
            record = []
            el = self.table[w]
            for x in el.support():
                p = el.c[x]
                coeffs = ",".join(f"{e}:{a}" for e, a in sorted(p.c.items()))
                record.append(f"{self.system.word_labels(x.word)}={coeffs}")
            lines.append(f"{self.system.word_labels(w.word)}: " + ";".join(record))
        path.write_text("\n".join(lines) + "\n")

    def _load(self) -> None:
        path = self._path()
        if not path.exists():
            return
        try:
            lines = path.read_text().splitlines()
            if not lines or lines[0] != "heckekit-klcache/v1":
                return
            if len(lines) < 2 or lines[1] != f"system={self._key()}":
                return
            loaded: dict[Element, HeckeElement] = {}
            for line in lines[2:]:
                if not line.strip():
                    continue
                head, _, body = line.partition(": ")
                w = self.system.element(head)
                coeffs = {}
                for record in body.split(";"):
                    xw, _, data = record.partition("=")
                    poly = {}
                    for item in data.split(","):
                        e, _, a = item.partition(":")
                        poly[int(e)] = int(a)
                    coeffs[self.system.element(xw)] = LaurentPoly(poly)
                loaded[w] = HeckeElement(self.system, coeffs)
            for w, el in loaded.items():
                self._verify(w, el)
            self.table.update(loaded)
        except (AssertionError, ValueError, KeyError, IndexError):
            # corrupt cache: recompute silently
            self.table = {}


def kl_basis(w: Element, table: KLTable | None = None) -> HeckeElement:
    if table is None:
        table = KLTable(w.system)
    return table.get(w)


def char_of_complex(cx) -> HeckeElement:
    """Alternating-sum class of a bounded complex.

    A summand B_w(m) in cohomological degree n contributes
    (-1)^n v^m bsClass(w); a local summand b_x(m) contributes
    (-1)^n v^m H_x.
    """
    system = cx.system
    out = HeckeElement(system)
    bs_cache: dict[tuple, HeckeElement] = {}
    for n, kind, data, shift in cx.char_summands():
        sign = 1 if n % 2 == 0 else -1
        if kind == "bs":
            if data not in bs_cache:
                bs_cache[data] = bs_class(Expression(system, data))
            cls = bs_cache[data]
        elif kind == "b":
            cls = h(data)
        else:
            raise ValueError(f"unknown summand kind {kind}")
        out = out + cls.scaled(LaurentPoly({shift: sign}))
    return out
