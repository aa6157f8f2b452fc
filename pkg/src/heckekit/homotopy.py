"""Bounded complexes over the additive diagrammatic categories.

A Complex stores, per cohomological degree, a tuple of shifted
Bott-Samelson summands and a sparse matrix of degree-0 morphisms.  Three
modes share the class: "be" (polynomial coefficients), "re" (morphism
spaces base-changed to the field: only constant leaf coefficients
survive), and rank-only complexes whose differential is omitted (used
where 2m-valent evaluation is unavailable: only characters make sense).
A subset turns morphisms into their images in the local quotient.

Shift conventions: [1] moves a degree-0 term to degree -1 and negates
the differential; (1) raises internal shifts and negates the
differential; <1> = [1](-1) composes the two (so the differential keeps
its sign and a degree-0 unshifted term becomes an internal -1 term in
cohomological degree -1).

FreeComplex models complexes over a singleton quotient, i.e. of graded
free modules: a summand is just an internal shift and entries are
homogeneous polynomials (scalars in RE mode).  The Koszul side lives
here too: the total complex Lambda (x) M for the regraded M, with
Lambda the exterior algebra on the degree-2 generators in bidegree
(1, 2) and differential moving a generator into the module argument.
Regrading sends an element of cohomological degree n and internal
degree m to total degree a = n + m, so a summand R(j)[-p] contributes
exactly one cohomology class, at a = p - j, once the complex is
minimal.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .laurent import LaurentPoly
from .linalg import nullspace, rank, solve
from .locale import LocallyClosedSubset
from .soergelcalc import BSObject, Calculus, Morphism

Word = tuple


class WindowInsufficient(RuntimeError):
    pass


class RankModeOnly(RuntimeError):
    """Raised when a differential-level operation hits a rank-only complex."""


def re_reduce(m: Morphism) -> Morphism:
    """Base change the coefficients to the field: keep degree-0 coefficients."""
    d = m.degree
    coeffs = {L: p for L, p in m.coeffs.items() if L.degree == d}
    return Morphism(m.cal, m.source, m.target, coeffs)


class Complex:
    def __init__(self, cal: Calculus, terms: dict, diff: dict | None = None,
                 mode: str = "be", subset: LocallyClosedSubset | None = None,
                 check: bool = True):
        self.cal = cal
        self.system = cal.system
        self.mode = mode
        self.subset = subset
        self.terms = {n: tuple(objs) for n, objs in terms.items() if objs}
        self.with_diff = diff is not None
        self.diff = {}
        if diff is not None:
            for n, entries in diff.items():
                cleaned = {key: m for key, m in entries.items() if not m.is_zero()}
                if cleaned:
                    self.diff[n] = cleaned
        if check and self.with_diff:
            self._check_entries()
            self.check_d2()

    # -- bookkeeping ------------------------------------------------------

    def reduce_morphism(self, m: Morphism) -> Morphism:
        if self.subset is not None:
            m = m.restrict_to(self.subset.members)
        if self.mode == "re":
            m = re_reduce(m)
        return m

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        return self.reduce_morphism(self.cal.compose(g, f))

    def degrees(self):
        return sorted(self.terms.keys())

    def is_zero(self) -> bool:
        return not self.terms

    def n_summands(self) -> int:
        return sum(len(objs) for objs in self.terms.values())

    def entry(self, n: int, i: int, j: int) -> Morphism:
        m = self.diff.get(n, {}).get((i, j))
        if m is not None:
            return m
        return self.cal.zero_morphism(self.terms[n][j], self.terms[n + 1][i])

    def _check_entries(self):
        for n, entries in self.diff.items():
            for (i, j), m in entries.items():
                src = self.terms[n][j]
                tgt = self.terms[n + 1][i]
                if m.source != src or m.target != tgt:
                    raise ValueError(f"entry ({n},{i},{j}) has wrong endpoints")

    def check_d2(self):
        if not self.with_diff:
            raise RankModeOnly("no differential to check")
        for n in self.degrees():
            if n not in self.diff or (n + 1) not in self.diff:
                continue
            prods: dict = {}
            for (k, j), m1 in self.diff[n].items():
                for (i, k2), m2 in self.diff[n + 1].items():
                    if k2 != k:
                        continue
                    m = self.compose(m2, m1)
                    if m.is_zero():
                        continue
                    cur = prods.get((i, j))
                    prods[(i, j)] = m if cur is None else cur + m
            for (i, j), m in prods.items():
                if not m.is_zero():
                    raise AssertionError(
                        f"d^2 != 0 at degree {n}, entry ({i},{j}): {m}")

    # -- characters ---------------------------------------------------------

    def char_summands(self):
        for n, objs in self.terms.items():
            for obj in objs:
                yield n, "bs", obj.word, obj.shift

    def char(self):
        from .hecke import char_of_complex

        return char_of_complex(self)

    # -- shifts ---------------------------------------------------------------

    def shift_q(self, k: int) -> "Complex":
        """(k): internal shift, differential negated k times."""
        terms = {n: tuple(o.shifted(k) for o in objs)
                 for n, objs in self.terms.items()}
        if not self.with_diff:
            return Complex(self.cal, terms, None, self.mode, self.subset, check=False)
        sign = -1 if k % 2 else 1
        diff = {n: {key: (m.shifted(k) if sign == 1 else m.shifted(k).scale(-1))
                    for key, m in entries.items()}
                for n, entries in self.diff.items()}
        return Complex(self.cal, terms, diff, self.mode, self.subset, check=False)

    def shift_bracket(self, k: int) -> "Complex":
        """[k]: cohomological shift with sign (-1)^k on the differential."""
        terms = {n - k: objs for n, objs in self.terms.items()}
        if not self.with_diff:
            return Complex(self.cal, terms, None, self.mode, self.subset, check=False)
        sign = -1 if k % 2 else 1
        diff = {n - k: {key: (m if sign == 1 else m.scale(-1))
                        for key, m in entries.items()}
                for n, entries in self.diff.items()}
        return Complex(self.cal, terms, diff, self.mode, self.subset, check=False)

    def shift_angle(self, k: int) -> "Complex":
        """<k> = [k](-k); the two sign twists cancel."""
        return self.shift_q(-k).shift_bracket(k)

    def shift(self, kind: str, k: int) -> "Complex":
        if kind == "[1]":
            return self.shift_bracket(k)
        if kind == "(1)":
            return self.shift_q(k)
        if kind == "<1>":
            return self.shift_angle(k)
        raise ValueError(f"unknown shift kind {kind}")

    # -- duality ---------------------------------------------------------------

    def dualize(self) -> "Complex":
        terms = {-n: tuple(o.dual() for o in objs)
                 for n, objs in self.terms.items()}
        if not self.with_diff:
            return Complex(self.cal, terms, None, self.mode, self.subset, check=False)
        diff: dict = {}
        for n, entries in self.diff.items():
            # d: old[n] -> old[n+1] dualizes to new[-n-1] -> new[-n]
            block = {}
            for (i, j), m in entries.items():
                block[(j, i)] = m.dual()
            diff[-n - 1] = block
        return Complex(self.cal, terms, diff, self.mode, self.subset, check=False)

    # -- convolution -------------------------------------------------------------

    def convolve(self, other: "Complex") -> "Complex":
        """Monoidal product of complexes: total complex with Koszul signs."""
        if self.subset is not None or other.subset is not None:
            raise ValueError("convolution is defined for global complexes")
        if other.mode != "be":
            raise ValueError("the right convolution factor must be biequivariant")
        terms: dict = {}
        index: dict = {}
        for p in sorted(self.terms):
            for q in sorted(other.terms):
                n = p + q
                for i, a in enumerate(self.terms[p]):
                    for j, b in enumerate(other.terms[q]):
                        lst = terms.setdefault(n, [])
                        index[(p, i, q, j)] = len(lst)
                        lst.append(BSObject(a.word + b.word, a.shift + b.shift))
        if not (self.with_diff and other.with_diff):
            return Complex(self.cal, terms, None, self.mode, None, check=False)
        diff: dict = {}
        for (p, i, q, j), col in index.items():
            n = p + q
            # d_C (x) id
            for (i2, i1), m in self.diff.get(p, {}).items():
                if i1 != i:
                    continue
                idb = self.cal.identity_morphism(other.terms[q][j])
                entry = self.reduce_morphism(self.cal.tensor(m, idb))
                row = index[(p + 1, i2, q, j)]
                _madd(diff.setdefault(n, {}), (row, col), entry)
            # (-1)^p id (x) d_D
            for (j2, j1), m in other.diff.get(q, {}).items():
                if j1 != j:
                    continue
                ida = self.cal.identity_morphism(self.terms[p][i])
                entry = self.reduce_morphism(self.cal.tensor(ida, m))
                if p % 2:
                    entry = entry.scale(-1)
                row = index[(p, i, q + 1, j2)]
                _madd(diff.setdefault(n, {}), (row, col), entry)
        return Complex(self.cal, terms, diff, self.mode, None)

    # -- Gaussian elimination -------------------------------------------------

    def try_invert(self, m: Morphism) -> Morphism | None:
        """Two-sided inverse of a degree-0 morphism, or None (memoized)."""
        if m.degree != 0 or m.is_zero():
            return None
        if not self._classes_match(m.source, m.target):
            return None
        cache_key = (self.mode,
                     None if self.subset is None else self.subset.members,
                     m.source, m.target,
                     frozenset(m.coeffs.items()))
        cached = self.cal.invert_cache.get(cache_key)
        if cached is not None:
            return None if cached == "none" else cached
        out = self._try_invert_uncached(m)
        self.cal.invert_cache[cache_key] = "none" if out is None else out
        return out

    def _classes_match(self, x: BSObject, y: BSObject) -> bool:
        """Necessary condition for an isomorphism: equal classes."""
        from .hecke import bs_class
        from .coxeter import Expression

        cal = self.cal
        cache = getattr(cal, "_bs_class_cache", None)
        if cache is None:
            cache = cal._bs_class_cache = {}
        out = {}
        for obj in (x, y):
            if obj.word not in cache:
                cache[obj.word] = bs_class(Expression(cal.system, obj.word))
            out[obj] = cache[obj.word].scaled(LaurentPoly({obj.shift: 1}))
        return out[x] == out[y]

    def _try_invert_uncached(self, m: Morphism) -> Morphism | None:
        cal = self.cal
        src, tgt = m.source, m.target
        leaves = cal.leaves(tgt.word, src.word)
        cand = [L for L in leaves if L.degree == 0] if self.mode == "re" else \
            [L for L in leaves if L.degree <= 0 and L.degree % 2 == 0]
        unknowns = []
        for L in cand:
            monos = [(0,) * cal.ring.nvars] if self.mode == "re" else \
                cal.ring.monomials(-L.degree // 2)
            for mono in monos:
                unknowns.append((L, mono))
        if not unknowns:
            return None
        id_src = self.reduce_morphism(cal.identity_morphism(src))
        id_tgt = self.reduce_morphism(cal.identity_morphism(tgt))
        rows: list[dict] = []
        rhs: list = []
        keymap: dict = {}

        def rowfor(key):
            if key not in keymap:
                keymap[key] = len(rows)
                rows.append({})
                rhs.append(cal.real.field.zero)
            return keymap[key]

        for jcol, (L, mono) in enumerate(unknowns):
            base = Morphism(cal, tgt, src, {L: cal.ring.monomial(mono)})
            left = self.compose(base, m)   # psi o m : src -> src
            for LL, p in left.coeffs.items():
                for exp, c in p.terms.items():
                    k = rowfor(("l", LL, exp))
                    rows[k][jcol] = rows[k].get(jcol, cal.real.field.zero) + c
            right = self.compose(m, base)  # m o psi : tgt -> tgt
            for LL, p in right.coeffs.items():
                for exp, c in p.terms.items():
                    k = rowfor(("r", LL, exp))
                    rows[k][jcol] = rows[k].get(jcol, cal.real.field.zero) + c
        for LL, p in id_src.coeffs.items():
            for exp, c in p.terms.items():
                k = rowfor(("l", LL, exp))
                rhs[k] = rhs[k] + c
        for LL, p in id_tgt.coeffs.items():
            for exp, c in p.terms.items():
                k = rowfor(("r", LL, exp))
                rhs[k] = rhs[k] + c
        sol, _ = solve(rows, rhs, len(unknowns), cal.real.field)
        if sol is None:
            return None
        coeffs: dict = {}
        for (L, mono), c in zip(unknowns, sol):
            if c == 0:
                continue
            cur = coeffs.get(L, cal.ring.zero)
            coeffs[L] = cur + cal.ring.monomial(mono).scale(c)
        inv = Morphism(cal, tgt, src, {L: p for L, p in coeffs.items()
                                       if not p.is_zero()})
        if self.compose(inv, m) == id_src and self.compose(m, inv) == id_tgt:
            return inv
        return None

    def minimize(self, certificate: bool = True) -> tuple["Complex", "Equivalence"]:
        """Split doubled letters, then strip contractible two-term pieces.

        A summand B_u with u containing an adjacent repeated letter is
        first replaced by the two shifted copies of the shorter word via
        the explicit B_s B_s = B_s(1) + B_s(-1) structure maps (an
        isomorphism of complexes, no idempotent completion involved);
        after that, Gaussian elimination removes every differential
        entry that is invertible.  With certificate=False the (costly)
        equivalence data is skipped and None is returned in its place.
        """
        if not self.with_diff:
            raise RankModeOnly("cannot minimize a rank-only complex")
        current = self
        eq = Equivalence.identity(self) if certificate else None
        while True:
            spot = _find_double(current)
            if spot is None:
                break
            n, idx, pos = spot
            current, step = _split_double(current, n, idx, pos, certificate)
            if certificate:
                eq = eq.compose(step)
        while True:
            found = self._find_invertible_entry(current)
            if found is None:
                break
            n, i, j, inv = found
            current, step = _eliminate(current, n, i, j, inv, certificate)
            if certificate:
                eq = eq.compose(step)
        # the character is a homotopy invariant; assert it on every reduction
        if current.char() != self.char():
            raise AssertionError("minimization changed the character")
        return current, eq

    @staticmethod
    def _find_invertible_entry(cx: "Complex"):
        for n in sorted(cx.diff):
            candidates = sorted(
                cx.diff[n].keys(),
                key=lambda key: (cx.terms[n][key[1]].shift, key[1], key[0]))
            for (i, j) in candidates:
                m = cx.diff[n][(i, j)]
                if m.degree != 0:
                    continue
                inv = cx.try_invert(m)
                if inv is not None:
                    return n, i, j, inv
        return None


def _find_double(cx: Complex):
    for n in sorted(cx.terms):
        for idx, obj in enumerate(cx.terms[n]):
            for pos in range(len(obj.word) - 1):
                if obj.word[pos] == obj.word[pos + 1]:
                    return n, idx, pos
    return None


def _bsbs_maps(cal: Calculus, word: Word, pos: int, shift: int):
    """Biproduct data for B_word = B_short(-1) + B_short(+1) at a doubled letter.

    Returns (short word, [(proj, incl, new shift), ...]) with proj o incl
    the identities, cross composites zero, and the two incl o proj summing
    to the identity of B_word (asserted).
    """
    from .soergelcalc import Diagram, dot, enddot, merge, split

    s = word[pos]
    short = word[:pos + 1] + word[pos + 2:]
    left = Diagram.identity(word[:pos])
    right = Diagram.identity(word[pos + 2:])
    d_p1 = left.beside(merge(s)).beside(right)
    d_i1 = left.beside(Diagram.identity((s,)).beside(enddot(s))).beside(right)
    d_p2 = left.beside(Diagram.identity((s,)).beside(dot(s))).beside(right)
    d_i2 = left.beside(split(s)).beside(right)
    p1 = cal.from_diagram(d_p1, source_shift=shift)        # -> B_short(shift-1)
    i1 = cal.from_diagram(d_i1, source_shift=shift - 1)    # B_short(shift-1) ->
    p2 = cal.from_diagram(d_p2, source_shift=shift)        # -> B_short(shift+1)
    i2 = cal.from_diagram(d_i2, source_shift=shift + 1)    # B_short(shift+1) ->
    rho = cal.compose(p2, i1)
    i1 = i1 - cal.compose(i2, rho)
    ident = cal.identity_morphism(BSObject(word, shift))
    checks = (
        cal.compose(p1, i1) == cal.identity_morphism(BSObject(short, shift - 1)),
        cal.compose(p2, i2) == cal.identity_morphism(BSObject(short, shift + 1)),
        cal.compose(p1, i2).is_zero(),
        cal.compose(p2, i1).is_zero(),
        cal.compose(i1, p1) + cal.compose(i2, p2) == ident,
    )
    if not all(checks):
        raise AssertionError("B_s B_s biproduct identities failed")
    return short, [(p1, i1, shift - 1), (p2, i2, shift + 1)]


def _split_double(cx: Complex, n: int, idx: int, pos: int,
                  certificate: bool = True):
    """Replace summand idx at degree n by its two-letter-shorter pieces."""
    obj = cx.terms[n][idx]
    short, pieces = _bsbs_maps(cx.cal, obj.word, pos, obj.shift)
    terms = {m: list(objs) for m, objs in cx.terms.items()}
    new_objs = [BSObject(short, sh) for _, _, sh in pieces]
    terms[n] = terms[n][:idx] + new_objs + terms[n][idx + 1:]

    def imap(m, k):
        if m != n or k < idx:
            return [(k, None)]
        if k == idx:
            return [(idx + a, pc) for a, pc in enumerate(pieces)]
        return [(k + len(pieces) - 1, None)]

    diff: dict = {}
    for m_deg, entries in cx.diff.items():
        for (r, c), mor in entries.items():
            for (nr, piece_r) in imap(m_deg + 1, r):
                for (nc, piece_c) in imap(m_deg, c):
                    new_m = mor
                    if piece_r is not None:     # target was split: post-project
                        new_m = cx.compose(piece_r[0], new_m)
                    if piece_c is not None:     # source was split: pre-include
                        new_m = cx.compose(new_m, piece_c[1])
                    _madd(diff.setdefault(m_deg, {}), (nr, nc), new_m)
    new_cx = Complex(cx.cal, terms, diff, cx.mode, cx.subset, check=False)
    if not certificate:
        return new_cx, None
    fwd: dict = {}
    bwd: dict = {}
    for m_deg, objs in cx.terms.items():
        for k, o in enumerate(objs):
            for (nk, piece) in imap(m_deg, k):
                if piece is None:
                    ident = cx.reduce_morphism(cx.cal.identity_morphism(o))
                    _madd(fwd.setdefault(m_deg, {}), (nk, k), ident)
                    _madd(bwd.setdefault(m_deg, {}), (k, nk), ident)
                else:
                    _madd(fwd.setdefault(m_deg, {}), (nk, k),
                          cx.reduce_morphism(piece[0]))
                    _madd(bwd.setdefault(m_deg, {}), (k, nk),
                          cx.reduce_morphism(piece[1]))
    return new_cx, Equivalence(cx, new_cx, fwd, bwd)


def _madd(entries: dict, key, m: Morphism):
    if m.is_zero():
        return
    cur = entries.get(key)
    m2 = m if cur is None else cur + m
    if m2.is_zero():
        entries.pop(key, None)
    else:
        entries[key] = m2


def _eliminate(cx: Complex, n: int, i: int, j: int, inv: Morphism,
               certificate: bool = True):
    """Gaussian elimination of the invertible entry phi = d[n][(i,j)].

    Removes summand j from degree n and summand i from degree n+1; the
    remaining differential picks up -gamma phi^{-1} beta.  Returns the
    new complex and the equivalence old ~ new.
    """
    terms = {m: list(objs) for m, objs in cx.terms.items()}
    a_obj = terms[n][j]
    b_obj = terms[n + 1][i]
    phi = cx.diff[n][(i, j)]

    def drop(seq, idx):
        return [x for k, x in enumerate(seq) if k != idx]

    new_terms = dict(terms)
    new_terms[n] = drop(terms[n], j)
    new_terms[n + 1] = drop(terms[n + 1], i)

    def col_map(m, idx):
        # old summand index -> new index at degree m (None if dropped)
        if m == n and idx == j:
            return None
        if m == n + 1 and idx == i:
            return None
        if m == n and idx > j:
            return idx - 1
        if m == n + 1 and idx > i:
            return idx - 1
        return idx

    new_diff: dict = {}
    for m_deg, entries in cx.diff.items():
        for (r, c), mor in entries.items():
            nr = col_map(m_deg + 1, r)
            nc = col_map(m_deg, c)
            if nr is None or nc is None:
                continue
            _madd(new_diff.setdefault(m_deg, {}), (nr, nc), mor)
    # correction delta' = delta - gamma phi^{-1} beta on degree n
    for (r, c), gamma in cx.diff.get(n, {}).items():
        if c != j or r == i:
            continue
        for (r2, c2), beta in cx.diff[n].items():
            if r2 != i or c2 == j:
                continue
            corr = cx.compose(gamma, cx.compose(inv, beta)).scale(-1)
            _madd(new_diff.setdefault(n, {}),
                  (col_map(n + 1, r), col_map(n, c2)), corr)
    new_cx = Complex(cx.cal, new_terms, new_diff, cx.mode, cx.subset, check=False)
    if not certificate:
        return new_cx, None

    # certificate: pi (old -> new), iota (new -> old), h (old, degree -1)
    pi: dict = {}
    iota: dict = {}
    for m_deg, objs in cx.terms.items():
        for idx in range(len(objs)):
            nidx = col_map(m_deg, idx)
            if nidx is None:
                continue
            ident = cx.reduce_morphism(cx.cal.identity_morphism(objs[idx]))
            _madd(pi.setdefault(m_deg, {}), (nidx, idx), ident)
            _madd(iota.setdefault(m_deg, {}), (idx, nidx), ident)
    # pi at degree n+1: y -> y - gamma phi^{-1} b-component
    for (r, c), gamma in cx.diff.get(n, {}).items():
        if c != j or r == i:
            continue
        corr = cx.compose(gamma, inv).scale(-1)
        _madd(pi.setdefault(n + 1, {}), (col_map(n + 1, r), i), corr)
    # iota at degree n: x -> x - phi^{-1} beta x into the dropped summand
    for (r2, c2), beta in cx.diff.get(n, {}).items():
        if r2 != i or c2 == j:
            continue
        corr = cx.compose(inv, beta).scale(-1)
        _madd(iota.setdefault(n, {}), (j, col_map(n, c2)), corr)
    h: dict = {n + 1: {(j, i): inv}}
    return new_cx, Equivalence(cx, new_cx, pi, iota, h_src=h, h_dst={})


# ---------------------------------------------------------------------------
# chain maps and equivalences

def chainmap_compose(cx_a: Complex, cx_b: Complex, cx_c: Complex,
                     g: dict, f: dict) -> dict:
    """(g o f)^n for f: A -> B, g: B -> C, all matrices over summands."""
    out: dict = {}
    for n, fentries in f.items():
        gentries = g.get(n, {})
        for (k, j), mf in fentries.items():
            for (i, k2), mg in gentries.items():
                if k2 != k:
                    continue
                _madd(out.setdefault(n, {}), (i, j), cx_c.compose(mg, mf))
    return out


@dataclass
class Equivalence:
    """A homotopy equivalence with explicit data.

    fwd: src -> dst and bwd: dst -> src are chain maps;
    id_src - bwd o fwd = d h_src + h_src d, and dually for h_dst
    (empty when fwd o bwd is the identity on the nose).
    """

    src: Complex
    dst: Complex
    fwd: dict
    bwd: dict
    h_src: dict = field(default_factory=dict)
    h_dst: dict = field(default_factory=dict)

    @staticmethod
    def identity(cx: Complex) -> "Equivalence":
        ident: dict = {}
        for n, objs in cx.terms.items():
            for idx, obj in enumerate(objs):
                _madd(ident.setdefault(n, {}), (idx, idx),
                      cx.reduce_morphism(cx.cal.identity_morphism(obj)))
        return Equivalence(cx, cx, ident, dict(ident))

    def compose(self, other: "Equivalence") -> "Equivalence":
        """self: A ~ B, other: B ~ C gives A ~ C."""
        if other.src is not self.dst:
            raise ValueError("equivalences do not chain")
        fwd = chainmap_compose(self.src, self.dst, other.dst, other.fwd, self.fwd)
        bwd = chainmap_compose(other.dst, self.dst, self.src, self.bwd, other.bwd)
        h_src = _chain_add(
            self.h_src,
            _sandwich(self.src, self.dst, other.h_src, self.fwd, self.bwd))
        h_dst = _chain_add(
            other.h_dst,
            _sandwich(other.dst, self.dst, self.h_dst, other.bwd, other.fwd))
        return Equivalence(self.src, other.dst, fwd, bwd, h_src, h_dst)

    def verify(self) -> bool:
        return (_is_chain_map(self.src, self.dst, self.fwd)
                and _is_chain_map(self.dst, self.src, self.bwd)
                and _homotopy_checks(self.src, chainmap_compose(
                    self.src, self.dst, self.src, self.bwd, self.fwd), self.h_src)
                and _homotopy_checks(self.dst, chainmap_compose(
                    self.dst, self.src, self.dst, self.fwd, self.bwd), self.h_dst))


def _chain_add(a: dict, b: dict) -> dict:
    out = {n: dict(entries) for n, entries in a.items()}
    for n, entries in b.items():
        for key, m in entries.items():
            _madd(out.setdefault(n, {}), key, m)
    return {n: e for n, e in out.items() if e}


def _sandwich(cx_src: Complex, cx_mid: Complex, h_mid: dict,
              fwd: dict, bwd: dict) -> dict:
    """bwd o h_mid o fwd, with h of cohomological degree -1."""
    out: dict = {}
    for n, entries in h_mid.items():
        # h_mid^n: mid[n] -> mid[n-1]
        for (i, j), hm in entries.items():
            for (jj, j2), mf in fwd.get(n, {}).items():
                if jj != j:
                    continue
                left = cx_src.compose(hm, mf)
                for (i2, ii), mb in bwd.get(n - 1, {}).items():
                    if ii != i:
                        continue
                    _madd(out.setdefault(n, {}), (i2, j2),
                          cx_src.compose(mb, left))
    return out


def _is_chain_map(src: Complex, dst: Complex, f: dict) -> bool:
    degrees = set(src.terms) | set(dst.terms)
    for n in degrees:
        acc: dict = {}
        for (k, j), mf in f.get(n, {}).items():
            for (i, k2), md in dst.diff.get(n, {}).items():
                if k2 != k:
                    continue
                _madd(acc, (i, j), dst.compose(md, mf))
        for (k, j), md in src.diff.get(n, {}).items():
            for (i, k2), mf in f.get(n + 1, {}).items():
                if k2 != k:
                    continue
                _madd(acc, (i, j), src.compose(mf, md).scale(-1))
        if acc:
            return False
    return True


def _homotopy_checks(cx: Complex, composite: dict, h: dict) -> bool:
    """id - composite = d h + h d on cx."""
    for n, objs in cx.terms.items():
        acc: dict = {}
        for idx, obj in enumerate(objs):
            _madd(acc, (idx, idx),
                  cx.reduce_morphism(cx.cal.identity_morphism(obj)))
        for key, m in composite.get(n, {}).items():
            _madd(acc, key, m.scale(-1))
        # minus d h
        for (k, j), hm in h.get(n, {}).items():
            for (i, k2), md in cx.diff.get(n - 1, {}).items():
                if k2 != k:
                    continue
                _madd(acc, (i, j), cx.compose(md, hm).scale(-1))
        # minus h d
        for (k, j), md in cx.diff.get(n, {}).items():
            for (i, k2), hm in h.get(n + 1, {}).items():
                if k2 != k:
                    continue
                _madd(acc, (i, j), cx.compose(hm, md).scale(-1))
        if acc:
            return False
    return True


# ---------------------------------------------------------------------------
# Hom tables in the homotopy category

def _hom_basis(cx_from: Complex, cx_to: Complex):
    """Coordinates of degree-0 graded maps (not yet chain maps)."""
    cal = cx_from.cal
    coords = []
    for n in cx_from.terms:
        if n not in cx_to.terms:
            continue
        for j, src in enumerate(cx_from.terms[n]):
            for i, tgt in enumerate(cx_to.terms[n]):
                d = tgt.shift - src.shift
                for L in cal.leaves(src.word, tgt.word):
                    if cx_from.subset is not None and L.x not in cx_from.subset:
                        continue
                    dd = d - L.degree
                    if cx_from.mode == "re":
                        if dd == 0:
                            coords.append((n, i, j, L, (0,) * cal.ring.nvars))
                        continue
                    if dd < 0 or dd % 2:
                        continue
                    for mono in cal.ring.monomials(dd // 2):
                        coords.append((n, i, j, L, mono))
    return coords


def _coord_morphism(cx_from: Complex, cx_to: Complex, coord) -> tuple[int, int, int, Morphism]:
    n, i, j, L, mono = coord
    cal = cx_from.cal
    m = Morphism(cal, cx_from.terms[n][j], cx_to.terms[n][i],
                 {L: cal.ring.monomial(mono)})
    return n, i, j, m


def _expand_in_coords(colkey, acc_rows, coords_index, n, i, j, m: Morphism, sign=1):
    for L, p in m.coeffs.items():
        for exp, c in p.terms.items():
            rowkey = ("cell", n, i, j, L, exp)
            acc_rows.setdefault(rowkey, {})
            cur = acc_rows[rowkey].get(colkey)
            val = c if sign == 1 else -c
            acc_rows[rowkey][colkey] = val if cur is None else cur + val


def hom_dimension(cx_from: Complex, cx_to: Complex) -> int:
    """dim_k Hom in the homotopy category (degree-0 chain maps mod homotopy)."""
    cal = cx_from.cal
    fieldk = cal.real.field
    coords = _hom_basis(cx_from, cx_to)
    if not coords:
        return 0
    cindex = {c: k for k, c in enumerate(coords)}
    # cycle equations: d_to o f - f o d_from = 0
    rows: dict = {}
    for coord in coords:
        n, i, j, m = _coord_morphism(cx_from, cx_to, coord)
        col = cindex[coord]
        for (i2, ii), md in cx_to.diff.get(n, {}).items():
            if ii != i:
                continue
            _expand_in_coords(col, rows, cindex, n, i2, j,
                              cx_to.compose(md, m))
        for (jj, j2), md in cx_from.diff.get(n - 1, {}).items():
            if jj != j:
                continue
            _expand_in_coords(col, rows, cindex, n - 1, i, j2,
                              cx_from.compose(m, md), sign=-1)
    cycle_rows = [{c: v for c, v in row.items() if not (v == 0)}
                  for row in rows.values()]
    cycle_rank = rank(cycle_rows, fieldk)
    dim_cycles = len(coords) - cycle_rank
    # boundaries: h in degree -1 maps, image d h + h d inside chain maps
    hcoords = []
    for n in cx_from.terms:
        if (n - 1) not in cx_to.terms:
            continue
        for j, src in enumerate(cx_from.terms[n]):
            for i, tgt in enumerate(cx_to.terms[n - 1]):
                d = tgt.shift - src.shift
                for L in cal.leaves(src.word, tgt.word):
                    if cx_from.subset is not None and L.x not in cx_from.subset:
                        continue
                    dd = d - L.degree
                    if cx_from.mode == "re":
                        if dd == 0:
                            hcoords.append((n, i, j, L, (0,) * cal.ring.nvars))
                        continue
                    if dd < 0 or dd % 2:
                        continue
                    for mono in cal.ring.monomials(dd // 2):
                        hcoords.append((n, i, j, L, mono))
    # boundary vectors dh + hd, expressed in the coordinate space
    bvecs = []
    for hk, (n, i, j, L, mono) in enumerate(hcoords):
        hm = Morphism(cal, cx_from.terms[n][j], cx_to.terms[n - 1][i],
                      {L: cal.ring.monomial(mono)})
        vec: dict = {}
        for (i2, ii), md in cx_to.diff.get(n - 1, {}).items():
            if ii != i:
                continue
            comp = cx_to.compose(md, hm)
            _accumulate_coord_vector(vec, cindex, n, i2, j, comp)
        for (jj, j2), md in cx_from.diff.get(n - 1, {}).items():
            if jj != j:
                continue
            comp = cx_from.compose(hm, md)
            _accumulate_coord_vector(vec, cindex, n - 1, i, j2, comp)
        if vec:
            bvecs.append(vec)
    return dim_cycles - rank(bvecs, fieldk)


def _accumulate_coord_vector(vec: dict, cindex: dict, n, i, j, m: Morphism):
    for L, p in m.coeffs.items():
        for exp, c in p.terms.items():
            key = (n, i, j, L, _mono_of(exp))
            if key not in cindex:
                raise AssertionError("composite left the coordinate space")
            col = cindex[key]
            cur = vec.get(col)
            nc = c if cur is None else cur + c
            if nc == 0:
                vec.pop(col, None)
            else:
                vec[col] = nc


def _mono_of(exp):
    return tuple(exp)


def hom_table(cx_from: Complex, cx_to: Complex, window: int):
    """dims of Hom(C, D <n> [m]) for |n|, |m| <= window."""
    out = {}
    for n in range(-window, window + 1):
        for m in range(-window, window + 1):
            shifted = cx_to.shift_angle(n).shift_bracket(m)
            out[(n, m)] = hom_dimension(cx_from, shifted)
    return out


# ---------------------------------------------------------------------------
# mapping cones and contractions

def cone(f_entries: dict, src: Complex, dst: Complex) -> Complex:
    """Mapping cone of a chain map, with d = [[-d_C, 0], [f, d_D]]."""
    cal = src.cal
    terms: dict = {}
    index: dict = {}
    for n, objs in src.terms.items():
        for j, obj in enumerate(objs):
            lst = terms.setdefault(n - 1, [])
            index[("src", n, j)] = len(lst)
            lst.append(obj)
    for n, objs in dst.terms.items():
        for j, obj in enumerate(objs):
            lst = terms.setdefault(n, [])
            index[("dst", n, j)] = len(lst)
            lst.append(obj)
    diff: dict = {}
    for n, entries in src.diff.items():
        for (i, j), m in entries.items():
            diff.setdefault(n - 1, {})[
                (index[("src", n + 1, i)], index[("src", n, j)])] = m.scale(-1)
    for n, entries in dst.diff.items():
        for (i, j), m in entries.items():
            diff.setdefault(n, {})[
                (index[("dst", n + 1, i)], index[("dst", n, j)])] = m
    for n, entries in f_entries.items():
        for (i, j), m in entries.items():
            diff.setdefault(n - 1, {})[
                (index[("dst", n, i)], index[("src", n, j)])] = m
    cx = Complex(cal, terms, diff, mode=src.mode, subset=src.subset)
    cx._cone_index = index  # used to unpack contractions
    return cx


def contracting_homotopy(cx: Complex) -> dict | None:
    """Solve d h + h d = id for a degree -1 map h, if the complex is
    contractible; returns the h-matrices or None."""
    cal = cx.cal
    fieldk = cal.real.field
    hcoords = []
    for n in cx.terms:
        if (n - 1) not in cx.terms:
            continue
        for j, src in enumerate(cx.terms[n]):
            for i, tgt in enumerate(cx.terms[n - 1]):
                d = tgt.shift - src.shift
                for L in cal.leaves(src.word, tgt.word):
                    if cx.subset is not None and L.x not in cx.subset:
                        continue
                    dd = d - L.degree
                    if cx.mode == "re":
                        if dd == 0:
                            hcoords.append((n, i, j, L, (0,) * cal.ring.nvars))
                        continue
                    if dd < 0 or dd % 2:
                        continue
                    for mono in cal.ring.monomials(dd // 2):
                        hcoords.append((n, i, j, L, mono))
    rows: dict = {}
    rhs: dict = {}

    def cellkey(n, i, j, L, exp):
        return (n, i, j, L, tuple(exp))

    for hk, (n, i, j, L, mono) in enumerate(hcoords):
        hm = Morphism(cal, cx.terms[n][j], cx.terms[n - 1][i],
                      {L: cal.ring.monomial(mono)})
        for (i2, ii), md in cx.diff.get(n - 1, {}).items():
            if ii != i:
                continue
            comp = cx.compose(md, hm)
            for LL, p in comp.coeffs.items():
                for exp, c in p.terms.items():
                    rows.setdefault(cellkey(n, i2, j, LL, exp), {})[hk] = \
                        rows.get(cellkey(n, i2, j, LL, exp), {}).get(hk, fieldk.zero) + c
        for (jj, j2), md in cx.diff.get(n - 1, {}).items():
            if jj != j:
                continue
            comp = cx.compose(hm, md)
            for LL, p in comp.coeffs.items():
                for exp, c in p.terms.items():
                    key = cellkey(n - 1, i, j2, LL, exp)
                    rows.setdefault(key, {})[hk] = \
                        rows.get(key, {}).get(hk, fieldk.zero) + c
    for n, objs in cx.terms.items():
        for i, obj in enumerate(objs):
            ident = cx.reduce_morphism(cx.cal.identity_morphism(obj))
            for LL, p in ident.coeffs.items():
                for exp, c in p.terms.items():
                    key = cellkey(n, i, i, LL, exp)
                    rhs[key] = rhs.get(key, fieldk.zero) + c
                    rows.setdefault(key, {})
    all_keys = sorted(set(rows) | set(rhs), key=repr)
    row_list = [rows.get(k, {}) for k in all_keys]
    rhs_list = [rhs.get(k, fieldk.zero) for k in all_keys]
    sol, _ = solve(row_list, rhs_list, len(hcoords), fieldk)
    if sol is None:
        return None
    h: dict = {}
    for (n, i, j, L, mono), c in zip(hcoords, sol):
        if c == 0:
            continue
        m = Morphism(cal, cx.terms[n][j], cx.terms[n - 1][i],
                     {L: cal.ring.monomial(mono)}).scale(c)
        _madd(h.setdefault(n, {}), (i, j), m)
    return h


# ---------------------------------------------------------------------------
# equivalence search

def certify_equivalence(cx_a: Complex, cx_b: Complex,
                        attempts: int = 24) -> Equivalence | None:
    """Minimize both sides, then find an equivalence between the minimal forms.

    First a strict isomorphism is attempted; failing that, candidate
    chain maps are tried until one has a contractible cone, and the
    equivalence data is unpacked from the contraction.  Returns a
    verified Equivalence, or None (honest search failure, not a proof
    of inequivalence).
    """
    min_a, eq_a = cx_a.minimize()
    min_b, eq_b = cx_b.minimize()
    middle = None
    iso = _find_iso(min_a, min_b, attempts)
    if iso is not None:
        middle = Equivalence(min_a, min_b, iso[0], iso[1])
    if middle is None:
        middle = _find_equivalence_via_cone(min_a, min_b, attempts)
    if middle is None:
        return None
    inv_b = Equivalence(min_b, cx_b, eq_b.bwd, eq_b.fwd, eq_b.h_dst, eq_b.h_src)
    return eq_a.compose(middle).compose(inv_b)


def _chain_map_space(cx_a: Complex, cx_b: Complex):
    coords = _hom_basis(cx_a, cx_b)
    cindex = {c: k for k, c in enumerate(coords)}
    rows: dict = {}
    for coord in coords:
        n, i, j, m = _coord_morphism(cx_a, cx_b, coord)
        col = cindex[coord]
        for (i2, ii), md in cx_b.diff.get(n, {}).items():
            if ii != i:
                continue
            _expand_in_coords(col, rows, cindex, n, i2, j, cx_b.compose(md, m))
        for (jj, j2), md in cx_a.diff.get(n - 1, {}).items():
            if jj != j:
                continue
            _expand_in_coords(col, rows, cindex, n - 1, i, j2,
                              cx_a.compose(m, md), sign=-1)
    cycle_rows = [{c: v for c, v in row.items() if not (v == 0)}
                  for row in rows.values()]
    return coords, nullspace(cycle_rows, len(coords), cx_a.cal.real.field)


def _vec_to_chainmap(cx_a: Complex, cx_b: Complex, coords, vec) -> dict:
    fwd: dict = {}
    for coord, c in zip(coords, vec):
        if c == 0:
            continue
        n, i, j, m = _coord_morphism(cx_a, cx_b, coord)
        _madd(fwd.setdefault(n, {}), (i, j), m.scale(c))
    return fwd


def _find_equivalence_via_cone(cx_a: Complex, cx_b: Complex, attempts: int):
    coords, basis = _chain_map_space(cx_a, cx_b)
    if not basis:
        return None
    fieldk = cx_a.cal.real.field
    rng = random.Random(23)
    candidates = list(basis)
    for _ in range(attempts):
        vec = [fieldk.zero] * len(coords)
        for b in basis:
            c = fieldk.of(rng.randint(-2, 2))
            vec = [x + c * y for x, y in zip(vec, b)]
        candidates.append(vec)
    for vec in candidates:
        fwd = _vec_to_chainmap(cx_a, cx_b, coords, vec)
        if not fwd and not (cx_a.is_zero() and cx_b.is_zero()):
            continue
        cn = cone(fwd, cx_a, cx_b)
        h = contracting_homotopy(cn)
        if h is None:
            continue
        index = cn._cone_index
        # unpack: H12 is bwd, -H11 is h_src, -H22 is h_dst
        bwd: dict = {}
        h_src: dict = {}
        h_dst: dict = {}
        for n, entries in h.items():
            for (i, j), m in entries.items():
                src_key = _cone_key(index, cx_a, cx_b, n, j)
                tgt_key = _cone_key(index, cx_a, cx_b, n - 1, i)
                if src_key[0] == "dst" and tgt_key[0] == "src":
                    # B^n -> A^n component (cone degree n splits A^{n+1} (+) B^n)
                    _madd(bwd.setdefault(n, {}), (tgt_key[2], src_key[2]), m)
                elif src_key[0] == "src" and tgt_key[0] == "src":
                    _madd(h_src.setdefault(src_key[1], {}),
                          (tgt_key[2], src_key[2]), m.scale(-1))
                elif src_key[0] == "dst" and tgt_key[0] == "dst":
                    _madd(h_dst.setdefault(n, {}),
                          (tgt_key[2], src_key[2]), m)
        eq = Equivalence(cx_a, cx_b, fwd, bwd, h_src, h_dst)
        if eq.verify():
            return eq
    return None


def _cone_key(index: dict, cx_a: Complex, cx_b: Complex, n: int, pos: int):
    for key, v in index.items():
        part, deg, j = key
        cone_deg = deg - 1 if part == "src" else deg
        if cone_deg == n and v == pos:
            return (part, deg, j)
    raise KeyError((n, pos))


def _find_iso(cx_a: Complex, cx_b: Complex, attempts: int):
    if sorted(cx_a.terms) != sorted(cx_b.terms):
        return None
    for n in cx_a.terms:
        if sorted((o.word, o.shift) for o in cx_a.terms[n]) != \
           sorted((o.word, o.shift) for o in cx_b.terms[n]):
            return None
    cal = cx_a.cal
    fieldk = cal.real.field
    coords = _hom_basis(cx_a, cx_b)
    if not coords and cx_a.is_zero() and cx_b.is_zero():
        return {}, {}
    cindex = {c: k for k, c in enumerate(coords)}
    rows: dict = {}
    for coord in coords:
        n, i, j, m = _coord_morphism(cx_a, cx_b, coord)
        col = cindex[coord]
        for (i2, ii), md in cx_b.diff.get(n, {}).items():
            if ii != i:
                continue
            _expand_in_coords(col, rows, cindex, n, i2, j, cx_b.compose(md, m))
        for (jj, j2), md in cx_a.diff.get(n - 1, {}).items():
            if jj != j:
                continue
            _expand_in_coords(col, rows, cindex, n - 1, i, j2,
                              cx_a.compose(m, md), sign=-1)
    cycle_rows = [{c: v for c, v in row.items() if not (v == 0)}
                  for row in rows.values()]
    basis = nullspace(cycle_rows, len(coords), fieldk)
    if not basis:
        return None
    rng = random.Random(7)
    candidates = list(basis)
    for _ in range(attempts):
        vec = [fieldk.zero] * len(coords)
        for b in basis:
            c = fieldk.of(rng.randint(-3, 3))
            vec = [x + c * y for x, y in zip(vec, b)]
        candidates.append(vec)
    for vec in candidates:
        fwd: dict = {}
        for coord, c in zip(coords, vec):
            if c == 0:
                continue
            n, i, j, m = _coord_morphism(cx_a, cx_b, coord)
            _madd(fwd.setdefault(n, {}), (i, j), m.scale(c))
        bwd = _invert_chain_iso(cx_a, cx_b, fwd)
        if bwd is not None:
            return fwd, bwd
    return None


def _invert_chain_iso(cx_a: Complex, cx_b: Complex, fwd: dict):
    """Invert a chain map degreewise via block Gaussian elimination."""
    bwd: dict = {}
    for n in set(cx_a.terms) | set(cx_b.terms):
        na, nb = len(cx_a.terms.get(n, ())), len(cx_b.terms.get(n, ()))
        if na != nb:
            return None
        if na == 0:
            continue
        block = {key: m for key, m in fwd.get(n, {}).items()}
        inv_block = _invert_morphism_matrix(
            cx_a, cx_a.terms[n], cx_b.terms[n], block)
        if inv_block is None:
            return None
        bwd[n] = inv_block
    # verify chain-map property of the inverse and both composites
    if not _is_chain_map(cx_b, cx_a, bwd):
        return None
    comp = chainmap_compose(cx_a, cx_b, cx_a, bwd, fwd)
    if not _is_identity_chain_map(cx_a, comp):
        return None
    comp2 = chainmap_compose(cx_b, cx_a, cx_b, fwd, bwd)
    if not _is_identity_chain_map(cx_b, comp2):
        return None
    return bwd


def _is_identity_chain_map(cx: Complex, f: dict) -> bool:
    for n, objs in cx.terms.items():
        for i, obj in enumerate(objs):
            ident = cx.reduce_morphism(cx.cal.identity_morphism(obj))
            for j in range(len(objs)):
                got = f.get(n, {}).get((i, j))
                want = ident if i == j else None
                if want is None:
                    if got is not None and not got.is_zero():
                        return False
                elif got != want:
                    return False
    return True


# ---------------------------------------------------------------------------
# complexes of graded free modules (singleton quotients) and the Koszul side

class FreeComplex:
    """A bounded complex of shifted copies of b_w, i.e. of graded free modules.

    terms[n] is a tuple of internal shifts; an entry (i, j) of diff[n] is
    a homogeneous polynomial of degree terms[n+1][i] - terms[n][j] (a
    scalar constant in the RE case, where only equal shifts interact).
    """

    def __init__(self, real, terms: dict, diff: dict | None = None,
                 element=None, check: bool = True):
        self.real = real
        self.ring = real.ring
        self.element = element
        self.terms = {n: tuple(shifts) for n, shifts in terms.items() if shifts}
        self.diff = {}
        if diff:
            for n, entries in diff.items():
                cleaned = {k: p for k, p in entries.items() if not p.is_zero()}
                if cleaned:
                    self.diff[n] = cleaned
        if check:
            self._check()

    def _check(self):
        for n, entries in self.diff.items():
            for (i, j), p in entries.items():
                want = self.terms[n + 1][i] - self.terms[n][j]
                if not p.is_homogeneous(want):
                    raise ValueError(f"entry ({n},{i},{j}) not of degree {want}")
        self.check_d2()

    def check_d2(self):
        for n in self.diff:
            if (n + 1) not in self.diff:
                continue
            prods: dict = {}
            for (k, j), p in self.diff[n].items():
                for (i, k2), q in self.diff[n + 1].items():
                    if k2 != k:
                        continue
                    prods[(i, j)] = prods.get((i, j), self.ring.zero) + q * p
            for key, p in prods.items():
                if not p.is_zero():
                    raise AssertionError(f"d^2 != 0 in FreeComplex at {n} {key}")

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self):
        return sorted(self.terms)

    def summands(self):
        for n, shifts in self.terms.items():
            for j in shifts:
                yield n, j

    def char_summands(self):
        for n, shifts in self.terms.items():
            for j in shifts:
                yield n, "b", self.element, j

    @property
    def system(self):
        return self.real.system

    def shift_bracket(self, k: int) -> "FreeComplex":
        terms = {n - k: shifts for n, shifts in self.terms.items()}
        sign = -1 if k % 2 else 1
        diff = {n - k: {key: (p if sign == 1 else -p)
                        for key, p in entries.items()}
                for n, entries in self.diff.items()}
        return FreeComplex(self.real, terms, diff, self.element, check=False)

    def shift_q(self, k: int) -> "FreeComplex":
        terms = {n: tuple(j + k for j in shifts) for n, shifts in self.terms.items()}
        sign = -1 if k % 2 else 1
        diff = {n: {key: (p if sign == 1 else -p) for key, p in entries.items()}
                for n, entries in self.diff.items()}
        return FreeComplex(self.real, terms, diff, self.element, check=False)

    def shift_angle(self, k: int) -> "FreeComplex":
        return self.shift_q(-k).shift_bracket(k)

    def dualize(self) -> "FreeComplex":
        terms = {-n: tuple(-j for j in shifts) for n, shifts in self.terms.items()}
        diff: dict = {}
        for n, entries in self.diff.items():
            block = {}
            for (i, j), p in entries.items():
                block[(j, i)] = p
            diff[-n - 1] = block
        return FreeComplex(self.real, terms, diff, self.element, check=False)

    def minimize(self) -> "FreeComplex":
        """Remove contractible pairs: entries that are nonzero constants."""
        current = self
        while True:
            found = None
            for n in sorted(current.diff):
                for (i, j), p in sorted(current.diff[n].items()):
                    c = p.constant_term()
                    if not (c == 0):
                        found = (n, i, j, p, c)
                        break
                if found:
                    break
            if found is None:
                return current
            n, i, j, p, c = found
            # constant entries are scalars by homogeneity
            inv = self.real.field.one / c
            terms = {m: list(shifts) for m, shifts in current.terms.items()}
            terms[n] = [x for k, x in enumerate(terms[n]) if k != j]
            terms[n + 1] = [x for k, x in enumerate(terms[n + 1]) if k != i]

            def cmap(m, idx):
                if m == n and idx == j:
                    return None
                if m == n + 1 and idx == i:
                    return None
                if m == n and idx > j:
                    return idx - 1
                if m == n + 1 and idx > i:
                    return idx - 1
                return idx

            diff: dict = {}
            for m_deg, entries in current.diff.items():
                for (r, cc), q in entries.items():
                    nr, ncc = cmap(m_deg + 1, r), cmap(m_deg, cc)
                    if nr is None or ncc is None:
                        continue
                    block = diff.setdefault(m_deg, {})
                    block[(nr, ncc)] = block.get((nr, ncc), self.ring.zero) + q
            for (r, cc), gamma in current.diff.get(n, {}).items():
                if cc != j or r == i:
                    continue
                for (r2, c2), beta in current.diff[n].items():
                    if r2 != i or c2 == j:
                        continue
                    corr = (gamma * beta).scale(-inv)
                    block = diff.setdefault(n, {})
                    key = (cmap(n + 1, r), cmap(n, c2))
                    block[key] = block.get(key, self.ring.zero) + corr
            diff = {m: {k: p for k, p in e.items() if not p.is_zero()}
                    for m, e in diff.items()}
            diff = {m: e for m, e in diff.items() if e}
            current = FreeComplex(self.real, terms, diff, self.element, check=False)

    def __repr__(self):
        parts = []
        for n in self.degrees():
            shifts = ",".join(str(j) for j in self.terms[n])
            parts.append(f"{n}: [{shifts}]")
        return f"FreeComplex({'; '.join(parts) or '0'})"


class KoszulComplex:
    """Lambda (x) xi(M) for a complex M of graded free modules.

    xi regrades an element of cohomological degree p and internal degree
    m to total degree a = p + m (keeping b = m as the second grading);
    Lambda is the exterior algebra on the degree-2 polynomial generators
    in bidegree (1, 2).  The differential moves a generator into the
    module slot with alternating signs, plus (-1)^k d_M.  Slices at a
    fixed bidegree are finite dimensional, so cohomology is exact.

    With max_exterior = 0 this is just the regraded M itself, whose
    cohomology in total degree 0 is H^0(M).
    """

    def __init__(self, free: FreeComplex, max_exterior: int | None = None):
        self.free = free
        self.ring = free.ring
        self.nvars = self.ring.nvars if max_exterior is None else max_exterior
        self.summands = [(p, idx, shift) for p, shifts in free.terms.items()
                         for idx, shift in enumerate(shifts)]

    def basis(self, a: int, b: int):
        out = []
        for p, idx, j in self.summands:
            k = p - a + b
            if k < 0 or k > self.nvars:
                continue
            mdeg = b - 2 * k + j
            if mdeg < 0 or mdeg % 2:
                continue
            for subset in itertools.combinations(range(self.ring.nvars), k):
                for mono in self.ring.monomials(mdeg // 2):
                    out.append((subset, p, idx, mono))
        return out

    def differential(self, a: int, b: int):
        """Sparse columns of d: slice (a,b) -> slice (a+1,b)."""
        src = self.basis(a, b)
        tgt = self.basis(a + 1, b)
        tindex = {key: r for r, key in enumerate(tgt)}
        cols = []
        for subset, p, idx, mono in src:
            col: dict = {}

            def add(key, c):
                r = tindex.get(key)
                if r is None:
                    if not (c == 0):
                        raise AssertionError("differential left the slice")
                    return
                cur = col.get(r)
                nc = c if cur is None else cur + c
                if nc == 0:
                    col.pop(r, None)
                else:
                    col[r] = nc

            for pos, v in enumerate(subset):
                sign = -1 if pos % 2 else 1
                rest = subset[:pos] + subset[pos + 1:]
                newmono = tuple(e + (1 if t == v else 0)
                                for t, e in enumerate(mono))
                add((rest, p, idx, newmono),
                    self.ring.field.of(sign))
            sign_d = -1 if len(subset) % 2 else 1
            col_in_p = self.free.terms.get(p, ())
            for (i2, j2), q in self.free.diff.get(p, {}).items():
                if j2 != idx:
                    continue
                prod = q * self.ring.monomial(mono)
                for exp, c in prod.terms.items():
                    add((subset, p + 1, i2, exp),
                        c if sign_d == 1 else -c)
            cols.append(col)
        return src, tgt, cols

    def cohomology_dim(self, a: int, b: int) -> int:
        src, tgt, cols = self.differential(a, b)
        # kernel of d at (a,b): rows of the matrix are the columns transposed
        rows: dict = {}
        for cidx, col in enumerate(cols):
            for r, c in col.items():
                rows.setdefault(r, {})[cidx] = c
        dim_ker = len(src) - rank(list(rows.values()), self.ring.field)
        prev_src, _, prev_cols = self.differential(a - 1, b)
        prev_rows: dict = {}
        for cidx, col in enumerate(prev_cols):
            for r, c in col.items():
                prev_rows.setdefault(cidx, {})[r] = c
        dim_im = rank(list(prev_rows.values()), self.ring.field)
        return dim_ker - dim_im


def koszulify(free: FreeComplex) -> KoszulComplex:
    return KoszulComplex(free)


def h0_dims(free: FreeComplex, lam: bool) -> dict[int, int]:
    """dim of H^{0,b} of the (regraded) complex, with or without Lambda."""
    kz = KoszulComplex(free, None if lam else 0)
    if not free.terms:
        return {}
    degrees = sorted(free.terms)
    out: dict[int, int] = {}
    bs = set()
    for p, idx, j in kz.summands:
        for k in range(0, kz.nvars + 1):
            # a = 0 forces k = p + b, i.e. b = k - p; monomial degree b-2k+j >= 0
            b = k - p
            if b - 2 * k + j >= 0 and (b - 2 * k + j) % 2 == 0:
                bs.add(b)
    for b in sorted(bs):
        d = kz.cohomology_dim(0, b)
        if d:
            out[b] = d
    return out


def koszul_support(free: FreeComplex) -> dict[tuple[int, int], int]:
    """Nonzero Lambda-cohomology dims of a MINIMAL complex, computed honestly.

    For a minimal complex the cohomology is concentrated where the
    summand rule predicts: one class at (p - j, -j) per summand.  Both
    are computed and must agree; the honest computation is returned.
    """
    kz = KoszulComplex(free)
    predicted: dict[tuple[int, int], int] = {}
    for p, idx, j in kz.summands:
        key = (p - j, -j)
        predicted[key] = predicted.get(key, 0) + 1
    bvals = sorted({-j for _, _, j in kz.summands})
    out: dict[tuple[int, int], int] = {}
    for b in bvals:
        avals = sorted({p + b - k for p, _, _ in kz.summands
                        for k in range(0, kz.nvars + 1)})
        for a in avals:
            d = kz.cohomology_dim(a, b)
            if d:
                out[(a, b)] = d
    if out != predicted:
        raise AssertionError(
            f"Koszul cohomology {out} disagrees with the summand rule {predicted}; "
            "the input complex was not minimal or the calibration is broken")
    return out


# ---------------------------------------------------------------------------
# JSON schema for complexes

def complex_to_json(cx: Complex) -> dict:
    """Schema: terms as arrays of (word, internal shift); differential as
    sparse (row, col, morphism) entries with double-leaf coefficient lists."""
    from .soergelcalc import morphism_to_json

    system = cx.system
    out = {
        "schema": "heckekit/v1",
        "mode": cx.mode,
        "subset": (sorted(system.word_labels(w.word) for w in cx.subset)
                   if cx.subset is not None else None),
        "terms": {str(n): [[system.word_labels(o.word), o.shift] for o in objs]
                  for n, objs in sorted(cx.terms.items())},
    }
    if cx.with_diff:
        out["differential"] = {
            str(n): [[i, j, morphism_to_json(m)]
                     for (i, j), m in sorted(entries.items())]
            for n, entries in sorted(cx.diff.items())}
    return out


def complex_from_json(cal: Calculus, data: dict) -> Complex:
    """Rebuild a complex; entry endpoints and d^2 = 0 are re-verified."""
    from .locale import LocallyClosedSubset
    from .soergelcalc import morphism_from_json

    system = cal.system
    subset = None
    if data.get("subset") is not None:
        subset = LocallyClosedSubset.of(
            {system.element(wd) for wd in data["subset"]})
    terms = {int(n): tuple(BSObject(system.word_from_labels(word), shift)
                           for word, shift in objs)
             for n, objs in data["terms"].items()}
    diff = None
    if "differential" in data:
        diff = {int(n): {(i, j): morphism_from_json(cal, m)
                         for i, j, m in entries}
                for n, entries in data["differential"].items()}
    return Complex(cal, terms, diff, mode=data.get("mode", "be"),
                   subset=subset, check=True)


def _invert_morphism_matrix(cx: Complex, src_objs, tgt_objs, block: dict):
    """Invert a square matrix of morphisms by elimination on invertible pivots."""
    size = len(src_objs)
    work = {key: m for key, m in block.items()}
    inverse: dict = {}
    for i, obj in enumerate(tgt_objs):
        _madd(inverse, (i, i), cx.reduce_morphism(cx.cal.identity_morphism(obj)))
    # row reduce [work | inverse] to [id | work^{-1}] over the additive category
    done_rows: set = set()
    done_cols: set = set()
    for _ in range(size):
        pivot = None
        for (r, c), m in sorted(work.items()):
            if r in done_rows or c in done_cols:
                continue
            inv = cx.try_invert(m)
            if inv is not None:
                pivot = (r, c, inv)
                break
        if pivot is None:
            return None
        r0, c0, inv = pivot
        # scale the pivot row by inv on the left
        for c in range(size):
            for table in (work, inverse):
                m = table.get((r0, c))
                if m is not None:
                    table[(r0, c)] = cx.compose(inv, m)
                    if table[(r0, c)].is_zero():
                        del table[(r0, c)]
        # move the pivot row to logical position c0 by remembering permutation:
        # instead, eliminate column c0 from all other rows
        for r in range(size):
            if r == r0:
                continue
            coeff = work.get((r, c0))
            if coeff is None or coeff.is_zero():
                continue
            for c in range(size):
                for table in (work, inverse):
                    m = table.get((r0, c))
                    if m is None:
                        continue
                    _madd(table, (r, c), cx.compose(coeff, m).scale(-1))
            work.pop((r, c0), None)
        done_rows.add(r0)
        done_cols.add(c0)
    # work is now a permutation-like identity: rows r0 carry identity at c0;
    # compose the permutation into the inverse
    perm = {}
    for (r, c) in work.keys():
        perm[c] = r
    out: dict = {}
    for c, r in perm.items():
        for c2 in range(size):
            m = inverse.get((r, c2))
            if m is not None:
                _madd(out, (c, c2), m)
    return out
