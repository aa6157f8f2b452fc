"""The diagrammatic category on Bott-Samelson objects: double leaves,
evaluation, composition.

Objects are B_w(n) for w an arbitrary word in the simple reflections.
A morphism is stored as its coefficient vector in the double-leaves
basis: indices (x, e, f) with e a subexpression of the source word and
f of the target word, both expressing x; coefficients act as left
multiplication and are homogeneous polynomials.

Evaluation realizes B_w as the tensor bimodule R (x)_{R^{s_1}} ... (x) R
with right basis c_e = x_1 (x) ... (x) x_k (x) 1, x_i in {1, delta_{s_i}},
graded so the bottom generator sits in degree -k.  Generator semantics:
dot = multiplication, enddot 1 -> delta (x) 1 + 1 (x) (alpha - delta)
(normalized so the barbell is multiplication by alpha), merge
f (x) g (x) h -> f d_s(g) (x) h, split f (x) g -> f (x) 1 (x) g, and the
2m-valent crossings for m <= 3 are the unique degree-0 bimodule maps
fixing the bottom generator (solved once per realization; higher m is
refused, only graded-rank bookkeeping applies there).

A bimodule map is right-linear, so it is determined by the images of
the finitely many c_e; all evaluation data is therefore exact and
finite, and expressing a map back in the double-leaves basis is one
sparse linear solve over the coefficient field.  Left multiplication is
natural in the category (boxes slide past everything), which makes
composition bilinear over basis expansions; those expansions are cached
as structure constants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .coxeter import Element, Expression, rex_path
from .laurent import LaurentPoly
from .linalg import nullspace, solve
from .polyring import Poly
from .realization import Realization

Word = tuple


class UnsupportedValence(RuntimeError):
    """A 2m-valent vertex with m >= 4 cannot be evaluated."""


class EvaluationNotFaithful(RuntimeError):
    """Double-leaf evaluations were linearly dependent at the needed degrees."""


class DegreeBoundExceeded(MemoryError):
    pass


# ---------------------------------------------------------------------------
# objects and leaf indices

@dataclass(frozen=True)
class BSObject:
    word: Word
    shift: int = 0

    def shifted(self, n: int) -> "BSObject":
        return BSObject(self.word, self.shift + n)

    def dual(self) -> "BSObject":
        return BSObject(self.word, -self.shift)


@dataclass(frozen=True, eq=False)
class LeafIndex:
    """Double-leaf index: x with e through the source, f through the target."""

    x: Element
    e: Word
    f: Word
    degree: int

    def __eq__(self, other):
        return (isinstance(other, LeafIndex) and self.x == other.x
                and self.e == other.e and self.f == other.f)

    def __hash__(self):
        return hash((self.x.word, self.e, self.f))

    def __repr__(self):
        return f"LL[{self.x}; e={list(self.e)}, f={list(self.f)}; deg {self.degree}]"


def basis_degree(word: Word, bits: Word) -> int:
    """Internal degree of c_e: each selected delta contributes 2, base -len."""
    return 2 * sum(bits) - len(word)


# ---------------------------------------------------------------------------
# diagrams

ATOM_IN = {"id": 1, "dot": 1, "enddot": 0, "merge": 2, "split": 1, "box": 0}
ATOM_DEG = {"id": 0, "dot": 1, "enddot": 1, "merge": -1, "split": -1, "mvalent": 0}


def atom_in_arity(atom) -> int:
    kind = atom[0]
    if kind == "mvalent":
        return atom[3]
    return ATOM_IN[kind]


def atom_out_word(atom) -> Word:
    kind = atom[0]
    if kind == "id":
        return (atom[1],)
    if kind in ("dot", "box"):
        return ()
    if kind == "enddot":
        return (atom[1],)
    if kind == "merge":
        return (atom[1],)
    if kind == "split":
        return (atom[1], atom[1])
    if kind == "mvalent":
        _, s, t, m = atom
        return tuple(t if k % 2 == 0 else s for k in range(m))
    raise ValueError(f"unknown atom {atom}")


def atom_degree(atom) -> int:
    if atom[0] == "box":
        return atom[1].internal_degree()
    return ATOM_DEG[atom[0]]


def atom_flip(atom):
    kind = atom[0]
    if kind == "dot":
        return ("enddot", atom[1])
    if kind == "enddot":
        return ("dot", atom[1])
    if kind == "merge":
        return ("split", atom[1])
    if kind == "split":
        return ("merge", atom[1])
    if kind == "mvalent":
        _, s, t, m = atom
        return ("mvalent", t, s, m)
    return atom


@dataclass(frozen=True)
class Diagram:
    """Slices of atoms; read bottom to top.  Implicit left-to-right layout."""

    bottom: Word
    slices: tuple = ()

    def __post_init__(self):
        word = self.bottom
        for sl in self.slices:
            consumed = sum(atom_in_arity(a) for a in sl)
            if consumed != len(word):
                raise ValueError(f"slice {sl} does not cover word {word}")
            word = sum((atom_out_word(a) for a in sl), ())
        object.__setattr__(self, "_top", word)

    @property
    def top(self) -> Word:
        return self._top

    @property
    def degree(self) -> int:
        return sum(atom_degree(a) for sl in self.slices for a in sl)

    @staticmethod
    def identity(word: Word) -> "Diagram":
        return Diagram(tuple(word), ())

    def then(self, other: "Diagram") -> "Diagram":
        """Vertical composition: self first, other on top."""
        if self.top != other.bottom:
            raise ValueError("boundaries do not match")
        return Diagram(self.bottom, self.slices + other.slices)

    def beside(self, other: "Diagram") -> "Diagram":
        """Horizontal (monoidal) juxtaposition, padding with identity slices."""
        n = max(len(self.slices), len(other.slices))
        mine = list(self.slices) + [tuple(("id", s) for s in self.top)] * (n - len(self.slices))
        theirs = list(other.slices) + [tuple(("id", s) for s in other.top)] * (n - len(other.slices))
        return Diagram(self.bottom + other.bottom,
                       tuple(tuple(a) + tuple(b) for a, b in zip(mine, theirs)))

    def flip(self) -> "Diagram":
        return Diagram(self.top, tuple(tuple(atom_flip(a) for a in sl)
                                       for sl in reversed(self.slices)))

    def max_valence(self) -> int:
        out = 0
        for sl in self.slices:
            for a in sl:
                if a[0] == "mvalent":
                    out = max(out, a[3])
        return out


def dot(s: int) -> Diagram:
    return Diagram((s,), ((("dot", s),),))


def enddot(s: int) -> Diagram:
    return Diagram((), ((("enddot", s),),))


def merge(s: int) -> Diagram:
    return Diagram((s, s), ((("merge", s),),))


def split(s: int) -> Diagram:
    return Diagram((s,), ((("split", s),),))


def cap(s: int) -> Diagram:
    """B_{(s,s)} -> B_empty, degree 0: merge then dot."""
    return merge(s).then(dot(s))


def cup(s: int) -> Diagram:
    return cap(s).flip()


def box(p: Poly) -> Diagram:
    return Diagram((), ((("box", p),),))


def barbell(s: int) -> Diagram:
    return enddot(s).then(dot(s))


def mvalent(system, s: int, t: int) -> Diagram:
    m = system.m(s, t)
    if m is None:
        raise UnsupportedValence(f"m({s},{t}) is infinite")
    word = tuple(s if k % 2 == 0 else t for k in range(m))
    return Diagram(word, ((("mvalent", s, t, m),),))


def rex_move_diagram(system, word: Word, pos: int, s: int, t: int) -> Diagram:
    m = system.m(s, t)
    pre = Diagram.identity(word[:pos])
    post = Diagram.identity(word[pos + m:])
    return pre.beside(mvalent(system, s, t)).beside(post)


def rex_path_diagram(system, word_from: Word, word_to: Word) -> Diagram:
    d = Diagram.identity(word_from)
    for pos, s, t, before, after in rex_path(Expression(system, word_from),
                                             Expression(system, word_to)):
        d = d.then(rex_move_diagram(system, before, pos, s, t))
    return d


# ---------------------------------------------------------------------------
# light leaves

def light_leaf_diagram(system, word: Word, bits: Word) -> Diagram:
    """The light-leaf morphism B_word -> B_x for x the selected product.

    Inductive construction over the letters; all rex choices are routed
    through canonical reduced words and the deterministic rex path, and
    the final target is the canonical reduced word of x.  Degree equals
    the defect of the subexpression.
    """
    diag = Diagram.identity(())
    cur: Word = ()  # reduced word for the partial product
    for letter, bit in zip(word, bits):
        x = system.element(cur)
        up = x.times_simple(letter).length > x.length
        diag = diag.beside(Diagram.identity((letter,)))
        if up and bit:  # U1: keep the strand
            cur = cur + (letter,)
        elif up and not bit:  # U0: kill it with a dot
            diag = diag.then(Diagram.identity(cur).beside(dot(letter)))
        else:
            # D: rewrite cur as (shorter word) + letter, then merge or cap
            shorter = system.canonical(cur + (letter,))
            target = shorter + (letter,)
            theta = rex_path_diagram(system, cur, target)
            diag = diag.then(theta.beside(Diagram.identity((letter,))))
            if bit:  # D1: cap, the product drops
                diag = diag.then(Diagram.identity(shorter).beside(cap(letter)))
                cur = shorter
            else:  # D0: merge, the product stays
                diag = diag.then(Diagram.identity(shorter).beside(merge(letter)))
                cur = target
    final = system.canonical(cur)
    if cur != final:
        diag = diag.then(rex_path_diagram(system, cur, final))
    return diag


def double_leaf_diagram(system, v_word: Word, w_word: Word, idx: LeafIndex) -> Diagram:
    up = light_leaf_diagram(system, v_word, idx.e)
    down = light_leaf_diagram(system, w_word, idx.f).flip()
    return up.then(down)


def leaf_indices(system, v_word: Word, w_word: Word) -> tuple:
    """The double-leaf basis indices of Hom(B_v, B_w), deterministically sorted."""
    table_v: dict[Element, list] = {}
    for bits in itertools.product((0, 1), repeat=len(v_word)):
        sub = _sub(system, v_word, bits)
        table_v.setdefault(sub[0], []).append((bits, sub[1]))
    out = []
    for bits in itertools.product((0, 1), repeat=len(w_word)):
        x, dft = _sub(system, w_word, bits)
        for e_bits, e_dft in table_v.get(x, ()):
            out.append(LeafIndex(x, e_bits, bits, e_dft + dft))
    return tuple(sorted(out, key=lambda L: (L.x.length, L.x.word, L.e, L.f)))


def _sub(system, word, bits):
    x = system.identity
    defect = 0
    for letter, bit in zip(word, bits):
        up = x.times_simple(letter).length > x.length
        if up and not bit:
            defect += 1
        if not up and not bit:
            defect -= 1
        if bit:
            x = x.times_simple(letter)
    return x, defect


def hom_graded_rank(system, v_word: Word, w_word: Word) -> LaurentPoly:
    """Graded rank of Hom(B_v, B_w) as a one-sided free R-module."""
    counts: dict[int, int] = {}
    for L in leaf_indices(system, v_word, w_word):
        counts[L.degree] = counts.get(L.degree, 0) + 1
    return LaurentPoly(counts)


# ---------------------------------------------------------------------------
# bimodule evaluation

class BimodMap:
    """A bimodule map B_v -> B_w, stored as images of the right basis c_e."""

    __slots__ = ("word_in", "word_out", "degree", "images")

    def __init__(self, word_in: Word, word_out: Word, degree: int,
                 images: dict):
        self.word_in = word_in
        self.word_out = word_out
        self.degree = degree
        self.images = images  # bits_in -> {bits_out -> Poly}

    def compose(self, first: "BimodMap") -> "BimodMap":
        """self o first."""
        if first.word_out != self.word_in:
            raise ValueError("boundary mismatch")
        images = {}
        for e, img in first.images.items():
            acc: dict[Word, Poly] = {}
            for mid, r in img.items():
                for out, q in self.images.get(mid, {}).items():
                    p = q * r
                    if p.is_zero():
                        continue
                    cur = acc.get(out)
                    p = p if cur is None else cur + p
                    if p.is_zero():
                        acc.pop(out, None)
                    else:
                        acc[out] = p
            images[e] = acc
        return BimodMap(first.word_in, self.word_out, self.degree + first.degree, images)

    def right_mult(self, p: Poly) -> "BimodMap":
        return BimodMap(self.word_in, self.word_out,
                        self.degree + p.internal_degree(),
                        {e: {o: q * p for o, q in img.items()}
                         for e, img in self.images.items()})

    def add(self, other: "BimodMap") -> "BimodMap":
        if (self.word_in, self.word_out, self.degree) != \
           (other.word_in, other.word_out, other.degree):
            raise ValueError("cannot add maps of different type")
        images = {e: dict(img) for e, img in self.images.items()}
        for e, img in other.images.items():
            acc = images.setdefault(e, {})
            for o, q in img.items():
                cur = acc.get(o)
                q2 = q if cur is None else cur + q
                if q2.is_zero():
                    acc.pop(o, None)
                else:
                    acc[o] = q2
        return BimodMap(self.word_in, self.word_out, self.degree, images)

    def is_zero(self) -> bool:
        return all(not img for img in self.images.values())

    def __eq__(self, other):
        if not isinstance(other, BimodMap):
            return NotImplemented
        if (self.word_in, self.word_out) != (other.word_in, other.word_out):
            return False
        keys = set(self.images) | set(other.images)
        for e in keys:
            a = {o: q for o, q in self.images.get(e, {}).items() if not q.is_zero()}
            b = {o: q for o, q in other.images.get(e, {}).items() if not q.is_zero()}
            if a != b:
                return False
        return True

    def matrix_in_degree(self, ring, d: int):
        """Dense matrix of the degree-d piece (rows: target basis, cols: source)."""
        cols = _degree_basis(ring, self.word_in, d)
        rows = _degree_basis(ring, self.word_out, d + self.degree)
        row_index = {key: i for i, key in enumerate(rows)}
        mat = [[ring.field.zero for _ in cols] for _ in rows]
        for j, (e, mono) in enumerate(cols):
            img = self.images.get(e, {})
            mu = ring.monomial(mono)
            for o, q in img.items():
                prod = q * mu
                for exp, c in prod.terms.items():
                    mat[row_index[(o, exp)]][j] = c
        return mat


def _degree_basis(ring, word: Word, d: int):
    out = []
    for bits in itertools.product((0, 1), repeat=len(word)):
        rem = d - basis_degree(word, bits)
        if rem < 0 or rem % 2:
            continue
        for mono in ring.monomials(rem // 2):
            out.append((bits, mono))
    return out


# ---------------------------------------------------------------------------
# the calculus engine

class Calculus:
    def __init__(self, realization: Realization):
        self.real = realization.validated()
        self.system = realization.system
        self.ring = realization.ring
        self._leaves: dict[tuple, tuple] = {}
        self._leaf_maps: dict[tuple, list[BimodMap]] = {}
        self._ll_up: dict[tuple, BimodMap] = {}
        self._ll_down: dict[tuple, BimodMap] = {}
        self._mvalent: dict[tuple, BimodMap] = {}
        self._compose_sc: dict[tuple, dict] = {}
        self._id_coeffs: dict[Word, dict] = {}
        self._nf_cache: dict = {}
        self._lm_cache: dict = {}
        self._scaled_leaf_cache: dict = {}
        self._tensor_cache: dict = {}
        self.invert_cache: dict = {}

    # -- normal forms ---------------------------------------------------

    def normal_form(self, word: Word, slots: list[Poly]) -> dict:
        """Expand a pure tensor into the right basis: bits -> coefficient."""
        key = (word, tuple(slots))
        cached = self._nf_cache.get(key)
        if cached is not None:
            return dict(cached)
        if not word:
            out = {(): slots[0]} if not slots[0].is_zero() else {}
            self._nf_cache[key] = out
            return dict(out)
        s = word[0]
        f = slots[0]
        if f.is_zero():
            self._nf_cache[key] = {}
            return {}
        g, h = self.real.invariant_decompose(f, s)
        out: dict[Word, Poly] = {}
        for bit, part in ((0, g), (1, h)):
            if part.is_zero():
                continue
            rest = self.normal_form(word[1:], [part * slots[1]] + slots[2:])
            for bits, coeff in rest.items():
                key2 = (bit,) + bits
                cur = out.get(key2)
                coeff2 = coeff if cur is None else cur + coeff
                if coeff2.is_zero():
                    out.pop(key2, None)
                else:
                    out[key2] = coeff2
        self._nf_cache[key] = out
        return dict(out)

    def basis_slots(self, word: Word, bits: Word, tail: Poly | None = None):
        slots = [self.real.delta(s) if b else self.ring.one
                 for s, b in zip(word, bits)]
        slots.append(tail if tail is not None else self.ring.one)
        return slots

    def _left_mult_basis(self, word: Word, bits: Word, p: Poly) -> dict:
        """Normal form of p . c_e, cached (p is usually a small monomial)."""
        key = (word, bits, p)
        out = self._lm_cache.get(key)
        if out is None:
            slots = self.basis_slots(word, bits)
            slots[0] = p * slots[0]
            out = self.normal_form(word, slots)
            self._lm_cache[key] = out
        return out

    def left_mult_nf(self, word: Word, nf: dict, p: Poly) -> dict:
        """Normal form of p . (sum c_e g_e)."""
        out: dict[Word, Poly] = {}
        for bits, coeff in nf.items():
            for key, q in self._left_mult_basis(word, bits, p).items():
                q2 = q * coeff
                cur = out.get(key)
                q2 = q2 if cur is None else cur + q2
                if q2.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = q2
        return out

    # -- atom application -------------------------------------------------

    def _apply_atom(self, atom, seg: list[Poly]):
        kind = atom[0]
        if kind == "id":
            return [seg]
        if kind == "dot":
            return [[seg[0] * seg[1]]]
        if kind == "box":
            return [[seg[0] * atom[1]]]
        if kind == "enddot":
            s = atom[1]
            delta = self.real.delta(s)
            return [[seg[0] * delta, self.ring.one],
                    [seg[0], self.real.root(s) - delta]]
        if kind == "merge":
            s = atom[1]
            return [[seg[0] * self.real.demazure(seg[1], s), seg[2]]]
        if kind == "split":
            return [[seg[0], self.ring.one, seg[1]]]
        if kind == "mvalent":
            _, s, t, m = atom
            phi = self.mvalent_map(s, t)
            sub_in = tuple(s if k % 2 == 0 else t for k in range(m))
            nf = self.normal_form(sub_in, seg)
            acc: dict[Word, Poly] = {}
            for e, r in nf.items():
                for o, q in phi.images.get(e, {}).items():
                    p = q * r
                    if p.is_zero():
                        continue
                    cur = acc.get(o)
                    p = p if cur is None else cur + p
                    if p.is_zero():
                        acc.pop(o, None)
                    else:
                        acc[o] = p
            sub_out = phi.word_out
            return [self.basis_slots(sub_out, o, p) for o, p in acc.items()]
        raise ValueError(f"unknown atom {atom}")

    def _apply_slice(self, word: Word, slots: list[Poly], atoms):
        branches = [[slots[0]]]
        cur = 0
        for atom in atoms:
            a = atom_in_arity(atom)
            rest = slots[cur + 1: cur + a + 1]
            new_branches = []
            for br in branches:
                seg = [br[-1]] + rest
                for out_seg in self._apply_atom(atom, seg):
                    if any(p.is_zero() for p in out_seg):
                        continue
                    new_branches.append(br[:-1] + out_seg)
            branches = new_branches
            cur += a
        if cur != len(word):
            raise ValueError("slice does not cover the word")
        return branches

    def evaluate(self, diagram: Diagram) -> BimodMap:
        """Evaluate a diagram as a bimodule map (images of the right basis)."""
        mv = diagram.max_valence()
        if mv > 3:
            raise UnsupportedValence(f"2m-valent vertex with m = {mv}")
        images = {}
        for bits in itertools.product((0, 1), repeat=len(diagram.bottom)):
            state = {bits: self.ring.one}
            word = diagram.bottom
            for sl in diagram.slices:
                out_word = sum((atom_out_word(a) for a in sl), ())
                new_state: dict[Word, Poly] = {}
                for ebits, coeff in state.items():
                    slots = self.basis_slots(word, ebits, coeff)
                    for branch in self._apply_slice(word, slots, sl):
                        for key, q in self.normal_form(out_word, branch).items():
                            cur = new_state.get(key)
                            q2 = q if cur is None else cur + q
                            if q2.is_zero():
                                new_state.pop(key, None)
                            else:
                                new_state[key] = q2
                state = new_state
                word = out_word
            images[bits] = state
        out = BimodMap(diagram.bottom, diagram.top, diagram.degree, images)
        self._check_homogeneous(out)
        return out

    def _check_homogeneous(self, bm: BimodMap) -> None:
        for e, img in bm.images.items():
            want_base = basis_degree(bm.word_in, e) + bm.degree
            for o, q in img.items():
                d = want_base - basis_degree(bm.word_out, o)
                if not q.is_homogeneous(d):
                    raise AssertionError("inhomogeneous evaluation (internal bug)")

    # -- the 2m-valent generators ------------------------------------------

    def mvalent_map(self, s: int, t: int) -> BimodMap:
        key = (s, t)
        if key in self._mvalent:
            return self._mvalent[key]
        m = self.system.m(s, t)
        if m is None or m > 3:
            raise UnsupportedValence(f"m({s},{t}) = {m}")
        win = tuple(s if k % 2 == 0 else t for k in range(m))
        wout = tuple(t if k % 2 == 0 else s for k in range(m))
        bits_list = list(itertools.product((0, 1), repeat=m))
        # unknowns: for each (e_in, e_out) a polynomial of forced degree
        unknowns = []  # (e_in, e_out, monomial)
        for e_in in bits_list:
            for e_out in bits_list:
                d = basis_degree(win, e_in) - basis_degree(wout, e_out)
                if d < 0 or d % 2:
                    continue
                for mono in self.ring.monomials(d // 2):
                    unknowns.append((e_in, e_out, mono))
        col = {u: i for i, u in enumerate(unknowns)}
        rows = []
        rowkeys: dict = {}

        def row_of(eqkey):
            if eqkey not in rowkeys:
                rowkeys[eqkey] = len(rows)
                rows.append({})
            return rows[rowkeys[eqkey]]

        # left-linearity in each variable of V*
        for v in range(self.real.dim_v):
            xv = self.ring.var(v)
            for e_in in bits_list:
                lhs_nf = self.left_mult_nf(win, {e_in: self.ring.one}, xv)
                # LHS: sum_{e''} Phi(c_{e''}) r_{e''}; coefficient of mono nu at e_out:
                for e2, r in lhs_nf.items():
                    for e_out in bits_list:
                        d = basis_degree(win, e2) - basis_degree(wout, e_out)
                        if d < 0 or d % 2:
                            continue
                        for mono in self.ring.monomials(d // 2):
                            prod = self.ring.monomial(mono) * r
                            for exp, c in prod.terms.items():
                                row = row_of((v, e_in, e_out, exp))
                                j = col[(e2, e_out, mono)]
                                row[j] = row.get(j, self.real.field.zero) + c
                # RHS: x_v . Phi(c_{e_in}): for each unknown (e_in, e_mid, mono):
                for e_mid in bits_list:
                    d = basis_degree(win, e_in) - basis_degree(wout, e_mid)
                    if d < 0 or d % 2:
                        continue
                    for mono in self.ring.monomials(d // 2):
                        shifted = self.left_mult_nf(
                            wout, {e_mid: self.ring.monomial(mono)}, xv)
                        for e_out, q in shifted.items():
                            for exp, c in q.terms.items():
                                row = row_of((v, e_in, e_out, exp))
                                j = col[(e_in, e_mid, mono)]
                                row[j] = row.get(j, self.real.field.zero) - c
        clean_rows = [{j: c for j, c in row.items() if not (c == 0)} for row in rows]
        basis = nullspace(clean_rows, len(unknowns), self.real.field)
        zero_bits = (0,) * m
        unit_mono = (0,) * self.ring.nvars
        pivot = col[(zero_bits, zero_bits, unit_mono)]
        good = [vec for vec in basis if not (vec[pivot] == 0)]
        if len(basis) != 1 or len(good) != 1:
            raise EvaluationNotFaithful(
                f"2m-valent solution space for m={m} has dimension {len(basis)}")
        vec = good[0]
        scale = self.real.field.one / vec[pivot]
        images: dict[Word, dict[Word, Poly]] = {e: {} for e in bits_list}
        for (e_in, e_out, mono), j in col.items():
            c = vec[j] * scale
            if c == 0:
                continue
            entry = images[e_in].get(e_out, self.ring.zero)
            images[e_in][e_out] = entry + self.ring.monomial(mono).scale(c)
        bm = BimodMap(win, wout, 0, images)
        self._mvalent[key] = bm
        return bm

    # -- double-leaf bases and coefficient extraction -----------------------

    def leaves(self, v_word: Word, w_word: Word) -> tuple:
        key = (v_word, w_word)
        if key not in self._leaves:
            self._leaves[key] = leaf_indices(self.system, v_word, w_word)
        return self._leaves[key]

    def light_leaf_map(self, word: Word, bits: Word) -> BimodMap:
        key = (word, bits)
        if key not in self._ll_up:
            self._ll_up[key] = self.evaluate(
                light_leaf_diagram(self.system, word, bits))
        return self._ll_up[key]

    def colight_leaf_map(self, word: Word, bits: Word) -> BimodMap:
        key = (word, bits)
        if key not in self._ll_down:
            self._ll_down[key] = self.evaluate(
                light_leaf_diagram(self.system, word, bits).flip())
        return self._ll_down[key]

    def leaf_maps(self, v_word: Word, w_word: Word) -> list[BimodMap]:
        # one evaluation per light leaf (2^len per word), composed pairwise
        key = (v_word, w_word)
        if key not in self._leaf_maps:
            maps = []
            for L in self.leaves(v_word, w_word):
                up = self.light_leaf_map(v_word, L.e)
                down = self.colight_leaf_map(w_word, L.f)
                maps.append(down.compose(up))
            self._leaf_maps[key] = maps
        return self._leaf_maps[key]

    def to_coefficients(self, bm: BimodMap) -> dict:
        """Expand a bimodule map in the double-leaves basis (one sparse solve)."""
        v_word, w_word, d = bm.word_in, bm.word_out, bm.degree
        leaves = self.leaves(v_word, w_word)
        maps = self.leaf_maps(v_word, w_word)
        unknowns = []
        for i, L in enumerate(leaves):
            dd = d - L.degree
            if dd < 0 or dd % 2:
                continue
            for mono in self.ring.monomials(dd // 2):
                unknowns.append((i, mono))
        col = {u: j for j, u in enumerate(unknowns)}
        rows: list[dict] = []
        rhs: list = []
        rowkeys: dict = {}

        def row_for(eqkey):
            if eqkey not in rowkeys:
                rowkeys[eqkey] = len(rows)
                rows.append({})
                rhs.append(self.real.field.zero)
            return rowkeys[eqkey]

        for (i, mono), j in col.items():
            ckey = (v_word, w_word, i, mono)
            scaled = self._scaled_leaf_cache.get(ckey)
            if scaled is None:
                scaled = self._left_mult_map(maps[i], self.ring.monomial(mono))
                self._scaled_leaf_cache[ckey] = scaled
            for e, img in scaled.images.items():
                for o, q in img.items():
                    for exp, c in q.terms.items():
                        k = row_for((e, o, exp))
                        rows[k][j] = rows[k].get(j, self.real.field.zero) + c
        for e, img in bm.images.items():
            for o, q in img.items():
                for exp, c in q.terms.items():
                    k = row_for((e, o, exp))
                    rhs[k] = rhs[k] + c
        sol, unique = solve(rows, rhs, len(unknowns), self.real.field)
        if sol is None:
            raise EvaluationNotFaithful("no double-leaf expansion: inconsistent system")
        if not unique and unknowns:
            raise EvaluationNotFaithful(
                "double-leaf evaluations linearly dependent at the needed degrees")
        coeffs: dict[LeafIndex, Poly] = {}
        for (i, mono), j in col.items():
            c = sol[j]
            if c == 0:
                continue
            L = leaves[i]
            cur = coeffs.get(L, self.ring.zero)
            coeffs[L] = cur + self.ring.monomial(mono).scale(c)
        return {L: p for L, p in coeffs.items() if not p.is_zero()}

    def _left_mult_map(self, bm: BimodMap, p: Poly) -> BimodMap:
        images = {}
        for e, img in bm.images.items():
            images[e] = self.left_mult_nf(bm.word_out, img, p)
        return BimodMap(bm.word_in, bm.word_out,
                        bm.degree + p.internal_degree(), images)

    # -- morphisms ---------------------------------------------------------

    def morphism(self, source: BSObject, target: BSObject, coeffs) -> "Morphism":
        return Morphism(self, source, target, dict(coeffs))

    def zero_morphism(self, source: BSObject, target: BSObject) -> "Morphism":
        return Morphism(self, source, target, {})

    def identity_coeffs(self, word: Word) -> dict:
        if word not in self._id_coeffs:
            if self.system.is_reduced(word) and self.system.canonical(word) == word:
                x = self.system.element(word)
                ones = (1,) * len(word)
                L = LeafIndex(x, ones, ones, 0)
                self._id_coeffs[word] = {L: self.ring.one}
            else:
                ident = BimodMap(word, word, 0, {
                    bits: {bits: self.ring.one}
                    for bits in itertools.product((0, 1), repeat=len(word))})
                self._id_coeffs[word] = self.to_coefficients(ident)
        return dict(self._id_coeffs[word])

    def identity_morphism(self, obj: BSObject) -> "Morphism":
        return Morphism(self, obj, obj, self.identity_coeffs(obj.word))

    def from_diagram(self, diagram: Diagram, source_shift: int = 0) -> "Morphism":
        bm = self.evaluate(diagram)
        src = BSObject(diagram.bottom, source_shift)
        tgt = BSObject(diagram.top, source_shift + diagram.degree)
        return Morphism(self, src, tgt, self.to_coefficients(bm))

    def compose_sc(self, v: Word, w: Word, y: Word, i: int, j: int) -> dict:
        """Expansion of LL_i o LL_j, LL_j in Hom(v,w), LL_i in Hom(w,y)."""
        key = (v, w, y)
        table = self._compose_sc.setdefault(key, {})
        if (i, j) not in table:
            comp = self.leaf_maps(w, y)[i].compose(self.leaf_maps(v, w)[j])
            table[(i, j)] = self.to_coefficients(comp)
        return table[(i, j)]

    def compose(self, g: "Morphism", f: "Morphism") -> "Morphism":
        if g.source != f.target:
            raise ValueError(f"cannot compose: {g.source} != {f.target}")
        v, w, y = f.source.word, f.target.word, g.target.word
        fi = {L: i for i, L in enumerate(self.leaves(w, y))}
        fj = {L: j for j, L in enumerate(self.leaves(v, w))}
        coeffs: dict[LeafIndex, Poly] = {}
        for Lg, cg in g.coeffs.items():
            for Lf, cf in f.coeffs.items():
                c = cg * cf
                if c.is_zero():
                    continue
                for L, p in self.compose_sc(v, w, y, fi[Lg], fj[Lf]).items():
                    q = c * p
                    cur = coeffs.get(L)
                    q = q if cur is None else cur + q
                    if q.is_zero():
                        coeffs.pop(L, None)
                    else:
                        coeffs[L] = q
        return Morphism(self, f.source, g.target, coeffs)

    def tensor(self, f: "Morphism", g: "Morphism") -> "Morphism":
        src = BSObject(f.source.word + g.source.word, f.source.shift + g.source.shift)
        tgt = BSObject(f.target.word + g.target.word, f.target.shift + g.target.shift)
        # shift-normalized memo: coefficients do not depend on shift placement
        key = (f.source.word, f.target.word, f.degree,
               frozenset(f.coeffs.items()),
               g.source.word, g.target.word, g.degree,
               frozenset(g.coeffs.items()))
        coeffs = self._tensor_cache.get(key)
        if coeffs is None:
            bm = self._tensor_maps(f.evaluate(), g.evaluate())
            coeffs = self.to_coefficients(bm)
            self._tensor_cache[key] = coeffs
        return Morphism(self, src, tgt, dict(coeffs))

    def _tensor_maps(self, a: BimodMap, b: BimodMap) -> BimodMap:
        word_in = a.word_in + b.word_in
        word_out = a.word_out + b.word_out
        images = {}
        for ea in itertools.product((0, 1), repeat=len(a.word_in)):
            img_a = a.images.get(ea, {})
            for eb in itertools.product((0, 1), repeat=len(b.word_in)):
                img_b = b.images.get(eb, {})
                acc: dict[Word, Poly] = {}
                for oa, qa in img_a.items():
                    for ob, qb in img_b.items():
                        # glue c_{oa} . qa with c_{ob} . qb: qa slides into the
                        # first slot of the right factor
                        slots1 = self.basis_slots(a.word_out, oa, tail=qa)
                        slots2 = self.basis_slots(b.word_out, ob, tail=qb)
                        slots = slots1[:-1] + [slots1[-1] * slots2[0]] + slots2[1:]
                        for key, q in self.normal_form(word_out, slots).items():
                            cur = acc.get(key)
                            q2 = q if cur is None else cur + q
                            if q2.is_zero():
                                acc.pop(key, None)
                            else:
                                acc[key] = q2
                images[ea + eb] = acc
        return BimodMap(word_in, word_out, a.degree + b.degree, images)


@dataclass(frozen=True, eq=False)
class Morphism:
    """A morphism B_source -> B_target in its double-leaves expansion."""

    cal: Calculus = field(repr=False)
    source: BSObject = None
    target: BSObject = None
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        d = self.degree
        for L, p in self.coeffs.items():
            if p.is_zero():
                raise ValueError("zero coefficient stored")
            if not p.is_homogeneous(d - L.degree):
                raise ValueError(
                    f"coefficient at {L} not homogeneous of degree {d - L.degree}")

    @property
    def degree(self) -> int:
        return self.target.shift - self.source.shift

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Morphism") -> "Morphism":
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("cannot add morphisms of different type")
        coeffs = dict(self.coeffs)
        for L, p in other.coeffs.items():
            cur = coeffs.get(L)
            p2 = p if cur is None else cur + p
            if p2.is_zero():
                coeffs.pop(L, None)
            else:
                coeffs[L] = p2
        return Morphism(self.cal, self.source, self.target, coeffs)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Morphism":
        c = self.cal.real.field.of(c)
        if c == 0:
            return Morphism(self.cal, self.source, self.target, {})
        return Morphism(self.cal, self.source, self.target,
                        {L: p.scale(c) for L, p in self.coeffs.items()})

    def left_mult(self, p: Poly) -> "Morphism":
        """Left coefficient action: target shift rises by deg p."""
        if p.is_zero():
            return Morphism(self.cal, self.source, self.target, {})
        d = p.internal_degree()
        return Morphism(self.cal, self.source, self.target.shifted(d),
                        {L: p * q for L, q in self.coeffs.items()})

    def right_mult(self, p: Poly) -> "Morphism":
        """Right coefficient action; differs from left_mult by lower terms."""
        if p.is_zero():
            return Morphism(self.cal, self.source, self.target, {})
        bm = self.evaluate().right_mult(p)
        return Morphism(self.cal, self.source,
                        self.target.shifted(p.internal_degree()),
                        self.cal.to_coefficients(bm))

    def shifted(self, n: int) -> "Morphism":
        return Morphism(self.cal, self.source.shifted(n),
                        self.target.shifted(n), self.coeffs)

    def compose(self, other: "Morphism") -> "Morphism":
        return self.cal.compose(self, other)

    def tensor(self, other: "Morphism") -> "Morphism":
        return self.cal.tensor(self, other)

    def dual(self) -> "Morphism":
        coeffs = {LeafIndex(L.x, L.f, L.e, L.degree): p
                  for L, p in self.coeffs.items()}
        return Morphism(self.cal, self.target.dual(), self.source.dual(), coeffs)

    def evaluate(self) -> BimodMap:
        v, w = self.source.word, self.target.word
        leaves = self.cal.leaves(v, w)
        maps = self.cal.leaf_maps(v, w)
        index = {L: i for i, L in enumerate(leaves)}
        out = BimodMap(v, w, self.degree, {
            bits: {} for bits in itertools.product((0, 1), repeat=len(v))})
        for L, p in self.coeffs.items():
            out = out.add(self.cal._left_mult_map(maps[index[L]], p))
        return out

    def restrict_to(self, allowed) -> "Morphism":
        """Drop coefficients whose middle element is outside `allowed`."""
        return Morphism(self.cal, self.source, self.target,
                        {L: p for L, p in self.coeffs.items() if L.x in allowed})

    def __eq__(self, other):
        return (isinstance(other, Morphism) and self.source == other.source
                and self.target == other.target and self.coeffs == other.coeffs)

    def __repr__(self):
        terms = ", ".join(f"({p})*{L}" for L, p in sorted(
            self.coeffs.items(), key=lambda kv: (kv[0].x.length, kv[0].x.word,
                                                 kv[0].e, kv[0].f)))
        return (f"Morphism(B{list(self.source.word)}({self.source.shift}) -> "
                f"B{list(self.target.word)}({self.target.shift}): {terms or '0'})")


def dualize(f: Morphism) -> Morphism:
    return f.dual()


# ---------------------------------------------------------------------------
# JSON schema for morphisms (double-leaf coefficient lists)

def _poly_to_json(p: Poly) -> list:
    return [[list(exp), str(c)] for exp, c in sorted(p.terms.items())]


def _poly_from_json(ring, data) -> Poly:
    terms = {}
    for exp, c in data:
        terms[tuple(exp)] = ring.field.of(c)
    return Poly(ring, terms)


def morphism_to_json(m: Morphism) -> dict:
    system = m.cal.system
    return {
        "source": {"word": system.word_labels(m.source.word),
                   "shift": m.source.shift},
        "target": {"word": system.word_labels(m.target.word),
                   "shift": m.target.shift},
        "coeffs": [
            {"x": system.word_labels(L.x.word),
             "e": list(L.e), "f": list(L.f),
             "poly": _poly_to_json(p)}
            for L, p in sorted(m.coeffs.items(),
                               key=lambda kv: (kv[0].x.word, kv[0].e, kv[0].f))
        ],
    }


def morphism_from_json(cal: Calculus, data: dict) -> Morphism:
    system = cal.system
    src = BSObject(system.word_from_labels(data["source"]["word"]),
                   data["source"]["shift"])
    tgt = BSObject(system.word_from_labels(data["target"]["word"]),
                   data["target"]["shift"])
    coeffs = {}
    for rec in data["coeffs"]:
        x = system.element(rec["x"])
        e, f = tuple(rec["e"]), tuple(rec["f"])
        degree = _sub(system, src.word, e)[1] + _sub(system, tgt.word, f)[1]
        coeffs[LeafIndex(x, e, f, degree)] = _poly_from_json(cal.ring, rec["poly"])
    return Morphism(cal, src, tgt, coeffs)
