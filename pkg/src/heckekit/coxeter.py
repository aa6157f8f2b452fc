"""Coxeter-system combinatorics.

Words are tuples of generator indices.  The word problem is solved by
Tits' rewriting theorem: a word is shortened by deleting adjacent equal
letters, and two reduced words for the same element are connected by
braid moves.  Normal forms are the lexicographically minimal reduced
words (with respect to the declared generator order), computed by
exhausting the braid-move orbit; everything is memoized per system.
This is exact for every Coxeter matrix, including m = infinity, and is
comfortably fast at the word lengths this engine targets.

Subexpressions carry the U/D decorations: position i is U if the partial
product before i goes up when multiplied by the letter there, D if it
goes down; the digit records whether the letter is selected.  The defect
is #U0 - #D0, the degree of the corresponding light leaf (pinned by the
degree-1 dot on a single letter).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import itertools

Word = tuple


class InfiniteGroupError(RuntimeError):
    """Raised when an operation needs W (or a rex set) to be enumerable."""


class InfiniteRexSet(InfiniteGroupError):
    pass


class NotReduced(ValueError):
    pass


class NotSameElement(ValueError):
    pass


class CoxeterSystem:
    """A Coxeter system (W, S) given by its Coxeter matrix.

    `matrix[i][j]` is the order m_ij of s_i s_j; use None (or math.inf)
    for infinite order.  `finite` may be declared; otherwise finiteness
    is detected by bounded enumeration on demand.
    """

    def __init__(self, labels, matrix, finite: bool | None = None,
                 enumeration_cap: int = 200_000):
        self.labels = tuple(labels)
        self.rank = len(self.labels)
        m = []
        for i in range(self.rank):
            row = []
            for j in range(self.rank):
                mij = matrix[i][j]
                if mij is not None and mij == float("inf"):
                    mij = None
                row.append(mij)
            m.append(tuple(row))
        self.matrix = tuple(m)
        self._check_matrix()
        self._declared_finite = finite
        self.enumeration_cap = enumeration_cap
        self._canon: dict[Word, Word] = {}
        self._elements: list[Element] | None = None
        self._lower: dict[Word, frozenset] = {}

    def _check_matrix(self):
        for i in range(self.rank):
            if self.matrix[i][i] != 1:
                raise ValueError("diagonal of a Coxeter matrix must be 1")
            for j in range(self.rank):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise ValueError("Coxeter matrix must be symmetric")
                if i != j and self.matrix[i][j] is not None and self.matrix[i][j] < 2:
                    raise ValueError("off-diagonal entries must be >= 2 (or None)")

    def m(self, i: int, j: int):
        return self.matrix[i][j]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def word_from_labels(self, s) -> Word:
        """Parse 'sts', 's t s' or an iterable of labels into an index word."""
        if isinstance(s, str):
            parts = s.split() if " " in s else ([] if s in ("", "e") else list(s))
        else:
            parts = list(s)
        return tuple(self.index(str(p)) for p in parts)

    def word_labels(self, word: Word) -> str:
        return "".join(self.labels[i] for i in word) if word else "e"

    # ------------------------------------------------------------------
    # word problem (Tits rewriting)

    def _braid_neighbors(self, word: Word):
        n = len(word)
        for pos in range(n):
            s = word[pos]
            for t in range(self.rank):
                if t == s:
                    continue
                m = self.m(s, t)
                if m is None or pos + m > n:
                    continue
                ok = True
                for k in range(m):
                    expect = s if k % 2 == 0 else t
                    if word[pos + k] != expect:
                        ok = False
                        break
                if ok:
                    repl = tuple(t if k % 2 == 0 else s for k in range(m))
                    yield pos, s, t, word[:pos] + repl + word[pos + m:]

    def _delete_double(self, word: Word) -> Word | None:
        for i in range(len(word) - 1):
            if word[i] == word[i + 1]:
                return word[:i] + word[i + 2:]
        return None

    def canonical(self, word) -> Word:
        """Lex-min reduced word of the element the word expresses."""
        word = tuple(word)
        cached = self._canon.get(word)
        if cached is not None:
            return cached
        orbit = {word}
        frontier = [word]
        while frontier:
            new = []
            for u in frontier:
                shorter = self._delete_double(u)
                if shorter is not None:
                    result = self.canonical(shorter)
                    for seen in orbit:
                        self._canon.setdefault(seen, result)
                    self._canon[word] = result
                    return result
                for _, _, _, nb in self._braid_neighbors(u):
                    if nb not in orbit:
                        orbit.add(nb)
                        new.append(nb)
            frontier = new
        result = min(orbit)
        for seen in orbit:
            self._canon[seen] = result
        return result

    def is_reduced(self, word) -> bool:
        word = tuple(word)
        return len(self.canonical(word)) == len(word)

    # ------------------------------------------------------------------
    # elements

    def element(self, word_or_labels) -> "Element":
        if isinstance(word_or_labels, Element):
            return word_or_labels
        if isinstance(word_or_labels, str):
            word = self.word_from_labels(word_or_labels)
        else:
            word = tuple(word_or_labels)
        return Element(self, self.canonical(word))

    @property
    def identity(self) -> "Element":
        return Element(self, ())

    def simple(self, i: int) -> "Element":
        return Element(self, (i,))

    def elements(self) -> list["Element"]:
        """All of W, by BFS on right multiplication.  Requires finiteness."""
        if self._elements is not None:
            return self._elements
        if self._declared_finite is False:
            raise InfiniteGroupError("group declared infinite")
        seen = {(): None}
        order = [()]
        frontier = [()]
        while frontier:
            new = []
            for w in frontier:
                for i in range(self.rank):
                    u = self.canonical(w + (i,))
                    if u not in seen:
                        seen[u] = None
                        order.append(u)
                        new.append(u)
                        if len(order) > self.enumeration_cap:
                            raise InfiniteGroupError(
                                f"enumeration exceeded cap {self.enumeration_cap}")
            frontier = new
        order.sort(key=lambda u: (len(u), u))
        self._elements = [Element(self, u) for u in order]
        return self._elements

    @property
    def is_finite(self) -> bool:
        if self._declared_finite is not None:
            return self._declared_finite
        try:
            self.elements()
            return True
        except InfiniteGroupError:
            return False

    def longest_element(self) -> "Element":
        els = self.elements()
        return max(els, key=lambda w: (w.length, w.word))

    # ------------------------------------------------------------------
    # Bruhat order

    def bruhat_lower_set(self, w: "Element") -> frozenset:
        """Canonical words of all x <= w (subword property on one reduced word)."""
        cached = self._lower.get(w.word)
        if cached is not None:
            return cached
        out = set()
        word = w.word
        n = len(word)
        for mask in range(1 << n):
            sub = tuple(word[i] for i in range(n) if mask >> i & 1)
            out.add(self.canonical(sub))
        result = frozenset(out)
        self._lower[w.word] = result
        return result

    def bruhat_leq(self, x: "Element", y: "Element") -> bool:
        return x.word in self.bruhat_lower_set(y)

    def expressible(self, word) -> frozenset:
        """Elements expressed by some subword (set-valued DP, not 2^n)."""
        current = {()}
        for letter in word:
            current |= {self.canonical(u + (letter,)) for u in current}
        return frozenset(Element(self, u) for u in current)

    def bruhat_interval(self, w: "Element") -> list["Element"]:
        return sorted((Element(self, u) for u in self.bruhat_lower_set(w)),
                      key=lambda e: (e.length, e.word))


@dataclass(frozen=True, eq=False)
class Element:
    """A group element, identified with its lex-min reduced word."""

    system: CoxeterSystem = field(repr=False)
    word: Word = ()

    def __eq__(self, other):
        return (isinstance(other, Element) and self.system is other.system
                and self.word == other.word)

    @property
    def length(self) -> int:
        return len(self.word)

    def __mul__(self, other: "Element") -> "Element":
        return Element(self.system, self.system.canonical(self.word + other.word))

    def inverse(self) -> "Element":
        return Element(self.system, self.system.canonical(self.word[::-1]))

    def times_simple(self, i: int) -> "Element":
        return Element(self.system, self.system.canonical(self.word + (i,)))

    def is_right_descent(self, i: int) -> bool:
        return self.times_simple(i).length < self.length

    def __repr__(self):
        return self.system.word_labels(self.word)

    def __hash__(self):
        return hash((id(self.system), self.word))


def multiply(a: Element, b: Element) -> Element:
    if a.system is not b.system:
        raise ValueError("elements of different Coxeter systems")
    return a * b


def bruhat_leq(x: Element, y: Element) -> bool:
    return x.system.bruhat_leq(x, y)


@dataclass(frozen=True, eq=False)
class Expression:
    """A word in S, not necessarily reduced."""

    system: CoxeterSystem = field(repr=False)
    letters: Word = ()

    def __eq__(self, other):
        return (isinstance(other, Expression) and self.system is other.system
                and self.letters == other.letters)

    def __hash__(self):
        return hash((id(self.system), self.letters))

    @staticmethod
    def make(system: CoxeterSystem, letters) -> "Expression":
        if isinstance(letters, Expression):
            return letters
        if isinstance(letters, str):
            return Expression(system, system.word_from_labels(letters))
        return Expression(system, tuple(letters))

    @property
    def length(self) -> int:
        return len(self.letters)

    def evaluation(self) -> Element:
        return self.system.element(self.letters)

    def is_reduced(self) -> bool:
        return self.system.is_reduced(self.letters)

    def __repr__(self):
        return self.system.word_labels(self.letters)


@dataclass(frozen=True)
class Subexpression:
    """Bits selecting letters of an expression, with U/D decorations and defect."""

    expression: Expression
    bits: tuple

    def __post_init__(self):
        if len(self.bits) != self.expression.length:
            raise ValueError("bit length must match expression length")

    @property
    def decorations(self) -> tuple:
        decs, _, _ = _decorate(self.expression, self.bits)
        return decs

    @property
    def defect(self) -> int:
        _, defect, _ = _decorate(self.expression, self.bits)
        return defect

    def element(self) -> Element:
        _, _, x = _decorate(self.expression, self.bits)
        return x

    def __repr__(self):
        return f"{self.expression}{list(self.bits)}"


@lru_cache(maxsize=None)
def _decorate(expr: Expression, bits: tuple):
    system = expr.system
    x = system.identity
    decs = []
    defect = 0
    for letter, bit in zip(expr.letters, bits):
        up = x.times_simple(letter).length > x.length
        dec = ("U" if up else "D") + str(bit)
        decs.append(dec)
        if dec == "U0":
            defect += 1
        elif dec == "D0":
            defect -= 1
        if bit:
            x = x.times_simple(letter)
    return tuple(decs), defect, x


def subexpressions(expr: Expression, x: Element) -> list[Subexpression]:
    """All e in {0,1}^len expressing x, in lexicographic bit order."""
    out = []
    n = expr.length
    for mask in itertools.product((0, 1), repeat=n):
        sub = Subexpression(expr, mask)
        if sub.element() == x:
            out.append(sub)
    return out


def defect_generating_function(expr: Expression, x: Element):
    """Sum of v^defect(e) over subexpressions of expr expressing x."""
    from .laurent import LaurentPoly

    items: dict[int, int] = {}
    for sub in subexpressions(expr, x):
        d = sub.defect
        items[d] = items.get(d, 0) + 1
    return LaurentPoly(items)


def defect_table(expr: Expression) -> dict[Element, "object"]:
    """Element -> defect generating function, all targets at once."""
    from .laurent import LaurentPoly

    acc: dict[Element, dict[int, int]] = {}
    n = expr.length
    for mask in itertools.product((0, 1), repeat=n):
        sub = Subexpression(expr, mask)
        d = sub.defect
        x = sub.element()
        acc.setdefault(x, {})
        acc[x][d] = acc[x].get(d, 0) + 1
    return {x: LaurentPoly(c) for x, c in acc.items()}


@dataclass(frozen=True)
class RexGraph:
    """All reduced expressions of an element; edges are single braid moves."""

    element: Element
    nodes: tuple
    edges: tuple  # (word_a, word_b, position, (s, t)) with word_a < word_b

    def neighbor_moves(self, word: Word):
        system = self.element.system
        return sorted(
            ((pos, (s, t), nb) for pos, s, t, nb in system._braid_neighbors(word)),
            key=lambda it: (it[0], it[1]),
        )


def rex_graph(w: Element, cap: int = 100_000) -> RexGraph:
    system = w.system
    start = w.word
    seen = {start}
    frontier = [start]
    edges = set()
    while frontier:
        new = []
        for u in frontier:
            for pos, s, t, nb in system._braid_neighbors(u):
                a, b = min(u, nb), max(u, nb)
                edges.add((a, b, pos, (min(s, t), max(s, t))))
                if nb not in seen:
                    seen.add(nb)
                    new.append(nb)
                    if len(seen) > cap:
                        raise InfiniteRexSet(f"rex set exceeded cap {cap}")
        frontier = new
    return RexGraph(w, tuple(sorted(seen)), tuple(sorted(edges)))


def rex_path(expr_from: Expression, expr_to: Expression):
    """Shortest braid-move path, deterministic by (position, pair) labels.

    Returns a list of moves (position, s, t, word_before, word_after).
    """
    system = expr_from.system
    if not expr_from.is_reduced() or not expr_to.is_reduced():
        raise NotReduced(f"{expr_from} or {expr_to} is not reduced")
    if expr_from.evaluation() != expr_to.evaluation():
        raise NotSameElement(f"{expr_from} and {expr_to} express different elements")
    src, dst = expr_from.letters, expr_to.letters
    if src == dst:
        return []
    # BFS distances from the destination, then walk greedily from the source
    dist = {dst: 0}
    frontier = [dst]
    while frontier and src not in dist:
        new = []
        for u in frontier:
            for _, _, _, nb in system._braid_neighbors(u):
                if nb not in dist:
                    dist[nb] = dist[u] + 1
                    new.append(nb)
        frontier = new
    path = []
    cur = src
    while cur != dst:
        candidates = sorted(
            (pos, (min(s, t), max(s, t)), s, t, nb)
            for pos, s, t, nb in system._braid_neighbors(cur)
            if dist.get(nb, len(src) ** 4 + 10) == dist[cur] - 1
        )
        pos, _, s, t, nb = candidates[0]
        path.append((pos, s, t, cur, nb))
        cur = nb
    return path


def hecke_star(expr: Expression) -> Element:
    """Fold of the Hecke (a.k.a. Demazure) product: x * s = max(x, xs)."""
    x = expr.system.identity
    for letter in expr.letters:
        y = x.times_simple(letter)
        if y.length > x.length:
            x = y
    return x


FINITE_TYPE_ORDERS = {
    # |W| for the small standard types; used only in reports, never for logic
    "A1": 2, "A2": 6, "A3": 24, "B2": 8, "G2": 12, "A1xA1": 4,
}
