"""Locally closed subsets of the Bruhat order and the local quotient categories.

A subset I is stored with its normalized certificate (closure(I),
closure(I) minus I); morphisms of the quotient category attached to I
are coefficient vectors supported on double leaves whose middle element
lies in I.  Since composition is computed in the ambient category and
then truncated, the quotient is functorial by construction.

Singleton quotients are where complexes of b_w objects live: every
morphism b_w(a) -> b_w(b) is a polynomial (the identity-leaf
coefficient), which is what the recollement layer consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coxeter import Element, Expression, NotReduced, NotSameElement
from .laurent import LaurentPoly
from .soergelcalc import Calculus, Morphism, leaf_indices, rex_path_diagram


@dataclass(frozen=True)
class LocallyClosedSubset:
    """A finite subset of W with its closed certificate pair."""

    members: frozenset
    closure: frozenset

    @staticmethod
    def of(elements) -> "LocallyClosedSubset":
        members = frozenset(elements)
        closure = set()
        for w in members:
            for word in w.system.bruhat_lower_set(w):
                closure.add(w.system.element(word))
        return LocallyClosedSubset(members, frozenset(closure))

    @staticmethod
    def lower(w: Element, strict: bool = False) -> "LocallyClosedSubset":
        out = {w.system.element(u) for u in w.system.bruhat_lower_set(w)}
        if strict:
            out.discard(w)
        return LocallyClosedSubset.of(out)

    @property
    def boundary(self) -> frozenset:
        """closure minus members: the part quotiented away."""
        return self.closure - self.members

    @property
    def is_closed(self) -> bool:
        return self.members == self.closure

    def is_closed_in(self, ambient: "LocallyClosedSubset") -> bool:
        if not self.members <= ambient.members:
            return False
        for x in ambient.members:
            for y in self.members:
                if x.system.bruhat_leq(x, y) and x not in self.members:
                    return False
        return True

    def is_open_in(self, ambient: "LocallyClosedSubset") -> bool:
        if not self.members <= ambient.members:
            return False
        return LocallyClosedSubset.of(ambient.members - self.members) \
            .is_closed_in(ambient)

    def __contains__(self, w: Element) -> bool:
        return w in self.members

    def __iter__(self):
        return iter(sorted(self.members, key=lambda w: (w.length, w.word)))

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        names = ",".join(repr(w) for w in self)
        return f"{{{names}}}"


def parse_subset(system, text: str) -> LocallyClosedSubset:
    """Subset literals: comma-separated words, with <=w / <w shorthands."""
    out = set()
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if chunk.startswith("<="):
            out |= LocallyClosedSubset.lower(system.element(chunk[2:])).members
        elif chunk.startswith("<"):
            out |= LocallyClosedSubset.lower(system.element(chunk[1:]),
                                             strict=True).members
        else:
            out.add(system.element(chunk))
    return LocallyClosedSubset.of(out)


# ---------------------------------------------------------------------------
# morphism-level operations

def factor_ideal(system, v_word, w_word, closed: LocallyClosedSubset):
    """Double-leaf indices spanning the morphisms factoring through `closed`."""
    return tuple(L for L in leaf_indices(system, v_word, w_word)
                 if L.x in closed)


def local_hom_rank(system, v_word, w_word, subset: LocallyClosedSubset) -> LaurentPoly:
    counts: dict[int, int] = {}
    for L in leaf_indices(system, v_word, w_word):
        if L.x in subset:
            counts[L.degree] = counts.get(L.degree, 0) + 1
    return LaurentPoly(counts)


def quotient_morphism(f: Morphism, subset: LocallyClosedSubset) -> Morphism:
    """Image in the quotient category: drop leaves with middle element outside."""
    return f.restrict_to(subset.members)


def rex_iso(cal: Calculus, word_from, word_to, shift: int = 0) -> Morphism:
    """The rex-move morphism B_from -> B_to, reduced words of the same element.

    In the singleton quotient at that element its image is a canonical
    isomorphism (path-independent); here the full morphism is returned and
    callers truncate.
    """
    system = cal.system
    e_from = Expression(system, tuple(word_from))
    e_to = Expression(system, tuple(word_to))
    if not e_from.is_reduced() or not e_to.is_reduced():
        raise NotReduced(f"{e_from} or {e_to}")
    if e_from.evaluation() != e_to.evaluation():
        raise NotSameElement(f"{e_from} vs {e_to}")
    diagram = rex_path_diagram(system, tuple(word_from), tuple(word_to))
    return cal.from_diagram(diagram, source_shift=shift)


def split_open_closed(system, objects, subset_i: LocallyClosedSubset,
                      subset_j: LocallyClosedSubset):
    """Partition summands by membership in J, an open-and-closed part of I.

    Returns (in_j, out_j) and asserts the cross Hom ranks vanish.
    """
    if not (subset_j.is_open_in(subset_i) and subset_j.is_closed_in(subset_i)):
        raise ValueError("J must be open and closed in I")
    in_j, out_j = [], []
    for obj in objects:
        x = system.element(obj.word)
        (in_j if x in subset_j else out_j).append(obj)
    for a in in_j:
        for b in out_j:
            for v, w in ((a.word, b.word), (b.word, a.word)):
                if not local_hom_rank(system, v, w, subset_i).is_zero():
                    raise AssertionError("cross Hom rank must vanish")
    return in_j, out_j
