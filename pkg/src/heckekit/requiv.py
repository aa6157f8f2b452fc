"""Right-equivariant categories: base change of morphism spaces to the field.

The forgetful functor keeps terms and reduces every differential
coefficient to its constant part; the resulting complexes compose in
"re" mode (reduce after every composition).  Singleton restrictions land
in complexes of shifted copies of the field, where the perverse
t-structure is the regraded standard one: a summand with internal shift
j in cohomological degree p contributes at total degree p - j, full
stop (no exterior algebra needed).

The Ringel functor is convolution with the standard object of the
longest element; its effect on costandard objects and the resulting
character identities for the big tilting object are verified at desk
scale.
"""

from __future__ import annotations

from .coxeter import Element
from .hecke import KLTable, HeckeElement, h as hecke_h
from .homotopy import Complex, FreeComplex, certify_equivalence, hom_dimension
from .laurent import LaurentPoly
from .locale import LocallyClosedSubset
from .recperv import (
    ElementVerdict, PerversityReport, build_costandard, build_standard,
    restrict_to_open, singleton_shriek, singleton_star,
)
from .soergelcalc import Calculus


def forget(cx: Complex) -> Complex:
    """Base change to right-equivariant coefficients, termwise."""
    from .homotopy import re_reduce

    diff = None
    if cx.with_diff:
        diff = {n: {key: re_reduce(m) for key, m in entries.items()}
                for n, entries in cx.diff.items()}
    return Complex(cx.cal, cx.terms, diff, mode="re", subset=cx.subset,
                   check=False)


def build_standard_re(cal: Calculus, w: Element) -> Complex:
    return forget(build_standard(cal, w))


def build_costandard_re(cal: Calculus, w: Element) -> Complex:
    return forget(build_costandard(cal, w))


def re_hom_table(cal: Calculus, x: Element, y: Element, window: int) -> dict:
    """dim Hom_RE(std_x, costd_y <n> [m]) over the window."""
    dx = build_standard_re(cal, x)
    ny = build_costandard_re(cal, y)
    out = {}
    for n in range(-window, window + 1):
        for m in range(-window, window + 1):
            out[(n, m)] = hom_dimension(dx, ny.shift_angle(n).shift_bracket(m))
    return out


def re_free_support(free: FreeComplex):
    """Support of an RE singleton complex: (a, b) = (p - j, -j) per summand
    of the minimized complex (whose differential is necessarily zero)."""
    minimized = free.minimize()
    for n, entries in minimized.diff.items():
        for key, p in entries.items():
            if not p.is_zero():
                raise AssertionError(
                    "minimized RE singleton complex kept a differential")
    support: dict = {}
    for p, j in minimized.summands():
        key = (p - j, -j)
        support[key] = support.get(key, 0) + 1
    return tuple(sorted(support.items()))


def re_perverse_check(cx: Complex, elements=None) -> PerversityReport:
    if cx.mode != "re":
        raise ValueError("expected a right-equivariant complex")
    system = cx.cal.system
    if elements is None:
        elements = list(cx.subset) if cx.subset is not None else system.elements()
    verdicts = []
    for w in elements:
        star = re_free_support(singleton_star(cx, w))
        shriek = re_free_support(singleton_shriek(cx, w))
        leq0 = all(a <= 0 for (a, b), d in star)
        geq0 = all(a >= 0 for (a, b), d in shriek)
        verdicts.append(ElementVerdict(w, star, shriek, leq0, geq0))
    return PerversityReport(tuple(verdicts))


def full_faithfulness_probe(cx_be: Complex, cy_be: Complex) -> tuple[int, int]:
    """(dim Hom_BE, dim Hom_RE) in bidegree (0,0); equality is the contract
    for perverse inputs."""
    be = hom_dimension(cx_be, cy_be)
    re = hom_dimension(forget(cx_be), forget(cy_be))
    return be, re


def ringel(cx_re: Complex, cal: Calculus, word=None) -> Complex:
    """Convolution with the standard object of the longest element.

    Computed factor by factor with intermediate minimization (the result
    is the same object of the homotopy category, kept small).  Any
    reduced word of w0 may be supplied; standard objects do not depend
    on the choice, and an adapted word keeps intermediate terms short.
    """
    from .recperv import elementary_standard

    w0 = cal.system.longest_element()
    word = w0.word if word is None else tuple(word)
    if cal.system.element(word) != w0 or len(word) != w0.length:
        raise ValueError("need a reduced word of the longest element")
    out = cx_re
    for i in word:
        out = out.convolve(elementary_standard(cal, i))
        out, _ = out.minimize(certificate=False)
    return out


def ringel_inverse(cx_re: Complex, cal: Calculus, word=None) -> Complex:
    from .recperv import elementary_costandard

    w0 = cal.system.longest_element()
    word = w0.word if word is None else tuple(word)
    if cal.system.element(word) != w0 or len(word) != w0.length:
        raise ValueError("need a reduced word of the longest element")
    out = cx_re
    for i in word:
        out = out.convolve(elementary_costandard(cal, i))
        out, _ = out.minimize(certificate=False)
    return out


def verify_ringel_on_costandard(cal: Calculus, x: Element):
    """Certifies ringel(costd_x) ~ std_{x w0}.

    Uses the reduced word w0 = x^{-1} . (x w0), along which the collapse
    costd_x * std_{x^{-1}} ~ unit happens early.
    """
    w0 = cal.system.longest_element()
    adapted = x.inverse().word + (x * w0).word
    lhs = ringel(build_costandard_re(cal, x), cal, word=adapted)
    rhs = build_standard_re(cal, x * w0)
    return certify_equivalence(lhs, rhs)


def tilting_char_identity(system, table: KLTable | None = None) -> bool:
    """Character shadow of the big tilting object: the KL element of w0
    equals sum_x v^{l(x w0)} H_x = sum_x v^{l(w0)-l(x)} H_x."""
    if table is None:
        table = KLTable(system)
    w0 = system.longest_element()
    expected = HeckeElement(system)
    for x in system.elements():
        n = (x * w0).length
        expected = expected + hecke_h(x).scaled(LaurentPoly({n: 1}))
    return table.get(w0) == expected


def hw_axiom_check(cal: Calculus, subset: LocallyClosedSubset,
                   window: int = 2) -> dict:
    """Highest-weight axioms at desk scale, within the window.

    Checks, for every w in the subset:
      - End(std_w) is one-dimensional in bidegree (0,0) and vanishes in
        the other internal degrees of the window;
      - the standard/costandard pairing table (k at x = y, (0,0));
      - Ext^1 vanishing: Hom(std_w, costd_y <n> [1]) = 0 always, and
        Hom(std_w, std_y <n> [1]) = 0 for y <= w (dually for costandards).
    """
    system = cal.system
    results: dict = {}
    members = sorted(subset.members, key=lambda w: (w.length, w.word))
    std = {w: forget(restricted_standard(cal, w, subset)) for w in members}
    costd = {w: forget(restricted_costandard(cal, w, subset)) for w in members}
    ok = True
    for w in members:
        ends = {n: hom_dimension(std[w], std[w].shift_angle(n))
                for n in range(-window, window + 1)}
        good = ends.get(0) == 1 and all(
            d == 0 for n, d in ends.items() if n != 0)
        results[("end", w)] = (good, ends)
        ok = ok and good
    for w in members:
        for y in members:
            for n in range(-window, window + 1):
                for m in (0, 1):
                    d = hom_dimension(
                        std[w], costd[y].shift_angle(n).shift_bracket(m))
                    want = 1 if (m == 0 and n == 0 and w == y) else 0
                    if d != want:
                        results[("pairing", w, y, n, m)] = (False, d)
                        ok = False
    for w in members:
        for y in members:
            if not system.bruhat_leq(y, w):
                continue
            for n in range(-window, window + 1):
                d = hom_dimension(std[w],
                                  std[y].shift_angle(n).shift_bracket(1))
                if d != 0:
                    results[("ext1-std", w, y, n)] = (False, d)
                    ok = False
                d2 = hom_dimension(costd[y],
                                   costd[w].shift_angle(n).shift_bracket(1))
                if d2 != 0:
                    results[("ext1-costd", w, y, n)] = (False, d2)
                    ok = False
    results["ok"] = ok
    return results


def restricted_standard(cal: Calculus, w: Element,
                        subset: LocallyClosedSubset) -> Complex:
    cx = build_standard(cal, w)
    return restrict_to_subset(cx, subset)


def restricted_costandard(cal: Calculus, w: Element,
                          subset: LocallyClosedSubset) -> Complex:
    cx = build_costandard(cal, w)
    return restrict_to_subset(cx, subset)


def restrict_to_subset(cx: Complex, subset: LocallyClosedSubset) -> Complex:
    """Open restriction when the subset is the open part of the support."""
    return restrict_to_open(cx, subset)
