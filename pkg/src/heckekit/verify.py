"""Verification suites: the property checks behind `heckekit verify`.

Each suite returns a list of (name, ok, detail) records; a suite passes
when all records do.  These are desk-scale exact computations; the
default windows are the ones the identities are stated with.
"""

from __future__ import annotations

import itertools
import random

from .coxeter import CoxeterSystem, Expression, defect_table
from .hecke import (
    KLTable, bs_class, char_of_complex, h, mul_standard, unit,
)
from .homotopy import FreeComplex, certify_equivalence, h0_dims, hom_dimension
from .laurent import LaurentPoly
from .locale import LocallyClosedSubset
from .realization import Realization
from .recperv import (
    bs_complex, build_costandard, build_standard, cone_of_rex_move,
    elementary_costandard, elementary_standard, perverse_check,
    simple_candidate_check, top_candidate, unit_complex,
)
from .requiv import (
    build_costandard_re, build_standard_re, full_faithfulness_probe,
    tilting_char_identity, verify_ringel_on_costandard,
)
from .soergelcalc import BSObject, Calculus, hom_graded_rank


Record = tuple


def _ok(records) -> bool:
    return all(r[1] for r in records)


# ---------------------------------------------------------------------------

def suite_deodhar(system: CoxeterSystem, max_len: int = 5):
    """Defect generating functions match the H-basis coefficients of the
    Bott-Samelson class, for every expression up to the given length."""
    records = []
    bad = 0
    total = 0
    for n in range(max_len + 1):
        for letters in itertools.product(range(system.rank), repeat=n):
            expr = Expression(system, letters)
            table = defect_table(expr)
            cls = bs_class(expr)
            total += 1
            if set(cls.support()) != set(table.keys()) or any(
                    cls.coeff(x) != gf for x, gf in table.items()):
                bad += 1
    records.append((f"deodhar(len<={max_len})", bad == 0,
                    f"{total} expressions, {bad} mismatches"))
    return records


def suite_homrank(cal: Calculus):
    system = cal.system
    cases = [
        (((0,), ()), LaurentPoly({1: 1})),
        (((0,), (0,)), LaurentPoly({0: 1, 2: 1})),
        (((0, 1, 0), (0,)), LaurentPoly({0: 1, 2: 2, 4: 1})),
    ]
    records = []
    for (v, w), expected in cases:
        got = hom_graded_rank(system, v, w)
        records.append((f"homrank{v}->{w}", got == expected, repr(got)))
    return records


def suite_relations(cal: Calculus, degree_bound: int = 12):
    """One-color relations, the 2m-valent checks, and the B_s B_s
    splitting, as exact matrix equalities in all bidegrees up to the bound."""
    from .homotopy import _bsbs_maps
    from .soergelcalc import Diagram, barbell, box, dot, enddot, merge, split

    records = []
    ring = cal.ring
    # barbell = alpha_s, per-degree matrices
    for s in range(cal.system.rank):
        lhs = cal.evaluate(barbell(s))
        rhs = cal.evaluate(box(cal.real.root(s)))
        same = lhs == rhs
        for d in range(0, degree_bound + 1, 2):
            same = same and lhs.matrix_in_degree(ring, d) == \
                rhs.matrix_in_degree(ring, d)
        records.append((f"barbell[{cal.system.labels[s]}]", same, ""))
    # needle = 0
    for s in range(cal.system.rank):
        needle = cal.evaluate(split(s).then(merge(s)))
        records.append((f"needle[{cal.system.labels[s]}]", needle.is_zero(), ""))
    # Frobenius unit/counit
    for s in range(cal.system.rank):
        ident = cal.evaluate(Diagram.identity((s,)))
        strand = Diagram.identity((s,))
        composites = [
            split(s).then(dot(s).beside(strand)),
            split(s).then(strand.beside(dot(s))),
            enddot(s).beside(strand).then(merge(s)),
            strand.beside(enddot(s)).then(merge(s)),
        ]
        same = all(cal.evaluate(c) == ident for c in composites)
        for d in range(-1, degree_bound + 1):
            for c in composites:
                same = same and cal.evaluate(c).matrix_in_degree(ring, d) == \
                    ident.matrix_in_degree(ring, d)
        records.append((f"frobenius[{cal.system.labels[s]}]", same, ""))
    # B_s B_s splitting: the biproduct identities
    for s in range(cal.system.rank):
        try:
            _bsbs_maps(cal, (s, s), 0, 0)
            records.append((f"bsbs[{cal.system.labels[s]}]", True, ""))
        except AssertionError as err:
            records.append((f"bsbs[{cal.system.labels[s]}]", False, str(err)))
    # two-color checks where evaluation applies
    from .soergelcalc import mvalent

    for s in range(cal.system.rank):
        for t in range(s + 1, cal.system.rank):
            m = cal.system.m(s, t)
            if m is None or m > 3:
                continue
            if m == 2:
                square = cal.evaluate(mvalent(cal.system, s, t).then(
                    mvalent(cal.system, t, s)))
                ident = cal.evaluate(Diagram.identity((s, t)))
                records.append((f"4valent-square[{s}{t}]", square == ident, ""))
            else:
                from .locale import rex_iso, quotient_morphism

                w = cal.system.element((s, t, s))
                sub = LocallyClosedSubset.of({w})
                fwd = rex_iso(cal, (s, t, s), (t, s, t))
                bwd = rex_iso(cal, (t, s, t), (s, t, s))
                round1 = quotient_morphism(cal.compose(bwd, fwd), sub)
                ident = quotient_morphism(
                    cal.identity_morphism(BSObject((s, t, s))), sub)
                records.append((f"6valent-rex-iso[{s}{t}]", round1 == ident, ""))
    return records


def suite_groth(cal_or_system, rank_only: bool = False):
    """The quadratic and braid identities in the split Grothendieck group,
    and char(std_w) = H_w for every w."""
    if isinstance(cal_or_system, Calculus):
        cal = cal_or_system
        system = cal.system
    else:
        cal = None
        system = cal_or_system
    records = []
    # quadratic: [D_s]^2 = [D_e] + [D_s(-1)] - [D_s(1)] with [D_s] = H_s
    for s in range(system.rank):
        hs = h(system.simple(s))
        lhs = mul_standard(hs, hs)
        rhs = unit(system) + hs.scaled(LaurentPoly({-1: 1})) \
            - hs.scaled(LaurentPoly({1: 1}))
        records.append((f"rel-quadratic[{system.labels[s]}]", lhs == rhs, ""))
    # braid: char(std_x * std_y) = char(std_xy) on length-additive pairs
    for x in system.elements():
        for y in system.elements():
            if (x * y).length != x.length + y.length or x.length * y.length == 0:
                continue
            if cal is not None:
                cx = build_standard(cal, x, rank_only=rank_only).convolve(
                    build_standard(cal, y, rank_only=rank_only))
                got = char_of_complex(cx)
            else:
                got = mul_standard(h(x), h(y))
            ok = got == h(x * y)
            records.append((f"rel-braid[{x!r},{y!r}]", ok, ""))
    # characters of standard objects
    for w in system.elements():
        if cal is not None:
            cx = build_standard(cal, w, rank_only=rank_only)
            got = char_of_complex(cx)
        else:
            got = h(w)
        records.append((f"char-std[{w!r}]", got == h(w), ""))
    return records


def _convolve_adapted(cal: Calculus, left_w, right_w, left_kind="std",
                      right_kind="costd"):
    """left * right built factorwise with minimization."""
    build = {"std": (build_standard, elementary_standard),
             "costd": (build_costandard, elementary_costandard)}
    cx = build[left_kind][0](cal, left_w)
    elem = build[right_kind][1]
    for i in right_w.word:
        cx = cx.convolve(elem(cal, i))
        cx, _ = cx.minimize(certificate=False)
    return cx


def suite_convolution_inverses(cal: Calculus):
    records = []
    for w in cal.system.elements():
        winv = w.inverse()
        lhs = _convolve_adapted(cal, w, winv, "std", "costd")
        eq = certify_equivalence(lhs, unit_complex(cal))
        ok = eq is not None and eq.verify()
        records.append((f"std*costd[{w!r}]", ok, ""))
        rhs = _convolve_adapted(cal, winv, w, "costd", "std")
        eq2 = certify_equivalence(rhs, unit_complex(cal))
        ok2 = eq2 is not None and eq2.verify()
        records.append((f"costd*std[{w!r}]", ok2, ""))
    return records


def suite_hom_dn(cal: Calculus, window: int = 4):
    """The standard/costandard Hom table: S^{m/2}(V*) on the diagonal."""
    records = []
    system = cal.system
    std = {w: build_standard(cal, w) for w in system.elements()}
    costd = {w: build_costandard(cal, w) for w in system.elements()}
    bad = []
    total = 0
    for x in system.elements():
        for y in system.elements():
            for n in range(-window, window + 1):
                for m in range(-window, window + 1):
                    want = cal.real.graded_dim(m) \
                        if (x == y and m == -n and m >= 0 and m % 2 == 0) else 0
                    got = hom_dimension(
                        std[x], costd[y].shift_angle(n).shift_bracket(m))
                    total += 1
                    if got != want:
                        bad.append((x, y, n, m, got, want))
    records.append((f"hom-dn(window={window})", not bad,
                    f"{total} cells" + (f", first bad {bad[0]}" if bad else "")))
    return records


def suite_perverse(cal: Calculus):
    records = []
    system = cal.system
    for w in system.elements():
        ok = perverse_check(build_standard(cal, w)).perverse
        records.append((f"perverse-std[{w!r}]", ok, ""))
        ok2 = perverse_check(build_costandard(cal, w)).perverse
        records.append((f"perverse-costd[{w!r}]", ok2, ""))
    for s in range(system.rank):
        records.append((f"perverse-B{system.labels[s]}",
                        perverse_check(bs_complex(cal, (s,))).perverse, ""))
    for w in system.elements():
        for y in system.elements():
            cx = _convolve_adapted(cal, w, y, "std", "costd")
            records.append((f"perverse-std*costd[{w!r},{y!r}]",
                            perverse_check(cx).perverse, ""))
    unit = unit_complex(cal)
    up = perverse_check(unit.shift_bracket(1))
    down = perverse_check(unit.shift_bracket(-1))
    records.append(("nonperverse-b[1]", not up.perverse, ""))
    records.append(("nonperverse-b[-1]", not down.perverse, ""))
    sample = build_standard(cal, system.elements()[-1])
    records.append(("angle-shift-t-exact",
                    perverse_check(sample.shift_angle(2)).perverse
                    and perverse_check(sample.shift_angle(-1)).perverse, ""))
    return records


def suite_simples(cal: Calculus):
    system = cal.system
    records = []
    ok_e, _ = simple_candidate_check(unit_complex(cal), system.identity)
    records.append(("simple-e", ok_e, ""))
    for s in range(system.rank):
        ok_s, _ = simple_candidate_check(bs_complex(cal, (s,)),
                                         system.simple(s))
        records.append((f"simple-B{system.labels[s]}", ok_s, ""))
    if system.rank == 2 and system.m(0, 1) == 3:
        w0 = system.longest_element()
        cand = top_candidate(cal, w0.word)
        ok_t, _ = simple_candidate_check(cand, w0)
        table = KLTable(system)
        char_ok = char_of_complex(cand) == table.get(w0)
        records.append(("simple-top-w0", ok_t and char_ok,
                        f"char match: {char_ok}"))
    return records


def suite_std_homs(cal: Calculus, window: int = 4):
    """Hom(std_w, std_y <n>) is one-dimensional exactly at n = l(y) - l(w)
    for w <= y, and zero otherwise; dually for costandards."""
    system = cal.system
    std = {w: build_standard(cal, w) for w in system.elements()}
    costd = {w: build_costandard(cal, w) for w in system.elements()}
    bad = []
    total = 0
    for w in system.elements():
        for y in system.elements():
            for n in range(-window, window + 1):
                want = 1 if (system.bruhat_leq(w, y)
                             and n == y.length - w.length) else 0
                got = hom_dimension(std[w], std[y].shift_angle(n))
                total += 1
                if got != want:
                    bad.append(("std", w, y, n, got, want))
                want2 = 1 if (system.bruhat_leq(w, y)
                              and n == w.length - y.length) else 0
                got2 = hom_dimension(costd[y].shift_angle(n), costd[w])
                if got2 != want2:
                    bad.append(("costd", w, y, n, got2, want2))
    return [(f"std-homs(window={window})", not bad,
             f"{total} cells" + (f", first bad {bad[0]}" if bad else ""))]


def suite_rexcone(cal: Calculus):
    records = []
    system = cal.system
    if system.rank == 2 and system.m(0, 1) == 3:
        out = cone_of_rex_move(cal, (0, 1, 0), (1, 0, 1))
        records.append(("rexcone-braid", out["star_vanishes"]
                        and out["shriek_vanishes"], ""))
        trivial = cone_of_rex_move(cal, (0, 1, 0), (0, 1, 0))
        minimized, _ = trivial["cone"].minimize()
        records.append(("rexcone-trivial", minimized.is_zero(), ""))
    return records


def suite_re(cal: Calculus, window: int = 2):
    records = []
    system = cal.system
    std = {w: build_standard_re(cal, w) for w in system.elements()}
    costd = {w: build_costandard_re(cal, w) for w in system.elements()}
    bad = []
    for x in system.elements():
        for y in system.elements():
            for n in range(-window, window + 1):
                for m in range(-window, window + 1):
                    want = 1 if (x == y and n == 0 and m == 0) else 0
                    got = hom_dimension(
                        std[x], costd[y].shift_angle(n).shift_bracket(m))
                    if got != want:
                        bad.append((x, y, n, m, got, want))
    records.append((f"hom-re-dn(window={window})", not bad,
                    f"first bad {bad[0]}" if bad else ""))
    pairs = []
    for x in system.elements():
        pairs.append((build_standard(cal, x), build_costandard(cal, x)))
    pairs.append((build_standard(cal, system.simple(0)),
                  build_costandard(cal, system.simple(1) if system.rank > 1
                                   else system.identity)))
    for s in range(system.rank):
        pairs.append((bs_complex(cal, (s,)), bs_complex(cal, (s,))))
    pairs.append((build_standard(cal, system.elements()[-1]),
                  build_standard(cal, system.elements()[-1])))
    probe_ok = True
    for f, g in pairs:
        be, re = full_faithfulness_probe(f, g)
        probe_ok = probe_ok and be == re
    records.append((f"full-faithfulness({len(pairs)} pairs)", probe_ok, ""))
    ringel_ok = True
    for x in system.elements():
        eq = verify_ringel_on_costandard(cal, x)
        ringel_ok = ringel_ok and eq is not None and eq.verify()
    records.append(("ringel-costd-to-std", ringel_ok, ""))
    return records


def suite_koszul(real: Realization, trials: int = 50, seed: int = 5):
    """H^0 is preserved by the Koszul embedding on complexes with no
    cohomology below degree zero."""
    rng = random.Random(seed)
    ring = real.ring
    bad = 0
    for _ in range(trials):
        terms = {}
        for p in range(0, 3):
            k = rng.randint(0, 2)
            shifts = tuple(sorted(rng.randint(p - 3, p) for _ in range(k)))
            if shifts:
                terms[p] = shifts
        if not terms:
            terms = {0: (0,)}
        diff = {}
        for p in sorted(terms):
            if p + 1 not in terms:
                continue
            block = {}
            for i, jt in enumerate(terms[p + 1]):
                for j, js in enumerate(terms[p]):
                    d = jt - js
                    if d < 0 or d % 2:
                        continue
                    poly = ring.zero
                    for mono in ring.monomials(d // 2):
                        poly = poly + ring.monomial(mono).scale(rng.randint(-2, 2))
                    if not poly.is_zero():
                        block[(i, j)] = poly
            if block:
                diff[p] = block
        try:
            fc = FreeComplex(real, terms, diff)
        except AssertionError:
            diff.pop(max(diff), None)
            fc = FreeComplex(real, terms, diff)
        if h0_dims(fc, lam=False) != h0_dims(fc, lam=True):
            bad += 1
    return [(f"koszul-h0({trials} trials)", bad == 0, f"{bad} failures")]


def suite_tilting_char(system: CoxeterSystem):
    return [("tilting-char", tilting_char_identity(system), "")]
