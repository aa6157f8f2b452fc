import random

import pytest

from heckekit.hecke import char_of_complex, h, mul_standard, unit
from heckekit.laurent import LaurentPoly, V
from heckekit.homotopy import (
    Complex, FreeComplex, certify_equivalence, h0_dims, hom_dimension,
    koszul_support,
)
from heckekit.recperv import (
    bs_complex, build_costandard, build_standard, elementary_costandard,
    elementary_standard, unit_complex,
)
from heckekit.soergelcalc import BSObject


@pytest.fixture(scope="session")
def cal():
    from .conftest import make_calculus

    return make_calculus("A2")


# ---------------------------------------------------------------------------
# basic complexes, d^2, characters

def test_elementary_standard_shape(cal, a2):
    d = elementary_standard(cal, 0)
    assert d.terms == {0: (BSObject((0,), 0),), 1: (BSObject((), 1),)}
    assert char_of_complex(d) == h(a2.element("s"))


def test_elementary_costandard_char(cal, a2):
    n = elementary_costandard(cal, 0)
    s = a2.element("s")
    # H_s^{-1} = H_s + (v - v^{-1}) H_e
    expected = h(s) + unit(a2).scaled(LaurentPoly({1: 1, -1: -1}))
    assert char_of_complex(n) == expected


def test_d2_check_catches_bad_complex(cal):
    from heckekit.soergelcalc import dot

    terms = {0: (BSObject((0,), 0),), 1: (BSObject((), 1),),
             2: (BSObject((), 3),)}
    dot_entry = cal.from_diagram(dot(0))
    alpha_box = cal.identity_morphism(BSObject((), 1)).left_mult(cal.real.root(0))
    with pytest.raises(AssertionError):
        Complex(cal, terms, {0: {(0, 0): dot_entry},
                             1: {(0, 0): alpha_box}})


# ---------------------------------------------------------------------------
# shifts

def test_shift_inverses(cal):
    d = elementary_standard(cal, 0)
    assert d.shift_q(1).shift_q(-1).terms == d.terms
    assert d.shift_q(1).shift_q(-1).diff[0][(0, 0)] == d.diff[0][(0, 0)]
    assert d.shift_bracket(1).shift_bracket(-1).terms == d.terms


def test_angle_shift_of_one_term(cal):
    b = bs_complex(cal, (0,))
    shifted = b.shift_angle(1)
    assert shifted.terms == {-1: (BSObject((0,), -1),)}
    shifted2 = b.shift_angle(-1)
    assert shifted2.terms == {1: (BSObject((0,), 1),)}


def test_char_of_shifts(cal, a2):
    d = elementary_standard(cal, 0)
    c = char_of_complex(d)
    assert char_of_complex(d.shift_q(1)) == c.scaled(V)
    assert char_of_complex(d.shift_bracket(1)) == c.scaled(LaurentPoly({0: -1}))
    assert char_of_complex(d.shift_angle(1)) == c.scaled(LaurentPoly({-1: -1}))


def test_shift_relation_q_equals_angle_bracket(cal):
    # (1) = <-1>[1] as operations on complexes
    d = elementary_standard(cal, 0)
    lhs = d.shift_q(1)
    rhs = d.shift_angle(-1).shift_bracket(1)
    assert lhs.terms == rhs.terms
    assert lhs.diff.keys() == rhs.diff.keys()
    for n in lhs.diff:
        assert lhs.diff[n] == rhs.diff[n]


# ---------------------------------------------------------------------------
# convolution

def test_convolve_unit(cal):
    d = elementary_standard(cal, 0)
    u = unit_complex(cal)
    assert d.convolve(u).terms == d.terms
    assert u.convolve(d).terms == d.terms
    assert certify_equivalence(d.convolve(u), d) is not None


def test_convolution_char_multiplicative(cal, a2):
    for w1, w2 in [("s", "t"), ("st", "s"), ("s", "s")]:
        c1 = build_standard(cal, a2.element(w1), minimize=False)
        c2 = build_standard(cal, a2.element(w2), minimize=False)
        conv = c1.convolve(c2)
        assert char_of_complex(conv) == mul_standard(char_of_complex(c1),
                                                     char_of_complex(c2))


def test_delta_s_nabla_s_minimizes_to_unit(cal):
    d = elementary_standard(cal, 0)
    n = elementary_costandard(cal, 0)
    conv = d.convolve(n)
    minimized, eq = conv.minimize()
    assert minimized.terms == {0: (BSObject((), 0),)}
    assert eq.verify()
    conv2 = n.convolve(d)
    minimized2, eq2 = conv2.minimize()
    assert minimized2.terms == {0: (BSObject((), 0),)}
    assert eq2.verify()


def test_minimize_contractible(cal):
    ident = cal.identity_morphism(BSObject(()))
    cx = Complex(cal, {0: (BSObject(()),), 1: (BSObject(()),)},
                 {0: {(0, 0): ident}})
    minimized, eq = cx.minimize()
    assert minimized.is_zero()
    assert eq.verify()


def test_minimize_fixed_point(cal):
    d = elementary_standard(cal, 0)
    minimized, _ = d.minimize()
    assert minimized.terms == d.terms


def test_char_invariant_under_minimize(cal, a2):
    conv = build_standard(cal, a2.element("st"), minimize=False)
    minimized, _ = conv.minimize()
    assert char_of_complex(minimized) == char_of_complex(conv)


def test_convolve_associative_up_to_equivalence(cal, a2):
    ds = elementary_standard(cal, 0)
    dt = elementary_standard(cal, 1)
    ns = elementary_costandard(cal, 0)
    lhs = ds.convolve(dt).convolve(ns)
    rhs = ds.convolve(dt.convolve(ns))
    assert lhs.terms == rhs.terms
    eq = certify_equivalence(lhs, rhs)
    assert eq is not None and eq.verify()


# ---------------------------------------------------------------------------
# duality

def test_dualize_elementary(cal):
    d = elementary_standard(cal, 0)
    nd = d.dualize()
    n = elementary_costandard(cal, 0)
    assert nd.terms == n.terms
    eq = certify_equivalence(nd, n)
    assert eq is not None and eq.verify()
    # involution on the nose for terms
    assert d.dualize().dualize().terms == d.terms


def test_dualize_standard_is_costandard(cal, a2):
    for name in ["st", "sts"]:
        d = build_standard(cal, a2.element(name))
        n = build_costandard(cal, a2.element(name))
        eq = certify_equivalence(d.dualize(), n)
        assert eq is not None and eq.verify()


# ---------------------------------------------------------------------------
# Hom tables

def test_hom_delta_nabla_window(cal, a2):
    d = elementary_standard(cal, 0)
    n = elementary_costandard(cal, 0)
    for nn in range(-3, 4):
        for m in range(-3, 4):
            dim = hom_dimension(d, n.shift_angle(nn).shift_bracket(m))
            if m == -nn and m >= 0 and m % 2 == 0:
                assert dim == cal.real.graded_dim(m)
            else:
                assert dim == 0


def test_hom_unit_self(cal):
    u = unit_complex(cal)
    assert hom_dimension(u, u) == 1
    for m in (-2, -1, 1, 2):
        assert hom_dimension(u, u.shift_bracket(m)) == 0


def test_hom_homotopy_invariant(cal, a2):
    raw = build_standard(cal, a2.element("st"), minimize=False)
    minimized, _ = raw.minimize()
    n = build_costandard(cal, a2.element("st"))
    for nn in (-2, 0, 2):
        for m in (-1, 0, 1):
            target = n.shift_angle(nn).shift_bracket(m)
            assert hom_dimension(raw, target) == hom_dimension(minimized, target)


# ---------------------------------------------------------------------------
# free complexes and Koszul cohomology

def test_free_complex_minimize(real_a2):
    ring = real_a2.ring
    # [R(-1) --1--> R(-1)] is contractible
    fc = FreeComplex(real_a2, {-1: (-1,), 0: (-1,)},
                     {-1: {(0, 0): ring.one}})
    assert fc.minimize().is_zero()
    # [R(-1) --alpha--> R(1)] is minimal
    fc2 = FreeComplex(real_a2, {0: (-1,), 1: (1,)},
                      {0: {(0, 0): real_a2.root(0)}})
    assert fc2.minimize().terms == fc2.terms


def test_koszul_support_one_term(real_a2):
    fc = FreeComplex(real_a2, {0: (0,)}, {})
    assert koszul_support(fc) == {(0, 0): 1}
    up = FreeComplex(real_a2, {-1: (0,)}, {})   # b_w[1]
    assert koszul_support(up) == {(-1, 0): 1}
    shifted = FreeComplex(real_a2, {1: (1,)}, {})  # b_w<-1>
    assert koszul_support(shifted) == {(0, -1): 1}


def test_koszul_support_alpha_complex(real_a2):
    fc = FreeComplex(real_a2, {0: (-1,), 1: (1,)},
                     {0: {(0, 0): real_a2.root(0)}})
    assert koszul_support(fc) == {(1, 1): 1, (0, -1): 1}


def test_koszul_h0_lemma_random(real_a2):
    # H^0(M) = H^0(Lambda (x) M) whenever H^{<0}(M) = 0
    rng = random.Random(11)
    ring = real_a2.ring
    for trial in range(12):
        # terms in degrees 0..2 with shifts <= degree (so regraded degrees >= 0)
        terms = {}
        for p in range(0, 3):
            k = rng.randint(0, 2)
            terms[p] = tuple(sorted(rng.randint(p - 3, p) for _ in range(k)))
        terms = {p: tu for p, tu in terms.items() if tu}
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
        # enforce d^2 = 0 by zeroing the second differential when needed
        try:
            fc = FreeComplex(real_a2, terms, diff)
        except AssertionError:
            diff.pop(max(diff), None)
            fc = FreeComplex(real_a2, terms, diff)
        lhs = h0_dims(fc, lam=False)
        rhs = h0_dims(fc, lam=True)
        assert lhs == rhs


def test_free_complex_char(real_a2, a2):
    # local summands b_w(m) in degree n contribute (-1)^n v^m H_w
    from heckekit.hecke import char_of_complex, h
    from heckekit.laurent import LaurentPoly

    fc = FreeComplex(real_a2, {0: (-1,), 1: (1,)},
                     {0: {(0, 0): real_a2.root(0)}},
                     element=a2.element("st"))
    got = char_of_complex(fc)
    want = h(a2.element("st")).scaled(LaurentPoly({-1: 1, 1: -1}))
    assert got == want


def test_free_dualize_roundtrip(real_a2):
    fc = FreeComplex(real_a2, {0: (-1,), 1: (1,)},
                     {0: {(0, 0): real_a2.root(0)}})
    dd = fc.dualize().dualize()
    assert dd.terms == fc.terms
    assert dd.diff[0][(0, 0)] == fc.diff[0][(0, 0)]
