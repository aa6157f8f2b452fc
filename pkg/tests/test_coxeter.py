import itertools

import pytest
from hypothesis import given, settings, strategies as st

from heckekit.coxeter import (
    Expression, InfiniteRexSet, NotReduced, NotSameElement,
    defect_generating_function, defect_table, hecke_star,
    rex_graph, rex_path, subexpressions,
)
from heckekit.laurent import LaurentPoly

from .oracles import brute_defect_gf, perm_mul, word_to_perm


def E(system, labels):
    return Expression.make(system, labels)


# ---------------------------------------------------------------------------
# multiplication and normal forms

def test_multiply_involution_and_identity(a2):
    s = a2.element("s")
    e = a2.identity
    assert s * s == e
    assert a2.element("sts") * e == a2.element("sts")


def test_canonical_word_braid(a2):
    # canonical word of sts computed two ways; lengths agree
    x = a2.element("st") * a2.element("s")
    y = a2.element("ts") * a2.element("t")
    assert x == y
    assert x.word == (0, 1, 0)
    assert x.length == 3


@pytest.mark.parametrize("name,nels", [("A2", 6), ("B2", 8), ("A3", 24), ("A1xA1", 4)])
def test_group_against_permutation_model(name, nels):
    from .conftest import make_system

    system = make_system(name)
    els = system.elements()
    assert len(els) == nels
    # the map word -> permutation is an isomorphism onto its image
    seen = {}
    for w in els:
        seen[word_to_perm(name, w.word)] = w
    assert len(seen) == nels
    for a, b in itertools.product(els, repeat=2):
        pa, pb = word_to_perm(name, a.word), word_to_perm(name, b.word)
        assert seen[perm_mul(pa, pb)] == a * b


def test_infinite_dihedral_words(i2inf):
    w = i2inf.element("ststst")
    assert w.length == 6
    assert (w * i2inf.element("s")).length == 7
    assert (w * i2inf.element("t")).length == 5
    assert i2inf.is_finite is False


# ---------------------------------------------------------------------------
# Bruhat order

def test_bruhat_basics(a2):
    e = a2.identity
    for w in a2.elements():
        assert a2.bruhat_leq(e, w)
    assert a2.bruhat_leq(a2.element("st"), a2.element("sts"))
    assert not a2.bruhat_leq(a2.element("st"), a2.element("ts"))


@pytest.mark.parametrize("name", ["A2", "B2", "A3"])
def test_subword_property_independent_of_reduced_word(name):
    from .conftest import make_system

    system = make_system(name)
    els = system.elements()

    def leq_from_word(x, word):
        n = len(word)
        for mask in itertools.product((0, 1), repeat=n):
            sub = tuple(word[i] for i in range(n) if mask[i])
            if system.element(sub) == x:
                return True
        return False

    for y in els:
        words = rex_graph(y).nodes
        for x in els:
            vals = {leq_from_word(x, word) for word in words}
            assert len(vals) == 1
            assert vals.pop() == system.bruhat_leq(x, y)


# ---------------------------------------------------------------------------
# subexpressions and defects

def test_subexpressions_sts_s(a2):
    expr = E(a2, "sts")
    subs = subexpressions(expr, a2.element("s"))
    assert sorted(s.bits for s in subs) == [(0, 0, 1), (1, 0, 0)]


def test_subexpression_single_dot(a2):
    expr = E(a2, "s")
    subs = subexpressions(expr, a2.identity)
    assert len(subs) == 1
    assert subs[0].bits == (0,)
    assert subs[0].decorations == ("U0",)
    assert subs[0].defect == 1


def test_subexpression_empty(a2):
    expr = E(a2, "")
    subs = subexpressions(expr, a2.identity)
    assert len(subs) == 1 and subs[0].defect == 0


def test_defect_gf_examples(a2):
    s, e = a2.element("s"), a2.identity
    assert defect_generating_function(E(a2, "s"), s) == LaurentPoly({0: 1})
    assert defect_generating_function(E(a2, "sts"), e) == LaurentPoly({3: 1, 1: 1})
    assert defect_generating_function(E(a2, "sts"), s) == LaurentPoly({0: 1, 2: 1})


@pytest.mark.parametrize("name", ["A2", "B2"])
def test_defect_gf_against_brute_force(name):
    from .conftest import make_system

    system = make_system(name)
    for letters in itertools.product(range(system.rank), repeat=4):
        expr = Expression(system, letters)
        table = defect_table(expr)
        total = sum(sum(p.c.values()) for p in table.values())
        assert total == 2 ** 4
        for x, gf in table.items():
            assert gf == brute_defect_gf(system, letters, x)


# ---------------------------------------------------------------------------
# rex graphs and paths

def test_rex_graph_a2(a2):
    g = rex_graph(a2.element("sts"))
    assert set(g.nodes) == {(0, 1, 0), (1, 0, 1)}
    assert len(g.edges) == 1


def test_rex_graph_single_letter(a2):
    g = rex_graph(a2.element("s"))
    assert g.nodes == ((0,),) and g.edges == ()


def test_rex_graph_b2_w0(b2):
    g = rex_graph(b2.longest_element())
    assert set(g.nodes) == {(0, 1, 0, 1), (1, 0, 1, 0)}
    assert len(g.edges) == 1


def test_rex_path_basic(a2):
    path = rex_path(E(a2, "sts"), E(a2, "tst"))
    assert len(path) == 1
    assert path[0][0] == 0  # braid move at position 0
    assert rex_path(E(a2, "sts"), E(a2, "sts")) == []


def test_rex_path_a3_w0(a3):
    w0 = a3.longest_element()
    g = rex_graph(w0)
    assert len(g.nodes) == 16
    a, b = g.nodes[0], g.nodes[-1]
    path = rex_path(Expression(a3, a), Expression(a3, b))
    assert len(path) >= 1
    cur = a
    for pos, s, t, before, after in path:
        assert before == cur
        m = a3.m(s, t)
        seg = cur[pos:pos + m]
        assert seg == tuple(s if k % 2 == 0 else t for k in range(m))
        cur = after
        assert a3.element(cur) == w0 and a3.is_reduced(cur)
    assert cur == b


def test_rex_path_deterministic(a3):
    w0 = a3.longest_element()
    g = rex_graph(w0)
    a, b = g.nodes[2], g.nodes[9]
    p1 = rex_path(Expression(a3, a), Expression(a3, b))
    p2 = rex_path(Expression(a3, a), Expression(a3, b))
    assert p1 == p2


def test_rex_path_errors(a2):
    with pytest.raises(NotSameElement):
        rex_path(E(a2, "st"), E(a2, "ts"))
    with pytest.raises(NotReduced):
        rex_path(E(a2, "ss"), E(a2, "ss"))


def test_rex_graph_cap(a3):
    with pytest.raises(InfiniteRexSet):
        rex_graph(a3.longest_element(), cap=3)


# ---------------------------------------------------------------------------
# Hecke star product

def test_hecke_star_examples(a2):
    assert hecke_star(E(a2, "stss")) == a2.element("sts")
    assert hecke_star(E(a2, "sts")) == a2.element("sts")
    assert hecke_star(E(a2, "ss")) == a2.element("s")


@given(st.lists(st.integers(min_value=0, max_value=1), min_size=0, max_size=5),
       st.lists(st.integers(min_value=0, max_value=1), min_size=0, max_size=5))
@settings(max_examples=60, deadline=None)
def test_hecke_star_associative(u, v):
    from .conftest import make_system

    system = make_system("A2")
    left = hecke_star(Expression(system, tuple(u) + tuple(v)))
    x = hecke_star(Expression(system, tuple(u)))
    right = hecke_star(Expression(system, tuple(x.word) + tuple(v)))
    assert left == right
