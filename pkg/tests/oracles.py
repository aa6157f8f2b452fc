"""Independent brute-force oracles used to freeze expected values.

Nothing here imports the code paths it checks: group multiplication is
modeled on permutations / signed permutations, and the Kazhdan-Lusztig
oracle is the classical mu-recursion, not the triangular solver.
"""

from __future__ import annotations

import itertools

from heckekit.laurent import LaurentPoly, V


# ---------------------------------------------------------------------------
# permutation models (independent multiplication oracles)

def perm_mul(p, q):
    """(p q)(i) = p(q(i)): composition of permutations given as tuples."""
    return tuple(p[q[i]] for i in range(len(p)))


def perm_model(name):
    """Generators of a faithful permutation model, in fixture label order.

    A2 -> S3 adjacent transpositions; A3 -> S4; B2 -> signed permutations
    of {1,2} encoded as permutations of (-2,-1,1,2); A1xA1 -> S2 x S2.
    """
    if name == "A2":
        return [(1, 0, 2), (0, 2, 1)]
    if name == "A3":
        return [(1, 0, 2, 3), (0, 2, 1, 3), (0, 1, 3, 2)]
    if name == "A1xA1":
        return [(1, 0, 2, 3), (0, 1, 3, 2)]
    if name == "B2":
        # points ordered (-2, -1, 1, 2); s swaps 1,2 (and -1,-2); t negates 1
        s = (3, 1, 2, 0)   # -2<->... acts: index0=-2 -> 2(idx3); -1->-1; 1->1? see below
        # build honestly: map value -> value
        def as_perm(val_map):
            order = (-2, -1, 1, 2)
            return tuple(order.index(val_map[v]) for v in order)
        s = as_perm({-2: -1, -1: -2, 1: 2, 2: 1})
        t = as_perm({-2: -2, -1: 1, 1: -1, 2: 2})
        return [s, t]
    raise ValueError(name)


def word_to_perm(name, word):
    gens = perm_model(name)
    n = len(gens[0])
    p = tuple(range(n))
    for i in word:
        p = perm_mul(p, gens[i])
    return p


# ---------------------------------------------------------------------------
# classical Kazhdan-Lusztig recursion (independent of the triangular solver)

def kl_recursion_table(system):
    """KL basis for all of finite W via KL_{sy} = KL_s KL_y - sum mu(z,y) KL_z.

    Conventions: KL_s = H_s + v; mu(z,y) is the coefficient of v in the
    H_z-coefficient of KL_y; the correction runs over z < y with sz < z.
    Returns element -> HeckeElement.
    """
    from heckekit.hecke import HeckeElement, h, unit

    table = {system.identity: unit(system)}
    for w in system.elements():
        if w.length == 0:
            continue
        i = w.word[0]
        y = system.element(w.word[1:])
        kl_s = h(system.simple(i)) + unit(system).scaled(V)
        acc = kl_s * table[y]
        for z in list(table[y].support()):
            sz = system.simple(i) * z
            if sz.length < z.length:
                mu = table[y].coeff(z).coeff(1)
                if mu:
                    acc = acc - table[z].scaled(LaurentPoly({0: mu}))
        table[w] = acc
    return table


# ---------------------------------------------------------------------------
# defect brute force straight from the decoration definition

def brute_defects(system, letters):
    """dict element -> sorted list of defects over all subexpressions."""
    out = {}
    n = len(letters)
    for bits in itertools.product((0, 1), repeat=n):
        x = system.identity
        defect = 0
        for letter, bit in zip(letters, bits):
            up = (x.times_simple(letter)).length > x.length
            if up and bit == 0:
                defect += 1
            if (not up) and bit == 0:
                defect -= 1
            if bit:
                x = x.times_simple(letter)
        out.setdefault(x, []).append(defect)
    return {x: sorted(ds) for x, ds in out.items()}


def brute_defect_gf(system, letters, x):
    table = brute_defects(system, letters)
    counts = {}
    for d in table.get(x, []):
        counts[d] = counts.get(d, 0) + 1
    return LaurentPoly(counts)
