"""The Hecke algebra layer: standard basis arithmetic, the bar involution,
Kazhdan-Lusztig elements, Bott-Samelson classes and the Deodhar identity.
"""

from _setup import banner, system

from heckekit.coxeter import Expression, defect_table
from heckekit.hecke import KLTable, bar, bs_class, h, standard_pairing, unit
from heckekit.laurent import LaurentPoly, V

a2 = system("A2")
s, t = a2.element("s"), a2.element("t")

banner("Quadratic relation and the bar involution")
print("H_s * H_s =", h(s) * h(s))
print("bar(H_s)  =", bar(h(s)))
print("bar is an involution:", bar(bar(h(a2.element('st')))) == h(a2.element("st")))

banner("Kazhdan-Lusztig basis of A2 (all elements)")
table = KLTable(a2)
for w in a2.elements():
    print(f"  KL[{w!r}] = {table.get(w)}")

banner("Bott-Samelson classes and the Deodhar identity")
for word in ["s", "ss", "sts", "stst"]:
    expr = Expression.make(a2, word)
    cls = bs_class(expr)
    print(f"  class of B[{word}] = {cls}")
    # the H-coefficients are exactly the defect generating functions
    agree = all(cls.coeff(x) == gf for x, gf in defect_table(expr).items())
    print(f"    coefficients match defect generating functions: {agree}")

banner("The pairing against double-leaf ranks")
lhs = standard_pairing(bs_class(Expression.make(a2, "sts")),
                       bs_class(Expression.make(a2, "s")))
print("  <[B_sts], [B_s]> =", lhs)

b2 = system("B2")
table_b2 = KLTable(b2)
w0 = b2.longest_element()
print(f"\nB2 longest element: KL[{w0!r}] = {table_b2.get(w0)}")
