"""Words, Bruhat order, defects and rex graphs at desk scale.

Walks through the combinatorial layer: normal forms in A2 and B2, the
subword property, subexpressions with their U/D decorations and defects,
and rex graphs including the sixteen reduced words of the longest
element of A3.
"""

from _setup import banner, system

from heckekit.coxeter import (
    Expression, defect_table, hecke_star, rex_graph, rex_path, subexpressions,
)

a2 = system("A2")
banner("A2: normal forms and Bruhat order")
sts = a2.element("sts")
tst = a2.element("tst")
print(f"sts == tst: {sts == tst}, canonical word {sts.word}, length {sts.length}")
print(f"st <= sts: {a2.bruhat_leq(a2.element('st'), sts)}")
print(f"st <= ts:  {a2.bruhat_leq(a2.element('st'), a2.element('ts'))}")
print("Bruhat interval below sts:", a2.bruhat_interval(sts))

banner("Subexpressions of (s,t,s) and their defects")
expr = Expression.make(a2, "sts")
for x, gf in sorted(defect_table(expr).items(), key=lambda kv: kv[0].length):
    subs = subexpressions(expr, x)
    print(f"  expressing {x!r}: generating function {gf}")
    for sub in subs:
        print(f"    bits {list(sub.bits)} decorations {sub.decorations} "
              f"defect {sub.defect}")

banner("Rex graphs")
g = rex_graph(sts)
print(f"reduced words of sts: {[a2.word_labels(w) for w in g.nodes]}, "
      f"{len(g.edges)} braid edge(s)")
a3 = system("A3")
w0 = a3.longest_element()
g3 = rex_graph(w0)
print(f"A3 longest element {w0!r}: {len(g3.nodes)} reduced words")
path = rex_path(Expression(a3, g3.nodes[0]), Expression(a3, g3.nodes[-1]))
print(f"deterministic rex path between two of them: {len(path)} moves")

banner("The Hecke star product")
for word in ["stss", "sts", "ss", "stst"]:
    print(f"  star({word}) = {hecke_star(Expression.make(a2, word))!r}")

b2 = system("B2")
print(f"\nB2 has {len(b2.elements())} elements; "
      f"longest element {b2.longest_element()!r}")
