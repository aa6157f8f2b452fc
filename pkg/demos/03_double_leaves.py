"""The diagrammatic calculus: graded Hom ranks, light leaves, evaluation,
the one-color relations and the B_s B_s splitting.
"""

from _setup import banner, realization

from heckekit.hecke import bs_class, standard_pairing
from heckekit.coxeter import Expression
from heckekit.soergelcalc import (
    BSObject, Calculus, Diagram, barbell, dot, enddot, hom_graded_rank,
    light_leaf_diagram, merge, split,
)

real = realization("A2")
cal = Calculus(real)
a2 = cal.system

banner("Graded ranks of Hom spaces")
for v, w in [((0,), ()), ((0,), (0,)), ((0, 1, 0), (0,)), ((0, 1), (1, 0))]:
    rank = hom_graded_rank(a2, v, w)
    pairing = standard_pairing(bs_class(Expression(a2, v)),
                               bs_class(Expression(a2, w)))
    print(f"  Hom(B[{a2.word_labels(v)}], B[{a2.word_labels(w)}]): rank {rank}"
          f"  (pairing of classes: {pairing})")

banner("A light leaf")
d = light_leaf_diagram(a2, (0, 1, 0), (1, 0, 0))
print(f"  source {a2.word_labels(d.bottom)}, target {a2.word_labels(d.top)}, "
      f"degree {d.degree}")

banner("Evaluation: the one-color relations")
print("  barbell evaluates to multiplication by alpha_s:",
      cal.evaluate(barbell(0)).images[()] == {(): real.root(0)})
print("  needle (split then merge) evaluates to zero:",
      cal.evaluate(split(0).then(merge(0))).is_zero())
ident = cal.evaluate(Diagram.identity((0,)))
frob = cal.evaluate(split(0).then(dot(0).beside(Diagram.identity((0,)))))
print("  dot against trivalent is the identity:", frob == ident)

banner("Composition in the double-leaves basis")
barbell_m = cal.compose(cal.from_diagram(dot(0), source_shift=1),
                        cal.from_diagram(enddot(0)))
print("  dot o enddot =", barbell_m)

banner("B_s B_s splits as B_s(1) + B_s(-1)")
p1 = cal.from_diagram(merge(0))
i2 = cal.from_diagram(split(0), source_shift=1)
print("  merge o split = 0:", cal.compose(p1, i2).is_zero())
print("  6-valent vertex exists and is unique:",
      cal.mvalent_map(0, 1).degree == 0)
