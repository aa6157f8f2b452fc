"""Recollement and the perverse t-structure: singleton restrictions,
perversity reports, simple candidates, triangles and rex cones.
"""

from _setup import banner, realization

from heckekit.hecke import KLTable, char_of_complex
from heckekit.locale import LocallyClosedSubset
from heckekit.recperv import (
    bs_complex, build_standard, cone_of_rex_move, open_pushforward,
    perverse_check, simple_candidate_check, singleton_shriek, singleton_star,
    top_candidate, verify_triangle_dw_ws,
)
from heckekit.soergelcalc import Calculus

cal = Calculus(realization("A2"))
a2 = cal.system

banner("Singleton restrictions of std[s] over {e, s}")
es = LocallyClosedSubset.of({a2.identity, a2.element("s")})
delta_s = build_standard(cal, a2.element("s"))
from heckekit.homotopy import Complex

local = Complex(cal, delta_s.terms, delta_s.diff, subset=es, check=False)
at_e = singleton_shriek(local, a2.identity)
print("  shriek at e:", at_e, "entry:", at_e.diff[0][(0, 0)])
print("  star at e minimizes to zero:",
      singleton_star(local, a2.identity).minimize().is_zero())

banner("Pushing B_s across the closed point e")
inner = bs_complex(cal, (0,), subset=LocallyClosedSubset.of({a2.element("s")}))
pushed = open_pushforward(inner, a2.identity, es)
print("  terms:", {n: [(a2.word_labels(o.word), o.shift) for o in objs]
                   for n, objs in sorted(pushed.terms.items())})

banner("Perversity reports")
print(perverse_check(build_standard(cal, a2.element("st"))))
print()
print("  B_empty[1] is not perverse:",
      not perverse_check(bs_complex(cal, ()).shift_bracket(1)).perverse)

banner("Simple candidates")
ok, _ = simple_candidate_check(bs_complex(cal, (0,)), a2.element("s"))
print("  B_s is the simple at s:", ok)
cand = top_candidate(cal, (0, 1, 0))
ok, _ = simple_candidate_check(cand, a2.element("sts"))
table = KLTable(a2)
print("  top candidate at sts passes:", ok,
      "| char equals the KL element:",
      char_of_complex(cand) == table.get(a2.element("sts")))

banner("Triangles and rex cones")
out = verify_triangle_dw_ws(cal, a2.element("s"), 1)
print("  triangle at (s, t):", out)
out = cone_of_rex_move(cal, (0, 1, 0), (1, 0, 1))
print("  rex cone supported strictly below sts:",
      out["star_vanishes"] and out["shriek_vanishes"])
