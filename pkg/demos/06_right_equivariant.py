"""The right-equivariant layer: base change, Hom tables, full
faithfulness, Ringel duality and the big tilting character.
"""

from _setup import banner, realization, system

from heckekit.hecke import char_of_complex
from heckekit.recperv import build_costandard, build_standard
from heckekit.requiv import (
    build_costandard_re, forget, full_faithfulness_probe, re_hom_table,
    re_perverse_check, ringel, tilting_char_identity,
    verify_ringel_on_costandard,
)
from heckekit.soergelcalc import Calculus

cal = Calculus(realization("A2"))
a2 = cal.system

banner("Base change kills positive-degree coefficients")
d = build_standard(cal, a2.element("s"))
print("  std[s] forgets to a two-term complex with a scalar differential:",
      forget(d).diff[0][(0, 0)])

banner("The RE Hom table (k exactly on the diagonal at (0,0))")
table = re_hom_table(cal, a2.element("s"), a2.element("s"), 1)
print("  Hom(std_s, costd_s <n>[m]):", table)
table = re_hom_table(cal, a2.element("s"), a2.element("t"), 1)
print("  Hom(std_s, costd_t <n>[m]) all vanish:",
      all(v == 0 for v in table.values()))

banner("Full faithfulness on perverse objects")
for x, y in [("s", "s"), ("s", "t"), ("sts", "sts")]:
    be, re = full_faithfulness_probe(build_standard(cal, a2.element(x)),
                                     build_costandard(cal, a2.element(y)))
    print(f"  dim Hom(std_{x}, costd_{y}): biequivariant {be} = "
          f"right-equivariant {re}")

banner("RE perversity agrees with the biequivariant verdicts")
print("  forget(std[st]) perverse:",
      re_perverse_check(forget(build_standard(cal, a2.element('st')))).perverse)

banner("Ringel duality")
for name in ["e", "s", "st", "sts"]:
    eq = verify_ringel_on_costandard(cal, a2.element(name))
    x = a2.element(name)
    print(f"  ringel(costd[{name}]) ~ std[{(x * a2.longest_element())!r}]:",
          eq is not None and eq.verify())

banner("Character shadow of the big tilting object")
for name in ["A2", "B2"]:
    print(f"  {name}:", tilting_char_identity(system(name)))
