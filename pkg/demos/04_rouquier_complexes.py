"""Rouquier complexes: standard and costandard objects, convolution,
Gaussian elimination with certificates, characters, duality.
"""

from _setup import banner, realization

from heckekit.hecke import bar, char_of_complex, h
from heckekit.homotopy import certify_equivalence
from heckekit.recperv import build_costandard, build_standard, unit_complex
from heckekit.soergelcalc import Calculus

cal = Calculus(realization("A2"))
a2 = cal.system


def show(cx, name):
    print(f"  {name}:")
    for n in cx.degrees():
        objs = ", ".join(f"B[{a2.word_labels(o.word)}]({o.shift})"
                         for o in cx.terms[n])
        print(f"    degree {n}: {objs}")
    print(f"    char = {char_of_complex(cx)}")


banner("Standard objects (minimized)")
for name in ["s", "st", "sts"]:
    show(build_standard(cal, a2.element(name)), f"std[{name}]")

banner("Characters: std gives the standard basis, costd its bar dual")
for name in ["st", "sts"]:
    w = a2.element(name)
    print(f"  char std[{name}] == H_{name}:",
          char_of_complex(build_standard(cal, w)) == h(w))
    print(f"  char costd[{name}] == bar(H_{name}):",
          char_of_complex(build_costandard(cal, w)) == bar(h(w)))

banner("Convolution inverses with certificates")
w = a2.element("sts")
cx = build_standard(cal, w)
for i in w.inverse().word:
    from heckekit.recperv import elementary_costandard

    cx = cx.convolve(elementary_costandard(cal, i))
    cx, _ = cx.minimize()
show(cx, "std[sts] * costd[sts]")
eq = certify_equivalence(cx, unit_complex(cal))
print("  certified homotopy equivalent to the unit:",
      eq is not None and eq.verify())

banner("Duality exchanges standard and costandard")
d = build_standard(cal, a2.element("st"))
n = build_costandard(cal, a2.element("st"))
eq = certify_equivalence(d.dualize(), n)
print("  D(std[st]) ~ costd[st]:", eq is not None and eq.verify())
