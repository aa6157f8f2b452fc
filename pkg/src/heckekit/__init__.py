"""heckekit: exact computations in the diagrammatic Hecke category.

The layers, bottom to top:

- coxeter: words, Bruhat order, subexpressions and defects, rex moves,
  the Hecke star product;
- hecke: Laurent polynomials, the Hecke algebra in Soergel's
  normalization, the Kazhdan-Lusztig basis, characters of complexes;
- realization: root data over Q or GF(p), the graded polynomial ring,
  Demazure operators;
- soergelcalc: Bott-Samelson objects, light leaves, the double-leaves
  bases of Hom spaces, bimodule evaluation, composition and the
  monoidal product, the duality;
- locale: locally closed subsets of the Bruhat order and the quotient
  categories;
- homotopy: bounded complexes, the three shifts, convolution, Gaussian
  elimination with homotopy certificates, Hom tables, the Koszul side;
- recperv: recollement functors, standard/costandard (Rouquier)
  complexes, the perverse t-structure checker, simple candidates;
- requiv: right-equivariant base change, full-faithfulness probes,
  Ringel duality, highest-weight axioms;
- verify/cli: the verification suites and the command line.
"""

from .coxeter import CoxeterSystem, Element, Expression, Subexpression
from .fields import GF, QQ
from .hecke import HeckeElement, KLTable, bs_class, char_of_complex, kl_basis
from .laurent import LaurentPoly
from .realization import Realization
from .soergelcalc import BSObject, Calculus, Morphism, hom_graded_rank

__all__ = [
    "BSObject", "Calculus", "CoxeterSystem", "Element", "Expression",
    "GF", "HeckeElement", "KLTable", "LaurentPoly", "Morphism", "QQ",
    "Realization", "Subexpression", "bs_class", "char_of_complex",
    "hom_graded_rank", "kl_basis",
]

__version__ = "0.1.0"
