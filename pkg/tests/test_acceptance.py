"""The acceptance gate: thirteen exact desk-scale criteria.

Each test prints one [PASS]/[FAIL] line; run with `pytest -s
tests/test_acceptance.py` to see them.  Expected values are exact; no
tolerances are involved anywhere (all arithmetic is over Q or F_p).
"""

from heckekit import verify as V

from .conftest import make_calculus, make_realization, make_system


def report(number: int, name: str, records) -> None:
    ok = all(r[1] for r in records)
    failures = [r for r in records if not r[1]]
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {name} " \
           f"({len(records)} checks)"
    print(line)
    for r in failures[:5]:
        print(f"         failed: {r[0]} {r[2]}")
    assert ok, f"criterion {number} failed: {failures[:5]}"


def test_criterion_01_deodhar_double_leaf_consistency():
    records = []
    for name in ("A2", "B2"):
        records += V.suite_deodhar(make_system(name), max_len=5)
    report(1, "Deodhar/double-leaf consistency (A2, B2, length <= 5)", records)


def test_criterion_02_hom_graded_ranks():
    records = V.suite_homrank(make_calculus("A2"))
    report(2, "Hom graded ranks v, 1+v^2, 1+2v^2+v^4", records)


def test_criterion_03_relation_suite():
    records = V.suite_relations(make_calculus("A2"), degree_bound=12)
    report(3, "relation suite (barbell, needle, Frobenius, BsBs)", records)


def test_criterion_04_grothendieck_identities():
    records = V.suite_groth(make_calculus("A2"))
    records += V.suite_groth(make_calculus("B2"), rank_only=True)
    report(4, "Grothendieck identities (A2 complexes, B2 rank mode)", records)


def test_criterion_05_convolution_inverses():
    records = V.suite_convolution_inverses(make_calculus("A2"))
    report(5, "convolution inverses std_w * costd_{w^-1} ~ unit (A2)", records)


def test_criterion_06_hom_dn_table():
    records = V.suite_hom_dn(make_calculus("A2"), window=4)
    report(6, "standard/costandard Hom table, window 4 (A2)", records)


def test_criterion_07_perversity():
    records = V.suite_perverse(make_calculus("A2"))
    report(7, "perversity of std, costd, std*costd, B_s; shifts (A2)", records)


def test_criterion_08_simple_candidates():
    records = V.suite_simples(make_calculus("A2"))
    report(8, "simple candidates at e, s, t, w0 with KL char (A2)", records)


def test_criterion_09_standard_homs_table():
    records = V.suite_std_homs(make_calculus("A2"), window=4)
    report(9, "standard-to-standard Hom dimensions (A2)", records)


def test_criterion_10_rex_cones():
    records = V.suite_rexcone(make_calculus("A2"))
    report(10, "rex-move cone supported strictly below (A2)", records)


def test_criterion_11_right_equivariant_layer():
    records = V.suite_re(make_calculus("A2"), window=2)
    report(11, "RE Hom table, full faithfulness, Ringel (A2)", records)


def test_criterion_12_koszul_lemma():
    records = V.suite_koszul(make_realization("A2"), trials=50)
    report(12, "Koszul H^0 lemma on 50 randomized complexes", records)


def test_criterion_13_tilting_character():
    records = []
    for name in ("A2", "B2"):
        records += V.suite_tilting_char(make_system(name))
    report(13, "big tilting character identity (A2, B2)", records)
