from collections import Counter
from fractions import Fraction

import mpmath
import pytest

from conftest import datum, report
from oracles import direct_class_value
from reference_data import APPENDIX_F4_P1, POLE_TABLES
from eisenpole.characters import d_P
from eisenpole.errors import ConfigError
from eisenpole.laurent import SymPoly, c_atom, default_backend, z_atom
from eisenpole.orbits import DISTINGUISHED, derive
from eisenpole.poles import (UNVERIFIED_NOTE, appendix_proof, class_order, equivalence_classes, members,
                             pole_report, potential_poles)

QUICK = [("G2", 1), ("G2", 2)] + [("F4", i) for i in range(1, 5)]
E6 = [("E6", i) for i in range(1, 7)]


def table_rows(label, i):
    return [(Fraction(s), order, l2, orbit) for s, order, l2, orbit in POLE_TABLES[label][i]]


@pytest.mark.parametrize("label,i", QUICK + E6)
def test_pole_table(label, i):
    rep = report(label, i)
    got = {e.s0: (e.order, e.square_integrable, e.orbit) for e in rep.entries}
    for s0, order, l2, orbit in table_rows(label, i):
        assert got[s0] == (order, l2, orbit), s0
    if label != "G2":
        assert sorted(got) == [r[0] for r in table_rows(label, i)]
    else:
        assert rep.poles == {r[0]: r[1] for r in table_rows(label, i)}
    assert not rep.inconclusive


@pytest.mark.slow
@pytest.mark.parametrize("i", range(1, 8))
def test_pole_table_e7(i):
    rep = report("E7", i)
    assert [(e.s0, e.order, e.square_integrable, e.orbit) for e in rep.entries] == table_rows("E7", i)


@pytest.mark.parametrize("label,i", QUICK + E6)
def test_d_P_consistency(label, i):
    rep = report(label, i)
    for e in rep.entries:
        assert e.order <= e.d_P
        if e.order:
            assert e.order == e.d_P


@pytest.mark.parametrize("label", ["G2", "F4", "E6", "E7", "E8"])
def test_classes_partition_cosets(label):
    d = datum(label)
    for i in d.nodes:
        if label in ("E7", "E8") and i not in (1, d.rank):
            continue
        pool = members(d, i)
        words = Counter(m.word for m in pool)
        assert len(words) == len(pool) == len(d.coset_representatives(i))
        for s0 in potential_poles(d, i):
            classes = equivalence_classes(d, i, s0, pool)
            seen = Counter(m.word for c in classes for m in c.members)
            assert seen == words
            images = [c.image for c in classes]
            assert len(set(images)) == len(images)


def test_potential_poles_bounded_by_half():
    for label in ("G2", "F4", "E6"):
        d = datum(label)
        for i in d.nodes:
            pts = potential_poles(d, i)
            assert pts[-1] == Fraction(1, 2) and pts[0] > 0


@pytest.mark.parametrize("label", ["G2", "F4", "E6", "E7", "E8"])
def test_orbit_table_matches_derivation(label):
    assert derive(datum(label)) == DISTINGUISHED[label]


def test_appendix_golden_class(f4):
    s0 = Fraction(1, 4)
    classes = {c.exponent: c for c in equivalence_classes(f4, 1, s0)}
    cls = classes[(-5, -9, -13, -7)]
    assert cls.max_individual() == 2
    co = class_order(f4, cls)
    assert co.order == 1
    assert co.leading == SymPoly.monomial([c_atom(-1), c_atom(0), z_atom(2, 0)], Fraction(1, 8))
    assert co.certificate.certified
    assert report("F4", 1).entry(s0).order == 1


def test_appendix_factor_table(f4):
    s0 = Fraction(1, 4)
    pool = members(f4, 1)
    assert len(pool) == len(APPENDIX_F4_P1)
    by_element = {f4.element(m.word): m for m in pool}
    for word, order, exp, num in APPENDIX_F4_P1:
        m = by_element[f4.element(list(word))]
        assert m.individual_order(s0) == order
        assert f4.to_root_basis(m.image.at(s0)) == exp
        assert tuple(sorted(str(p) for p in m.numerator)) == num


def test_appendix_proof_text(f4):
    text = appendix_proof(f4, 1, Fraction(1, 4))
    assert "admits a pole of order $ 1 $" in text
    assert "\\left[-5, -9, -13, -7\\right]" in text
    assert "\\frac{\\frac{1}{8} c_{-1} c_{ 0 } \\zeta( 2 )_{ 0 }}{(s- \\frac{1}{4} )} + O(1)" in text
    assert text.count("\\frac{1}{4}$ &") == 24
    assert "L^{2}" in text


def test_appendix_holomorphic_point(f4):
    text = appendix_proof(f4, 1, Fraction(3, 8))
    assert "no pole" in text


# ---- numeric agreement ------------------------------------------------------------

@pytest.mark.parametrize("label,i", QUICK + [("E6", 4)])
def test_certificates_match_direct_evaluation(label, i):
    d = datum(label)
    rep = report(label, i)
    checked = 0
    for e in rep.entries:
        for cls in equivalence_classes(d, i, e.s0):
            co = class_order(d, cls)
            if co.order == 0:
                continue
            value = default_backend().evaluate(co.leading)
            assert co.certificate.numeric_value == mpmath.nstr(value, 30)
            direct = direct_class_value(cls, co.order)
            with mpmath.workdps(60):
                assert abs(direct - value) < mpmath.mpf(10) ** -30 * max(1, abs(value))
            checked += 1
    assert checked


def test_certificate_precision_at_least_fifty_digits():
    e = report("F4", 2).entry(Fraction(1, 10))
    assert e.classes[0].certificate.digits >= 50


# ---- other properties ---------------------------------------------------------------


@pytest.mark.parametrize("label", ["A3", "A4"])
def test_type_a_poles_are_simple(label):
    d = datum(label)
    n = d.rank + 1
    for i in d.nodes:
        rep = pole_report(d, i)
        assert set(rep.poles.values()) == {1}
        for s0 in rep.poles:
            a = (Fraction(1, 2) - s0) * n
            assert a.denominator == 1 and 0 <= a
        assert len(rep.poles) == min(i, n - i)


def test_conditional_entries_carry_assumptions():
    e = report("E6", 4).entry(Fraction(1, 7))
    assert e.order == 1
    assert any(a.startswith("zeta(1/2)") for a in e.assumptions)


def test_e8_report_is_flagged():
    d = datum("E8")
    rep = pole_report(d, 8, numeric=False)
    assert rep.notes[0] == UNVERIFIED_NOTE
    assert UNVERIFIED_NOTE not in report("F4", 1).notes


def test_thread_count_does_not_change_report():
    d = datum("F4")
    one = pole_report(d, 3, threads=1).to_dict()
    four = pole_report(d, 3, threads=4).to_dict()
    assert one == four


def test_report_dict_is_plain_data():
    import json
    data = report("G2", 2).to_dict()
    assert json.loads(json.dumps(data)) == data
    assert data["entries"][0]["s0"] == "1/6" or any(x["s0"] == "1/6" for x in data["entries"])


def test_bad_parabolic_rejected(g2):
    with pytest.raises(ConfigError):
        potential_poles(g2, 3)


def test_d_P_at_golden_point(f4):
    assert d_P(f4, 1, Fraction(1, 4)) == 1
