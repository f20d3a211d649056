import random
from collections import Counter
from fractions import Fraction

import pytest

from conftest import datum
from oracles import random_split
from reference_data import CONSTANTS
from eisenpole.characters import PLUS_HALF, AffLin, chi_family
from eisenpole.errors import PreconditionError
from eisenpole.gkfactors import (ZetaConstant, ZetaProduct, c_factor, canonical_zeta_arg, coset_factors,
                                 cocycle_check, residue_factor, verify_denominator_assumption)


@pytest.mark.parametrize("label", ["G2", "F4", "E6", "E7", "E8"])
def test_cocycle_random_splits(label):
    d = datum(label)
    rng = random.Random(label)
    for n in range(200):
        chi = chi_family(d, 1 + n % d.rank, PLUS_HALF)
        w1, w2 = random_split(d, rng)
        assert cocycle_check(d, w1, w2, chi)


def test_cocycle_needs_reduced_split(g2):
    chi = chi_family(g2, 1)
    with pytest.raises(PreconditionError):
        cocycle_check(g2, g2.element([1]), g2.element([1]), chi)


@pytest.mark.parametrize("label,i", [("G2", 1), ("G2", 2), ("F4", 1), ("F4", 3), ("E6", 2)])
def test_incremental_walk_matches_direct_factor(label, i):
    d = datum(label)
    chi = chi_family(d, i, PLUS_HALF)
    walked = list(coset_factors(d, i))
    assert len(walked) == len(d.coset_representatives(i))
    for cf in walked:
        w = cf.element(d)
        direct = c_factor(d, w, chi)
        assert Counter(direct.numerator) == Counter(cf.args)
        assert cf.image.at(Fraction(1, 5)) == d.apply(w, chi.at(Fraction(1, 5)))


def test_reduce_cancels():
    p = AffLin.make(2, 0)
    z = ZetaProduct.from_args([p, p.shift(1)])
    r = z.reduce()
    assert r.numerator == (p,) and r.denominator == (p.shift(2),)
    assert z.same_as(r)
    assert r.latex() == "\\frac{\\zeta(2s)}{\\zeta(2s+2)}"


def test_identity_factor_is_one(g2):
    assert c_factor(g2, g2.element(), chi_family(g2, 1)).latex() == "1"


@pytest.mark.parametrize("label", ["G2", "F4", "E6", "E7", "E8"])
def test_residue_factors(label):
    d = datum(label)
    for i, (r, zetas, word) in CONSTANTS[label]["A"].items():
        expected = ZetaConstant.make(1, r, zetas={Fraction(a): e for a, e in zetas.items()})
        assert residue_factor(d, i) == expected
        if word is not None:
            assert d.element(word) == d.longest_element(d.levi_nodes(i))


def test_residue_text(f4):
    assert str(residue_factor(f4, 1)) == "R^3/(zeta(2)*zeta(4)*zeta(6))"
    e8 = datum("E8")
    assert str(residue_factor(e8, 8)) == "R^7/(zeta(2)*zeta(6)*zeta(8)*zeta(10)*zeta(12)*zeta(14)*zeta(18))"


def test_zeta_constant_algebra():
    a = ZetaConstant.make(Fraction(5, 27), 1, den=[2])
    assert str(a) == "5/27*R/(zeta(2))"
    assert a * a.inverse() == ZetaConstant.make(1)
    assert (a ** 2).r_power == 2
    assert ZetaConstant.make(1, 0, num=[Fraction(-1, 2)]) == ZetaConstant.make(1, 0, num=[Fraction(3, 2)])
    assert a.latex() == "\\frac{5}{27} \\times \\frac{ R } { \\zeta ( 2 ) }"


def test_canonical_arg():
    assert canonical_zeta_arg(Fraction(1, 4)) == Fraction(3, 4)
    assert canonical_zeta_arg(3) == 3
    with pytest.raises(PreconditionError):
        canonical_zeta_arg(0)


@pytest.mark.parametrize("label,i", [("G2", 2), ("F4", 2), ("E6", 4)])
def test_denominator_assumption_holds(label, i):
    from eisenpole.poles import potential_poles
    d = datum(label)
    for s0 in potential_poles(d, i):
        report = verify_denominator_assumption(d, i, s0)
        assert report.ok and report.checked == len(d.coset_representatives(i))
