import random
from fractions import Fraction

import pytest

from conftest import datum
from reference_data import CONSTANTS
from eisenpole.characters import (MINUS_HALF, PLUS_HALF, AffLin, b_matrix, chi_at, chi_family, d_P,
                                  delta_B, delta_maximal, format_affine, n_counts, n_epsilon)
from eisenpole.errors import ConfigError


def test_affine_text():
    assert str(AffLin.make(8, 3)) == "8s+3"
    assert format_affine(Fraction(-1, 2), Fraction(0)) == "(-1/2)s"
    assert AffLin.make(2, Fraction(1, 2)).reflect() == AffLin.make(-2, Fraction(1, 2))
    assert AffLin.make(3, 1)(Fraction(1, 3)) == 2


@pytest.mark.parametrize("label", ["G2", "F4", "E6", "E7", "E8"])
def test_delta_B_is_twice_rho(label):
    d = datum(label)
    assert delta_B(d) == tuple(2 * x for x in d.rho)


def test_g2_modular_characters(g2):
    assert delta_maximal(g2, 1) == (5, 0)
    assert delta_maximal(g2, 2) == (0, 3)
    assert delta_B(g2) == (2, 2)


@pytest.mark.parametrize("label", ["F4", "E6", "E7", "E8"])
def test_b_matrix(label):
    assert [list(r) for r in b_matrix(datum(label))] == CONSTANTS[label]["B"]


def test_conventions_differ_by_sign(f4):
    # minus_half(s) = -plus_half(-s)
    s = Fraction(3, 7)
    assert chi_at(f4, 2, s, MINUS_HALF) == tuple(-x for x in chi_at(f4, 2, -s, PLUS_HALF))
    assert str(chi_family(f4, 1, PLUS_HALF).pairing((1, 0, 0, 0))) == "8s+3"
    with pytest.raises(ConfigError):
        chi_family(f4, 1, "other")


def test_trivial_point_is_rho(f4):
    # s = 1/2 in minus_half is rho
    for i in f4.nodes:
        assert chi_at(f4, i, Fraction(1, 2)) == f4.rho


def test_d_P_examples(f4, g2):
    assert d_P(f4, 2, Fraction(1, 10)) == 3
    assert d_P(g2, 2, Fraction(1, 6)) == 2
    # at the trivial point N_1 is the simple roots and N_0 is empty
    for i in f4.nodes:
        assert d_P(f4, i, Fraction(1, 2)) == 1


@pytest.mark.parametrize("label", ["G2", "F4", "E6", "E7", "E8"])
def test_n_epsilon_weyl_invariance(label):
    d = datum(label)
    rng = random.Random(label)
    for _ in range(1000 // 5):
        chi = tuple(Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])) for _ in d.nodes)
        w = d.element([rng.choice(list(d.nodes)) for _ in range(rng.randrange(20))])
        moved = d.apply(w, chi)
        eps = Fraction(rng.randint(-4, 4), rng.choice([1, 2, 3]))
        before = len(n_epsilon(d, chi, eps)) + len(n_epsilon(d, chi, -eps))
        after = len(n_epsilon(d, moved, eps)) + len(n_epsilon(d, moved, -eps))
        assert before == after


def test_n_counts_sum(f4):
    chi = chi_at(f4, 1, Fraction(1, 4))
    assert sum(n_counts(f4, chi).values()) == 24
