from fractions import Fraction

import mpmath
import pytest

from eisenpole.characters import AffLin
from eisenpole.errors import InconclusiveError, PreconditionError
from eisenpole.laurent import (ONE, LaurentPoly, NumericBackend, R_ATOM, SymPoly, c_atom, certify,
                               leading_atom, nonvanishing_assumptions, pole_order, product_expansion,
                               z_atom, zeta_expand)

Q = Fraction


@pytest.fixture(scope="module")
def backend():
    return NumericBackend(60)


def xi(s):
    return mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s)


def test_pole_expansion_scales():
    # zeta(3s - 1/2) at s = 1/2 has argument 1 + 3h
    e = zeta_expand(AffLin.make(3, Q(-1, 2)), Q(1, 2), 2)
    assert e.coefficient(-1) == SymPoly.atom(c_atom(-1), Q(1, 3))
    assert e.coefficient(0) == SymPoly.atom(c_atom(0))
    assert e.coefficient(2) == SymPoly.atom(c_atom(2), 9)
    with pytest.raises(PreconditionError):
        e.coefficient(3)


def test_reflected_expansion():
    # zeta(-2s) at s = 0 reflects to zeta(1 + 2s)
    e = zeta_expand(AffLin.make(-2, 0), 0, 1)
    assert e.coefficient(-1) == SymPoly.atom(c_atom(-1), Q(1, 2))
    assert e.coefficient(1) == SymPoly.atom(c_atom(1), 2)


def test_regular_point_and_half():
    e = zeta_expand(AffLin.make(1, 1), 1, 2)
    assert e.coefficient(0) == SymPoly.atom(z_atom(2, 0))
    assert e.coefficient(1) == SymPoly.atom(z_atom(2, 1))
    # xi is even about 1/2
    h = zeta_expand(AffLin.make(1, 0), Q(1, 2), 3)
    assert h.coefficient(1).is_zero() and h.coefficient(3).is_zero()


def test_atom_validation():
    with pytest.raises(ValueError):
        z_atom(Q(1, 4), 0)
    with pytest.raises(ValueError):
        c_atom(-2)


def test_multiplication_truncates():
    a = zeta_expand(AffLin.make(1, 0), 1, 2)  # order 2, low -1
    b = zeta_expand(AffLin.make(2, -1), 1, 0)  # zeta(2s-1), order 0, low -1
    p = a * b
    assert p.low == -2
    assert p.order == -1
    assert p.coefficient(-2) == SymPoly.monomial([R_ATOM, R_ATOM], Q(1, 2))


def test_product_target_is_exact(backend):
    args = [AffLin.make(2, -1), AffLin.make(1, 0), AffLin.make(3, Q(-1, 2))]
    series = product_expansion(args, 1, 3)
    assert series.order >= 3
    with mpmath.workdps(80):
        h = mpmath.mpf(10) ** -8
        direct = backend.zeta_product(args, [], 1 + h)
        approx = backend.evaluate_series(series, h)
        # truncation error is O(h^4)
        assert abs(direct - approx) < mpmath.mpf(10) ** -25


def test_c0_closed_form(backend):
    with mpmath.workdps(60):
        expected = (mpmath.euler - mpmath.log(4 * mpmath.pi)) / 2
        assert abs(backend.atom(c_atom(0)) - expected) < mpmath.mpf(10) ** -50
        assert abs(backend.atom(R_ATOM) - 1) < mpmath.mpf(10) ** -50


@pytest.mark.parametrize("a,j", [(2, 0), (2, 1), (Q(3, 2), 2), (Q(7, 2), 1), (Q(1, 2), 2)])
def test_regular_atoms_against_derivatives(backend, a, j):
    with mpmath.workdps(40):
        expected = mpmath.diff(xi, mpmath.mpf(a.numerator) / a.denominator if isinstance(a, Q) else a, j) \
            / mpmath.factorial(j)
        assert abs(backend.atom(z_atom(a, j)) - expected) < mpmath.mpf(10) ** -30 * max(1, abs(expected))


@pytest.mark.slow
def test_quad_method_agrees():
    quad, step = NumericBackend(30, "quad"), NumericBackend(30)
    assert abs(quad.atom(c_atom(1)) - step.atom(c_atom(1))) < mpmath.mpf(10) ** -30


def test_precision_floor():
    with pytest.raises(PreconditionError):
        NumericBackend(20)


def test_symbolic_text():
    p = SymPoly.monomial([c_atom(-1), c_atom(0), z_atom(2, 0)], Q(1, 8))
    assert str(p) == "1/8 c_{-1} c_0 zeta(2)_0"
    assert p.latex() == "\\frac{1}{8} c_{-1} c_{ 0 } \\zeta( 2 )_{ 0 }"
    assert (p - p).is_zero()
    assert (p * ONE) == p


def test_laurent_latex():
    e = zeta_expand(AffLin.make(4, -1), Q(1, 2), 1)
    assert e.latex() == ("\\frac{\\frac{1}{4} c_{-1}}{(s- \\frac{1}{2} )} + c_{ 0 } "
                         "+ 4 c_{ 1 }(s- \\frac{1}{2} ) + \\dots")


def test_pole_order_and_certificate(backend):
    s0 = Q(1, 4)
    series = product_expansion([AffLin.make(4, 0), AffLin.make(4, 1)], s0, 0)
    po = pole_order(series, backend)
    assert po.order == 1
    assert po.leading == SymPoly.monomial([R_ATOM, z_atom(2, 0)], Q(1, 4))
    assert po.certificate.certified and po.certificate.kind == "monomial"
    with pytest.raises(InconclusiveError):
        pole_order(LaurentPoly(s0, {}, 2), backend)


def test_sum_certificate_uses_numeric_value(backend):
    lead = SymPoly.atom(c_atom(0)) + SymPoly.const(1)
    cert = certify(lead, backend)
    assert cert.kind == "sum" and cert.certified
    with mpmath.workdps(60):
        assert abs(mpmath.mpf(cert.numeric_value) - (backend.atom(c_atom(0)) + 1)) < mpmath.mpf(10) ** -25
    unchecked = certify(lead, numeric=False)
    assert not unchecked.certified


def test_assumptions_and_leading_atom():
    lead = leading_atom(AffLin.make(2, Q(-1, 2)), Q(1, 2))
    assert lead == SymPoly.atom(z_atom(Q(1, 2), 0))
    assert nonvanishing_assumptions(lead) == ["zeta(1/2) != 0"]
    assert leading_atom(AffLin.make(4, 0), Q(1, 4)) == SymPoly.atom(R_ATOM, Q(1, 4))
