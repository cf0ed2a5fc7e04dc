import pytest
from hypothesis import given, settings, strategies as st

from helpers import polynomials
from mfcalc.groebner import (
    CriticalValueNonzero,
    NotIsolated,
    buchberger,
    leading_term,
    milnor_data,
)
from mfcalc.poly import Polynomial, WeightSystem

x, y = Polynomial.var(2, 0), Polynomial.var(2, 1)
X, Y, Z = (Polynomial.var(3, i) for i in range(3))


def s_poly(f, g, order):
    mf, cf = leading_term(f, order)
    mg, cg = leading_term(g, order)
    lcm = tuple(max(a, b) for a, b in zip(mf, mg))
    a = Polynomial.monomial(tuple(l - e for l, e in zip(lcm, mf)), 1 / cf)
    b = Polynomial.monomial(tuple(l - e for l, e in zip(lcm, mg)), 1 / cg)
    return a * f - b * g


@pytest.mark.parametrize(
    "w, mu",
    [
        (x * y, 1),
        (x ** 4 + y ** 2, 3),
        (x * x * y + y ** 3, 4),
        (x ** 3 + y ** 4, 6),
        (x ** 3 + x * y ** 3, 7),
        (x ** 3 + y ** 5, 8),
        (x ** 3 + y ** 3, 4),
        (X * X + Y * Y + Z * Z, 1),
        (X * Y * Z + X ** 3 + Y ** 3 + Z ** 3, 8),
    ],
)
def test_milnor_numbers(w, mu):
    assert milnor_data(w).mu == mu


@pytest.mark.parametrize("order", ["grevlex", "lex"])
def test_groebner_criterion(order):
    gens = [x ** 3 + x * y ** 3, x * x * y - y ** 4 + x, y ** 5 - x * y]
    gb = buchberger(gens, order)
    for g in gens:
        assert gb.contains(g)
    G = gb.generators
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            assert gb.normal_form(s_poly(G[i], G[j], order)).is_zero()


@settings(max_examples=40, deadline=None)
@given(polynomials(2, max_deg=2, max_terms=3), polynomials(2, max_deg=2, max_terms=3), polynomials(2))
def test_normal_form_properties(f, g, h):
    if f.is_zero() or g.is_zero():
        return
    gb = buchberger([f, g])
    r = gb.normal_form(h)
    assert gb.normal_form(r) == r
    assert gb.contains(h * f + g)
    assert gb.normal_form(h + f * h) == r


def test_milnor_basis_and_hessian():
    ws = WeightSystem((1, 1), 3)
    md = milnor_data(x ** 3 + y ** 3, ws)
    assert md.basis == ((0, 0), (1, 0), (0, 1), (1, 1))
    assert md.socle_degree == 2
    # hess = 36 xy
    assert md.hessian_nf == (x * y).scale(36)
    assert md.product_formula() == 4


def test_not_isolated():
    with pytest.raises(NotIsolated):
        milnor_data(x * x * y)
    with pytest.raises(ValueError):
        milnor_data(x * y + 1)


def test_nonzero_critical_value():
    # critical points of x^3 - 3x lie at x = +-1, where w = -+2
    w = Polynomial.var(1, 0) ** 3 - Polynomial.var(1, 0).scale(3)
    with pytest.raises(CriticalValueNonzero):
        milnor_data(w)


def test_graded_consistency():
    with pytest.raises(ValueError):
        milnor_data(x * x + y ** 3, WeightSystem((1, 1), 2))
