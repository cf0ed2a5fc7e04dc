import random

import pytest
from hypothesis import given, settings, strategies as st

from mfcalc import hkr
from mfcalc.forms import DifferentialForm, differential
from mfcalc.mf import LwElement
from mfcalc.poly import Polynomial

x, y = Polynomial.var(2, 0), Polynomial.var(2, 1)
one = Polynomial.const(2, 1)
T = hkr.BarElement.tensor

POTENTIALS = {
    "0": Polynomial.zero(2),
    "xy": x * y,
    "x3+y3": x ** 3 + y ** 3,
}


def test_b_by_hand():
    assert hkr.bar_b(T([x, y, x])) == T([x * y, x]) - T([x, y * x])
    assert hkr.bar_b(T([x, y])).is_zero()


def test_Bw_by_hand():
    w = x * y
    assert hkr.bar_Bw(T([x, y]), w) == T([x, w, y])
    assert hkr.bar_Bw(T([x, y, one]), w) == T([x, w, y, one]) - T([x, y, w, one])


def test_hkr_by_hand():
    assert hkr.i_hkr(T([one, x, y, one])) == DifferentialForm.volume(2)
    assert hkr.i_hkr(T([y, x, x])) == DifferentialForm(2, {(0,): x * y})
    assert hkr.i_hkr(T([x, x, one])) == DifferentialForm(2, {(0,): x})


def test_normalization_is_needed():
    # on length 1, i_hkr B_w = 2 dw ^ i_hkr, and the 1/m! scaling absorbs it
    w = x * y
    xi1 = T([one, x, one])
    assert hkr.i_hkr(hkr.bar_Bw(xi1, w)) == differential(w).wedge(hkr.i_hkr(xi1)).scale(2)
    assert hkr.i_hkr_normalized(hkr.bar_Bw(xi1, w) + hkr.bar_b(xi1)) == differential(w).wedge(hkr.i_hkr_normalized(xi1))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(sorted(POTENTIALS)))
def test_identities_on_random_tensors(seed, wname):
    rng = random.Random(seed)
    w = POTENTIALS[wname]
    xi = hkr.random_bar(rng, 2, 4)
    D = lambda e: hkr.bar_b(e) + hkr.bar_Bw(e, w)
    assert hkr.bar_b(hkr.bar_b(xi)).is_zero()
    assert not hkr.diagonal(D(D(xi)))
    assert hkr.i_hkr_normalized(D(xi)) == differential(w).wedge(hkr.i_hkr_normalized(xi))
    assert hkr.lw_residual(hkr.random_lw(rng, 2), xi, w).is_zero()


def test_vw_term_is_needed():
    w = x * y
    v = LwElement((one, Polynomial.zero(2)), Polynomial.zero(2))  # d/dx, v(w) = y
    xi = T([one, x])
    D = lambda e: hkr.bar_b(e) + hkr.bar_Bw(e, w)
    naive = D(hkr.lw_action(v, xi)) - hkr.lw_action(v, D(xi))
    assert not naive.is_zero()
    assert hkr.lw_residual(v, xi, w).is_zero()


@pytest.mark.parametrize("n, w", [(1, Polynomial.var(1, 0) ** 3), (3, Polynomial.var(3, 0) * Polynomial.var(3, 1) * Polynomial.var(3, 2) + Polynomial.var(3, 2) ** 2)])
def test_verify_chain_maps(n, w):
    rep = hkr.verify_chain_maps(n, w, trials=40, seed=3)
    assert rep.ok
    assert rep.to_json()["passed"] == {"b_squared": 40, "total_squared": 40, "chain_map": 40, "lw_closed": 40}


def test_verify_chain_maps_arguments():
    with pytest.raises(ValueError):
        hkr.verify_chain_maps(2, x * y, 1, max_len=6)
    with pytest.raises(ValueError):
        hkr.verify_chain_maps(3, x * y, 1)
