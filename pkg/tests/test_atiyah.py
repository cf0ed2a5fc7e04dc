import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import rand_construction
from mfcalc import atiyah as at
from mfcalc import linalg as la
from mfcalc import mf as mfm
from mfcalc.corpus import session_for
from mfcalc.forms import DifferentialForm
from mfcalc.groebner import milnor_data
from mfcalc.mf import FreeComplex
from mfcalc.poly import Polynomial

x, y = Polynomial.var(2, 0), Polynomial.var(2, 1)
seeds = st.integers(0, 10 ** 6)


def test_xy_by_hand():
    E = mfm.koszul([x], [y])
    A = at.atiyah_rep(E).one_form
    one, z = Polynomial.const(2, 1), Polynomial.zero(2)
    assert (A * A).terms == {(0, 1): ((-one, z), (z, one))}
    assert at.chern_form(E) == DifferentialForm(2, {(): one.scale(0), (0, 1): -one})
    assert at.chern(E).g == -one


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_chain_identity_random(seed):
    rng = random.Random(seed)
    E, _ = rand_construction(rng, n=rng.randint(1, 2))
    g = at.random_connection(E, rng)
    assert at.chain_identity_holds(E, at.atiyah_rep(E, g))


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_series_equals_iterated(seed):
    rng = random.Random(seed)
    E, _ = rand_construction(rng, n=rng.randint(1, 2))
    g = at.random_connection(E, rng)
    assert at.exp_at_series(E, g) == at.exp_at_iterated(E, g)


@pytest.mark.parametrize(
    "script, name, coeffs",
    [
        ("xy", "E", {"1": "-1"}),
        ("xy", "S", {"1": "1"}),
        ("cubic", "E", {"x": "3", "y": "-3"}),
        ("cubic", "K", {}),
        ("d4", "E", {"x": "2"}),
        ("e7", "E", {"y^2": "-3"}),
        ("knorrer-cubic", "E", {"x": "-3", "y": "3"}),
    ],
)
def test_chern_values(script, name, coeffs):
    sess = session_for(script)
    c = at.chern(sess.mfs[name], md=sess.md)
    assert c.to_json(sess.names)["coefficients"] == coeffs


def test_gauge_invariance_cubic():
    sess = session_for("cubic")
    E = sess.mfs["T"]
    rng = random.Random(7)
    basis = at.cocycle_basis(E, sess.md)
    ref = [at.boundary_bulk(E, c, p, md=sess.md) for c, p in basis]
    for _ in range(4):
        g = at.random_connection(E, rng)
        assert [at.boundary_bulk(E, c, p, g, sess.md) for c, p in basis] == ref


def test_closedness_with_cocycles():
    sess = session_for("d4")
    E = sess.mfs["F"]
    g = at.random_connection(E, random.Random(3))
    expA = at.exp_at_series(E, g)
    for c, _ in at.cocycle_basis(E, sess.md):
        assert at.chain_closed(E, c, expA=expA)
    # a non-cocycle breaks closedness
    n = 2
    off = la.as_matrix([[Polynomial.const(n, 1) if (i, j) == (0, 0) else Polynomial.zero(n) for j in range(E.base.size)] for i in range(E.base.size)])
    assert not at.chain_closed(E, off, expA=expA)
    with pytest.raises(at.NotCocycle):
        at.boundary_bulk(E, off, 0, md=sess.md)


def test_additivity_and_shift():
    sess = session_for("cubic")
    E, K = sess.mfs["E"], sess.mfs["K"]
    md = sess.md
    assert at.chern(mfm.direct_sum(E, K), md=md) == at.chern(E, md=md) + at.chern(K, md=md)
    assert at.chern(mfm.shift(E), md=md) == -at.chern(E, md=md)


def test_boundary_bulk_of_monomials():
    # x * id on the rank-one cubic factorization: str(exp(A) x) = x * ch
    sess = session_for("cubic")
    E = sess.mfs["E"]
    md = sess.md
    X = Polynomial.var(2, 0)
    xid = la.matscale(E.base.identity(), X)
    got = at.boundary_bulk(E, xid, 0, md=md)
    assert got.g == md.nf(at.chern(E, md=md).g * X)


def test_lemma_tensor_with_complex():
    E = mfm.koszul([x], [y])
    C = FreeComplex(2, (1, 1), (((x + y,),),))
    r = at.lemma_tensor_check(E, C)
    assert r.ok and r.chain_equal and r.class_equal


def test_connection_must_be_even():
    E = mfm.koszul([x], [y])
    one, z = Polynomial.const(2, 1), Polynomial.zero(2)
    with pytest.raises(ValueError):
        at.Connection((((z, one), (z, z)), ((z, z), (z, z))), 1, 1)


def test_sigma_is_frozen():
    assert at.SIGMA_CH == 1
    assert milnor_data(x * y).mu == 1
    assert Fraction(at.chern(mfm.koszul([x], [y])).g.constant_term()) == -1
