from hypothesis import given, settings, strategies as st

from helpers import polynomials
from mfcalc import linalg as la
from mfcalc.forms import (
    DifferentialForm,
    SuperForm,
    signed_products,
    signed_products_vanish,
    str_product,
    supercommutator,
)
from mfcalc.poly import Polynomial

N = 3
R0, R1 = 1, 2
SIZE = R0 + R1

indices = st.sets(st.integers(0, N - 1), max_size=N).map(lambda s: tuple(sorted(s)))
small = polynomials(N, max_deg=2, max_terms=2)


@st.composite
def forms(draw):
    comps = draw(st.dictionaries(indices, small, max_size=3))
    return DifferentialForm(N, comps)


@st.composite
def superforms(draw):
    terms = {}
    for idx in draw(st.lists(indices, max_size=2, unique=True)):
        m = [[draw(small) if draw(st.booleans()) else Polynomial.zero(N) for _ in range(SIZE)] for _ in range(SIZE)]
        terms[idx] = la.as_matrix(m)
    return SuperForm(N, R0, R1, terms)


def form_degree(a):
    (k,) = a.degrees() or [0]
    return k


@given(forms(), forms(), forms())
def test_wedge_associative(a, b, c):
    assert a.wedge(b).wedge(c) == a.wedge(b.wedge(c))


@given(indices, indices, small, small)
def test_wedge_graded_commutative(i, j, p, q):
    a = DifferentialForm(N, {i: p})
    b = DifferentialForm(N, {j: q})
    sign = -1 if (len(i) * len(j)) % 2 else 1
    assert a.wedge(b) == b.wedge(a).scale(sign)


@given(forms())
def test_d_squared(a):
    assert a.d().d().is_zero()


@given(indices, small, forms())
def test_d_leibniz(i, p, b):
    a = DifferentialForm(N, {i: p})
    sign = -1 if len(i) % 2 else 1
    assert a.wedge(b).d() == a.d().wedge(b) + a.wedge(b.d()).scale(sign)


def test_basis_sign():
    assert DifferentialForm.basis(2, [1, 0]) == DifferentialForm.basis(2, [0, 1]).scale(-1)
    assert DifferentialForm.basis(2, [1, 1]).is_zero()


def test_koszul_sign_in_products():
    # (dx (x) a)(dy (x) b) = -dx^dy (x) ab when a is odd
    one, z = Polynomial.const(2, 1), Polynomial.zero(2)
    a = SuperForm.from_matrix([[z, one], [z, z]], 1, 1, (0,))
    b = SuperForm.from_matrix([[z, z], [one, z]], 1, 1, (1,))
    assert (a * b).terms == {(0, 1): ((-one, z), (z, z))}
    # an even matrix commutes past dy
    e = SuperForm.from_matrix([[one, z], [z, z]], 1, 1, (0,))
    f = SuperForm.from_matrix([[one, z], [z, z]], 1, 1, (1,))
    assert (e * f).terms == {(0, 1): ((one, z), (z, z))}


@settings(max_examples=40, deadline=None)
@given(superforms(), superforms(), superforms())
def test_superform_associative(u, v, w):
    assert (u * v) * w == u * (v * w)


@settings(max_examples=40, deadline=None)
@given(superforms(), superforms())
def test_supertrace_kills_supercommutators(u, v):
    assert supercommutator(u, v).supertrace().is_zero()


@settings(max_examples=40, deadline=None)
@given(superforms(), superforms())
def test_str_product(u, v):
    assert str_product(u, v) == (u * v).supertrace()


@settings(max_examples=30, deadline=None)
@given(superforms(), superforms(), superforms())
def test_signed_products(u, v, w):
    even, odd = u.parity_parts()
    expected = u * v - (even - odd) * w
    items = [(1, u, v, False), (-1, u, w, True)]
    assert signed_products(items) == expected
    assert signed_products_vanish(items) == expected.is_zero()


@given(superforms())
def test_parity_parts_recombine(u):
    e, o = u.parity_parts()
    assert e + o == u
    assert e.parity() in (0, None) and o.parity() in (1, None)
