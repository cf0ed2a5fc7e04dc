"""Shared strategies and builders for the test-suite."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from mfcalc import mf as mfm
from mfcalc.poly import Polynomial


def _cap(e, max_deg):
    out, left = [], max_deg
    for k in e:
        k = min(k, left)
        out.append(k)
        left -= k
    return tuple(out)


def exponents(n, max_deg):
    return st.lists(st.integers(0, max_deg), min_size=n, max_size=n).map(lambda e: _cap(e, max_deg))


def rationals(max_num=5, max_den=3):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


@st.composite
def polynomials(draw, n, max_deg=3, max_terms=4):
    terms = draw(st.dictionaries(exponents(n, max_deg), rationals(), max_size=max_terms))
    return Polynomial(n, terms)


def rand_poly(rng: random.Random, n: int, max_deg: int = 3, terms: int = 2, min_deg: int = 0) -> Polynomial:
    out = {}
    for _ in range(terms):
        d = rng.randint(min_deg, max_deg)
        e = [0] * n
        for _ in range(d):
            e[rng.randrange(n)] += 1
        out[tuple(e)] = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
    return Polynomial(n, out)


def rand_koszul(rng: random.Random, n: int, r: int, max_deg: int = 3):
    a = [rand_poly(rng, n, max_deg, min_deg=1) for _ in range(r)]
    b = [rand_poly(rng, n, max_deg, min_deg=1) for _ in range(r)]
    return mfm.koszul(a, b)


def rand_construction(rng: random.Random, n: int = None, max_deg: int = 3):
    """A random expression tree over koszul/tensor/dual/shift/sum, kept to modest rank."""
    n = n or rng.randint(1, 3)
    E = rand_koszul(rng, n, rng.randint(1, 2), max_deg)
    ops = []
    for _ in range(rng.randint(1, 3)):
        op = rng.choice(["dual", "shift", "sum", "tensor"])
        if op in ("sum", "tensor") and E.size > 4:
            op = rng.choice(["dual", "shift"])
        if op == "dual":
            E = mfm.dual(E)
        elif op == "shift":
            E = mfm.shift(E)
        elif op == "sum":
            # dual(E) factors -w, so the second summand is E or its shift
            E = mfm.direct_sum(E, mfm.shift(E) if rng.random() < 0.5 else E)
        else:
            E = mfm.tensor(E, rand_koszul(rng, n, 1, max_deg))
        ops.append(op)
    return E, ops
