"""Atiyah-class representatives, exp(at(E)) two ways, and the boundary-bulk map.

For an even connection d + Gamma on the trivialized module E0 + E1 the
one-form part of the representative is

    A = sum_i dx_i (x) (d_i delta + Gamma_i delta - delta Gamma_i),

which is -[nabla, delta] written as a matrix of one-forms and moved into
Omega (x) End(E) with forms on the left (the odd matrix picks up a sign).
It satisfies [delta, A] = -dw (x) I, so exp(A) is closed for [delta, .] + dw^.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import List, Optional, Sequence, Tuple

from . import linalg as la
from .derham import HHClass, check_closed, reduce
from .forms import DifferentialForm, SuperForm, differential, signed_products, signed_products_vanish, str_product
from .groebner import MilnorData, milnor_data
from .linalg import PolyMatrix
from .mf import AnyMF, FreeComplex, MatrixFactorization, _base, is_cocycle, tensor_with_complex
from .poly import Polynomial

# Global sign relating exp(A) to the Chern character; see the README.
SIGMA_CH = 1


class NotCocycle(ValueError):
    pass


class ChainIdentityFailed(AssertionError):
    pass


@dataclass(frozen=True)
class Connection:
    """Gamma = sum_i dx_i (x) gamma[i], each gamma[i] block diagonal."""

    gamma: Tuple[PolyMatrix, ...]
    r0: int
    r1: int

    def __post_init__(self):
        for g in self.gamma:
            for i, row in enumerate(g):
                for j, p in enumerate(row):
                    if (i < self.r0) != (j < self.r0) and not p.is_zero():
                        raise ValueError("connection matrices must be even (block diagonal)")

    @classmethod
    def trivial(cls, E: AnyMF) -> "Connection":
        B = _base(E)
        return cls(tuple(la.zeros(B.n, B.size, B.size) for _ in range(B.n)), B.r0, B.r1)

    def as_superform(self) -> SuperForm:
        n = len(self.gamma)
        return SuperForm(n, self.r0, self.r1, {(i,): g for i, g in enumerate(self.gamma)})


@dataclass(frozen=True)
class AtiyahRep:
    """(id_E, A): scalar part is the identity, ``one_form`` is A."""

    one_form: SuperForm

    @property
    def scalar_part(self) -> str:
        return "id"


def _random_poly(rng: random.Random, n: int, max_deg: int, terms: int = 3) -> Polynomial:
    out = {}
    for _ in range(terms):
        e = [0] * n
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(n)] += 1
        out[tuple(e)] = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
    return Polynomial(n, out)


def random_connection(E: AnyMF, rng: random.Random, max_deg: int = 1) -> Connection:
    B = _base(E)
    n, size = B.n, B.size
    z = Polynomial.zero(n)
    mats = []
    for _ in range(n):
        m = [[z] * size for _ in range(size)]
        for i in range(size):
            for j in range(size):
                if (i < B.r0) == (j < B.r0) and rng.random() < 0.6:
                    m[i][j] = _random_poly(rng, n, max_deg)
        mats.append(la.as_matrix(m))
    return Connection(tuple(mats), B.r0, B.r1)


def delta_form(E: AnyMF) -> SuperForm:
    B = _base(E)
    return SuperForm.from_matrix(B.delta(), B.r0, B.r1) if B.size else SuperForm(B.n, 0, 0)


def atiyah_rep(E: AnyMF, gamma: Optional[Connection] = None) -> AtiyahRep:
    B = _base(E)
    n = B.n
    if gamma is None:
        gamma = Connection.trivial(B)
    if (gamma.r0, gamma.r1) != (B.r0, B.r1) or len(gamma.gamma) != n:
        raise ValueError("connection shape does not match the factorization")
    d = B.delta()
    mats = []
    for i in range(n):
        di = tuple(tuple(p.diff(i) for p in row) for row in d)
        g = gamma.gamma[i]
        comm = la.matsub(la.matmul(g, d, n), la.matmul(d, g, n))
        mats.append(la.matadd(di, comm))
    return AtiyahRep(SuperForm(n, B.r0, B.r1, {(i,): m for i, m in enumerate(mats)}))


def chain_identity_holds(E: AnyMF, rep: AtiyahRep) -> bool:
    """[delta, A] == -dw (x) I."""
    B = _base(E)
    from .forms import supercommutator

    lhs = supercommutator(delta_form(B), rep.one_form)
    rhs = -SuperForm.from_form(differential(B.w), B.r0, B.r1)
    return lhs == rhs


def exp_at_series(E: AnyMF, gamma: Optional[Connection] = None) -> SuperForm:
    """sum_{i <= n} A^i / i!."""
    B = _base(E)
    A = atiyah_rep(B, gamma).one_form
    total = SuperForm.scalar(B.n, B.r0, B.r1)
    power = SuperForm.scalar(B.n, B.r0, B.r1)
    for i in range(1, B.n + 1):
        power = power * A
        if power.is_zero():
            break
        total = total + power.scale(Fraction(1, factorial(i)))
    return total


def exp_at_iterated(E: AnyMF, gamma: Optional[Connection] = None) -> SuperForm:
    """n-fold iterate of (id, A) followed by symmetrization and the rescaling
    alpha_i -> alpha_i (n-i)!/n!.

    Each of the 2^n words in {id, A} is multiplied out separately; the words
    with i letters A land in Omega^i and sum to binom(n, i) A^i.
    """
    B = _base(E)
    n = B.n
    A = atiyah_rep(B, gamma).one_form
    one = SuperForm.scalar(n, B.r0, B.r1)
    words = {(): one}
    for _ in range(n):
        nxt = {}
        for word, val in words.items():
            nxt[word + (0,)] = val
            nxt[word + (1,)] = val * A
        words = nxt
    by_degree = [SuperForm(n, B.r0, B.r1) for _ in range(n + 1)]
    for word, val in words.items():
        i = sum(word)
        by_degree[i] = by_degree[i] + val.form_part(i)
    total = SuperForm(n, B.r0, B.r1)
    for i, part in enumerate(by_degree):
        total = total + part.scale(Fraction(factorial(n - i), factorial(n)))
    return total


def cocycle_basis(E: AnyMF, md: Optional[MilnorData] = None) -> List[Tuple[PolyMatrix, int]]:
    """Cocycles (matrix, parity) of End(E): constructor cocycles and f * id for Milnor monomials."""
    B = _base(E)
    n = B.n
    out: List[Tuple[PolyMatrix, int]] = []
    seen = set()

    def add(x, p):
        key = (x, p)
        if key in seen or la.is_zero(x):
            return
        if not is_cocycle(B, x, p):
            raise NotCocycle("constructor produced a non-cocycle")
        seen.add(key)
        out.append((x, p))

    add(B.identity(), 0)
    for x, p in B.cocycles:
        add(x, p)
    if md is not None:
        for m in md.basis:
            if any(m):
                add(la.matscale(B.identity(), Polynomial.monomial(m, 1)), 0)
    return out


def _residual_terms(E: MatrixFactorization, u: SuperForm):
    # delta is odd, so [delta, u] = delta u - (u_even - u_odd) delta
    d = delta_form(E)
    dw = SuperForm.from_form(differential(E.w), E.r0, E.r1)
    return [(1, d, u, False), (-1, u, d, True), (1, dw, u, False)]


def _closedness_residual(E: MatrixFactorization, u: SuperForm) -> SuperForm:
    """([delta, .] + dw ^)(u)."""
    return signed_products(_residual_terms(E, u))


def integrand(E: AnyMF, x: PolyMatrix, gamma: Optional[Connection] = None, expA: Optional[SuperForm] = None) -> SuperForm:
    B = _base(E)
    if expA is None:
        expA = exp_at_series(B, gamma)
    return expA * SuperForm.from_matrix(x, B.r0, B.r1)


def chain_closed(E: AnyMF, x: PolyMatrix, gamma: Optional[Connection] = None, expA: Optional[SuperForm] = None) -> bool:
    B = _base(E)
    return signed_products_vanish(_residual_terms(B, integrand(B, x, gamma, expA)))


def boundary_bulk(
    E: AnyMF,
    x: PolyMatrix,
    parity: int,
    gamma: Optional[Connection] = None,
    md: Optional[MilnorData] = None,
    expA: Optional[SuperForm] = None,
) -> HHClass:
    """Class of str(exp(A) x) in the Milnor ring (times dx_1 ^ ... ^ dx_n)."""
    B = _base(E)
    if not is_cocycle(B, x, parity):
        raise NotCocycle("[delta, x] != 0")
    if md is None:
        md = milnor_data(B.w, getattr(E, "ws", None))
    if expA is None:
        expA = exp_at_series(B, gamma)
    theta = str_product(expA, SuperForm.from_matrix(x, B.r0, B.r1))
    check_closed(theta, B.w)
    return reduce(theta.scale(SIGMA_CH), md, parity)


def chern(E: AnyMF, gamma: Optional[Connection] = None, md: Optional[MilnorData] = None) -> HHClass:
    B = _base(E)
    return boundary_bulk(E, B.identity(), 0, gamma, md)


def chern_form(E: AnyMF, gamma: Optional[Connection] = None) -> DifferentialForm:
    """Chain-level str(exp(A)), before reduction."""
    return exp_at_series(E, gamma).supertrace().scale(SIGMA_CH)


@dataclass(frozen=True)
class TensorCheck:
    ok: bool
    chain_equal: bool
    class_equal: Optional[bool]
    lhs: DifferentialForm
    rhs: DifferentialForm


def lemma_tensor_check(E: MatrixFactorization, F: FreeComplex) -> TensorCheck:
    """str exp(A) of E (x) F against str exp(A_E) ^ str exp(A_F), trivial connections.

    Classes are compared too when the potential has an isolated singularity.
    """
    B = _base(E)
    T = tensor_with_complex(B, F)
    lhs = exp_at_series(T).supertrace()
    rhs = exp_at_series(B).supertrace().wedge(exp_at_series(F.fold()).supertrace())
    chain_equal = lhs == rhs
    class_equal = None
    try:
        md = milnor_data(B.w)
    except ValueError:
        md = None
    if md is not None:
        class_equal = reduce(lhs, md, 0) == reduce(rhs, md, 0)
    ok = chain_equal and class_equal is not False
    return TensorCheck(ok, chain_equal, class_equal, lhs, rhs)
