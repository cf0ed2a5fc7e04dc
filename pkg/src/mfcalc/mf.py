"""Matrix factorizations (ungraded and G_m-graded) and their constructors.

Conventions:

* ``d1`` is the r0 x r1 matrix of delta_1: E1 -> E0, ``d0`` the r1 x r0 matrix of
  delta_0: E0 -> E1.  The full odd differential on E0 + E1 is [[0, d1], [d0, 0]].
* Tensor products use delta_E (x) 1 + sigma (x) delta_F, sigma the parity
  involution of E.  Basis order of E (x) F: even part E0F0, E1F1; odd part
  E0F1, E1F0, each lexicographic in (e, f).
* shift(E) has E[1]_0 = E1, E[1]_1 = E0 and differential -delta.
* dual(E) has d1' = d0^T and d0' = -d1^T (a factorization of -w); dual(dual(E))
  is E with delta replaced by -delta.
* Graded: entries of d1 have weighted degree u_i - v_j, entries of d0 degree
  v_j - u_i + h.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from . import linalg as la
from .linalg import PolyMatrix
from .poly import INHOMOGENEOUS, Polynomial, WeightSystem, weighted_degree


class MFError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    entry: Tuple[int, int]
    expected: str
    actual: str

    def __str__(self):
        return f"{self.kind} at entry {self.entry}: expected {self.expected}, got {self.actual}"


@dataclass(frozen=True)
class MatrixFactorization:
    w: Polynomial
    r0: int
    r1: int
    d1: PolyMatrix
    d0: PolyMatrix
    # cocycles of End(E) known from the construction (full (r0+r1)-square matrices)
    cocycles: Tuple[Tuple[PolyMatrix, int], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "d1", la.as_matrix(self.d1))
        object.__setattr__(self, "d0", la.as_matrix(self.d0))
        if len(self.d1) != self.r0 or any(len(r) != self.r1 for r in self.d1):
            raise MFError(f"d1 must be {self.r0}x{self.r1}")
        if len(self.d0) != self.r1 or any(len(r) != self.r0 for r in self.d0):
            raise MFError(f"d0 must be {self.r1}x{self.r0}")
        for row in self.d1 + self.d0:
            for p in row:
                if p.n != self.w.n:
                    raise MFError("matrix entries and potential live in different rings")

    @property
    def n(self) -> int:
        return self.w.n

    @property
    def size(self) -> int:
        return self.r0 + self.r1

    def delta(self) -> PolyMatrix:
        n = self.n
        return la.block(la.zeros(n, self.r0, self.r0), self.d1, self.d0, la.zeros(n, self.r1, self.r1))

    def parities(self) -> List[int]:
        return [0] * self.r0 + [1] * self.r1

    def identity(self) -> PolyMatrix:
        return la.identity(self.n, self.size)


@dataclass(frozen=True)
class GradedMF:
    base: MatrixFactorization
    ws: WeightSystem
    u: Tuple[int, ...]
    v: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "v", tuple(self.v))
        if len(self.u) != self.base.r0 or len(self.v) != self.base.r1:
            raise MFError("generator weight vectors do not match the ranks")

    @property
    def w(self):
        return self.base.w

    @property
    def n(self):
        return self.base.n

    @property
    def r0(self):
        return self.base.r0

    @property
    def r1(self):
        return self.base.r1

    def weights(self) -> List[int]:
        return list(self.u) + list(self.v)


AnyMF = Union[MatrixFactorization, GradedMF]


def _base(E: AnyMF) -> MatrixFactorization:
    return E.base if isinstance(E, GradedMF) else E


@dataclass(frozen=True)
class LwElement:
    """v + f in L_w: a vector field sum f_i d/dx_i together with a function."""

    vector_field: Tuple[Polynomial, ...]
    function: Polynomial

    def apply(self, a: Polynomial) -> Polynomial:
        total = Polynomial.zero(a.n)
        for i, fi in enumerate(self.vector_field):
            if not fi.is_zero():
                total = total + fi * a.diff(i)
        return total


# -- validation ---------------------------------------------------------------


def validate(E: AnyMF) -> Optional[Violation]:
    """Return None if E is a valid (graded) factorization, else the first violation."""
    B = _base(E)
    n, w = B.n, B.w
    if not w.is_zero() and B.r0 != B.r1:
        return Violation("rank", (B.r0, B.r1), "r0 == r1 for w != 0", f"{B.r0} != {B.r1}")
    for name, prod, size in (
        ("d1*d0", la.matmul(B.d1, B.d0, n), B.r0),
        ("d0*d1", la.matmul(B.d0, B.d1, n), B.r1),
    ):
        for i in range(size):
            for j in range(size):
                want = w if i == j else Polynomial.zero(n)
                if prod[i][j] != want:
                    return Violation(name, (i, j), want.format(), prod[i][j].format())
    if isinstance(E, GradedMF):
        ws, h = E.ws, E.ws.h
        for i in range(B.r0):
            for j in range(B.r1):
                p = B.d1[i][j]
                if p.is_zero():
                    continue
                d = weighted_degree(p, ws)
                if d is INHOMOGENEOUS or d != E.u[i] - E.v[j]:
                    return Violation("d1 degree", (i, j), str(E.u[i] - E.v[j]), str(d))
        for j in range(B.r1):
            for i in range(B.r0):
                p = B.d0[j][i]
                if p.is_zero():
                    continue
                d = weighted_degree(p, ws)
                if d is INHOMOGENEOUS or d != E.v[j] - E.u[i] + h:
                    return Violation("d0 degree", (j, i), str(E.v[j] - E.u[i] + h), str(d))
    return None


def check(E: AnyMF) -> AnyMF:
    v = validate(E)
    if v is not None:
        raise MFError(str(v))
    return E


def is_cocycle(E: AnyMF, x: PolyMatrix, parity: int) -> bool:
    B = _base(E)
    d = B.delta()
    dx = la.matmul(d, x, B.n)
    xd = la.matmul(x, d, B.n)
    comm = la.matadd(dx, xd) if parity else la.matsub(dx, xd)
    return la.is_zero(comm)


# -- constructors -------------------------------------------------------------


def _poly(n: int, a) -> Polynomial:
    return a if isinstance(a, Polynomial) else Polynomial.const(n, a)


def from_matrices(w: Polynomial, d1, d0) -> MatrixFactorization:
    d1 = la.as_matrix(d1)
    d0 = la.as_matrix(d0)
    r0, r1 = len(d1), len(d0)
    E = MatrixFactorization(w, r0, r1, d1, d0, ((la.identity(w.n, r0 + r1), 0),))
    return check(E)


def rank_one(a: Polynomial, b: Polynomial) -> MatrixFactorization:
    """The factorization d1 = (a), d0 = (b) of w = ab."""
    n = a.n
    m = la.as_matrix([[Polynomial.zero(n), a], [-b, Polynomial.zero(n)]])
    E = MatrixFactorization(a * b, 1, 1, ((a,),), ((b,),), ((la.identity(n, 2), 0), (m, 1)))
    return check(E)


def _exterior_basis(r: int) -> Tuple[List[Tuple[int, ...]], List[Tuple[int, ...]]]:
    subsets = [s for k in range(r + 1) for s in itertools.combinations(range(r), k)]
    even = [s for s in subsets if len(s) % 2 == 0]
    odd = [s for s in subsets if len(s) % 2 == 1]
    return even, odd


def koszul(a: Sequence[Polynomial], b: Sequence[Polynomial]) -> MatrixFactorization:
    """Koszul factorization of sum a_i b_i on the exterior algebra of Q^r.

    delta = sum a_i * contraction(e_i) + b_i * (e_i ^ .), so that the rank-one
    case has d1 = (a), d0 = (b).  Cocycles: products over subsets S of
    m_i = a_i * contraction(e_i) - b_i * (e_i ^ .).
    """
    if len(a) != len(b):
        raise MFError("koszul needs sequences of equal length")
    if not a:
        raise MFError("koszul needs at least one pair")
    n = a[0].n
    r = len(a)
    even, odd = _exterior_basis(r)
    basis = even + odd
    pos = {s: k for k, s in enumerate(basis)}
    size = len(basis)
    z = Polynomial.zero(n)

    def op(coeffs_iota, coeffs_wedge):
        m = [[z] * size for _ in range(size)]
        for col, s in enumerate(basis):
            for i in range(r):
                sign = -1 if sum(1 for j in s if j < i) % 2 else 1
                if i in s and not coeffs_iota[i].is_zero():
                    t = tuple(j for j in s if j != i)
                    m[pos[t]][col] = m[pos[t]][col] + coeffs_iota[i] * sign
                if i not in s and not coeffs_wedge[i].is_zero():
                    t = tuple(sorted(s + (i,)))
                    m[pos[t]][col] = m[pos[t]][col] + coeffs_wedge[i] * sign
        return la.as_matrix(m)

    delta = op(list(a), list(b))
    r0 = len(even)
    d1 = la.sub_block(delta, range(0, r0), range(r0, size))
    d0 = la.sub_block(delta, range(r0, size), range(0, r0))
    w = Polynomial.zero(n)
    for ai, bi in zip(a, b):
        w = w + ai * bi
    # the factor cocycles m_i and all their products
    ms = []
    for i in range(r):
        ci = [z] * r
        cw = [z] * r
        ci[i] = a[i]
        cw[i] = -b[i]
        ms.append(op(ci, cw))
    cocycles = []
    for k in range(r + 1):
        for S in itertools.combinations(range(r), k):
            x = la.identity(n, size)
            for i in S:
                x = la.matmul(x, ms[i], n)
            cocycles.append((x, k % 2))
    return check(MatrixFactorization(w, r0, len(odd), d1, d0, tuple(cocycles)))


def _tensor_basis(E: MatrixFactorization, F: MatrixFactorization):
    """Tensor basis as a list of (e, f) index pairs, even part first."""
    e0 = range(E.r0)
    e1 = range(E.r0, E.size)
    f0 = range(F.r0)
    f1 = range(F.r0, F.size)
    even = [(i, k) for i in e0 for k in f0] + [(j, l) for j in e1 for l in f1]
    odd = [(i, l) for i in e0 for l in f1] + [(j, k) for j in e1 for k in f0]
    return even, odd


def operator_tensor(x: PolyMatrix, y: PolyMatrix, y_parity: int, E: MatrixFactorization, F: MatrixFactorization) -> PolyMatrix:
    """Matrix of x (x) y on E (x) F: (x (x) y)(e (x) f) = (-1)^{|y||e|} xe (x) yf."""
    n = E.n
    even, odd = _tensor_basis(E, F)
    basis = even + odd
    epar = E.parities()
    z = Polynomial.zero(n)
    out = []
    for (p2, q2) in basis:
        row = []
        xr = x[p2]
        yr = y[q2]
        for (p, q) in basis:
            a = xr[p]
            b = yr[q]
            if a.terms and b.terms:
                t = a * b
                row.append(-t if (y_parity and epar[p]) else t)
            else:
                row.append(z)
        out.append(tuple(row))
    return tuple(out)


def _split(full: PolyMatrix, r0: int) -> Tuple[PolyMatrix, PolyMatrix]:
    size = len(full)
    return la.sub_block(full, range(0, r0), range(r0, size)), la.sub_block(full, range(r0, size), range(0, r0))


def tensor(E: AnyMF, F: AnyMF) -> AnyMF:
    """E (x) F, a factorization of w_E + w_F."""
    graded = isinstance(E, GradedMF) and isinstance(F, GradedMF)
    if isinstance(E, GradedMF) != isinstance(F, GradedMF):
        raise MFError("cannot tensor a graded with an ungraded factorization")
    BE, BF = _base(E), _base(F)
    if BE.n != BF.n:
        raise MFError("factorizations live over different rings")
    n = BE.n
    even, odd = _tensor_basis(BE, BF)
    delta = la.matadd(
        operator_tensor(BE.delta(), BF.identity(), 0, BE, BF),
        operator_tensor(BE.identity(), BF.delta(), 1, BE, BF),
    )
    r0 = len(even)
    d1, d0 = _split(delta, r0)
    cocycles = []
    for x, px in BE.cocycles:
        for y, py in BF.cocycles:
            xy = operator_tensor(x, y, py, BE, BF)
            cocycles.append((xy, (px + py) % 2))
    T = MatrixFactorization(BE.w + BF.w, r0, len(odd), d1, d0, tuple(cocycles))
    if not graded:
        return check(T)
    if E.ws != F.ws:
        raise MFError("graded factorizations with different weight systems")
    h = E.ws.h
    we, wf = E.weights(), F.weights()
    ep, fp = BE.parities(), BF.parities()
    weights = [we[p] + wf[q] + (h if ep[p] and fp[q] else 0) for (p, q) in even + odd]
    return check(GradedMF(T, E.ws, tuple(weights[:r0]), tuple(weights[r0:])))


def direct_sum(E: AnyMF, F: AnyMF) -> AnyMF:
    BE, BF = _base(E), _base(F)
    if BE.w != BF.w:
        raise MFError("direct sum needs factorizations of the same potential")
    n = BE.n
    d1 = la.block(BE.d1, la.zeros(n, BE.r0, BF.r1), la.zeros(n, BF.r0, BE.r1), BF.d1)
    d0 = la.block(BE.d0, la.zeros(n, BE.r1, BF.r0), la.zeros(n, BF.r1, BE.r0), BF.d0)
    r0, r1 = BE.r0 + BF.r0, BE.r1 + BF.r1
    # basis order: E0, F0, E1, F1
    order_e = list(range(BE.r0)) + [None] * BF.r0 + list(range(BE.r0, BE.size)) + [None] * BF.r1
    order_f = [None] * BE.r0 + list(range(BF.r0)) + [None] * BE.r1 + list(range(BF.r0, BF.size))
    z = Polynomial.zero(n)

    def embed(x, order):
        return tuple(
            tuple(z if (a is None or b is None) else x[a][b] for b in order) for a in order
        )

    cocycles = tuple((embed(x, order_e), p) for x, p in BE.cocycles) + tuple(
        (embed(y, order_f), p) for y, p in BF.cocycles
    )
    S = MatrixFactorization(BE.w, r0, r1, d1, d0, cocycles)
    if isinstance(E, GradedMF) and isinstance(F, GradedMF):
        return check(GradedMF(S, E.ws, E.u + F.u, E.v + F.v))
    return check(S)


def shift(E: AnyMF) -> AnyMF:
    B = _base(E)
    perm = list(range(B.r0, B.size)) + list(range(B.r0))
    cocycles = tuple((la.permute(x, perm, perm), p) for x, p in B.cocycles)
    S = MatrixFactorization(B.w, B.r1, B.r0, la.matneg(B.d0), la.matneg(B.d1), cocycles)
    if isinstance(E, GradedMF):
        h = E.ws.h
        return check(GradedMF(S, E.ws, tuple(v + h for v in E.v), E.u))
    return check(S)


def dual(E: AnyMF) -> AnyMF:
    B = _base(E)
    n = B.n
    sgn = la.as_matrix(
        [[Polynomial.const(n, (1 if i < B.r0 else -1) if i == j else 0) for j in range(B.size)] for i in range(B.size)]
    )
    cocycles = []
    for x, p in B.cocycles:
        xt = la.transpose(x)
        cocycles.append((la.matmul(sgn, xt, n) if p else xt, p))
    D = MatrixFactorization(-B.w, B.r0, B.r1, la.transpose(B.d0), la.matneg(la.transpose(B.d1)), tuple(cocycles))
    if isinstance(E, GradedMF):
        h = E.ws.h
        return check(GradedMF(D, E.ws, tuple(-u for u in E.u), tuple(-v - h for v in E.v)))
    return check(D)


@dataclass(frozen=True)
class FreeComplex:
    """Bounded complex of free modules F^start -> F^{start+1} -> ...

    ``diffs[k]`` is the matrix of F^{start+k} -> F^{start+k+1}.
    """

    n: int
    ranks: Tuple[int, ...]
    diffs: Tuple[PolyMatrix, ...]
    start: int = 0

    def __post_init__(self):
        if len(self.diffs) != max(len(self.ranks) - 1, 0):
            raise MFError("a complex with k terms needs k-1 differentials")
        for k, d in enumerate(self.diffs):
            if len(d) != self.ranks[k + 1] or any(len(r) != self.ranks[k] for r in d):
                raise MFError(f"differential {k} has the wrong shape")
        for k in range(len(self.diffs) - 1):
            if not la.is_zero(la.matmul(self.diffs[k + 1], self.diffs[k], self.n)):
                raise MFError(f"d^2 != 0 at position {k}")

    def fold(self) -> MatrixFactorization:
        """Z/2-folding: a factorization of 0 with even = sum of even-degree terms."""
        n = self.n
        degs = [self.start + k for k in range(len(self.ranks))]
        even_terms = [k for k, d in enumerate(degs) if d % 2 == 0]
        odd_terms = [k for k, d in enumerate(degs) if d % 2 == 1]
        off = {}
        acc = 0
        for k in even_terms:
            off[k] = acc
            acc += self.ranks[k]
        r0 = acc
        acc = 0
        for k in odd_terms:
            off[k] = acc
            acc += self.ranks[k]
        r1 = acc
        z = Polynomial.zero(n)
        d1 = [[z] * r1 for _ in range(r0)]
        d0 = [[z] * r0 for _ in range(r1)]
        for k, d in enumerate(self.diffs):
            src_even = degs[k] % 2 == 0
            target = d0 if src_even else d1
            for i in range(self.ranks[k + 1]):
                for j in range(self.ranks[k]):
                    target[off[k + 1] + i][off[k] + j] = d[i][j]
        ident = la.identity(n, r0 + r1)
        return MatrixFactorization(Polynomial.zero(n), r0, r1, la.as_matrix(d1), la.as_matrix(d0), ((ident, 0),))


def tensor_with_complex(E: MatrixFactorization, F: FreeComplex) -> MatrixFactorization:
    if F.n != _base(E).n:
        raise MFError("complex and factorization live over different rings")
    return tensor(_base(E), F.fold())


# -- grading helpers ------------------------------------------------------------


def infer_grading(E: MatrixFactorization, ws: WeightSystem, anchor: int = 0) -> GradedMF:
    """Find generator weights making E graded; each connected block starts at ``anchor``."""
    h = ws.h
    size = E.size
    wt: List[Optional[int]] = [None] * size
    # edges: (target, source, degree) meaning wt[target] - wt[source] = degree
    edges = []
    for i in range(E.r0):
        for j in range(E.r1):
            p = E.d1[i][j]
            if not p.is_zero():
                d = weighted_degree(p, ws)
                if d is INHOMOGENEOUS:
                    raise MFError(f"d1 entry {(i, j)} is not quasi-homogeneous")
                edges.append((i, E.r0 + j, d))
    for j in range(E.r1):
        for i in range(E.r0):
            p = E.d0[j][i]
            if not p.is_zero():
                d = weighted_degree(p, ws)
                if d is INHOMOGENEOUS:
                    raise MFError(f"d0 entry {(j, i)} is not quasi-homogeneous")
                edges.append((E.r0 + j, i, d - h))
    adj = [[] for _ in range(size)]
    for t, s, d in edges:
        adj[s].append((t, d))
        adj[t].append((s, -d))
    for start in range(size):
        if wt[start] is not None:
            continue
        wt[start] = anchor
        stack = [start]
        while stack:
            a = stack.pop()
            for b, d in adj[a]:
                if wt[b] is None:
                    wt[b] = wt[a] + d
                    stack.append(b)
    G = GradedMF(E, ws, tuple(wt[: E.r0]), tuple(wt[E.r0 :]))
    return check(G)


def regrade(E: GradedMF, c: int) -> GradedMF:
    """Shift all generator weights by c."""
    return GradedMF(E.base, E.ws, tuple(x + c for x in E.u), tuple(x + c for x in E.v))


def equivalent(E: MatrixFactorization, F: MatrixFactorization) -> bool:
    """True if F is obtained from E by signed permutations of the generators."""
    if (E.w, E.r0, E.r1) != (F.w, F.r0, F.r1):
        return False
    n = E.n

    def signed_perms(r):
        for perm in itertools.permutations(range(r)):
            for signs in itertools.product((1, -1), repeat=r):
                yield perm, signs

    def apply(m, rp, rs, cp, cs):
        return tuple(tuple(m[rp[i]][cp[j]] * (rs[i] * cs[j]) for j in range(len(cp))) for i in range(len(rp)))

    for p0, s0 in signed_perms(E.r0):
        for p1, s1 in signed_perms(E.r1):
            if apply(E.d1, p0, s0, p1, s1) == F.d1 and apply(E.d0, p1, s1, p0, s0) == F.d0:
                return True
    return False


def unit(n: int) -> MatrixFactorization:
    """The rank (1, 0) factorization of 0, a unit for tensor."""
    z = Polynomial.zero(n)
    return MatrixFactorization(z, 1, 0, ((),), (), ((la.identity(n, 1), 0),))
