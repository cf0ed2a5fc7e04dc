"""Graded Hom/Ext of equivariant matrix factorizations by exact linear algebra.

The complex C(E) has C^{2m} = E0 (x) chi^m and C^{2m+1} = E1 (x) chi^{m+1}, so a
generator of C^{2m} has weight u + m*h and one of C^{2m+1} weight v + (m+1)*h.
A degree-k, weight-j morphism C(E) -> C(F) commuting with the 2-periodicity is
determined by f0: C(E)^0 -> C(F)^k and f1: C(E)^{-1} -> C(F)^{k-1}; an entry
has weighted degree (target weight) - (source weight) - j.  The differential
is D(f) = delta_F f - (-1)^k f delta_E.  Strands (k, j) and (k-2, j-h) agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .derham import pairing
from .groebner import milnor_data
from .linalg import sparse_rank
from .mf import GradedMF, MatrixFactorization, MFError, _base
from .poly import Polynomial, monomials_of_degree


class WindowNotClosed(RuntimeError):
    pass


class NotStabilized(RuntimeError):
    pass


@dataclass(frozen=True)
class HomDegreePiece:
    k: int
    j: int
    dim_in: int
    rank_in: int
    rank_out: int
    hom_dim: int


def _target_weights(F: GradedMF, k: int) -> List[int]:
    h = F.ws.h
    if k % 2 == 0:
        return [u + (k // 2) * h for u in F.u]
    return [v + ((k + 1) // 2) * h for v in F.v]


def _delta_out(F: MatrixFactorization, k: int):
    """Matrix of the differential C(F)^k -> C(F)^{k+1}."""
    return F.d0 if k % 2 == 0 else F.d1


class _HomComplex:
    """The weight-j strand of Hom(C(E), C(F)) with cached coordinates and ranks."""

    def __init__(self, E: GradedMF, F: GradedMF):
        if E.ws != F.ws:
            raise MFError("graded Hom needs a shared weight system")
        if E.w != F.w:
            raise MFError("graded Hom needs factorizations of the same potential")
        self.E, self.F = E, F
        self.BE, self.BF = E.base, F.base
        self.weights = E.ws.weights
        self._coords: Dict[Tuple[int, int], Dict] = {}
        self._ranks: Dict[Tuple[int, int], int] = {}

    def coords(self, k: int, j: int) -> Dict[Tuple[int, int, int, Tuple[int, ...]], int]:
        key = (k, j)
        if key not in self._coords:
            out = {}
            # block 0: E0 -> C(F)^k ; block 1: E1 -> C(F)^{k-1}
            for block, tw, sw in (
                (0, _target_weights(self.F, k), self.E.u),
                (1, _target_weights(self.F, k - 1), self.E.v),
            ):
                for t, a in enumerate(tw):
                    for s, b in enumerate(sw):
                        for m in monomials_of_degree(self.weights, a - b - j):
                            out[(block, t, s, m)] = len(out)
            self._coords[key] = out
        return self._coords[key]

    def image_rows(self, k: int, j: int) -> List[Dict[int, Fraction]]:
        """D applied to each basis vector of the (k, j) space, in (k+1, j) coordinates."""
        src = self.coords(k, j)
        dst = self.coords(k + 1, j)
        BE, BF = self.BE, self.BF
        n = BE.n
        sgn = -1 if k % 2 else 1  # (-1)^k
        dFk = _delta_out(BF, k)
        dFk1 = _delta_out(BF, k - 1)
        rows = []
        for (block, t, s, m) in src:
            row: Dict[int, Fraction] = {}

            def put(b, tt, ss, poly, c):
                for mm, v in poly.terms.items():
                    e = tuple(x + y for x, y in zip(mm, m))
                    idx = dst[(b, tt, ss, e)]
                    row[idx] = row.get(idx, 0) + c * v

            if block == 0:
                # delta_F f0 lands in block 0 of degree k+1
                for t2 in range(len(dFk)):
                    p = dFk[t2][t]
                    if p.terms:
                        put(0, t2, s, p, 1)
                # -(-1)^k f0 d1^E lands in block 1 (E1 -> C(F)^k)
                for s2 in range(BE.r1):
                    p = BE.d1[s][s2]
                    if p.terms:
                        put(1, t, s2, p, -sgn)
            else:
                # -(-1)^k f1 d0^E lands in block 0
                for s2 in range(BE.r0):
                    p = BE.d0[s][s2]
                    if p.terms:
                        put(0, t, s2, p, -sgn)
                for t2 in range(len(dFk1)):
                    p = dFk1[t2][t]
                    if p.terms:
                        put(1, t2, s, p, 1)
            rows.append({c: v for c, v in row.items() if v})
        return rows

    def rank(self, k: int, j: int) -> int:
        key = (k, j)
        if key not in self._ranks:
            self._ranks[key] = sparse_rank(self.image_rows(k, j)) if self.coords(k, j) else 0
        return self._ranks[key]

    def piece(self, k: int, j: int) -> HomDegreePiece:
        dim = len(self.coords(k, j))
        r_out = self.rank(k, j)
        r_in = self.rank(k - 1, j)
        return HomDegreePiece(k, j, dim, r_in, r_out, dim - r_out - r_in)

    def top_twist(self) -> int:
        """Largest j for which the k in {0, 1} spaces can be nonzero."""
        best = None
        for k in (-1, 0, 1, 2):
            for tw, sw in ((_target_weights(self.F, k), self.E.u), (_target_weights(self.F, k - 1), self.E.v)):
                for a in tw:
                    for b in sw:
                        best = a - b if best is None else max(best, a - b)
        return best if best is not None else 0


def graded_hom_dim(E: GradedMF, F: GradedMF, k: int, j: int) -> int:
    return _HomComplex(E, F).piece(k, j).hom_dim


@dataclass(frozen=True)
class ExtTable:
    """Nonzero strands (k, j) with k in {0, 1}; other k follow by periodicity."""

    dims: Dict[Tuple[int, int], int]
    window: Tuple[int, int]

    def total(self, k: int) -> int:
        return sum(d for (kk, _), d in self.dims.items() if kk == k % 2)

    @property
    def euler(self) -> int:
        return self.total(0) - self.total(1)


def _spread(G: GradedMF) -> int:
    ws = G.weights()
    return max(ws) - min(ws) if ws else 0


def ext_table(E: GradedMF, F: GradedMF, md=None, margin: Optional[int] = None, max_twist: Optional[int] = None) -> ExtTable:
    """Scan twists j from the top down through a window sized by the socle degree,
    then demand an all-zero margin of h consecutive twists below it."""
    if md is None:
        md = milnor_data(E.w, E.ws)
    cx = _HomComplex(E, F)
    h = E.ws.h
    hi = cx.top_twist()
    span = md.socle_degree + 2 * h + _spread(E) + _spread(F) if max_twist is None else max_twist
    lo = hi - span
    margin = h if margin is None else margin
    dims = {}
    for j in range(hi, lo - 1, -1):
        for k in (0, 1):
            d = cx.piece(k, j).hom_dim
            if d:
                dims[(k, j)] = d
    for j in range(lo - 1, lo - 1 - margin, -1):
        for k in (0, 1):
            d = cx.piece(k, j).hom_dim
            if d:
                raise WindowNotClosed(f"nonzero Hom in strand ({k}, {j}) below the scan window")
    return ExtTable(dims, (lo, hi))


def euler_pairing(E: GradedMF, F: GradedMF, md=None) -> int:
    """sum_j dim H^{0,j} - dim H^{1,j}: the Euler form of the Z/2-graded Hom."""
    return ext_table(E, F, md).euler


# -- one-variable oracle ------------------------------------------------------


def _ungraded_blocks(E: MatrixFactorization, F: MatrixFactorization, p: int):
    """Allowed (row, col) positions of parity-p maps E -> F in full-matrix coordinates."""
    out = []
    for i in range(F.size):
        for j in range(E.size):
            pi = 0 if i < F.r0 else 1
            pj = 0 if j < E.r0 else 1
            if (pi + pj) % 2 == p:
                out.append((i, j))
    return out


def _brute_dims(E: MatrixFactorization, F: MatrixFactorization, M: int, N: int) -> Tuple[int, int]:
    dE, dF = E.delta(), F.delta()
    dims = []
    for p in (0, 1):
        q = (p + 1) % 2

        def apply(pp, limit):
            """Rows of D on parity-pp maps with entries of degree < limit, keyed (i, j, deg)."""
            sgn = -1 if pp else 1
            rows = []
            for (i, j) in _ungraded_blocks(E, F, pp):
                for e in range(limit):
                    row = {}
                    for i2 in range(F.size):
                        for (mm, v) in dF[i2][i].terms.items():
                            key = (i2, j, mm[0] + e)
                            row[key] = row.get(key, 0) + v
                    for j2 in range(E.size):
                        for (mm, v) in dE[j][j2].terms.items():
                            key = (i, j2, mm[0] + e)
                            row[key] = row.get(key, 0) - sgn * v
                    rows.append({k: v for k, v in row.items() if v})
            return rows

        def index(rows):
            keys = sorted({k for r in rows for k in r})
            pos = {k: t for t, k in enumerate(keys)}
            return [{pos[k]: v for k, v in r.items()} for r in rows], pos

        dim_v = len(_ungraded_blocks(E, F, p)) * M
        rows_p, _ = index(apply(p, M))
        ker = dim_v - sparse_rank(rows_p)
        # image of parity-q maps, intersected with degree < M
        big = apply(q, M + N)
        full, _ = index(big)
        high, _ = index([{k: v for k, v in r.items() if k[2] >= M} for r in big])
        im = sparse_rank(full) - sparse_rank(high)
        dims.append(ker - im)
    return dims[0], dims[1]


def brute_force_ext_1var(E: MatrixFactorization, F: MatrixFactorization, M: int) -> Tuple[int, int]:
    """(dim Ext^0, dim Ext^1) over Q[x] from degree-bounded Hom spaces, checked stable under M -> M+N."""
    E, F = _base(E), _base(F)
    if E.n != 1 or F.n != 1:
        raise ValueError("the oracle works over Q[x] only")
    if E.w != F.w:
        raise MFError("factorizations of different potentials")
    degs = [p.degree() for B in (E, F) for row in B.delta() for p in row if not p.is_zero()]
    N = max(degs) if degs else 1
    N = max(N, 1)
    a = _brute_dims(E, F, M, N)
    b = _brute_dims(E, F, M + N, N)
    if a != b:
        raise NotStabilized(f"dims {a} at M={M} but {b} at M={M + N}")
    return a


# -- Riemann-Roch consistency ---------------------------------------------------


def sigma_rr(n: int) -> int:
    """Sign in chi(E, F) = sigma_rr(n) <ch E, ch F>, calibrated on w = xy."""
    return -1 if (n * (n - 1) // 2) % 2 else 1


@dataclass(frozen=True)
class RRHReport:
    chi: int
    residue_side: Fraction
    match: bool
    sigma_rr: int

    def to_json(self) -> Dict:
        return {"chi": self.chi, "residue_side": str(self.residue_side), "match": self.match, "sigma_rr": self.sigma_rr}


def rrh_check(E: GradedMF, F: GradedMF, md=None) -> RRHReport:
    from .atiyah import chern

    if md is None:
        md = milnor_data(E.w, E.ws)
    n = E.n
    if n % 2:
        raise ValueError("the Riemann-Roch check needs an even number of variables")
    chi = euler_pairing(E, F, md)
    s = sigma_rr(n)
    side = s * pairing(chern(E, md=md), chern(F, md=md))
    return RRHReport(chi, side, side == chi, s)
