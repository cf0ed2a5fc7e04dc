"""Small dense matrix helpers: polynomial matrices and exact rank over Q."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

from .poly import Polynomial

PolyMatrix = Tuple[Tuple[Polynomial, ...], ...]


def zeros(n: int, rows: int, cols: int) -> PolyMatrix:
    z = Polynomial.zero(n)
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def identity(n: int, size: int, c=1) -> PolyMatrix:
    one = Polynomial.const(n, c)
    z = Polynomial.zero(n)
    return tuple(tuple(one if i == j else z for j in range(size)) for i in range(size))


def as_matrix(rows: Sequence[Sequence[Polynomial]]) -> PolyMatrix:
    return tuple(tuple(r) for r in rows)


def shape(m: PolyMatrix) -> Tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def matmul(a: PolyMatrix, b: PolyMatrix, n: int) -> PolyMatrix:
    rows, inner = len(a), len(b)
    cols = len(b[0]) if b else 0
    if a and len(a[0]) != inner:
        raise ValueError(f"shape mismatch {len(a)}x{len(a[0])} times {inner}x{cols}")
    prod = Polynomial.sum_of_products
    out = []
    for i in range(rows):
        ai = a[i]
        out.append(tuple(prod(n, [(ai[k], b[k][j]) for k in range(inner)]) for j in range(cols)))
    return tuple(out)


def matadd(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def matsub(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def matscale(a: PolyMatrix, c) -> PolyMatrix:
    return tuple(tuple(x * c for x in r) for r in a)


def matneg(a: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(-x for x in r) for r in a)


def transpose(a: PolyMatrix) -> PolyMatrix:
    return tuple(zip(*a)) if a else ()


def is_zero(a: PolyMatrix) -> bool:
    return all(x.is_zero() for r in a for x in r)


def block(tl: PolyMatrix, tr: PolyMatrix, bl: PolyMatrix, br: PolyMatrix) -> PolyMatrix:
    """Assemble [[tl, tr], [bl, br]]; empty blocks are allowed."""
    top = [tuple(a) + tuple(b) for a, b in zip(tl, tr)] if tl else [tuple(b) for b in tr]
    bot = [tuple(a) + tuple(b) for a, b in zip(bl, br)] if bl else [tuple(b) for b in br]
    return tuple(top + bot)


def sub_block(m: PolyMatrix, rows: range, cols: range) -> PolyMatrix:
    return tuple(tuple(m[i][j] for j in cols) for i in rows)


def kron(a: PolyMatrix, b: PolyMatrix, n: int) -> PolyMatrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    z = Polynomial.zero(n)
    out = []
    for i in range(ra):
        for k in range(rb):
            row = []
            for j in range(ca):
                x = a[i][j]
                for l in range(cb):
                    y = b[k][l]
                    row.append(x * y if x.terms and y.terms else z)
            out.append(tuple(row))
    return tuple(out)


def permute(m: PolyMatrix, row_perm: Sequence[int], col_perm: Sequence[int]) -> PolyMatrix:
    return tuple(tuple(m[i][j] for j in col_perm) for i in row_perm)


# -- exact rank over Q ------------------------------------------------------


def _integer_row(row: Sequence[Fraction]) -> List[int]:
    den = 1
    for c in row:
        if c.denominator != 1:
            den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a rational matrix by fraction-free integer elimination."""
    work = [_integer_row(r) for r in rows if any(r)]
    if not work:
        return 0
    ncols = len(work[0])
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        p = work[r]
        pv = p[col]
        for i in range(r + 1, len(work)):
            v = work[i][col]
            if v:
                row = [pv * a - v * b for a, b in zip(work[i], p)]
                g = 0
                for t in row:
                    g = gcd(g, t)
                work[i] = [t // g for t in row] if g > 1 else row
        r += 1
        if r == len(work):
            break
    return r


def sparse_rank(rows: Sequence[dict]) -> int:
    """Exact rank of a matrix given as sparse rows {column: rational}.

    Rows are scaled to primitive integer vectors and eliminated pivot by pivot,
    picking the shortest available row each time to limit fill-in.
    """
    work = []
    for r in rows:
        items = {c: Fraction(v) for c, v in r.items() if v}
        if not items:
            continue
        den = 1
        for v in items.values():
            den = den * v.denominator // gcd(den, v.denominator)
        work.append({c: int(v * den) for c, v in items.items()})
    pivots = {}  # column -> reduced row with that leading column
    rank_ = 0
    for row in work:
        row = dict(row)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                g = 0
                for v in row.values():
                    g = gcd(g, v)
                if g > 1:
                    row = {c: v // g for c, v in row.items()}
                pivots[col] = row
                rank_ += 1
                break
            a, b = piv[col], row[col]
            new = {c: a * v for c, v in row.items()}
            for c, v in piv.items():
                t = new.get(c, 0) - b * v
                if t:
                    new[c] = t
                else:
                    new.pop(c, None)
            g = 0
            for v in new.values():
                g = gcd(g, v)
                if g == 1:
                    break
            row = {c: v // g for c, v in new.items()} if g > 1 else new
    return rank_
