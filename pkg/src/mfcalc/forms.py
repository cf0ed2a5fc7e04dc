"""Polynomial differential forms and the superalgebra of form-valued Z/2-graded matrices.

Index tuples are 0-based and strictly increasing; ``(0, 1)`` is dx1^dx2.
A :class:`SuperForm` is stored as a sum over basis forms dx_I of ``dx_I (x) M_I``
with ``M_I`` an (r0+r1)-square polynomial matrix.  The even blocks of a matrix
are its top-left r0 x r0 and bottom-right r1 x r1 corners.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import linalg as la
from .poly import Polynomial

Index = Tuple[int, ...]


def merge_sign(a: Index, b: Index) -> Tuple[int, Optional[Index]]:
    """Sign and sorted index of dx_a ^ dx_b (sign 0 if they overlap)."""
    if set(a) & set(b):
        return 0, None
    inv = 0
    for i in a:
        for j in b:
            if i > j:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(a + b))


class DifferentialForm:
    __slots__ = ("n", "components")

    def __init__(self, n: int, components: Optional[Dict[Index, Polynomial]] = None):
        self.n = n
        clean: Dict[Index, Polynomial] = {}
        for idx, p in (components or {}).items():
            idx = tuple(idx)
            if list(idx) != sorted(set(idx)):
                raise ValueError(f"index {idx} must be strictly increasing")
            if idx and (idx[0] < 0 or idx[-1] >= n):
                raise IndexError(f"index {idx} out of range")
            if p.n != n:
                raise ValueError("coefficient lives in a different ring")
            if not p.is_zero():
                clean[idx] = p
        self.components = clean

    @classmethod
    def function(cls, f: Polynomial) -> "DifferentialForm":
        return cls(f.n, {(): f})

    @classmethod
    def basis(cls, n: int, idx: Sequence[int], coeff: Optional[Polynomial] = None) -> "DifferentialForm":
        """coeff * dx_{i1} ^ ... ^ dx_{ik} for an arbitrary (unsorted) index list."""
        coeff = Polynomial.const(n, 1) if coeff is None else coeff
        sign, srt = 1, ()
        for i in idx:
            s, srt = merge_sign(srt, (i,))
            if not s:
                return cls(n)
            sign *= s
        return cls(n, {srt: coeff if sign > 0 else -coeff})

    @classmethod
    def volume(cls, n: int, coeff: Optional[Polynomial] = None) -> "DifferentialForm":
        return cls(n, {tuple(range(n)): coeff if coeff is not None else Polynomial.const(n, 1)})

    def is_zero(self) -> bool:
        return not self.components

    def degrees(self) -> List[int]:
        return sorted({len(i) for i in self.components})

    def part(self, k: int) -> "DifferentialForm":
        return DifferentialForm(self.n, {i: p for i, p in self.components.items() if len(i) == k})

    def top_coefficient(self) -> Polynomial:
        return self.components.get(tuple(range(self.n)), Polynomial.zero(self.n))

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        out = dict(self.components)
        for i, p in other.components.items():
            out[i] = out[i] + p if i in out else p
        return DifferentialForm(self.n, out)

    def __neg__(self):
        return DifferentialForm(self.n, {i: -p for i, p in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DifferentialForm":
        return DifferentialForm(self.n, {i: p * c for i, p in self.components.items()})

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        if other.n != self.n:
            raise ValueError("forms over different rings")
        out: Dict[Index, Polynomial] = {}
        for a, p in self.components.items():
            for b, q in other.components.items():
                s, idx = merge_sign(a, b)
                if not s:
                    continue
                t = p * q if s > 0 else -(p * q)
                out[idx] = out[idx] + t if idx in out else t
        return DifferentialForm(self.n, out)

    __xor__ = wedge

    def d(self) -> "DifferentialForm":
        out: Dict[Index, Polynomial] = {}
        for idx, p in self.components.items():
            for i in range(self.n):
                dp = p.diff(i)
                if dp.is_zero():
                    continue
                s, new = merge_sign((i,), idx)
                if not s:
                    continue
                t = dp if s > 0 else -dp
                out[new] = out[new] + t if new in out else t
        return DifferentialForm(self.n, out)

    def __eq__(self, other):
        return isinstance(other, DifferentialForm) and self.n == other.n and self.components == other.components

    def __hash__(self):
        return hash((self.n, frozenset(self.components.items())))

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        names = names or [f"x{i + 1}" for i in range(self.n)]
        if not self.components:
            return "0"
        parts = []
        for idx in sorted(self.components, key=lambda t: (len(t), t)):
            dx = "^".join(f"d{names[i]}" for i in idx)
            parts.append(f"({self.components[idx].format(names)})" + (f" {dx}" if dx else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"DifferentialForm({self.format()})"


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    return a.wedge(b)


def exterior_d(a: DifferentialForm) -> DifferentialForm:
    return a.d()


def differential(f: Polynomial) -> DifferentialForm:
    """The one-form df."""
    return DifferentialForm.function(f).d()


# ---------------------------------------------------------------------------


def parity_twist(m: la.PolyMatrix, r0: int) -> la.PolyMatrix:
    """M_even - M_odd: negate the off-diagonal blocks."""
    return tuple(
        tuple(x if (i < r0) == (j < r0) else -x for j, x in enumerate(row)) for i, row in enumerate(m)
    )


def matrix_parts(m: la.PolyMatrix, r0: int) -> Tuple[la.PolyMatrix, la.PolyMatrix]:
    n = m[0][0].n
    z = Polynomial.zero(n)
    even = tuple(tuple(x if (i < r0) == (j < r0) else z for j, x in enumerate(row)) for i, row in enumerate(m))
    odd = tuple(tuple(z if (i < r0) == (j < r0) else x for j, x in enumerate(row)) for i, row in enumerate(m))
    return even, odd


class SuperForm:
    """Element of Omega^* (x) End(E0 + E1) with Koszul-sign multiplication."""

    __slots__ = ("n", "r0", "r1", "terms")

    def __init__(self, n: int, r0: int, r1: int, terms: Optional[Dict[Index, la.PolyMatrix]] = None):
        self.n, self.r0, self.r1 = n, r0, r1
        size = r0 + r1
        clean = {}
        for idx, m in (terms or {}).items():
            if len(m) != size or any(len(r) != size for r in m):
                raise ValueError(f"matrix shape must be {size}x{size}")
            if not la.is_zero(m):
                clean[tuple(idx)] = m
        self.terms = clean

    @property
    def size(self) -> int:
        return self.r0 + self.r1

    # -- constructors ----------------------------------------------------
    @classmethod
    def scalar(cls, n: int, r0: int, r1: int, c=1) -> "SuperForm":
        return cls(n, r0, r1, {(): la.identity(n, r0 + r1, c)})

    @classmethod
    def from_matrix(cls, m: la.PolyMatrix, r0: int, r1: int, idx: Index = ()) -> "SuperForm":
        n = m[0][0].n
        return cls(n, r0, r1, {tuple(idx): la.as_matrix(m)})

    @classmethod
    def from_form(cls, form: DifferentialForm, r0: int, r1: int) -> "SuperForm":
        """form (x) identity."""
        n = form.n
        terms = {idx: la.identity(n, r0 + r1) for idx in form.components}
        terms = {idx: la.matscale(m, form.components[idx]) for idx, m in terms.items()}
        return cls(n, r0, r1, terms)

    @classmethod
    def one_form(cls, mats: Sequence[la.PolyMatrix], r0: int, r1: int) -> "SuperForm":
        """sum_i dx_i (x) mats[i]."""
        n = len(mats)
        return cls(n, r0, r1, {(i,): la.as_matrix(m) for i, m in enumerate(mats)})

    def _like(self, terms) -> "SuperForm":
        return SuperForm(self.n, self.r0, self.r1, terms)

    def _check(self, other: "SuperForm"):
        if (self.n, self.r0, self.r1) != (other.n, other.r0, other.r1):
            raise ValueError(
                f"shape mismatch: ({self.r0},{self.r1}) over {self.n} vars vs ({other.r0},{other.r1}) over {other.n}"
            )

    # -- linear structure ------------------------------------------------
    def __add__(self, other: "SuperForm") -> "SuperForm":
        self._check(other)
        out = dict(self.terms)
        for idx, m in other.terms.items():
            out[idx] = la.matadd(out[idx], m) if idx in out else m
        return self._like(out)

    def __neg__(self):
        return self._like({i: la.matneg(m) for i, m in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SuperForm":
        """Multiply by a rational or a polynomial (both central)."""
        return self._like({i: la.matscale(m, c) for i, m in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, SuperForm)
            and (self.n, self.r0, self.r1) == (other.n, other.r0, other.r1)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, self.r0, self.r1, frozenset(self.terms.items())))

    # -- grading ---------------------------------------------------------
    def form_part(self, k: int) -> "SuperForm":
        return self._like({i: m for i, m in self.terms.items() if len(i) == k})

    def truncate(self, k: int) -> "SuperForm":
        return self._like({i: m for i, m in self.terms.items() if len(i) <= k})

    def parity_parts(self) -> Tuple["SuperForm", "SuperForm"]:
        """Split into total-even and total-odd parts."""
        even, odd = {}, {}
        for idx, m in self.terms.items():
            me, mo = matrix_parts(m, self.r0)
            if len(idx) % 2 == 0:
                even[idx], odd[idx] = me, mo
            else:
                even[idx], odd[idx] = mo, me
        return self._like(even), self._like(odd)

    def parity(self) -> Optional[int]:
        """Total parity if homogeneous (None for zero or mixed)."""
        e, o = self.parity_parts()
        if e.is_zero() and not o.is_zero():
            return 1
        if o.is_zero() and not e.is_zero():
            return 0
        return None

    # -- products --------------------------------------------------------
    def __mul__(self, other: "SuperForm") -> "SuperForm":
        return signed_products([(1, self, other, False)])

    def supertrace(self) -> DifferentialForm:
        comps = {}
        r0 = self.r0
        z = Polynomial.zero(self.n)
        for idx, m in self.terms.items():
            t = z
            for i in range(self.size):
                t = t + m[i][i] if i < r0 else t - m[i][i]
            comps[idx] = t
        return DifferentialForm(self.n, comps)

    def __repr__(self):
        return f"SuperForm(n={self.n}, ranks=({self.r0},{self.r1}), {len(self.terms)} terms)"


def signed_products(items) -> SuperForm:
    """sum s * (u~ v) over (s, u, v, twist), fused entrywise.

    u~ is u, or u_even - u_odd when ``twist`` is set.  Products follow the
    Koszul rule: a matrix entry of u that is odd moves past the form part of v.
    """
    n, r0, r1, buckets = _product_cells(items)
    prod = Polynomial.signed_sum
    terms = {
        idx: tuple(tuple(prod(n, cell) for cell in row) for row in grid) for idx, grid in buckets.items()
    }
    return SuperForm(n, r0, r1, terms)


def signed_products_vanish(items) -> bool:
    """Whether signed_products(items) is zero, without building rational coefficients."""
    _, _, _, buckets = _product_cells(items)
    test = Polynomial.signed_sum_is_zero
    return all(test(cell) for grid in buckets.values() for row in grid for cell in row)


def _product_cells(items):
    u0 = items[0][1]
    for _, u, v, _ in items:
        u0._check(u)
        u0._check(v)
    n, r0, size = u0.n, u0.r0, u0.size
    buckets: Dict[Index, list] = {}
    for s, u, v, twist in items:
        for a, ma in u.terms.items():
            for b, mb in v.terms.items():
                sg, idx = merge_sign(a, b)
                if not sg:
                    continue
                sg *= s
                grid = buckets.get(idx)
                if grid is None:
                    grid = buckets[idx] = [[[] for _ in range(size)] for _ in range(size)]
                flip_b = len(b) % 2
                flip_a = len(a) % 2 if twist else 0
                for i in range(size):
                    ai = ma[i]
                    gi = grid[i]
                    pi = i < r0
                    for k in range(size):
                        x = ai[k]
                        if not x.terms:
                            continue
                        off = pi != (k < r0)
                        c = -sg if (off and (flip_b ^ twist)) ^ bool(flip_a) else sg
                        bk = mb[k]
                        for j in range(size):
                            y = bk[j]
                            if y.terms:
                                gi[j].append((c, x, y))
    return n, r0, u0.r1, buckets


def str_product(u: SuperForm, v: SuperForm) -> DifferentialForm:
    """str(u v), touching only the diagonal of the product."""
    u._check(v)
    n, r0, size = u.n, u.r0, u.size
    cells: Dict[Index, list] = {}
    for a, ma in u.terms.items():
        for b, mb in v.terms.items():
            sg, idx = merge_sign(a, b)
            if not sg:
                continue
            cell = cells.setdefault(idx, [])
            flip_b = len(b) % 2
            for i in range(size):
                si = sg if i < r0 else -sg
                for k in range(size):
                    x, y = ma[i][k], mb[k][i]
                    if x.terms and y.terms:
                        off = (i < r0) != (k < r0)
                        cell.append((-si if off and flip_b else si, x, y))
    return DifferentialForm(n, {idx: Polynomial.signed_sum(n, cell) for idx, cell in cells.items()})


def super_mul(u: SuperForm, v: SuperForm) -> SuperForm:
    return u * v


def supertrace(u: SuperForm) -> DifferentialForm:
    return u.supertrace()


def supercommutator(u: SuperForm, v: SuperForm) -> SuperForm:
    """[u, v] = uv - (-1)^{|u||v|} vu, extended bilinearly over parity parts."""
    u_parts = u.parity_parts()
    v_parts = v.parity_parts()
    total = SuperForm(u.n, u.r0, u.r1)
    for pu, uu in enumerate(u_parts):
        if uu.is_zero():
            continue
        for pv, vv in enumerate(v_parts):
            if vv.is_zero():
                continue
            uv = uu * vv
            vu = vv * uu
            total = total + (uv + vu if pu and pv else uv - vu)
    return total


def form_times(form: DifferentialForm, u: SuperForm) -> SuperForm:
    """(form (x) 1) * u."""
    return SuperForm.from_form(form, u.r0, u.r1) * u
