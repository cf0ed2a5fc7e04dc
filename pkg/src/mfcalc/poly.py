"""Sparse multivariate polynomials over the rationals.

A polynomial lives in a ring with a fixed number ``n`` of variables and is
stored as a dict mapping exponent tuples to nonzero ``Fraction`` coefficients.
All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]


class Inhomogeneous:
    """Marker returned by :func:`weighted_degree` for mixed-degree input."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Inhomogeneous"


INHOMOGENEOUS = Inhomogeneous()


class DegreeUndefined(ValueError):
    pass


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as a rational coefficient")


_BITS = 24
_MASK = (1 << _BITS) - 1


_PACKED: Dict[Monomial, int] = {}
_UNPACKED: Dict[Tuple[int, int], Monomial] = {}


def _pack(m: Monomial) -> int:
    # exponents as fixed-width fields, so monomial products are integer sums
    k = _PACKED.get(m)
    if k is None:
        k = 0
        for i, e in enumerate(m):
            k |= e << (_BITS * i)
        _PACKED[m] = k
    return k


def _unpack(k: int, n: int) -> Monomial:
    m = _UNPACKED.get((k, n))
    if m is None:
        m = _UNPACKED[(k, n)] = tuple((k >> (_BITS * i)) & _MASK for i in range(n))
    return m


def _integral(terms: Mapping[Monomial, Fraction]):
    """(d, [(packed m, d*c)]) with d the lcm of the denominators."""
    d = 1
    for c in terms.values():
        q = c.denominator
        if q != 1:
            d = d * q // gcd(d, q)
    if d == 1:
        return 1, [(_pack(m), c.numerator) for m, c in terms.items()]
    return d, [(_pack(m), c.numerator * (d // c.denominator)) for m, c in terms.items()]


def grlex_key(m: Monomial):
    return (sum(m), m)


class Polynomial:
    """Immutable sparse polynomial in ``n`` variables with rational coefficients."""

    __slots__ = ("n", "terms", "_hash", "_int")

    def __init__(self, n: int, terms: Optional[Mapping[Monomial, object]] = None):
        self.n = n
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != n:
                    raise ValueError(f"exponent {m} does not have length {n}")
                c = _coerce(c)
                if c:
                    clean[tuple(m)] = c
        self.terms = clean
        self._hash = None
        self._int = None

    @classmethod
    def _raw(cls, n: int, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.n = n
        p.terms = terms
        p._hash = None
        p._int = None
        return p

    def integral(self):
        """Cached (d, [(m, d*c)]) with d the lcm of the coefficient denominators."""
        if self._int is None:
            self._int = _integral(self.terms)
        return self._int

    @staticmethod
    def sum_of_products(n: int, pairs) -> "Polynomial":
        """sum p*q over ``pairs``, accumulated over one common denominator."""
        return Polynomial.signed_sum(n, [(1, p, q) for p, q in pairs])

    @staticmethod
    def _signed_accumulate(triples) -> Tuple[int, Dict[Monomial, int]]:
        prods = []
        den = 1
        for s, p, q in triples:
            if s and p.terms and q.terms:
                a, b = p.integral(), q.integral()
                d = a[0] * b[0]
                den = den * d // gcd(den, d)
                prods.append((s, d, a[1], b[1]))
        out: Dict[Monomial, int] = {}
        get = out.get
        for s, d, t1, t2 in prods:
            f = s * (den // d)
            for m1, c1 in t1:
                c1 *= f
                for m2, c2 in t2:
                    m = m1 + m2
                    out[m] = get(m, 0) + c1 * c2
        return den, out

    @staticmethod
    def signed_sum(n: int, triples) -> "Polynomial":
        """sum s*p*q over (s, p, q) with integer s."""
        den, out = Polynomial._signed_accumulate(triples)
        items = [(m, c) for m, c in out.items() if c]
        if den != 1:
            g = den
            for _, c in items:
                g = gcd(g, c)
                if g == 1:
                    break
            if g != 1:
                den //= g
                items = [(m, c // g) for m, c in items]
        if den == 1:
            p = Polynomial._raw(n, {_unpack(m, n): Fraction(c) for m, c in items})
        else:
            p = Polynomial._raw(n, {_unpack(m, n): Fraction(c, den) for m, c in items})
        p._int = (den, items)
        return p

    @staticmethod
    def signed_sum_is_zero(triples) -> bool:
        _, out = Polynomial._signed_accumulate(triples)
        return not any(out.values())

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._raw(n, {})

    @classmethod
    def const(cls, n: int, c=1) -> "Polynomial":
        c = _coerce(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n: int, i: int) -> "Polynomial":
        """The variable x_i, 0-based."""
        if not 0 <= i < n:
            raise IndexError(f"variable index {i} out of range for {n} variables")
        e = [0] * n
        e[i] = 1
        return cls._raw(n, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, m: Sequence[int], c=1) -> "Polynomial":
        c = _coerce(c)
        return cls._raw(len(m), {tuple(m): c} if c else {})

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.n in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.n, Fraction(0))

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.n != self.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.const(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Polynomial":
        c = _coerce(c)
        if not c:
            return Polynomial.zero(self.n)
        return Polynomial._raw(self.n, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.n)
        return Polynomial.sum_of_products(self.n, ((self, other),))

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Polynomial.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, m: Monomial, c=1) -> "Polynomial":
        c = _coerce(c)
        if not c:
            return Polynomial.zero(self.n)
        return Polynomial._raw(
            self.n, {tuple(a + b for a, b in zip(k, m)): v * c for k, v in self.terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.const(self.n, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    # -- calculus / substitution ---------------------------------------
    def diff(self, i: int) -> "Polynomial":
        """Partial derivative with respect to x_i (0-based)."""
        if not 0 <= i < self.n:
            raise IndexError(f"variable index {i} out of range for {self.n} variables")
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return Polynomial._raw(self.n, out)

    def substitute(self, assignment: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Replace x_i by ``assignment[i]``; every variable occurring in self must be assigned."""
        if not self.terms:
            targets = [p.n for p in assignment.values()]
            return Polynomial.zero(targets[0] if targets else self.n)
        used = {i for m in self.terms for i, e in enumerate(m) if e}
        missing = used - set(assignment)
        if missing:
            raise ValueError(f"substitution misses variables {sorted(missing)}")
        vals = list(assignment.values())
        m_out = vals[0].n if vals else self.n
        for v in vals:
            if v.n != m_out:
                raise ValueError("substituted polynomials live in different rings")
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def pw(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = assignment[i] ** e
            return powers[key]

        total = Polynomial.zero(m_out)
        for m, c in self.terms.items():
            term = Polynomial.const(m_out, c)
            for i, e in enumerate(m):
                if e:
                    term = term * pw(i, e)
            total = total + term
        return total

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total

    # -- text ----------------------------------------------------------
    def format(self, names: Optional[Sequence[str]] = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.n)]
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({self.format()})"

    __str__ = format


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    return f.diff(i)


def substitute(f: Polynomial, assignment: Mapping[int, Polynomial]) -> Polynomial:
    return f.substitute(assignment)


@dataclass(frozen=True)
class WeightSystem:
    """Integer weights of the variables and the weighted degree ``h`` of the potential."""

    weights: Tuple[int, ...]
    h: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive integers")
        if self.h < 1:
            raise ValueError("the potential degree h must be a positive integer")

    @property
    def n(self) -> int:
        return len(self.weights)

    def degree_of(self, m: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, m))


def weighted_degree(f: Polynomial, ws: WeightSystem):
    """Common weighted degree of all monomials of ``f``, or :data:`INHOMOGENEOUS`."""
    if f.is_zero():
        raise DegreeUndefined("the zero polynomial has no weighted degree")
    if ws.n != f.n:
        raise ValueError("weight system does not match the variable count")
    degs = {ws.degree_of(m) for m in f.terms}
    if len(degs) > 1:
        return INHOMOGENEOUS
    return degs.pop()


def monomials_of_degree(ws: Sequence[int], d: int) -> Iterable[Monomial]:
    """All exponent vectors with sum(w_i e_i) == d, in a deterministic order."""
    n = len(ws)
    if d < 0:
        return []
    out = []

    def rec(i, remaining, acc):
        if i == n - 1:
            if remaining % ws[i] == 0:
                out.append(tuple(acc + [remaining // ws[i]]))
            return
        for e in range(remaining // ws[i] + 1):
            rec(i + 1, remaining - e * ws[i], acc + [e])

    if n == 0:
        return [()] if d == 0 else []
    rec(0, d, [])
    return out
