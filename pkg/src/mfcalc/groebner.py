"""Buchberger's algorithm, normal forms, and Milnor-ring data of isolated singularities."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .poly import Monomial, Polynomial, WeightSystem, weighted_degree, INHOMOGENEOUS


class NotIsolated(ValueError):
    """The Jacobian ideal is not zero-dimensional."""


class CriticalValueNonzero(ValueError):
    pass


def _grevlex(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


def _lex(m: Monomial):
    return m


ORDERS: Dict[str, Callable[[Monomial], tuple]] = {"grevlex": _grevlex, "lex": _lex}


def leading_term(f: Polynomial, order: str = "grevlex") -> Tuple[Monomial, Fraction]:
    key = ORDERS[order]
    m = max(f.terms, key=key)
    return m, f.terms[m]


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _quotient(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def _monic(f: Polynomial, order: str) -> Polynomial:
    _, c = leading_term(f, order)
    return f.scale(1 / c)


def _reduce(f: Polynomial, basis: Sequence[Polynomial], leads: Sequence[Monomial], order: str) -> Polynomial:
    """Full reduction of f by a list of monic polynomials with given leading monomials."""
    key = ORDERS[order]
    n = f.n
    work = dict(f.terms)
    rem: Dict[Monomial, Fraction] = {}
    while work:
        m = max(work, key=key)
        c = work[m]
        for g, lm in zip(basis, leads):
            if _divides(lm, m):
                q = _quotient(m, lm)
                for gm, gc in g.terms.items():
                    t = tuple(a + b for a, b in zip(gm, q))
                    v = work.get(t, Fraction(0)) - c * gc
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = c
            del work[m]
    return Polynomial._raw(n, rem)


@dataclass(frozen=True)
class GroebnerBasis:
    generators: Tuple[Polynomial, ...]
    order: str = "grevlex"
    leads: Tuple[Monomial, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.leads:
            object.__setattr__(
                self, "leads", tuple(leading_term(g, self.order)[0] for g in self.generators)
            )

    @property
    def n(self) -> int:
        return self.generators[0].n

    def normal_form(self, f: Polynomial) -> Polynomial:
        return _reduce(f, self.generators, self.leads, self.order)

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def is_zero_dimensional(self) -> bool:
        # every variable must have a pure power among the leading monomials
        n = self.n
        for i in range(n):
            if not any(all(e == 0 for j, e in enumerate(lm) if j != i) and lm[i] > 0 for lm in self.leads):
                return False
        return True

    def standard_monomials(self) -> List[Monomial]:
        """Monomials not divisible by any leading monomial (requires zero-dimensionality)."""
        if not self.is_zero_dimensional():
            raise NotIsolated("the ideal is not zero-dimensional; infinitely many standard monomials")
        n = self.n
        bounds = []
        for i in range(n):
            bounds.append(
                min(lm[i] for lm in self.leads if all(e == 0 for j, e in enumerate(lm) if j != i) and lm[i] > 0)
            )
        out = [
            m
            for m in product(*(range(b) for b in bounds))
            if not any(_divides(lm, m) for lm in self.leads)
        ]
        out.sort(key=lambda m: (sum(m), tuple(-e for e in m)))
        return out


def buchberger(gens: Sequence[Polynomial], order: str = "grevlex") -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("buchberger needs at least one nonzero generator")
    if order not in ORDERS:
        raise ValueError(f"unknown monomial order {order!r}")
    key = ORDERS[order]
    basis: List[Polynomial] = []
    leads: List[Monomial] = []
    for g in gens:
        r = _reduce(g, basis, leads, order) if basis else g
        if not r.is_zero():
            r = _monic(r, order)
            basis.append(r)
            leads.append(leading_term(r, order)[0])
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    while pairs:
        # normal selection strategy: smallest lcm first
        pairs.sort(key=lambda p: key(_lcm(leads[p[0]], leads[p[1]])))
        i, j = pairs.pop(0)
        li, lj = leads[i], leads[j]
        lcm = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading monomials: S-polynomial reduces to zero
        s = basis[i].mul_monomial(_quotient(lcm, li)) - basis[j].mul_monomial(_quotient(lcm, lj))
        r = _reduce(s, basis, leads, order)
        if r.is_zero():
            continue
        r = _monic(r, order)
        basis.append(r)
        leads.append(leading_term(r, order)[0])
        k = len(basis) - 1
        pairs.extend((a, k) for a in range(k))
    # minimalize and interreduce
    keep = [
        i
        for i in range(len(basis))
        if not any(j != i and _divides(leads[j], leads[i]) and (leads[j] != leads[i] or j < i) for j in range(len(basis)))
    ]
    mb = [basis[i] for i in keep]
    ml = [leads[i] for i in keep]
    reduced = []
    for idx, g in enumerate(mb):
        others = [h for t, h in enumerate(mb) if t != idx]
        oleads = [h for t, h in enumerate(ml) if t != idx]
        tail = g - Polynomial.monomial(ml[idx], 1) if g.n else g
        r = Polynomial.monomial(ml[idx], 1) + _reduce(tail, others, oleads, order)
        reduced.append(r)
    order_idx = sorted(range(len(reduced)), key=lambda t: key(ml[t]))
    return GroebnerBasis(tuple(reduced[t] for t in order_idx), order, tuple(ml[t] for t in order_idx))


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.normal_form(f)


def _det(m: List[List[Polynomial]]) -> Polynomial:
    size = len(m)
    if size == 1:
        return m[0][0]
    total = Polynomial.zero(m[0][0].n)
    for j in range(size):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def hessian(w: Polynomial) -> Polynomial:
    n = w.n
    grads = [w.diff(i) for i in range(n)]
    return _det([[grads[i].diff(j) for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class MilnorData:
    w: Polynomial
    jacobian_gb: GroebnerBasis
    mu: int
    basis: Tuple[Monomial, ...]
    hessian_nf: Polynomial
    ws: Optional[WeightSystem] = None
    socle_degree: Optional[int] = None
    origin_only: bool = True

    @property
    def n(self) -> int:
        return self.w.n

    def nf(self, f: Polynomial) -> Polynomial:
        return self.jacobian_gb.normal_form(f)

    def coordinates(self, f: Polynomial) -> List[Fraction]:
        """Coefficients of NF(f) on the standard monomial basis."""
        g = self.nf(f)
        return [g.coefficient(m) for m in self.basis]

    def product_formula(self) -> Fraction:
        total = Fraction(1)
        for wi in self.ws.weights:
            total *= Fraction(self.ws.h, wi) - 1
        return total


def milnor_data(w: Polynomial, ws: Optional[WeightSystem] = None, order: str = "grevlex") -> MilnorData:
    """Jacobian Groebner basis, Milnor basis, Hessian class (and socle degree if graded)."""
    n = w.n
    if w.constant_term():
        raise ValueError("potential must vanish at the origin")
    if ws is not None:
        if ws.n != n:
            raise ValueError("weight system does not match the number of variables")
        d = weighted_degree(w, ws)
        if d is INHOMOGENEOUS or d != ws.h:
            raise ValueError(f"potential is not quasi-homogeneous of degree {ws.h}")
    grads = [w.diff(i) for i in range(n)]
    if all(g.is_zero() for g in grads):
        raise NotIsolated("the potential has an identically vanishing gradient")
    gb = buchberger(grads, order)
    basis = tuple(gb.standard_monomials())  # raises NotIsolated
    # w must vanish on the critical locus: w is nilpotent modulo the Jacobian ideal
    if not any(gb.contains(w ** k) for k in range(1, len(basis) + 1)):
        raise CriticalValueNonzero("w does not vanish on the critical locus")
    # origin is the only critical point iff every x_i is nilpotent modulo the ideal
    origin_only = all(
        any(gb.contains(Polynomial.var(n, i) ** k) for k in range(1, len(basis) + 1)) for i in range(n)
    )
    hess = gb.normal_form(hessian(w))
    if hess.is_zero():
        raise NotIsolated("Hessian vanishes in the Milnor ring")
    socle = None
    if ws is not None:
        socle = sum(ws.h - 2 * wi for wi in ws.weights)
        mu_formula = Fraction(1)
        for wi in ws.weights:
            mu_formula *= Fraction(ws.h, wi) - 1
        if mu_formula != len(basis):
            raise ValueError(f"Milnor number {len(basis)} disagrees with product formula {mu_formula}")
        top = [m for m in basis if ws.degree_of(m) == socle]
        if len(top) != 1 or any(ws.degree_of(m) > socle for m in basis):
            raise ValueError("graded Milnor ring does not have a one-dimensional socle")
    return MilnorData(w, gb, len(basis), basis, hess, ws, socle, origin_only)
