"""Polynomial bar tensors, the differentials b and B_w, the HKR map, and the L_w action.

A tensor [a_0|a_1|...|a_{m+1}] has s = m + 2 slots and length m.  Tensors are
expanded multilinearly into monomial tensors, so a BarElement is a map from
tuples of exponent vectors to rationals.  All slots live in one polynomial
ring (the diagonal pullback).

Conventions fixed by the identities checked in :func:`verify_chain_maps`:

* b[a_0|...|a_{m+1}] = sum_{i=0}^{m} (-1)^i [...|a_i a_{i+1}|...], dropping
  the one-slot terms (b vanishes on two-slot tensors).
* B_w inserts w after slot i with sign (-1)^i, for i = 0..m.
* i_hkr[a_0|...|a_{m+1}] = a_{m+1} a_0 da_1 ^ ... ^ da_m.  Since
  i_hkr B_w = (m+1) dw ^ i_hkr on length m, the chain map into (Omega, ^dw) is
  the normalized map i_hkr / m!.
* (v + f) acts by (-1)^{s-1} [a_0 v(a_1)|a_2|...] + [f a_0|a_1|...].
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .forms import DifferentialForm, differential
from .mf import LwElement
from .poly import Monomial, Polynomial

Tensor = Tuple[Monomial, ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class BarElement:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Dict[Tensor, Fraction]] = None):
        self.n = n
        self.terms = {t: Fraction(c) for t, c in (terms or {}).items() if c}

    @classmethod
    def tensor(cls, slots: Sequence[Polynomial]) -> "BarElement":
        """Multilinear expansion of [slots[0]|slots[1]|...]."""
        if not slots:
            raise ValueError("a bar tensor needs at least one slot")
        n = slots[0].n
        acc: Dict[Tensor, Fraction] = {(): Fraction(1)}
        for p in slots:
            if p.n != n:
                raise ValueError("slots live in different rings")
            nxt = {}
            for t, c in acc.items():
                for m, v in p.terms.items():
                    key = t + (m,)
                    nxt[key] = nxt.get(key, 0) + c * v
            acc = nxt
        return cls(n, acc)

    @classmethod
    def zero(cls, n: int) -> "BarElement":
        return cls(n)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "BarElement") -> "BarElement":
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, 0) + c
        return BarElement(self.n, out)

    def __neg__(self):
        return BarElement(self.n, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BarElement":
        return BarElement(self.n, {t: v * c for t, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, BarElement) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def lengths(self) -> List[int]:
        return sorted({len(t) - 2 for t in self.terms})

    def format(self, names=None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms):
            c = self.terms[t]
            body = "|".join(Polynomial.monomial(m, 1).format(names) for m in t)
            parts.append(f"{c}[{body}]")
        return " + ".join(parts)

    def __repr__(self):
        return f"BarElement({self.format()})"


def _accumulate(out: Dict, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def bar_b(xi: BarElement) -> BarElement:
    out: Dict[Tensor, Fraction] = {}
    for t, c in xi.terms.items():
        s = len(t)
        if s < 3:
            continue
        for i in range(s - 1):
            key = t[:i] + (_mono_mul(t[i], t[i + 1]),) + t[i + 2 :]
            _accumulate(out, key, -c if i % 2 else c)
    return BarElement(xi.n, out)


def bar_Bw(xi: BarElement, w: Polynomial) -> BarElement:
    out: Dict[Tensor, Fraction] = {}
    wt = list(w.terms.items())
    for t, c in xi.terms.items():
        s = len(t)
        for i in range(s - 1):
            sign = -c if i % 2 else c
            for m, v in wt:
                _accumulate(out, t[: i + 1] + (m,) + t[i + 1 :], sign * v)
    return BarElement(xi.n, out)


def diagonal(xi: BarElement) -> Dict[Tensor, Fraction]:
    """Merge the outer slots: [a_0|...|a_{m+1}] -> (a_{m+1} a_0; a_1, ..., a_m)."""
    out: Dict[Tensor, Fraction] = {}
    for t, c in xi.terms.items():
        if len(t) < 2:
            continue
        key = (_mono_mul(t[-1], t[0]),) + t[1:-1]
        _accumulate(out, key, c)
    return out


def i_hkr(xi: BarElement) -> DifferentialForm:
    n = xi.n
    total = DifferentialForm(n)
    for t, c in xi.terms.items():
        if len(t) < 2:
            continue
        form = DifferentialForm.function(Polynomial._raw(n, {_mono_mul(t[-1], t[0]): c}))
        for m in t[1:-1]:
            form = form.wedge(differential(Polynomial._raw(n, {m: Fraction(1)})))
            if form.is_zero():
                break
        total = total + form
    return total


def i_hkr_normalized(xi: BarElement) -> DifferentialForm:
    """i_hkr divided by m! on length-m tensors: a chain map to (Omega, ^dw)."""
    n = xi.n
    total = DifferentialForm(n)
    by_len: Dict[int, Dict[Tensor, Fraction]] = {}
    for t, c in xi.terms.items():
        by_len.setdefault(len(t), {})[t] = c
    for s, terms in by_len.items():
        if s < 2:
            continue
        total = total + i_hkr(BarElement(n, terms)).scale(Fraction(1, factorial(s - 2)))
    return total


def lw_action(v: LwElement, xi: BarElement) -> BarElement:
    n = xi.n
    out: Dict[Tensor, Fraction] = {}
    for t, c in xi.terms.items():
        s = len(t)
        if s >= 3:
            # two-slot tensors would give a one-slot term, which is dropped
            a1 = Polynomial._raw(n, {t[1]: Fraction(1)})
            va = v.apply(a1)
            sign = -c if (s - 1) % 2 else c
            for m, val in va.terms.items():
                _accumulate(out, (_mono_mul(t[0], m),) + t[2:], sign * val)
        for m, val in v.function.terms.items():
            _accumulate(out, (_mono_mul(m, t[0]),) + t[1:], c * val)
    return BarElement(n, out)


def _vw_term(v: LwElement, xi: BarElement, w: Polynomial) -> BarElement:
    """(-1)^{s-2} [v(w) a_0|a_1|...]."""
    n = xi.n
    vw = v.apply(w)
    out: Dict[Tensor, Fraction] = {}
    for t, c in xi.terms.items():
        s = len(t)
        if s < 2:
            continue
        sign = -c if s % 2 else c
        for m, val in vw.terms.items():
            _accumulate(out, (_mono_mul(m, t[0]),) + t[1:], sign * val)
    return BarElement(n, out)


def lw_residual(v: LwElement, xi: BarElement, w: Polynomial) -> BarElement:
    """(b + B_w) phi - phi (b + B_w) + (v(w)-term); zero iff the action is a closed morphism."""
    D = lambda e: bar_b(e) + bar_Bw(e, w)
    return D(lw_action(v, xi)) - lw_action(v, D(xi)) + _vw_term(v, xi, w)


# -- randomized verification --------------------------------------------------


def random_monomial_poly(rng: random.Random, n: int, max_deg: int = 3) -> Polynomial:
    e = [0] * n
    for _ in range(rng.randint(0, max_deg)):
        e[rng.randrange(n)] += 1
    return Polynomial.monomial(tuple(e), rng.choice([1, 1, -1, 2, Fraction(1, 2)]))


def random_bar(rng: random.Random, n: int, max_len: int, terms: int = 2) -> BarElement:
    xi = BarElement.zero(n)
    for _ in range(terms):
        m = rng.randint(0, max_len)
        slots = [random_monomial_poly(rng, n) for _ in range(m + 2)]
        xi = xi + BarElement.tensor(slots)
    return xi


def random_lw(rng: random.Random, n: int) -> LwElement:
    vf = tuple(random_monomial_poly(rng, n, 2) if rng.random() < 0.7 else Polynomial.zero(n) for _ in range(n))
    f = random_monomial_poly(rng, n, 2) if rng.random() < 0.5 else Polynomial.zero(n)
    return LwElement(vf, f)


@dataclass
class HKRReport:
    trials: int
    b_squared: int = 0
    total_squared: int = 0
    chain_map: int = 0
    lw_closed: int = 0
    first_failure: Optional[Dict] = None

    @property
    def ok(self) -> bool:
        return self.first_failure is None

    def to_json(self) -> Dict:
        return {
            "trials": self.trials,
            "passed": {
                "b_squared": self.b_squared,
                "total_squared": self.total_squared,
                "chain_map": self.chain_map,
                "lw_closed": self.lw_closed,
            },
            "residual_norm": 0 if self.ok else 1,
            "first_failure": self.first_failure,
        }


def verify_chain_maps(n_vars: int, w: Polynomial, trials: int, max_len: int = 4, seed: int = 0) -> HKRReport:
    if max_len > 5:
        raise ValueError("max_len must be at most 5")
    if w.n != n_vars:
        raise ValueError("potential does not match the variable count")
    rng = random.Random(seed)
    rep = HKRReport(trials)
    dw = differential(w)

    def fail(name, xi, lhs, rhs=None):
        if rep.first_failure is None:
            rep.first_failure = {"identity": name, "tensor": xi.format(), "lhs": str(lhs), "rhs": str(rhs)}

    for _ in range(trials):
        xi = random_bar(rng, n_vars, max_len)
        bxi = bar_b(xi)
        bb = bar_b(bxi)
        if bb.is_zero():
            rep.b_squared += 1
        else:
            fail("b^2", xi, bb.format())
        Dxi = bxi + bar_Bw(xi, w)
        D2 = bar_b(Dxi) + bar_Bw(Dxi, w)
        if not diagonal(D2):
            rep.total_squared += 1
        else:
            fail("(b+B_w)^2", xi, diagonal(D2))
        lhs = i_hkr_normalized(Dxi)
        rhs = dw.wedge(i_hkr_normalized(xi))
        if lhs == rhs:
            rep.chain_map += 1
        else:
            fail("chain map", xi, lhs.format(), rhs.format())
        v = random_lw(rng, n_vars)
        r = lw_residual(v, xi, w)
        if r.is_zero():
            rep.lw_closed += 1
        else:
            fail("L_w action", xi, r.format())
    return rep
