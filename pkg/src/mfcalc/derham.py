"""The twisted de Rham complex (Omega, ^dw): reduction to Milnor-ring classes, residue, pairing."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List

from .forms import DifferentialForm, differential
from .groebner import MilnorData
from .poly import Polynomial


class NotClosed(ValueError):
    def __init__(self, k: int, residual: DifferentialForm):
        super().__init__(f"dw ^ theta_{k} = {residual.format()} is nonzero")
        self.k = k
        self.residual = residual


class NonzeroDegreeZero(ValueError):
    pass


class Ungraded(ValueError):
    pass


@dataclass(frozen=True)
class HHClass:
    parity: int
    g: Polynomial
    milnor: MilnorData

    def __post_init__(self):
        object.__setattr__(self, "g", self.milnor.nf(self.g))

    def is_zero(self) -> bool:
        return self.g.is_zero()

    def coefficients(self) -> List[Fraction]:
        return self.milnor.coordinates(self.g)

    def __add__(self, other: "HHClass") -> "HHClass":
        self._check(other)
        return HHClass(self.parity, self.g + other.g, self.milnor)

    def __neg__(self):
        return HHClass(self.parity, -self.g, self.milnor)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HHClass":
        return HHClass(self.parity, self.g * c, self.milnor)

    def _check(self, other: "HHClass"):
        if other.milnor.w != self.milnor.w:
            raise ValueError("classes for different potentials")

    def __eq__(self, other):
        return (
            isinstance(other, HHClass)
            and self.milnor.w == other.milnor.w
            and self.g == other.g
            and (self.g.is_zero() or self.parity == other.parity)
        )

    def __hash__(self):
        return hash((self.milnor.w, self.g))

    def to_json(self, names=None) -> Dict:
        basis = []
        for m in self.milnor.basis:
            basis.append(Polynomial.monomial(m, 1).format(names))
        return {
            "parity": self.parity,
            "g": self.g.format(names),
            "coefficients": {b: str(c) for b, c in zip(basis, self.coefficients()) if c},
        }


def dw_wedge(theta: DifferentialForm, w: Polynomial) -> DifferentialForm:
    return differential(w).wedge(theta)


def check_closed(theta: DifferentialForm, w: Polynomial) -> None:
    """Raise NotClosed for the first k < n with dw ^ theta_k != 0."""
    dw = differential(w)
    for k in range(theta.n):
        part = theta.part(k)
        if part.is_zero():
            continue
        r = dw.wedge(part)
        if not r.is_zero():
            raise NotClosed(k, r)


def reduce(theta: DifferentialForm, md: MilnorData, parity: int = None) -> HHClass:
    """Class of a closed mixed-degree form: the top coefficient modulo the Jacobian ideal.

    Closed components of degree 0 < k < n are exact and are discarded.
    """
    n = md.n
    if theta.n != n:
        raise ValueError("form and Milnor data live over different rings")
    # a nonzero function is never dw-closed; name the failure before the generic check
    if not theta.part(0).is_zero() and n > 0:
        raise NonzeroDegreeZero("degree-zero component must vanish")
    check_closed(theta, md.w)
    if parity is None:
        parity = n % 2
    return HHClass(parity % 2, theta.top_coefficient(), md)


def residue(c: HHClass) -> Fraction:
    """Linear functional on the Milnor ring, zero below the socle, residue(hessian) = mu."""
    md = c.milnor
    if md.ws is None:
        raise Ungraded("residue needs a weight system")
    socle = [m for m in md.basis if md.ws.degree_of(m) == md.socle_degree]
    (top,) = socle
    h = md.hessian_nf.coefficient(top)
    return c.g.coefficient(top) * md.mu / h


def pairing(c1: HHClass, c2: HHClass) -> Fraction:
    c1._check(c2)
    return residue(HHClass(0, c1.g * c2.g, c1.milnor))


def gram_matrix(md: MilnorData) -> List[List[Fraction]]:
    mons = [Polynomial.monomial(m, 1) for m in md.basis]
    return [[pairing(HHClass(0, a, md), HHClass(0, b, md)) for b in mons] for a in mons]
