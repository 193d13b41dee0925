"""Exact Grothendieck residues, residue pairings and the local duality check.

Residues are computed with the transformation law: if ``z_i^{a_i} = sum_j
A_ij f_j`` then ``res_f(g) = res_{z^a}(g det A)``, and the residue with
respect to the monomial section ``(z_1^{a_1}, ..., z_n^{a_n})`` is the
coefficient of ``z^{a-1}``.  Normalization: ``res_s(g)`` includes the factor
``(2 pi i)^{-n}``, so ``res_{(z_1, ..., z_n)}(1) = 1``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .koszul import MilnorAlgebra, NonIsolatedZero, Section, milnor_algebra
from .linalg import determinant, leibniz_determinant
from .polyring import (
    GREVLEX,
    GaussianRational,
    MonomialOrder,
    Polynomial,
    buchberger,
    format_gaussian,
    lift_in_ideal,
    normal_form,
    standard_monomials,
)

DEFAULT_EXPONENT_CAP = 64


@dataclass(frozen=True)
class ResidueValue:
    """``value * (2 pi i)^unit_power`` with ``value`` exact."""

    value: GaussianRational
    unit_power: int = 0

    def __complex__(self):
        return complex(self.value) * (2j * math.pi) ** self.unit_power

    def __add__(self, other: ResidueValue) -> ResidueValue:
        if other.unit_power != self.unit_power:
            raise ValueError("cannot add residues with different (2 pi i) powers")
        return ResidueValue(self.value + other.value, self.unit_power)

    def __neg__(self):
        return ResidueValue(-self.value, self.unit_power)

    def to_json(self) -> dict:
        return {"value": format_gaussian(self.value), "unit_power": self.unit_power}

    def __str__(self):
        if self.unit_power == 0:
            return format_gaussian(self.value)
        return f"({format_gaussian(self.value)})*(2*pi*i)^{self.unit_power}"


@dataclass(frozen=True)
class MonomialLift:
    """``z_i^{exponents[i]} = sum_j matrix[i][j] * f_j`` and ``det(matrix)``."""

    exponents: Tuple[int, ...]
    matrix: Tuple[Tuple[Polynomial, ...], ...]
    det: Polynomial


def _pure_power_exponents(s: Section, order: MonomialOrder, cap: int) -> Tuple[int, ...]:
    G = buchberger(s.polys, order)
    if not standard_monomials(G, s.n).is_finite:
        raise NonIsolatedZero(f"{s.to_str()} has no isolated zero at the origin")
    ring = s.ring
    exps = []
    for i in range(s.n):
        zi = ring.gen(i)
        p = ring.one()
        for a in range(1, cap + 1):
            p = p * zi
            if normal_form(p, G)[0].is_zero():
                exps.append(a)
                break
        else:
            raise NonIsolatedZero(
                f"z{i + 1}^a is not in the ideal for any a <= {cap}; "
                "the section must vanish only at the origin"
            )
    return tuple(exps)


@functools.lru_cache(maxsize=256)
def monomial_lift(s: Section, order: MonomialOrder = GREVLEX, cap: int = DEFAULT_EXPONENT_CAP) -> MonomialLift:
    """Minimal pure powers in the ideal together with a cofactor matrix."""
    exps = _pure_power_exponents(s, order, cap)
    ring = s.ring
    rows = []
    for i, a in enumerate(exps):
        target = ring.monomial(tuple(a if k == i else 0 for k in range(s.n)))
        rows.append(tuple(lift_in_ideal(target, s.polys, order)))
    det = leibniz_determinant(rows, ring.zero(), ring.one())
    return MonomialLift(exps, tuple(rows), det)


def residue_from_lift(g: Polynomial, s: Section, exponents: Sequence[int], matrix) -> GaussianRational:
    """Residue through an explicit lift; the lift identity is checked first."""
    ring = s.ring
    for i, (a, row) in enumerate(zip(exponents, matrix)):
        lhs = ring.monomial(tuple(a if k == i else 0 for k in range(s.n)))
        rhs = ring.zero()
        for c, f in zip(row, s.polys):
            rhs = rhs + c * f
        if lhs != rhs:
            raise ValueError(f"row {i + 1} of the lift does not reproduce z{i + 1}^{a}")
    det = leibniz_determinant([list(r) for r in matrix], ring.zero(), ring.one())
    return _coefficient_of_product(g, det, tuple(a - 1 for a in exponents))


def _coefficient_of_product(g: Polynomial, h: Polynomial, m) -> GaussianRational:
    total = GaussianRational(0)
    for mg, cg in g.terms.items():
        rest = tuple(x - y for x, y in zip(m, mg))
        if min(rest) < 0:
            continue
        ch = h.terms.get(rest)
        if ch is not None:
            total = total + cg * ch
    return total


def groth_residue(
    g: Polynomial, s: Section, order: MonomialOrder = GREVLEX, cap: int = DEFAULT_EXPONENT_CAP
) -> ResidueValue:
    """Grothendieck residue of ``g dz_1 ... dz_n / (f_1 ... f_n)`` at the origin.

    The common zero set of the section must be the origin alone.
    """
    if g.ring != s.ring:
        raise ValueError("g and the section live in different rings")
    lift = monomial_lift(s, order, cap)
    value = _coefficient_of_product(g, lift.det, tuple(a - 1 for a in lift.exponents))
    return ResidueValue(value, 0)


def residue_pair(g: Polynomial, h: Polynomial, s: Section, **kw) -> ResidueValue:
    """``res_s(g, h)``: the residue of the product ``g h``."""
    return groth_residue(g * h, s, **kw)


@dataclass(frozen=True)
class PairingMatrix:
    basis: Tuple[str, ...]
    entries: Tuple[Tuple[GaussianRational, ...], ...]
    determinant: GaussianRational

    @property
    def nondegenerate(self) -> bool:
        return bool(self.determinant)

    def is_symmetric(self) -> bool:
        n = len(self.entries)
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(n))

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis),
            "matrix": [[format_gaussian(x) for x in row] for row in self.entries],
            "determinant": format_gaussian(self.determinant),
        }


def residue_pairing_matrix(s: Section, order: MonomialOrder = GREVLEX, algebra: Optional[MilnorAlgebra] = None) -> PairingMatrix:
    """Residue pairing on the standard-monomial basis of the Milnor algebra."""
    A = algebra or milnor_algebra(s, order)
    ring = s.ring
    lift = monomial_lift(s, order)
    corner = tuple(a - 1 for a in lift.exponents)
    cache = {}
    rows = []
    for a in A.basis:
        row = []
        for b in A.basis:
            m = tuple(x + y for x, y in zip(a, b))
            if m not in cache:
                cache[m] = _coefficient_of_product(ring.monomial(m), lift.det, corner)
            row.append(cache[m])
        rows.append(tuple(row))
    return PairingMatrix(tuple(A.basis_labels()), tuple(rows), determinant(rows))


def duality_check(s: Section, order: MonomialOrder = GREVLEX) -> dict:
    """Local duality certificate: the pairing is non-degenerate iff its determinant is nonzero."""
    A = milnor_algebra(s, order)
    P = residue_pairing_matrix(s, order, A)
    return {"nondegenerate": P.nondegenerate, "determinant": P.determinant, "mu": A.mu, "matrix": P}


def pairing_sign(n: int) -> int:
    """Rational sign relating ``(g, h)_psi`` to ``res_s(g, h) (2 pi i)^n``.

    Product of ``(-1)^{floor((n+3)/2) + n(n+1)/2}``, the ``(-1)^n`` from
    ``(-2 pi i)^n`` and the ``(-1)^{n(n+1)/2}`` relating the virtual residue to
    the Grothendieck residue.
    """
    e = (n + 3) // 2 + n * (n + 1) // 2 + n + n * (n + 1) // 2
    return -1 if e & 1 else 1


def formula_prefactor(n: int) -> complex:
    """``(-1)^{floor((n+3)/2) + n(n+1)/2} (-2 pi i)^n`` as a complex number."""
    e = (n + 3) // 2 + n * (n + 1) // 2
    return (-1) ** e * (-2j * math.pi) ** n


def pairing_psi(g: Polynomial, h: Polynomial, s: Section, unit: Optional[Polynomial] = None, **kw) -> ResidueValue:
    """``(g, h)_psi`` for ``psi = u dz_1...dz_n (x) e_1...e_n`` (``u = 1`` by default)."""
    if unit is not None:
        g = g * unit
    r = residue_pair(g, h, s, **kw)
    return ResidueValue(r.value * pairing_sign(s.n), s.n)


def hessian(f: Polynomial) -> Polynomial:
    n = f.ring.nvars
    rows = [[f.derivative(i).derivative(j) for j in range(n)] for i in range(n)]
    return leibniz_determinant(rows, f.ring.zero(), f.ring.one())


def hessian_residue(f: Polynomial, **kw) -> ResidueValue:
    """Residue of the Hessian determinant with respect to ``grad f``."""
    return groth_residue(hessian(f), Section.gradient(f), **kw)
