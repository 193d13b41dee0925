"""Numerical virtual residue: quadrature of eta_psi over a sphere around the origin.

The sphere of radius ``r`` in C^n is parameterized by
    n = 1:  z = r e^{i t}
    n = 2:  z1 = r cos(t) e^{i p1},  z2 = r sin(t) e^{i p2},  t in [0, pi/2]
and the pulled-back ``(2n-1)``-form is the determinant of the 1-form values on
the coordinate tangent vectors.  The orientation is that of the boundary of
the ball (outward normal first, standard orientation of R^{2n}); it is
computed from the parameterization rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dolbeault import export_eta
from .grammar import parse_polynomial
from .koszul import Section
from .polyring import Polynomial
from .residue import formula_prefactor, pairing_psi, residue_pair


class SingularOnSphere(ValueError):
    """The section vanishes (numerically) on the integration sphere."""


class ResolutionTooCoarse(ValueError):
    """Successive resolutions disagree by more than the target tolerance."""

    def __init__(self, message: str, value: complex, error_estimate: float):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class QuadratureSpec:
    radius: float = 1.0
    resolution: int = 64
    target_tol: float = 1e-8
    scheme: Optional[str] = None  # "circle-trapezoid" (n=1) or "s3-gauss-legendre" (n=2)

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.resolution < 8:
            raise ValueError("resolution must be at least 8")

    def scheme_for(self, n: int) -> str:
        default = {1: "circle-trapezoid", 2: "s3-gauss-legendre"}.get(n)
        if default is None:
            raise ValueError(f"numerical residues are implemented for n in (1, 2), not {n}")
        if self.scheme is not None and self.scheme != default:
            raise ValueError(f"scheme {self.scheme!r} does not apply to n={n}")
        return default


@dataclass(frozen=True)
class NumericResidue:
    value: complex
    error_estimate: float
    radius: float
    resolution: int

    def to_json(self) -> dict:
        return {
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "error_estimate": self.error_estimate,
            "radius": self.radius,
            "resolution": self.resolution,
        }


# sphere parameterizations -----------------------------------------------------


def sphere_point(n: int, radius: float, params: Sequence[np.ndarray]):
    """Points ``z_k`` and tangents ``dz_k/dt_a`` at parameter arrays ``params``."""
    if n == 1:
        (t,) = params
        z = radius * np.exp(1j * t)
        return [z], [[1j * z]]
    t, p1, p2 = params
    e1, e2 = np.exp(1j * p1), np.exp(1j * p2)
    z1 = radius * np.cos(t) * e1
    z2 = radius * np.sin(t) * e2
    zero = np.zeros_like(z1)
    tangents = [
        [-radius * np.sin(t) * e1, 1j * z1, zero],
        [radius * np.cos(t) * e2, zero, 1j * z2],
    ]
    return [z1, z2], tangents


def _nodes(n: int, radius: float, K: int):
    """Points, tangent vectors and quadrature weights, flattened."""
    if n == 1:
        t = 2 * np.pi * np.arange(K) / K
        zs, tangents = sphere_point(1, radius, [t])
        return zs, tangents, np.full(K, 2 * np.pi / K)
    x, gw = np.polynomial.legendre.leggauss(K)
    th = (x + 1) * (np.pi / 4)
    wth = gw * (np.pi / 4)
    ph = 2 * np.pi * np.arange(K) / K
    T, P1, P2 = (a.ravel() for a in np.meshgrid(th, ph, ph, indexing="ij"))
    W = np.repeat(wth, K * K) * (2 * np.pi / K) ** 2
    zs, tangents = sphere_point(2, radius, [T, P1, P2])
    return zs, tangents, W


def orientation_sign(n: int) -> int:
    """+1 when (outward normal, d/dt_1, ...) is positively oriented in R^{2n}.

    The parameterization is a local diffeomorphism on the open parameter
    box, so one generic point decides the sign.
    """
    params = [np.array([0.7]), np.array([0.4]), np.array([1.9])][: 2 * n - 1]
    zs, tangents = sphere_point(n, 1.0, params)

    def real_vec(cvals):
        return [x for c in cvals for x in (c.real, c.imag)]

    cols = [real_vec([z[0] for z in zs])]
    cols += [real_vec([tangents[j][a][0] for j in range(n)]) for a in range(2 * n - 1)]
    d = np.linalg.det(np.array(cols).T)
    return 1 if d > 0 else -1


def _eval_poly(p: Polynomial, zs):
    out = np.zeros_like(zs[0], dtype=complex)
    for m, c in p.terms.items():
        t = np.full_like(zs[0], complex(c), dtype=complex)
        for k, e in enumerate(m):
            if e:
                t = t * zs[k] ** e
        out = out + t
    return out


def _integrate(tree: dict, n: int, radius: float, K: int) -> complex:
    zs, tangents, weights = _nodes(n, radius, K)
    zbs = [np.conj(z) for z in zs]
    section = [parse_polynomial(t, n) for t in tree["section"]]
    S = sum(np.abs(_eval_poly(f, zs)) ** 2 for f in section)
    if np.min(S) <= 1e-24 * max(1.0, float(np.max(S))):
        raise SingularOnSphere(f"section vanishes on the sphere of radius {radius}")
    dzb_t = [[np.conj(tangents[k][a]) for a in range(2 * n - 1)] for k in range(n)]
    dz_t = tangents
    det_cache = {}
    total = np.zeros_like(zs[0], dtype=complex)
    for term in tree["terms"]:
        J = tuple(term["dzb"])
        if J not in det_cache:
            rows = [dzb_t[j - 1] for j in J] + [dz_t[k] for k in range(n)]
            M = np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)
            det_cache[J] = np.linalg.det(M)
        coeff = complex(parse_polynomial(term["coeff"], 1).constant_value()) * term["sign"]
        val = np.full_like(total, coeff)
        for k in range(n):
            if term["z"][k]:
                val = val * zs[k] ** term["z"][k]
            if term["zb"][k]:
                val = val * zbs[k] ** term["zb"][k]
        total = total + val / S ** term["power"] * det_cache[J]
    integral = np.sum(total * weights) * orientation_sign(n)
    return complex(integral / (2j * np.pi) ** n)


def integrate_eta(tree: dict, n: int, spec: QuadratureSpec) -> NumericResidue:
    """``(2 pi i)^{-n}`` times the integral of the exported eta over the sphere."""
    if tree.get("n", n) != n:
        raise ValueError("tree dimension does not match n")
    spec.scheme_for(n)
    K = spec.resolution
    value = _integrate(tree, n, spec.radius, K)
    coarse = _integrate(tree, n, spec.radius, max(4, K // 2))
    err = abs(value - coarse)
    if err > spec.target_tol:
        raise ResolutionTooCoarse(
            f"resolution {K} vs {K // 2} differ by {err:.3g} > {spec.target_tol:.3g}", value, err
        )
    return NumericResidue(value, err, spec.radius, K)


def virtual_residue(g: Polynomial, h: Polynomial, s: Section, spec: QuadratureSpec) -> NumericResidue:
    return integrate_eta(export_eta(g, h, s), s.n, spec)


def compare_exact_residue(g: Polynomial, h: Polynomial, s: Section, spec: QuadratureSpec) -> dict:
    """Numeric virtual residue against ``(-1)^{n(n+1)/2} res_s(g, h)``."""
    n = s.n
    num = virtual_residue(g, h, s, spec)
    sign = -1 if (n * (n + 1) // 2) & 1 else 1
    exact = residue_pair(g, h, s).value * sign
    exact_c = complex(exact)
    diff = abs(num.value - exact_c)
    tol = max(spec.target_tol, 10 * num.error_estimate)
    return {
        "numeric": num,
        "exact": exact,
        "exact_float": exact_c,
        "difference": diff,
        "tolerance": tol,
        "pass": diff <= tol,
    }


def radius_independence(g: Polynomial, h: Polynomial, s: Section, radii: Sequence[float],
                        spec: QuadratureSpec, tol: Optional[float] = None) -> dict:
    """Numeric residue on several spheres; the spread must stay below ``tol``."""
    tol = spec.target_tol if tol is None else tol
    values = []
    for r in radii:
        values.append(virtual_residue(g, h, s, QuadratureSpec(r, spec.resolution, spec.target_tol)).value)
    spread = max((abs(a - b) for a in values for b in values), default=0.0)
    return {"radii": list(radii), "values": values, "spread": spread, "tolerance": tol, "pass": spread < tol}


def formula_cross_check(g: Polynomial, h: Polynomial, s: Section, spec: QuadratureSpec) -> dict:
    """The exact pairing against the prefactor times the numeric virtual residue."""
    exact = complex(pairing_psi(g, h, s))
    num = virtual_residue(g, h, s, spec)
    via_numeric = formula_prefactor(s.n) * num.value
    scale = (2 * math.pi) ** s.n
    diff = abs(exact - via_numeric)
    return {
        "exact": exact,
        "numeric": via_numeric,
        "difference": diff,
        "tolerance": spec.target_tol * scale,
        "pass": diff <= spec.target_tol * scale,
    }
