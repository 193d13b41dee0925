"""Sections, Milnor algebras and graded Koszul cohomology of the contraction complex."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import rank
from .polyring import (
    GREVLEX,
    GaussianRational,
    GroebnerBasis,
    MonomialOrder,
    Polynomial,
    Ring,
    buchberger,
    normal_form,
    standard_monomials,
)
from .polyring.ring import Monomial, format_monomial


class NonIsolatedZero(ValueError):
    """The quotient by the section's ideal is not finite dimensional."""


class NotQuasiHomogeneous(ValueError):
    """No positive weights make every component weighted homogeneous."""


_WEIGHT_SEARCH_BOUND = 16


@dataclass(frozen=True)
class Section:
    """A section ``s = f_1 e_1 + ... + f_n e_n`` with ``n`` equal to the variable count.

    ``weights`` (optional) are positive integer variable weights making each
    ``f_i`` weighted homogeneous.
    """

    polys: Tuple[Polynomial, ...]
    weights: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        polys = tuple(self.polys)
        object.__setattr__(self, "polys", polys)
        if not polys:
            raise ValueError("empty section")
        ring = polys[0].ring
        if any(p.ring != ring for p in polys):
            raise ValueError("section components live in different rings")
        if len(polys) != ring.nvars:
            raise ValueError(f"section has {len(polys)} components for {ring.nvars} variables")
        if self.weights is not None:
            w = tuple(int(x) for x in self.weights)
            object.__setattr__(self, "weights", w)
            self.degrees()  # validates

    @classmethod
    def gradient(cls, f: Polynomial, weights=None) -> Section:
        return cls(tuple(f.derivative(i) for i in range(f.ring.nvars)), weights)

    @property
    def n(self) -> int:
        return len(self.polys)

    @property
    def ring(self) -> Ring:
        return self.polys[0].ring

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def degrees(self, weights: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
        """Weighted degree of each component; raises NotQuasiHomogeneous if mixed."""
        w = tuple(weights) if weights is not None else self.weights
        if w is None:
            w = self.find_weights()
        if len(w) != self.n or any(x <= 0 for x in w):
            raise ValueError("weights must be n positive integers")
        out = []
        for i, f in enumerate(self.polys):
            if f.is_zero():
                raise NotQuasiHomogeneous(f"component f{i + 1} is zero")
            degs = f.weighted_degrees(w)
            if len(degs) != 1:
                raise NotQuasiHomogeneous(f"f{i + 1} = {f} is not homogeneous for weights {w}")
            out.append(degs.pop())
        return tuple(out)

    def find_weights(self) -> Tuple[int, ...]:
        """Smallest positive integer weights (by sum, then lexicographically)."""
        if self.weights is not None:
            return self.weights
        return _search_weights(self.polys)

    def with_weights(self) -> Section:
        return Section(self.polys, self.find_weights())

    def ideal(self, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
        return buchberger(self.polys, order)

    def to_str(self) -> str:
        return "[" + ", ".join(p.to_str() for p in self.polys) + "]"


def _search_weights(polys: Sequence[Polynomial]) -> Tuple[int, ...]:
    n = polys[0].ring.nvars
    diffs = []
    for f in polys:
        if f.is_zero():
            raise NotQuasiHomogeneous("zero component")
        ms = list(f.terms)
        diffs.extend(tuple(a - b for a, b in zip(m, ms[0])) for m in ms[1:])
    if not diffs:
        return (1,) * n
    best = None
    for total in range(n, n * _WEIGHT_SEARCH_BOUND + 1):
        for w in _compositions(total, n, _WEIGHT_SEARCH_BOUND):
            if all(sum(a * b for a, b in zip(w, d)) == 0 for d in diffs):
                best = w
                break
        if best:
            return best
    raise NotQuasiHomogeneous(f"no weights up to {_WEIGHT_SEARCH_BOUND} make the section homogeneous")


def _compositions(total: int, parts: int, bound: int):
    if parts == 1:
        if 1 <= total <= bound:
            yield (total,)
        return
    for first in range(1, min(bound, total - parts + 1) + 1):
        for rest in _compositions(total - first, parts - 1, bound):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class MilnorAlgebra:
    """The quotient ``O / (f_1, ..., f_n)`` with its standard-monomial basis."""

    section: Section
    basis: Tuple[Monomial, ...]
    mult_table: Tuple[Tuple[Tuple[GaussianRational, ...], ...], ...] = field(repr=False)
    groebner: GroebnerBasis = field(repr=False)

    @property
    def mu(self) -> int:
        return len(self.basis)

    @property
    def ring(self) -> Ring:
        return self.section.ring

    def basis_polys(self) -> List[Polynomial]:
        return [self.ring.monomial(m) for m in self.basis]

    def basis_labels(self) -> List[str]:
        return [format_monomial(self.ring, m) or "1" for m in self.basis]

    def reduce(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self.groebner)[0]

    def coordinates(self, p: Polynomial) -> Tuple[GaussianRational, ...]:
        r = self.reduce(p)
        return tuple(r.coefficient(m) for m in self.basis)

    def from_coordinates(self, v: Sequence[GaussianRational]) -> Polynomial:
        ring = self.ring
        out = ring.zero()
        for m, c in zip(self.basis, v):
            out = out + ring.monomial(m, c)
        return out

    def multiply(self, a: Sequence[GaussianRational], b: Sequence[GaussianRational]):
        mu = self.mu
        out = [GaussianRational(0)] * mu
        for i in range(mu):
            if not a[i]:
                continue
            for j in range(mu):
                if not b[j]:
                    continue
                c = a[i] * b[j]
                row = self.mult_table[i][j]
                for k in range(mu):
                    if row[k]:
                        out[k] = out[k] + c * row[k]
        return tuple(out)

    def unit(self) -> Tuple[GaussianRational, ...]:
        return self.coordinates(self.ring.one())


def milnor_algebra(s: Section, order: MonomialOrder = GREVLEX) -> MilnorAlgebra:
    G = buchberger(s.polys, order)
    sm = standard_monomials(G, s.ring.nvars)
    if not sm.is_finite:
        raise NonIsolatedZero(f"{s.to_str()} does not have an isolated zero (infinite quotient)")
    basis = sm.monomials
    ring = s.ring
    table = []
    for a in basis:
        row = []
        for b in basis:
            prod = ring.monomial(tuple(x + y for x, y in zip(a, b)))
            r = normal_form(prod, G)[0]
            row.append(tuple(r.coefficient(m) for m in basis))
        table.append(tuple(row))
    return MilnorAlgebra(s, tuple(basis), tuple(table), G)


# graded Koszul cohomology ---------------------------------------------------


@dataclass(frozen=True)
class HomologyTable:
    """Dimensions of the cohomology of the contraction complex.

    ``dims[(k, d)]`` is the dimension in cohomological degree ``k`` (``-n..0``;
    ``wedge^l V^dual`` sits in degree ``-l``) and internal weighted degree ``d``.
    """

    dims: Dict[Tuple[int, int], int]
    weights: Tuple[int, ...]
    section_degrees: Tuple[int, ...]
    degree_range: Tuple[int, int]

    def dim(self, k: int, d: Optional[int] = None) -> int:
        if d is None:
            return sum(v for (kk, _d), v in self.dims.items() if kk == k)
        return self.dims.get((k, d), 0)

    def nonzero(self) -> Dict[Tuple[int, int], int]:
        return {key: v for key, v in self.dims.items() if v}

    def vanishes_off_zero(self) -> bool:
        return all(v == 0 for (k, _d), v in self.dims.items() if k != 0)

    def to_records(self) -> List[dict]:
        return [{"k": k, "degree": d, "dim": v} for (k, d), v in sorted(self.dims.items())]


def _weighted_monomials(weights: Sequence[int], degree: int) -> List[Monomial]:
    if degree < 0:
        return []
    n = len(weights)
    out = []

    def rec(i, remaining, acc):
        if i == n - 1:
            if remaining % weights[i] == 0:
                out.append(tuple(acc + [remaining // weights[i]]))
            return
        for e in range(remaining // weights[i] + 1):
            rec(i + 1, remaining - e * weights[i], acc + [e])

    rec(0, degree, [])
    return out


def _slice_basis(weights, degs, l, D):
    basis = []
    for I in itertools.combinations(range(len(weights)), l):
        rest = D - sum(degs[i] for i in I)
        for m in _weighted_monomials(weights, rest):
            basis.append((m, I))
    return basis


def koszul_differential_matrix(s: Section, weights, degs, l: int, D: int):
    """Matrix (rows = source basis) of the contraction ``wedge^l -> wedge^{l-1}`` in degree ``D``."""
    src = _slice_basis(weights, degs, l, D)
    tgt = _slice_basis(weights, degs, l - 1, D)
    index = {b: t for t, b in enumerate(tgt)}
    rows = []
    for m, I in src:
        row = [GaussianRational(0)] * len(tgt)
        for pos, i in enumerate(I):
            rest = I[:pos] + I[pos + 1:]
            sign = -1 if pos & 1 else 1
            for fm, c in s.polys[i].terms.items():
                mono = tuple(a + b for a, b in zip(m, fm))
                t = index.get((mono, rest))
                if t is None:
                    raise AssertionError("contraction does not preserve the internal degree")
                row[t] = row[t] + (c if sign > 0 else -c)
        rows.append(row)
    return src, tgt, rows


def koszul_homology_graded(
    s: Section, degree_range: Optional[Tuple[int, int]] = None
) -> HomologyTable:
    """Cohomology dimensions of ``0 -> wedge^n V^dual -> ... -> V^dual -> O -> 0``.

    ``z_i`` has degree ``w_i`` and ``E_i`` has degree ``d_i = deg f_i`` so the
    contraction preserves degree and each slice is finite dimensional.  The
    default range ``[0, sum d_i]`` contains every degree where cohomology of a
    regular sequence can live.
    """
    weights = s.find_weights()
    degs = s.degrees(weights)
    if degree_range is None:
        degree_range = (0, sum(degs))
    lo, hi = degree_range
    if hi < lo:
        raise ValueError("empty degree range")
    n = s.n
    dims = {}
    for D in range(lo, hi + 1):
        ranks = {0: 0, n + 1: 0}
        sizes = {}
        for l in range(0, n + 1):
            sizes[l] = len(_slice_basis(weights, degs, l, D))
        for l in range(1, n + 1):
            if sizes[l] == 0 or sizes[l - 1] == 0:
                ranks[l] = 0
                continue
            _src, _tgt, rows = koszul_differential_matrix(s, weights, degs, l, D)
            ranks[l] = rank(rows)
        for l in range(0, n + 1):
            dims[(-l, D)] = sizes[l] - ranks[l] - ranks[l + 1]
    return HomologyTable(dims, tuple(weights), tuple(degs), (lo, hi))


def euler_characteristic(table: HomologyTable) -> int:
    return sum(v if k % 2 == 0 else -v for (k, _d), v in table.dims.items())
