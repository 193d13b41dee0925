"""Division, Buchberger's algorithm, standard monomials and ideal membership lifts."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .gaussian import GaussianRational
from .ring import (
    GREVLEX,
    Monomial,
    MonomialOrder,
    Polynomial,
    RingMismatchError,
    monomial_divides,
    monomial_lcm,
    monomial_quotient,
    sum_polys,
)


class NotInIdeal(ValueError):
    """The target polynomial is not a member of the ideal."""


@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    generators: Tuple[Polynomial, ...]
    order: MonomialOrder
    reduced: bool = True
    # cofactors[i][j]: generators[i] == sum_j cofactors[i][j] * source[j]
    cofactors: Optional[Tuple[Tuple[Polynomial, ...], ...]] = field(default=None, repr=False)
    source: Tuple[Polynomial, ...] = field(default=(), repr=False)

    @property
    def ring(self):
        return self.source[0].ring if self.source else self.generators[0].ring

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_monomial(self.order) for g in self.generators]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def contains(self, p: Polynomial) -> bool:
        return normal_form(p, self)[0].is_zero()

    def reduce(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self)[0]


def _divide(p: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder):
    """Full multivariate division; returns (remainder, quotients)."""
    ring = p.ring
    lead = []
    for g in divisors:
        if g.ring != ring:
            raise RingMismatchError(f"ring {ring.names} vs {g.ring.names}")
        m, c = g.leading_term(order)
        lead.append((m, c.inverse()))
    work = dict(p.terms)
    quots: List[dict] = [{} for _ in divisors]
    rem = {}
    key = order.key
    while work:
        m = max(work, key=key)
        c = work[m]
        for i, (lm, inv) in enumerate(lead):
            if monomial_divides(lm, m):
                qm = monomial_quotient(m, lm)
                qc = c * inv
                q = quots[i]
                q[qm] = q[qm] + qc if qm in q else qc
                for gm, gc in divisors[i].terms.items():
                    t = tuple(a + b for a, b in zip(gm, qm))
                    v = work.get(t)
                    v = -(gc * qc) if v is None else v - gc * qc
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = c
            del work[m]
    return Polynomial(ring, rem), [Polynomial(ring, q) for q in quots]


def normal_form(p: Polynomial, G: GroebnerBasis) -> Tuple[Polynomial, List[Polynomial]]:
    """Reduce ``p`` modulo ``G``.

    Returns ``(remainder, quotients)`` with
    ``p == sum(q*g for q, g in zip(quotients, G.generators)) + remainder``.
    """
    if not G.generators:
        return p, []
    return _divide(p, G.generators, G.order)


def _sugar_degree(m: Monomial, order: MonomialOrder) -> int:
    if order.kind == "weighted":
        return sum(w * e for w, e in zip(order.weights, m))
    return sum(m)


def _poly_sugar(p: Polynomial, order: MonomialOrder) -> int:
    return max(_sugar_degree(m, order) for m in p.terms)


def _combine(cof: Sequence[Polynomial], quots, basis_cofs, ring):
    """cof - sum_i quots[i] * basis_cofs[i], componentwise."""
    out = list(cof)
    for q, bc in zip(quots, basis_cofs):
        if q.is_zero():
            continue
        for j, c in enumerate(bc):
            if c:
                out[j] = out[j] - q * c
    return out


def _buchberger(gens: Tuple[Polynomial, ...], order: MonomialOrder, track: bool) -> GroebnerBasis:
    gens = tuple(gens)
    if not gens:
        raise ValueError("buchberger needs at least one generator")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError("generators live in different rings")
    k = len(gens)
    zero = ring.zero()

    def unit(j, c):
        v = [zero] * k
        v[j] = ring.const(c)
        return v

    basis: List[Polynomial] = []
    cofs: List[list] = []
    sugar: List[int] = []
    pairs: List[Tuple[int, int, int]] = []

    def add(p: Polynomial, cof, s: int):
        lc = p.leading_term(order)[1]
        inv = lc.inverse()
        p = p.scale(inv)
        if track:
            cof = [c.scale(inv) for c in cof]
        idx = len(basis)
        basis.append(p)
        cofs.append(cof)
        sugar.append(s)
        lm = p.leading_monomial(order)
        for i in range(idx):
            lmi = basis[i].leading_monomial(order)
            lcm = monomial_lcm(lm, lmi)
            s_pair = max(
                sugar[i] + _sugar_degree(monomial_quotient(lcm, lmi), order),
                s + _sugar_degree(monomial_quotient(lcm, lm), order),
            )
            pairs.append((s_pair, i, idx))

    for j, g in enumerate(gens):
        if g.is_zero():
            continue
        add(g, unit(j, 1) if track else None, _poly_sugar(g, order))

    while pairs:
        pairs.sort(key=lambda t: (t[0], order.key(monomial_lcm(
            basis[t[1]].leading_monomial(order), basis[t[2]].leading_monomial(order)))),
            reverse=True)
        s_pair, i, j = pairs.pop()
        lmi = basis[i].leading_monomial(order)
        lmj = basis[j].leading_monomial(order)
        lcm = monomial_lcm(lmi, lmj)
        # Buchberger's first criterion: coprime leading monomials.
        if lcm == tuple(a + b for a, b in zip(lmi, lmj)):
            continue
        ui = monomial_quotient(lcm, lmi)
        uj = monomial_quotient(lcm, lmj)
        one = GaussianRational(1)
        spoly = basis[i].mul_term(ui, one) - basis[j].mul_term(uj, one)
        if spoly.is_zero():
            continue
        rem, quots = _divide(spoly, basis, order)
        if rem.is_zero():
            continue
        cof = None
        if track:
            scof = [a.mul_term(ui, one) - b.mul_term(uj, one) for a, b in zip(cofs[i], cofs[j])]
            cof = _combine(scof, quots, cofs, ring)
        add(rem, cof, s_pair)

    # minimalize
    lms = [b.leading_monomial(order) for b in basis]
    keep = []
    for a in range(len(basis)):
        redundant = False
        for b in range(len(basis)):
            if a == b or not monomial_divides(lms[b], lms[a]):
                continue
            if lms[a] != lms[b] or b < a:
                redundant = True
                break
        if not redundant:
            keep.append(a)
    basis = [basis[a] for a in keep]
    cofs = [cofs[a] for a in keep]

    # inter-reduce
    for a in range(len(basis)):
        others = basis[:a] + basis[a + 1:]
        lm, lc = basis[a].leading_term(order)
        tail = basis[a] - basis[a].ring.monomial(lm, lc)
        if others and tail:
            rem, quots = _divide(tail, others, order)
            new = rem + basis[a].ring.monomial(lm, lc)
            if track:
                cofs[a] = _combine(cofs[a], quots, cofs[:a] + cofs[a + 1:], ring)
            basis[a] = new

    order_idx = sorted(range(len(basis)), key=lambda a: order.key(basis[a].leading_monomial(order)))
    basis = [basis[a] for a in order_idx]
    cofs = [cofs[a] for a in order_idx]
    return GroebnerBasis(
        generators=tuple(basis),
        order=order,
        reduced=True,
        cofactors=tuple(tuple(c) for c in cofs) if track else None,
        source=gens,
    )


@functools.lru_cache(maxsize=512)
def _cached_buchberger(gens, order, track):
    return _buchberger(gens, order, track)


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX, *, track: bool = False) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Zero generators are dropped, so the zero ideal yields an empty basis.
    With ``track=True`` every basis element also carries its expression in
    terms of the input generators.
    """
    return _cached_buchberger(tuple(gens), order, track)


def lift_in_ideal(
    target: Polynomial, gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX
) -> List[Polynomial]:
    """Cofactors ``a`` with ``target == sum(a[j] * gens[j])``.

    Raises NotInIdeal when ``target`` does not reduce to zero.
    """
    gens = tuple(gens)
    if any(g.is_zero() for g in gens):
        raise ValueError("lift_in_ideal needs nonzero generators")
    G = buchberger(gens, order, track=True)
    rem, quots = normal_form(target, G)
    if rem:
        raise NotInIdeal(f"{target} is not in the ideal (normal form {rem})")
    ring = target.ring
    coeffs = [ring.zero()] * len(gens)
    for q, cof in zip(quots, G.cofactors):
        if q.is_zero():
            continue
        for j, c in enumerate(cof):
            if c:
                coeffs[j] = coeffs[j] + q * c
    check = sum_polys(ring, (a * g for a, g in zip(coeffs, gens)))
    if check != target:
        raise AssertionError("lift re-expansion failed")
    return coeffs


@dataclass(frozen=True)
class StandardMonomials:
    """Standard monomials of a reduced basis; ``monomials is None`` means infinitely many."""

    monomials: Optional[Tuple[Monomial, ...]]

    @property
    def is_finite(self) -> bool:
        return self.monomials is not None

    def __len__(self):
        if self.monomials is None:
            raise ValueError("infinite standard monomial set")
        return len(self.monomials)


def standard_monomials(G: GroebnerBasis, nvars: Optional[int] = None) -> StandardMonomials:
    """Monomials not divisible by any leading monomial of ``G``, ascending in ``G.order``."""
    lms = G.leading_monomials()
    if nvars is None:
        nvars = G.ring.nvars
    if any(not any(m) for m in lms):
        return StandardMonomials(())
    bounds = []
    for v in range(nvars):
        pure = [m[v] for m in lms if all(e == 0 for k, e in enumerate(m) if k != v) and m[v] > 0]
        if not pure:
            return StandardMonomials(None)
        bounds.append(min(pure))
    out = []
    for m in itertools.product(*(range(b) for b in bounds)):
        if not any(monomial_divides(lm, m) for lm in lms):
            out.append(tuple(m))
    out.sort(key=G.order.key)
    return StandardMonomials(tuple(out))
