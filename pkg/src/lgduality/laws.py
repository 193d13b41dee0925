"""Machine checks of the exterior-calculus and Dolbeault identities.

Exhaustive checks run over the full monomial basis for small rank; random
checks draw forms with polynomial coefficients in ``z`` and ``zb``.
"""

from __future__ import annotations

import itertools
import random
from typing import List, Sequence

from .exterior import (
    Form,
    Frame,
    contract_u,
    iota_alpha,
    iota_gamma,
    iota_section,
    kappa_pair,
    wedge,
)
from .polyring import GaussianRational, Polynomial
from .report import Report


def _mono_form(frame: Frame, kinds_idx, coeff=None) -> Form:
    mono = tuple(sorted(frame.gid(k, i) for k, i in kinds_idx))
    return Form(frame, {(mono, 0): coeff if coeff is not None else frame.coeffs.one()})


def scalar_form_basis(frame: Frame) -> List[Form]:
    """All monomials in ``dz_i`` and ``dzb_i``."""
    gens = [("dz", i) for i in range(frame.n)] + [("dzb", i) for i in range(frame.n)]
    out = []
    for r in range(len(gens) + 1):
        for combo in itertools.combinations(gens, r):
            out.append(_mono_form(frame, combo))
    return out


def valued_basis(frame: Frame, kind: str, degrees: Sequence[int]) -> List[Form]:
    """``omega * e_K`` (or ``omega * E_K``) for every scalar basis form ``omega``."""
    out = []
    for w in scalar_form_basis(frame):
        for k in degrees:
            for _idx, v in frame.basis(kind, k):
                out.append(wedge(w, v))
    return out


def sharp(x: Form) -> int:
    return x.sharp()


# random sampling ------------------------------------------------------------


def random_poly(frame: Frame, rng: random.Random, terms: int = 3, degree: int = 2) -> Polynomial:
    ring = frame.coeffs.ring
    out = ring.zero()
    nv = sum(1 for name in ring.names if name.startswith("z"))
    for _ in range(rng.randint(1, terms)):
        exps = [0] * ring.nvars
        for _ in range(rng.randint(0, degree)):
            exps[rng.randrange(nv)] += 1
        c = GaussianRational(rng.randint(-3, 3), rng.randint(-2, 2))
        out = out + ring.monomial(exps, c)
    return out if out else ring.one()


def random_homogeneous(frame: Frame, rng: random.Random, kind: str, k: int,
                       form_degree: int, terms: int = 3) -> Form:
    gens = [("dz", i) for i in range(frame.n)] + [("dzb", i) for i in range(frame.n)]
    out = frame.zero()
    for _ in range(terms):
        combo = rng.sample(gens, form_degree)
        v = rng.choice(frame.basis(kind, k))[1] if kind else frame.one()
        out = out + wedge(_mono_form(frame, combo, random_poly(frame, rng)), v)
    return out


# exterior identities -----------------------------------------------------


def _check_intertwining(rep: Report, frame: Frame, u: Form, theta: Form, alphas, gammas):
    """``alpha * (u _| theta) = u _| iota_alpha(theta)`` and ``iota_gamma(u _| theta) = u _| (gamma * theta)``."""
    ut = contract_u(u, theta)
    for a in alphas:
        rep.add("alpha*(u_|theta)=u_|iota_alpha(theta)", wedge(u, theta),
                wedge(a, ut) - contract_u(u, iota_alpha(a, theta)))
    for g in gammas:
        rep.add("iota_gamma(u_|theta)=u_|(gamma*theta)", wedge(u, theta),
                iota_gamma(g, ut) - contract_u(u, wedge(g, theta)))


def _check_scalar_and_dbar(rep: Report, u: Form, theta: Form, scalars):
    """``a * (u _| theta) = u _| (a * theta)`` and the dbar rule for contractions."""
    ut = contract_u(u, theta)
    for a in scalars:
        rep.add("a*(u_|theta)=u_|(a*theta)", wedge(u, theta), wedge(a, ut) - contract_u(u, wedge(a, theta)))
    sign = -1 if sharp(theta) & 1 else 1
    rhs = contract_u(u.dbar(), theta).scale(sign) + contract_u(u, theta.dbar())
    rep.add("dbar(u_|theta)=(-1)^#theta (dbar u)_|theta+u_|dbar theta", wedge(u, theta), ut.dbar() - rhs)


def check_exterior_exhaustive(n: int) -> Report:
    """Basis-exhaustive exterior identities for rank ``n`` (intended for ``n <= 2``)."""
    frame = Frame.polynomial(n)
    R = frame.coeffs.ring
    rep = Report()
    alphas = [frame.e(i) for i in range(1, n + 1)]
    gammas = [frame.E(i) for i in range(1, n + 1)]
    gens1 = [frame.dz(i) for i in range(1, n + 1)] + [frame.dzb(i) for i in range(1, n + 1)]
    tops = valued_basis(frame, "e", [n])
    thetas = valued_basis(frame, "E", range(n + 1))
    for u in tops:
        for th in thetas:
            _check_intertwining(rep, frame, u, th, alphas, gammas)
    # scalar-linearity over generators (multiplicativity covers products) and
    # the dbar rule with zb-dependent coefficients
    cu = R.gen(R.index("zb1")) * R.gen(0) + R.gen(R.index(f"zb{n}")) ** 2
    ct = R.gen(R.index(f"zb{n}")) * R.gen(n - 1) - R.gen(R.index("zb1")) + 1
    for u in valued_basis(frame, "e", range(n + 1)):
        k = frame.bidegree(next(iter(u.comps))[0])[2]
        for th in valued_basis(frame, "E", range(k + 1)):
            _check_scalar_and_dbar(rep, u.scale(cu), th.scale(ct), gens1)
    # derivation rule, square zero, adjunctions, pairing and commutativity
    ws = valued_basis(frame, "E", range(n + 1))
    f = [R.gen(i) ** 2 + R.gen(R.index(f"zb{i + 1}")) for i in range(n)]
    for w in ws:
        rep.add("iota_s^2=0", w, iota_section(f, iota_section(f, w)))
        for a in alphas:
            for nu_idx in range(n + 1):
                for _i, nu in frame.basis("e", nu_idx):
                    rep.add("<nu,iota_alpha w>=<alpha*nu,w>", w,
                            kappa_pair(nu, iota_alpha(a, w)) - kappa_pair(wedge(a, nu), w))
    for w in frame.basis("E", 0) + [b for k in range(1, n + 1) for b in frame.basis("E", k)]:
        w = w[1]
        for a in alphas:
            for th in ws[:: max(1, len(ws) // 16)]:
                lhs = iota_alpha(a, wedge(w, th))
                rhs = wedge(iota_alpha(a, w), th) + wedge(w, iota_alpha(a, th)).scale(-1 if sharp(w) & 1 else 1)
                rep.add("iota_alpha(w*theta) Leibniz", wedge(w, th), lhs - rhs)
    for g in gammas:
        for k in range(1, n + 1):
            for _i, nu in frame.basis("e", k):
                for _j, w in frame.basis("E", k - 1):
                    rep.add("<iota_gamma nu,w>=<nu,gamma*w>", nu,
                            kappa_pair(iota_gamma(g, nu), w) - kappa_pair(nu, wedge(g, w)))
    alls = valued_basis(frame, "e", range(n + 1))[:: max(1, 4 ** n // 16)] + thetas[:: max(1, 4 ** n // 16)]
    for a in alls:
        for b in alls:
            sa, sb = sharp(a), sharp(b)
            ab = wedge(a.scale(cu), b.scale(ct))
            rep.add("a*b=(-1)^(#a#b) b*a", ab, ab - wedge(b.scale(ct), a.scale(cu)).scale(-1 if (sa * sb) & 1 else 1))
            rep.add("dbar<a,b>=<dbar a,b>+(-1)^#a<a,dbar b>", ab,
                    kappa_pair(a.scale(cu), b.scale(ct)).dbar()
                    - kappa_pair(a.scale(cu).dbar(), b.scale(ct))
                    - kappa_pair(a.scale(cu), b.scale(ct).dbar()).scale(-1 if sa & 1 else 1))
    return rep


def check_exterior_random(n: int, samples: int = 100, seed: int = 0) -> Report:
    """Random-coefficient checks of the contraction identities."""
    frame = Frame.polynomial(n)
    rng = random.Random(seed)
    rep = Report()
    for _ in range(samples):
        u = random_homogeneous(frame, rng, "e", n, form_degree=rng.randint(0, min(2, 2 * n)))
        l = rng.randint(0, n)
        th = random_homogeneous(frame, rng, "E", l, form_degree=rng.randint(0, min(2, 2 * n)))
        a = frame.vector([random_poly(frame, rng) for _ in range(n)])
        g = frame.vector([random_poly(frame, rng) for _ in range(n)], dual=True)
        _check_intertwining(rep, frame, u, th, [a], [g])
        k = rng.randint(0, n)
        u2 = random_homogeneous(frame, rng, "e", k, form_degree=rng.randint(0, 2))
        th2 = random_homogeneous(frame, rng, "E", rng.randint(0, k), form_degree=rng.randint(0, 2))
        scal = random_homogeneous(frame, rng, None, 0, form_degree=rng.randint(0, 2), terms=2)
        _check_scalar_and_dbar(rep, u2, th2, [scal])
        f = [random_poly(frame, rng) for _ in range(n)]
        rep.add("iota_s^2=0", th, iota_section(f, iota_section(f, th)))
    return rep
