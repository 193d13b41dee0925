"""Antiholomorphic calculus over ``Q(i)[z, zb, rho, <s,s>^{-1}]``.

Coefficients are :class:`SmoothExpr` values ``numerator / <s,s>^power`` where
``<s,s> = sum_ij conj(f_i) H_ij f_j`` (``H`` the identity unless a constant
Hermitian metric is given).  The cutoff ``rho`` is a formal commuting symbol;
its differential is the odd generator ``drho`` of the form algebra, so
``dbar(rho) = drho``, ``dbar(drho) = 0`` and ``drho * drho = 0`` hold by
construction.  Restriction to the complement of the zero locus is the
identity here because every coefficient already lives on it.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .exterior import Form, Frame, contract_u, iota_gamma, iota_section, wedge
from .koszul import Section
from .polyring import GaussianRational, Polynomial, Ring
from .polyring.gaussian import format_gaussian
from .report import Report


class EtaMismatch(AssertionError):
    """No convention reproduces the closed form of eta_psi: a sign bug somewhere."""


def conjugate(p: Polynomial, ring: Ring) -> Polynomial:
    """Complex conjugate of a polynomial in ``z`` (and ``zb``) as an element of ``ring``."""
    names = p.ring.names
    pos = []
    for name in names:
        if name.startswith("zb"):
            pos.append(ring.index("z" + name[2:]))
        elif name.startswith("z"):
            pos.append(ring.index("zb" + name[1:]))
        else:
            pos.append(ring.index(name))
    return p.embed(ring, pos).map_coefficients(lambda c: c.conjugate())


def embed(p: Polynomial, ring: Ring) -> Polynomial:
    return p.embed(ring, [ring.index(name) for name in p.ring.names])


class SmoothRing:
    """Coefficient ring for forms on the complement of ``s = 0``."""

    def __init__(self, section: Section, metric: Optional[Sequence[Sequence]] = None):
        n = section.n
        self.section = section
        self.ring = Ring(Ring.standard(n, conjugates=True).names + ("rho",))
        self.f = tuple(embed(p, self.ring) for p in section.polys)
        self.fbar = tuple(conjugate(p, self.ring) for p in section.polys)
        if metric is None:
            S = self.ring.zero()
            for a, b in zip(self.f, self.fbar):
                S = S + a * b
            self.metric = None
        else:
            H = [[GaussianRational.coerce(x) for x in row] for row in metric]
            if len(H) != n or any(len(r) != n for r in H):
                raise ValueError("metric must be n x n")
            for i in range(n):
                for j in range(n):
                    if H[i][j] != H[j][i].conjugate():
                        raise ValueError("metric must be Hermitian")
            S = self.ring.zero()
            for i in range(n):
                for j in range(n):
                    if H[i][j]:
                        S = S + self.fbar[i] * self.f[j] * H[i][j]
            self.metric = tuple(tuple(r) for r in H)
        self.S = S
        self._dS = [(("dzb", k), S.derivative(self.ring.index(f"zb{k + 1}"))) for k in range(n)]
        self._dS = [(t, d) for t, d in self._dS if d]
        self._rho = self.ring.index("rho")

    def __eq__(self, other):
        return isinstance(other, SmoothRing) and other.section == self.section and other.metric == self.metric

    def __hash__(self):
        return hash(("smooth", self.section, self.metric))

    @functools.lru_cache(maxsize=None)
    def S_power(self, k: int) -> Polynomial:
        return self.S ** k

    # coefficient-ring protocol ------------------------------------------------

    def zero(self) -> SmoothExpr:
        return SmoothExpr(self, self.ring.zero(), 0)

    def one(self) -> SmoothExpr:
        return SmoothExpr(self, self.ring.one(), 0)

    def scalar(self, c) -> SmoothExpr:
        return SmoothExpr(self, self.ring.const(c), 0)

    def poly(self, p: Polynomial, power: int = 0) -> SmoothExpr:
        if p.ring != self.ring:
            p = embed(p, self.ring)
        return SmoothExpr(self, p, power)

    def is_zero(self, x: SmoothExpr) -> bool:
        return x.num.is_zero()

    def dbar(self, x: SmoothExpr):
        out = []
        num, m = x.num, x.power
        for k in range(self.section.n):
            dnum = num.derivative(self.ring.index(f"zb{k + 1}"))
            if m:
                dS = self.S.derivative(self.ring.index(f"zb{k + 1}"))
                val = SmoothExpr(self, dnum * self.S - num * dS * m, m + 1) if dS else SmoothExpr(self, dnum, m)
            else:
                val = SmoothExpr(self, dnum, 0)
            if val.num:
                out.append((("dzb", k), val.normalized()))
        drho = num.derivative(self._rho)
        if drho:
            out.append((("drho", 0), SmoothExpr(self, drho, m)))
        return out

    def format(self, x: SmoothExpr) -> str:
        return str(x)

    # named elements -------------------------------------------------------

    def z(self, i: int) -> SmoothExpr:
        return SmoothExpr(self, self.ring.gen(i - 1), 0)

    def zb(self, i: int) -> SmoothExpr:
        return SmoothExpr(self, self.ring.gen(self.ring.index(f"zb{i}")), 0)

    def rho(self) -> SmoothExpr:
        return SmoothExpr(self, self.ring.gen(self._rho), 0)

    def inv_norm(self, k: int = 1) -> SmoothExpr:
        return SmoothExpr(self, self.ring.one(), k)

    def sbar_coefficients(self) -> List[SmoothExpr]:
        """Coefficients of ``sbar`` in the dual frame: ``(H^T conj f)_i / <s,s>``."""
        n = self.section.n
        if self.metric is None:
            return [SmoothExpr(self, fb, 1) for fb in self.fbar]
        out = []
        for i in range(n):
            c = self.ring.zero()
            for j in range(n):
                if self.metric[j][i]:
                    c = c + self.fbar[j] * self.metric[j][i]
            out.append(SmoothExpr(self, c, 1))
        return out


class SmoothExpr:
    """``num / <s,s>^power``; immutable."""

    __slots__ = ("R", "num", "power")

    def __init__(self, R: SmoothRing, num: Polynomial, power: int):
        self.R = R
        self.num = num
        self.power = power if num else 0

    def _align(self, other: SmoothExpr):
        if not isinstance(other, SmoothExpr):
            other = self.R.scalar(other)
        m = max(self.power, other.power)
        a = self.num if self.power == m else self.num * self.R.S_power(m - self.power)
        b = other.num if other.power == m else other.num * self.R.S_power(m - other.power)
        return a, b, m

    def __add__(self, other):
        a, b, m = self._align(other)
        return SmoothExpr(self.R, a + b, m)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, m = self._align(other)
        return SmoothExpr(self.R, a - b, m)

    def __neg__(self):
        return SmoothExpr(self.R, -self.num, self.power)

    def __mul__(self, other):
        if isinstance(other, SmoothExpr):
            return SmoothExpr(self.R, self.num * other.num, self.power + other.power)
        if isinstance(other, Polynomial):
            return SmoothExpr(self.R, self.num * embed(other, self.R.ring), self.power)
        return SmoothExpr(self.R, self.num * GaussianRational.coerce(other), self.power)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, SmoothExpr):
            try:
                other = self.R.scalar(other)
            except TypeError:
                return NotImplemented
        a, b, _m = self._align(other)
        return a == b

    __hash__ = None

    def normalized(self) -> SmoothExpr:
        """Cancel common factors of ``<s,s>``."""
        num, m = self.num, self.power
        while m and num:
            q = num.exact_divide(self.R.S)
            if q is None:
                break
            num, m = q, m - 1
        return SmoothExpr(self.R, num, m)

    def evaluate(self, values: Dict[str, complex]) -> complex:
        R = self.R
        env = [values[name] for name in R.ring.names]
        total = 0j
        for mono, c in self.num.terms.items():
            t = complex(c)
            for x, e in zip(env, mono):
                if e:
                    t *= x ** e
            total += t
        s = 0j
        for mono, c in R.S.terms.items():
            t = complex(c)
            for x, e in zip(env, mono):
                if e:
                    t *= x ** e
            s += t
        return total / s ** self.power

    def __str__(self):
        x = self.normalized()
        if x.power == 0:
            return x.num.to_str()
        return f"({x.num.to_str()})/<s,s>^{x.power}"

    def __repr__(self):
        return f"SmoothExpr({self})"


# operators ---------------------------------------------------------------


def smooth_frame(s: Section, f_rank: int = 1, metric=None) -> Frame:
    return Frame(s.n, SmoothRing(s, metric), f_rank)


def dbar(x: Form) -> Form:
    """``dbar`` acting from the left; ``dbar(dbar(x)) == 0``."""
    return x.dbar()


def sbar(frame: Frame) -> Form:
    R: SmoothRing = frame.coeffs
    return frame.vector(R.sbar_coefficients(), dual=True)


def t_s(x: Form) -> Form:
    """Left multiplication by ``sbar``."""
    return wedge(sbar(x.frame), x)


def iota_s(x: Form) -> Form:
    R: SmoothRing = x.frame.coeffs
    return iota_section([R.poly(f) for f in R.f], x)


def dbar_s(x: Form) -> Form:
    return dbar(x) + iota_s(x)


def bracket_dbar_ts(x: Form) -> Form:
    """``[dbar, T_s] = dbar T_s + T_s dbar`` (both operators odd)."""
    return dbar(t_s(x)) + t_s(dbar(x))


def _geometric(x: Form, n: int) -> Form:
    """``sum_{k=0}^{n} (-1)^k [dbar, T_s]^k x``; the series stops by nilpotency."""
    term = x
    total = x
    for k in range(1, n + 1):
        term = bracket_dbar_ts(term)
        total = total - term if k % 2 else total + term
    return total


def T_rho(x: Form) -> Form:
    fr = x.frame
    R: SmoothRing = fr.coeffs
    tail = t_s(_geometric(x, fr.n))
    return x.scale(R.rho()) + wedge(fr.drho(), tail)


def R_rho(x: Form) -> Form:
    fr = x.frame
    R: SmoothRing = fr.coeffs
    return t_s(_geometric(x, fr.n)).scale(R.one() - R.rho())


# verification reports ----------------------------------------------------


def basis_samples(frame: Frame, max_dzb: Optional[int] = None, max_dual: Optional[int] = None,
                  with_slots: bool = True) -> List[Form]:
    """Every ``dzb_J * E_L`` (optionally tagged with an F-slot) up to the given degrees."""
    import itertools

    n = frame.n
    max_dzb = n if max_dzb is None else max_dzb
    max_dual = n if max_dual is None else max_dual
    slots = range(1, frame.f_rank + 1) if with_slots else [0]
    out = []
    for a in range(max_dzb + 1):
        for J in itertools.combinations(range(n), a):
            for b in range(max_dual + 1):
                for L in itertools.combinations(range(n), b):
                    mono = tuple(frame.gid("dzb", j) for j in J) + tuple(frame.gid("E", l) for l in L)
                    for slot in slots:
                        out.append(Form(frame, {(mono, slot): frame.coeffs.one()}))
    return out


def check_commutators(frame: Frame, samples: Sequence[Form]) -> Report:
    """``[iota_s, T_s] = 1`` and ``[P, [dbar, T_s]] = 0`` for ``P`` in ``iota_s, dbar, T_s``."""
    rep = Report()
    for x in samples:
        rep.add("[iota_s,T_s]=1", x, iota_s(t_s(x)) + t_s(iota_s(x)) - x)
        bx = bracket_dbar_ts(x)
        rep.add("[iota_s,[dbar,T_s]]=0", x, iota_s(bx) - bracket_dbar_ts(iota_s(x)))
        rep.add("[dbar,[dbar,T_s]]=0", x, dbar(bx) - bracket_dbar_ts(dbar(x)))
        rep.add("[T_s,[dbar,T_s]]=0", x, t_s(bx) - bracket_dbar_ts(t_s(x)))
        rep.add("dbar^2=0", x, dbar(dbar(x)))
        rep.add("dbar_s^2=0", x, dbar_s(dbar_s(x)))
        rep.add("T_s^2=0", x, t_s(t_s(x)))
    return rep


def check_homotopy_lemma(frame: Frame, samples: Sequence[Form]) -> Report:
    """``[dbar_s, R_rho] = 1 - T_rho`` on every sample (graded commutator, degrees 1 and -1)."""
    rep = Report()
    n = frame.n
    for x in samples:
        lhs = dbar_s(R_rho(x)) + R_rho(dbar_s(x))
        rep.add("[dbar_s,R_rho]=1-T_rho", x, lhs - (x - T_rho(x)))
        # nilpotency that justifies truncating the geometric series
        term = x
        for _ in range(n + 1):
            term = bracket_dbar_ts(term)
        rep.add("[dbar,T_s]^(n+1)=0", x, term)
    return rep


# eta_psi -------------------------------------------------------------------


def psi_form(frame: Frame, g: Polynomial, h: Polynomial) -> Form:
    """``g h dz_1 ... dz_n (x) e_1 ... e_n``."""
    R: SmoothRing = frame.coeffs
    n = frame.n
    out = frame.one()
    for i in range(1, n + 1):
        out = out * frame.dz(i)
    out = out * frame.e(*range(1, n + 1))
    return out.scale(R.poly(g * h))


def eta_closed_form(frame: Frame, g: Polynomial, h: Polynomial) -> Form:
    """``(-1)^{n(n-1)/2 + n(n+1)/2} (n-1)! g h sum_i (-1)^{i-1} fb_i / <s,s>^n
    dbar fb_1 ... (omit i) ... dbar fb_n dz_1 ... dz_n``."""
    R: SmoothRing = frame.coeffs
    n = frame.n
    sign = -1 if (n * (n - 1) // 2 + n * (n + 1) // 2) & 1 else 1
    # with a metric, fb_i becomes the i-th numerator of sbar
    fbar = [c.num for c in R.sbar_coefficients()]
    dfb = [dbar(frame.coefficient(R.poly(fb))) for fb in fbar]
    dz = frame.one()
    for i in range(1, n + 1):
        dz = dz * frame.dz(i)
    total = frame.zero()
    gh = R.poly(g * h)
    for i in range(n):
        w = frame.one()
        for j in range(n):
            if j != i:
                w = w * dfb[j]
        coeff = gh * SmoothExpr(R, fbar[i], n) * (sign * math.factorial(n - 1) * (-1 if i % 2 else 1))
        total = total + (w * dz).scale(coeff)
    return total


def eta_pipeline(frame: Frame, g: Polynomial, h: Polynomial, convention: str) -> Form:
    """``<s,s>^{-1} (sum fb_i iota_{E_i}) (dbar iota_sbar)^{n-1} psi`` under a sign convention.

    ``graded`` and ``adjunction`` contract ``psi`` by ``sbar``; ``dual`` runs
    the same chain on the ``V^dual`` side with ``T_s = sbar *`` and contracts
    with ``psi`` at the end.
    """
    n = frame.n
    sb = sbar(frame)
    if convention == "dual":
        theta = frame.one()
        for _ in range(n - 1):
            theta = dbar(wedge(sb, theta))
        theta = wedge(sb, theta)
        return contract_u(psi_form(frame, g, h), theta)
    x = psi_form(frame, g, h)
    for _ in range(n - 1):
        x = dbar(iota_gamma(sb, x, convention=convention))
    return iota_gamma(sb, x, convention=convention)


ETA_CONVENTIONS = ("graded", "adjunction", "dual")


@dataclass
class EtaResult:
    form: Form
    convention: str
    matches: Dict[str, bool]
    dbar_closed: bool


def eta_psi(g: Polynomial, h: Polynomial, s: Section, metric=None) -> EtaResult:
    """Closed form of ``eta_psi`` after checking it against the operator pipeline.

    Every convention in :data:`ETA_CONVENTIONS` is tried; the first one that
    reproduces the closed form is reported.  Raises :class:`EtaMismatch` if
    none does, or if the result is not ``dbar``-closed.
    """
    frame = smooth_frame(s, metric=metric)
    closed = eta_closed_form(frame, g, h)
    matches = {}
    for conv in ETA_CONVENTIONS:
        matches[conv] = (eta_pipeline(frame, g, h, conv) - closed).is_zero()
    chosen = next((c for c in ETA_CONVENTIONS if matches[c]), None)
    if chosen is None:
        raise EtaMismatch(f"pipeline disagrees with the closed form under {ETA_CONVENTIONS}")
    closed_ok = dbar(closed).is_zero()
    if not closed_ok:
        raise EtaMismatch("eta_psi is not dbar-closed")
    return EtaResult(closed, chosen, matches, closed_ok)


def export_eta(g: Polynomial, h: Polynomial, s: Section) -> dict:
    """Expression tree for the numerical integrator.

    ``eta = sum_terms sign * coeff * z^z * zb^zb / <s,s>^power
    dzb_{dzb[0]} ... dzb_{dzb[-1]} dz_1 ... dz_n``.
    """
    n = s.n
    pf = Frame.polynomial(n)
    ring = pf.coeffs.ring
    fb = [conjugate(p, ring) for p in s.polys]
    gh = embed(g * h, ring)
    base_sign = -1 if (n * (n - 1) // 2 + n * (n + 1) // 2) & 1 else 1
    terms = []
    for i in range(n):
        w = pf.one()
        for j in range(n):
            if j != i:
                w = w * pf.coefficient(fb[j]).dbar()
        sign = base_sign * (-1 if i % 2 else 1)
        for (mono, _slot), c in sorted(w.comps.items()):
            idx = [pf.kind_of(gid)[1] + 1 for gid in mono]
            poly = c * fb[i] * gh * math.factorial(n - 1)
            for m, coeff in poly.sorted_terms():
                terms.append({
                    "i": i + 1,
                    "sign": sign,
                    "coeff": format_gaussian(coeff),
                    "z": list(m[:n]),
                    "zb": list(m[n:]),
                    "power": n,
                    "dzb": idx,
                })
    return {
        "n": n,
        "section": [p.to_str() for p in s.polys],
        "order": "dzb_then_dz",
        "terms": terms,
    }
