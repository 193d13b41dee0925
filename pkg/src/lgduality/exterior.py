"""Bigraded exterior calculus with values in wedge powers of V and its dual.

A :class:`Form` is an element of the supercommutative algebra generated over a
commutative coefficient ring by the odd symbols ``dz_i``, ``dzb_i`` (and the
formal cutoff differential ``drho``), the frame ``e_i`` of ``V`` and the dual
frame ``E_i`` of ``V^dual``.  Monomials are stored normal ordered
(``dz < dzb < drho < e < E``, increasing index); every reordering produces its
Koszul sign.  The total degree of a monomial of type ``(i, j)`` valued in
``wedge^k V (x) wedge^l V^dual`` is ``i + j + k - l``; the parity of that
number is the parity of the generator count, which is all the sign rules use.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .polyring.gaussian import GaussianRational
from .polyring.ring import Polynomial, Ring

Mono = Tuple[int, ...]
Key = Tuple[Mono, int]


class FrameMismatchError(ValueError):
    """Forms built over different frames or coefficient rings were combined."""


class PolynomialCoefficients:
    """Coefficient ring backed by polynomials; ``zb<k>`` and ``rho`` are dbar-active."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self._active = []
        for idx, name in enumerate(ring.names):
            if name.startswith("zb"):
                self._active.append((idx, ("dzb", int(name[2:]) - 1)))
            elif name == "rho":
                self._active.append((idx, ("drho", 0)))

    def __eq__(self, other):
        return isinstance(other, PolynomialCoefficients) and other.ring == self.ring

    def __hash__(self):
        return hash(("poly", self.ring))

    def zero(self):
        return self.ring.zero()

    def one(self):
        return self.ring.one()

    def scalar(self, c):
        return self.ring.const(c)

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def dbar(self, x: Polynomial):
        out = []
        for idx, target in self._active:
            d = x.derivative(idx)
            if d:
                out.append((target, d))
        return out

    def format(self, x) -> str:
        return x.to_str()


@dataclass(frozen=True)
class Frame:
    """Rank-``n`` frame of ``V`` with a trivial twisting bundle ``F`` of rank ``f_rank``."""

    n: int
    coeffs: object = field(compare=True)
    f_rank: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("frame rank must be positive")
        if self.f_rank < 1:
            raise ValueError("F rank must be positive")

    @classmethod
    def polynomial(cls, n: int, conjugates: bool = True, f_rank: int = 1, extra=()) -> Frame:
        ring = Ring.standard(n, conjugates=conjugates)
        if extra:
            ring = Ring(ring.names + tuple(extra))
        return cls(n, PolynomialCoefficients(ring), f_rank)

    # generator ids --------------------------------------------------------

    def gid(self, kind: str, i: int) -> int:
        n = self.n
        if kind == "drho":
            return 2 * n
        if not 0 <= i < n:
            raise IndexError(f"{kind} index {i + 1} out of range 1..{n}")
        return {"dz": 0, "dzb": n, "e": 2 * n + 1, "E": 3 * n + 1}[kind] + i

    def kind_of(self, g: int) -> Tuple[str, int]:
        n = self.n
        if g < n:
            return "dz", g
        if g < 2 * n:
            return "dzb", g - n
        if g == 2 * n:
            return "drho", 0
        if g < 3 * n + 1:
            return "e", g - 2 * n - 1
        return "E", g - 3 * n - 1

    def bidegree(self, mono: Mono) -> Tuple[int, int, int, int]:
        """``(i, j, k, l)`` of a monomial."""
        n = self.n
        i = j = k = l = 0
        for g in mono:
            if g < n:
                i += 1
            elif g <= 2 * n:
                j += 1
            elif g < 3 * n + 1:
                k += 1
            else:
                l += 1
        return i, j, k, l

    def split(self, mono: Mono) -> Tuple[Mono, Mono, Mono]:
        """Form part, ``wedge V`` part and ``wedge V^dual`` part of a monomial."""
        n = self.n
        a = bisect_left(mono, 2 * n + 1)
        b = bisect_left(mono, 3 * n + 1)
        return mono[:a], mono[a:b], mono[b:]

    # constructors ---------------------------------------------------------

    def zero(self) -> Form:
        return Form(self, {})

    def one(self, slot: int = 0) -> Form:
        return Form(self, {((), slot): self.coeffs.one()})

    def coefficient(self, c, slot: int = 0) -> Form:
        if isinstance(c, (int, GaussianRational)):
            c = self.coeffs.scalar(c)
        return Form(self, {((), slot): c})

    def generator(self, kind: str, i: int = 0) -> Form:
        return Form(self, {((self.gid(kind, i),), 0): self.coeffs.one()})

    def dz(self, i: int) -> Form:
        return self.generator("dz", i - 1)

    def dzb(self, i: int) -> Form:
        return self.generator("dzb", i - 1)

    def drho(self) -> Form:
        return self.generator("drho")

    def e(self, *idx: int) -> Form:
        out = self.one()
        for i in idx:
            out = out * self.generator("e", i - 1)
        return out

    def E(self, *idx: int) -> Form:
        out = self.one()
        for i in idx:
            out = out * self.generator("E", i - 1)
        return out

    def slot(self, s: int) -> Form:
        if not 1 <= s <= self.f_rank:
            raise IndexError(f"F-slot {s} out of range 1..{self.f_rank}")
        return self.one(s)

    def vector(self, coeffs: Sequence, dual: bool = False) -> Form:
        """``sum c_i e_i`` (or ``sum c_i E_i`` when ``dual``)."""
        kind = "E" if dual else "e"
        out = {}
        for i, c in enumerate(coeffs):
            if isinstance(c, (int, GaussianRational)):
                c = self.coeffs.scalar(c)
            if not self.coeffs.is_zero(c):
                out[((self.gid(kind, i),), 0)] = c
        return Form(self, out)

    def basis(self, kind: str, k: int) -> List[Tuple[Tuple[int, ...], Form]]:
        """All ``(index_tuple, form)`` of degree ``k`` in one generator family."""
        out = []
        for idx in itertools.combinations(range(self.n), k):
            mono = tuple(self.gid(kind, i) for i in idx)
            out.append((idx, Form(self, {(mono, 0): self.coeffs.one()})))
        return out


def _merge(a: Mono, b: Mono):
    """Sorted concatenation and its Koszul sign, or ``(None, 0)`` if a symbol repeats."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    inversions = 0
    for x in a:
        pos = bisect_left(b, x)
        if pos < len(b) and b[pos] == x:
            return None, 0
        inversions += pos
    merged = tuple(sorted(a + b))
    return merged, (-1 if inversions & 1 else 1)


def _combine_slots(s: int, t: int) -> int:
    if s and t:
        raise ValueError("product of two F-valued forms is not defined; use kappa_pair")
    return s or t


class Form:
    """Element of the bigraded algebra; immutable, keyed by ``(monomial, F-slot)``."""

    __slots__ = ("frame", "comps")

    def __init__(self, frame: Frame, comps: Dict[Key, object]):
        self.frame = frame
        z = frame.coeffs.is_zero
        self.comps = {k: c for k, c in comps.items() if not z(c)}

    def _check(self, other: Form):
        if not isinstance(other, Form):
            raise TypeError(f"expected Form, got {type(other).__name__}")
        if other.frame != self.frame:
            raise FrameMismatchError("forms live over different frames")

    def is_zero(self) -> bool:
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def __add__(self, other: Form) -> Form:
        self._check(other)
        out = dict(self.comps)
        for k, c in other.comps.items():
            out[k] = out[k] + c if k in out else c
        return Form(self.frame, out)

    def __neg__(self) -> Form:
        return Form(self.frame, {k: -c for k, c in self.comps.items()})

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def scale(self, c) -> Form:
        """Multiply every component by a degree-zero coefficient."""
        if isinstance(c, (int, GaussianRational)):
            c = self.frame.coeffs.scalar(c)
        return Form(self.frame, {k: c * v for k, v in self.comps.items()})

    def __mul__(self, other):
        if isinstance(other, Form):
            return wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return other.frame == self.frame and (self - other).is_zero()

    __hash__ = None

    def items(self):
        return self.comps.items()

    # grading ----------------------------------------------------------------

    def degree_profile(self) -> set:
        return {self.frame.bidegree(m) for (m, _s) in self.comps}

    def sharp(self) -> int:
        """Total degree ``i + j + k - l``; the form must be homogeneous in it."""
        vals = {i + j + k - l for (i, j, k, l) in self.degree_profile()}
        if len(vals) > 1:
            raise ValueError("form is not homogeneous in total degree")
        return vals.pop() if vals else 0

    def parity(self) -> int:
        vals = {len(m) & 1 for (m, _s) in self.comps}
        if len(vals) > 1:
            raise ValueError("form has mixed parity")
        return vals.pop() if vals else 0

    def part(self, pred) -> Form:
        """Components whose ``(i, j, k, l)`` satisfies ``pred``."""
        return Form(self.frame, {k: c for k, c in self.comps.items() if pred(self.frame.bidegree(k[0]))})

    def homogeneous_parts(self) -> Dict[Tuple[int, int, int, int], Form]:
        out: Dict[Tuple[int, int, int, int], dict] = {}
        for key, c in self.comps.items():
            out.setdefault(self.frame.bidegree(key[0]), {})[key] = c
        return {d: Form(self.frame, comps) for d, comps in out.items()}

    def scalar(self):
        """The coefficient of a pure degree-zero, F-free form."""
        for (m, s) in self.comps:
            if m or s:
                raise ValueError("form is not a plain coefficient")
        return self.comps.get(((), 0), self.frame.coeffs.zero())

    def map_coefficients(self, fn) -> Form:
        return Form(self.frame, {k: fn(c) for k, c in self.comps.items()})

    def dbar(self) -> Form:
        """Antiholomorphic differential, acting from the left."""
        fr = self.frame
        out: Dict[Key, object] = {}
        for (m, s), c in self.comps.items():
            for (kind, idx), dc in fr.coeffs.dbar(c):
                g = fr.gid(kind, idx)
                merged, sign = _merge((g,), m)
                if merged is None:
                    continue
                v = dc if sign > 0 else -dc
                key = (merged, s)
                out[key] = out[key] + v if key in out else v
        return Form(fr, out)

    # text -------------------------------------------------------------------

    def to_str(self) -> str:
        if not self.comps:
            return "0"
        fr = self.frame
        names = {"dz": "dz", "dzb": "dzb", "drho": "drho", "e": "e", "E": "E"}
        parts = []
        for (m, s), c in sorted(self.comps.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
            syms = []
            for g in m:
                kind, idx = fr.kind_of(g)
                syms.append(names[kind] if kind == "drho" else f"{names[kind]}{idx + 1}")
            if s:
                syms.append(f"f{s}")
            coeff = fr.coeffs.format(c)
            if syms:
                parts.append(f"({coeff})*" + "*".join(syms))
            else:
                parts.append(f"({coeff})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Form({self.to_str()})"


def wedge(a: Form, b: Form, *, pair_slots: bool = False) -> Form:
    """Graded product; ``a*b == (-1)**(#a * #b) * b*a`` for homogeneous factors."""
    a._check(b)
    out: Dict[Key, object] = {}
    for (ma, sa), ca in a.comps.items():
        for (mb, sb), cb in b.comps.items():
            merged, sign = _merge(ma, mb)
            if merged is None:
                continue
            if pair_slots and sa and sb:
                if sa != sb:
                    continue
                slot = 0
            else:
                slot = _combine_slots(sa, sb)
            v = ca * cb
            if sign < 0:
                v = -v
            key = (merged, slot)
            out[key] = out[key] + v if key in out else v
    return Form(a.frame, out)


def kappa(x: Form) -> Form:
    """Send ``w * e_I * E_J`` to ``w * <e_I, E_J>`` with ``<e_I, E_J> = delta_IJ``."""
    fr = x.frame
    out: Dict[Key, object] = {}
    for (m, s), c in x.comps.items():
        form_part, v_part, d_part = fr.split(m)
        if len(v_part) != len(d_part):
            continue
        if any(fr.kind_of(a)[1] != fr.kind_of(b)[1] for a, b in zip(v_part, d_part)):
            continue
        key = (form_part, s)
        out[key] = out[key] + c if key in out else c
    return Form(fr, out)


def kappa_pair(a: Form, b: Form) -> Form:
    """``<a, b> = kappa(a * b)``; F-slots pair componentwise.

    The result is a scalar-valued differential form; use ``.scalar()`` for the
    coefficient when it has degree zero.
    """
    return kappa(wedge(a, b, pair_slots=True))


def _check_pure(x: Form, kind: str, what: str):
    fr = x.frame
    for (m, s) in x.comps:
        if len(m) != 1 or s or fr.kind_of(m[0])[0] != kind:
            raise ValueError(f"{what} must be of pure type A^0({'V' if kind == 'e' else 'V^dual'})")


def _form_degree(fr: Frame, m: Mono) -> int:
    i, j, _k, _l = fr.bidegree(m)
    return i + j


def iota_alpha(alpha: Form, w: Form) -> Form:
    """Contraction by ``alpha`` in ``A^0(V)``, lowering the ``V^dual`` degree.

    Determined by ``<nu, iota_alpha(w)> = <alpha * nu, w>`` for every
    ``nu`` in ``A^0(wedge^{k-1} V)``, solved against the dual basis.
    """
    alpha._check(w)
    _check_pure(alpha, "e", "alpha")
    fr = w.frame
    result = fr.zero()
    for (i, j, k, l), part in w.homogeneous_parts().items():
        if l == 0:
            continue
        for idx, nu in fr.basis("e", l - 1):
            r = kappa_pair(wedge(alpha, nu), part)
            if r.is_zero():
                continue
            dual = Form(fr, {(tuple(fr.gid("E", t) for t in idx), 0): fr.coeffs.one()})
            # <e_J, x E_J> = (-1)^{|J| deg x} x
            signed = Form(fr, {
                key: (-c if ((l - 1) * len(key[0])) & 1 else c) for key, c in r.comps.items()
            })
            result = result + wedge(signed, dual)
    return result


def iota_section(section: Sequence, w: Form) -> Form:
    """Koszul contraction by ``s = sum f_i e_i``."""
    alpha = w.frame.vector(section)
    if alpha.is_zero():
        return w.frame.zero()
    return iota_alpha(alpha, w)


def _iota_gamma_basis(gamma: Form, v_part: Mono) -> Form:
    """``iota_gamma`` on a bare ``e_K`` from ``<iota(e_K), E_L> = <e_K, gamma * E_L>``."""
    fr = gamma.frame
    k = len(v_part)
    ek = Form(fr, {(v_part, 0): fr.coeffs.one()})
    out = fr.zero()
    for _idx, w in fr.basis("E", k - 1):
        x = kappa_pair(ek, wedge(gamma, w))
        if x.is_zero():
            continue
        lmono = tuple(fr.gid("e", t) for t in _idx)
        out = out + Form(fr, {(lmono, 0): x.scalar()})
    return out


def iota_gamma(gamma: Form, nu: Form, *, convention: str = "graded") -> Form:
    """Contraction by ``gamma`` in ``A^0(V^dual)``, lowering the ``V`` degree.

    On bare frame elements it is fixed by ``<iota_gamma(nu), w> = <nu, gamma * w>``.
    ``convention="graded"`` lets the operator pass differential-form factors
    with the Koszul sign ``(-1)^(form degree)``; ``"adjunction"`` reads the
    defining identity literally for form-valued ``nu``, which passes them with
    no sign.
    """
    gamma._check(nu)
    _check_pure(gamma, "E", "gamma")
    if convention not in ("graded", "adjunction"):
        raise ValueError(f"unknown convention {convention!r}")
    fr = nu.frame
    cache: Dict[Mono, Form] = {}
    out: Dict[Key, object] = {}
    for (m, s), c in nu.comps.items():
        form_part, v_part, d_part = fr.split(m)
        if not v_part:
            continue
        if d_part:
            raise ValueError("iota_gamma acts on wedge V valued forms")
        if v_part not in cache:
            cache[v_part] = _iota_gamma_basis(gamma, v_part)
        sign = -1 if (convention == "graded" and len(form_part) & 1) else 1
        for (lm, _s0), x in cache[v_part].comps.items():
            key = (form_part + lm, s)
            v = c * x
            if sign < 0:
                v = -v
            out[key] = out[key] + v if key in out else v
    return Form(fr, out)


def contract_u(u: Form, theta: Form) -> Form:
    """``u`` contracted with ``theta``: ``wedge^k V`` by ``wedge^l V^dual`` into ``wedge^{k-l} V``.

    Determined by
    ``<u _| theta, nu*> = (-1)^{(i+j)l + (p+q)#u + l(l-1)/2} <u, theta * nu*>``
    for all ``nu*`` in ``A^0(wedge^{k-l} V^dual)``.
    """
    u._check(theta)
    fr = u.frame
    result = fr.zero()
    for (i, j, k, l0), upart in u.homogeneous_parts().items():
        if l0:
            raise ValueError("u must be valued in wedge^k V")
        sharp_u = i + j + k
        for (p, q, k0, l), tpart in theta.homogeneous_parts().items():
            if k0:
                raise ValueError("theta must be valued in wedge^l V^dual")
            if k < l:
                raise ValueError(f"contraction needs k >= l (k={k}, l={l})")
            exponent = (i + j) * l + (p + q) * sharp_u + l * (l - 1) // 2
            for idx, nustar in fr.basis("E", k - l):
                x = kappa_pair(upart, wedge(tpart, nustar))
                if x.is_zero():
                    continue
                if exponent & 1:
                    x = -x
                emono = tuple(fr.gid("e", t) for t in idx)
                result = result + wedge(x, Form(fr, {(emono, 0): fr.coeffs.one()}))
    return result
