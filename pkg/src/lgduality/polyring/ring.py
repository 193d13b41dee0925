"""Sparse multivariate polynomials over Q(i) and monomial orders."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Sequence, Tuple

from .gaussian import GaussianRational, ONE, ZERO, format_gaussian

Monomial = Tuple[int, ...]


class RingMismatchError(ValueError):
    """Operands live in different polynomial rings."""


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order.

    ``kind`` is one of ``lex``, ``grlex``, ``grevlex`` or ``weighted``.  The
    weighted order compares the weighted degree first and breaks ties with
    graded-revlex.
    """

    kind: str = "grevlex"
    weights: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("lex", "grlex", "grevlex", "weighted"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "weighted":
            if not self.weights or any(w <= 0 for w in self.weights):
                raise ValueError("weighted order needs positive integer weights")

    def key(self, m: Monomial):
        kind = self.kind
        if kind == "grevlex":
            return (sum(m), tuple(-e for e in reversed(m)))
        if kind == "lex":
            return m
        if kind == "grlex":
            return (sum(m), m)
        if len(self.weights) != len(m):
            raise ValueError("weight vector length does not match variable count")
        wdeg = sum(w * e for w, e in zip(self.weights, m))
        return (wdeg, sum(m), tuple(-e for e in reversed(m)))

    @classmethod
    def parse(cls, text: str) -> MonomialOrder:
        text = text.strip()
        if text.startswith("weighted:"):
            ws = tuple(int(t) for t in text[len("weighted:"):].split(","))
            return cls("weighted", ws)
        return cls(text)

    def __str__(self):
        if self.kind == "weighted":
            return "weighted:" + ",".join(map(str, self.weights))
        return self.kind


GREVLEX = MonomialOrder("grevlex")


@dataclass(frozen=True)
class Ring:
    """Polynomial ring context: an ordered tuple of variable names."""

    names: Tuple[str, ...]

    @property
    def nvars(self) -> int:
        return len(self.names)

    @classmethod
    def standard(cls, n: int, conjugates: bool = False) -> Ring:
        names = [f"z{i}" for i in range(1, n + 1)]
        if conjugates:
            names += [f"zb{i}" for i in range(1, n + 1)]
        return cls(tuple(names))

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: ONE})

    def const(self, c) -> Polynomial:
        c = GaussianRational.coerce(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, i: int) -> Polynomial:
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): ONE})

    def gens(self) -> list[Polynomial]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], c=1) -> Polynomial:
        c = GaussianRational.coerce(c)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def index(self, name: str) -> int:
        return self.names.index(name)


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_quotient(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial: a map from exponent tuples to coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Dict[Monomial, GaussianRational]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, terms: Dict[Monomial, GaussianRational]) -> Polynomial:
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # structure ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, GaussianRational]]:
        return iter(self.terms.items())

    def coefficient(self, m: Monomial) -> GaussianRational:
        return self.terms.get(tuple(m), ZERO)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self) -> GaussianRational:
        return self.terms.get((0,) * self.ring.nvars, ZERO)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_term(self, order: MonomialOrder = GREVLEX):
        m = self.leading_monomial(order)
        return m, self.terms[m]

    def monic(self, order: MonomialOrder = GREVLEX) -> Polynomial:
        if not self.terms:
            return self
        lc = self.leading_term(order)[1]
        if lc == ONE:
            return self
        inv = lc.inverse()
        return Polynomial._raw(self.ring, {m: c * inv for m, c in self.terms.items()})

    def weighted_degrees(self, weights: Sequence[int]) -> set:
        return {sum(w * e for w, e in zip(weights, m)) for m in self.terms}

    # arithmetic -----------------------------------------------------------

    def _check(self, other: Polynomial):
        if other.ring != self.ring:
            raise RingMismatchError(f"ring {self.ring.names} vs {other.ring.names}")

    def _lift(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m)
            if v is None:
                terms[m] = c
            else:
                v = v + c
                if v:
                    terms[m] = v
                else:
                    del terms[m]
        return Polynomial._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> Polynomial:
        c = GaussianRational.coerce(c)
        if not c:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c: GaussianRational) -> Polynomial:
        if not c:
            return self.ring.zero()
        return Polynomial._raw(
            self.ring,
            {tuple(a + b for a, b in zip(m, mono)): v * c for m, v in self.terms.items()},
        )

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: Dict[Monomial, GaussianRational] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                v = out.get(m)
                out[m] = ca * cb if v is None else v + ca * cb
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self, i: int) -> Polynomial:
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return Polynomial._raw(self.ring, out)

    def map_coefficients(self, fn) -> Polynomial:
        return Polynomial(self.ring, {m: fn(c) for m, c in self.terms.items()})

    def embed(self, ring: Ring, positions: Sequence[int]) -> Polynomial:
        """Re-express in ``ring``; variable ``j`` goes to slot ``positions[j]``."""
        out = {}
        for m, c in self.terms.items():
            e = [0] * ring.nvars
            for j, k in enumerate(m):
                e[positions[j]] += k
            out[tuple(e)] = c
        return Polynomial._raw(ring, out)

    def substitute(self, images: Sequence[Polynomial]) -> Polynomial:
        """Compose: replace variable ``j`` by ``images[j]`` (all in one target ring)."""
        target = images[0].ring
        result = target.zero()
        powers: Dict[Tuple[int, int], Polynomial] = {}
        for m, c in self.terms.items():
            t = target.const(c)
            for j, k in enumerate(m):
                if k:
                    key = (j, k)
                    if key not in powers:
                        powers[key] = images[j] ** k
                    t = t * powers[key]
            result = result + t
        return result

    def exact_divide(self, d: Polynomial, order: MonomialOrder = GREVLEX):
        """Return ``q`` with ``self == q*d`` or ``None`` when ``d`` does not divide."""
        self._check(d)
        lm, lc = d.leading_term(order)
        inv = lc.inverse()
        rem = self
        q = {}
        while rem:
            m, c = rem.leading_term(order)
            if not monomial_divides(lm, m):
                return None
            qm = monomial_quotient(m, lm)
            qc = c * inv
            q[qm] = qc
            rem = rem - d.mul_term(qm, qc)
        return Polynomial(self.ring, q)

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring.const(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # text -----------------------------------------------------------------

    def to_str(self, order: MonomialOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            mono = format_monomial(self.ring, m)
            negative = False
            if c.is_real() and c.re < 0:
                negative, c = True, -c
            elif not c.re and c.im < 0:
                negative, c = True, -c
            if not mono:
                body = format_gaussian(c)
            elif c == ONE:
                body = mono
            elif c.is_real() or not c.re:
                body = f"{format_gaussian(c)}*{mono}"
            else:
                body = f"({format_gaussian(c)})*{mono}"
            if c.re and c.im and not mono:
                body = f"({format_gaussian(c)})"
            parts.append(("-" if negative else "+", body))
        sign, first = parts[0]
        out = ("-" if sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


def format_monomial(ring: Ring, m: Monomial) -> str:
    factors = []
    for name, e in zip(ring.names, m):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def sum_polys(ring: Ring, polys: Iterable[Polynomial]) -> Polynomial:
    out: Dict[Monomial, GaussianRational] = {}
    for p in polys:
        for m, c in p.terms.items():
            v = out.get(m)
            out[m] = c if v is None else v + c
    return Polynomial(ring, out)
