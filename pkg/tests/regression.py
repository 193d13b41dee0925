"""Shared regression instances for the test suite."""

from lgduality.grammar import parse_polynomial, parse_section
from lgduality.koszul import Section
from lgduality.polyring import Ring


def poly(text, n):
    return parse_polynomial(text, n, Ring.standard(n))


def section(text, n):
    return Section(tuple(parse_section(text, n)))


# (name, f, n, known Milnor number)
GRADIENTS = [(f"A{k}", f"z1^{k + 1}", 1, k) for k in range(1, 7)] + [
    ("z1^3+z2^3", "z1^3 + z2^3", 2, 4),
    ("D4", "z1^3 + z1*z2^2", 2, 4),
    ("E6", "z1^3 + z2^4", 2, 6),
]

MONOMIAL_SECTIONS = [(a, b) for a in range(1, 5) for b in range(1, 5)]


def gradient_section(f, n):
    return Section.gradient(poly(f, n))


def regression_sections():
    """Every section of the regression set as (label, Section)."""
    out = [(name, gradient_section(f, n)) for name, f, n, _mu in GRADIENTS]
    for a, b in MONOMIAL_SECTIONS:
        out.append((f"(z1^{a},z2^{b})", section(f"[z1^{a}, z2^{b}]", 2)))
    return out


# (g, h, section text, n) used for the eta and numerical residue checks
N1_TRIPLES = [
    ("1", "1", "[z1]", 1),
    ("1", "z1", "[3*z1^2]", 1),
    ("1", "1", "[z1^2]", 1),
    ("z1", "1", "[z1^2]", 1),
    ("1", "z1^2", "[4*z1^3]", 1),
    ("2 + i*z1", "z1", "[z1^3]", 1),
    ("z1^3", "z1", "[7*z1^6]", 1),
]

N2_TRIPLES = [
    ("1", "1", "[z1, z2]", 2),
    ("z1", "z2", "[3*z1^2, 3*z2^2]", 2),
    ("z1*z2", "1", "[3*z1^2, 3*z2^2]", 2),
    ("1", "z1*z2", "[z1^2, z2^2]", 2),
    ("z1", "z2^2", "[3*z1^2 + z2^2, 2*z1*z2]", 2),
    ("1", "z2^2", "[3*z1^2, 4*z2^3]", 2),
    ("z2", "1", "[z1, z2^2]", 2),
]
