"""Exact polynomial arithmetic over Q(i) with Groebner bases."""

from .gaussian import GaussianRational, format_gaussian
from .groebner import (
    GroebnerBasis,
    NotInIdeal,
    StandardMonomials,
    buchberger,
    lift_in_ideal,
    normal_form,
    standard_monomials,
)
from .ring import GREVLEX, MonomialOrder, Polynomial, Ring, RingMismatchError

__all__ = [
    "GaussianRational",
    "format_gaussian",
    "GroebnerBasis",
    "NotInIdeal",
    "StandardMonomials",
    "buchberger",
    "lift_in_ideal",
    "normal_form",
    "standard_monomials",
    "GREVLEX",
    "MonomialOrder",
    "Polynomial",
    "Ring",
    "RingMismatchError",
]
