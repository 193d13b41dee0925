"""Koszul cohomology, Grothendieck residues and virtual residues on C^n."""

__version__ = "0.1.0"
