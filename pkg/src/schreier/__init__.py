"""Schreier-type formulas for free monoid acts, subgroups of free groups and
modules over free associative algebras, checked in exact arithmetic."""

__version__ = "0.1.0"
