"""Finite universal-algebra workbench: congruence lattices, the modular
commutator, and essential-extension structure of finite algebras."""

__version__ = "0.1.0"
