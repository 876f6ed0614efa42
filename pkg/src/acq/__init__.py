"""Exact kernel for almost commutative bigraded algebras and their Q-structures."""

__version__ = "0.1.0"
