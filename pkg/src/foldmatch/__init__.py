"""Snake graph expansions of cluster variables of types A, B and C."""

__version__ = "0.1.0"
