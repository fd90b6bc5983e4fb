"""Exact and numerical tools for (q,t)-deformed N-particle hypergeometric ensembles."""

from __future__ import annotations

__version__ = "0.1.0"
