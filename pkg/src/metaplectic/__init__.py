"""Exact combinatorial invariants of Brylinski-Deligne covering groups."""

__version__ = "0.1.0"
