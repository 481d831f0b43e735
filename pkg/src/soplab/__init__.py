"""Exact-arithmetic laboratory for SOP_n witnesses in Banach spaces and groups."""

__version__ = "0.1.0"
