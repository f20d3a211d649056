"""Exact poles of degenerate spherical Eisenstein series."""
