"""Braid monodromy factorizations."""
