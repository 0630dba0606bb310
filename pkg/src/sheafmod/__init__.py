"""Exact-arithmetic toolkit for semistability of morphisms of decomposable
sheaves on the projective plane: weight-inequality polytopes, Hilbert
polynomial bookkeeping, matrices of forms, and duality transforms."""

__version__ = "0.1.0"
