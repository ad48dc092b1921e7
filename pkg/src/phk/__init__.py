"""Finite-stage computations in profinite homotopy theory."""
