"""Exact-arithmetic topological recursion on genus-0 spectral curves with
logarithmic singularities, including the logarithmic variant of the recursion,
the x-y duality transform, and supporting oracles."""

__version__ = "0.1.0"
