"""Trajectory prediction on simplicial and cubical 2-complexes."""

__version__ = "0.1.0"

from .complexes import (
    ComplexError,
    OrientationFlip,
    OrientedComplex2,
    PermutationSet,
    apply_orientation_flip,
    apply_permutation,
    build_cubical_from_grid,
    build_simplicial,
    neighborhood,
    skeleton,
    validate,
)

__all__ = [
    "ComplexError",
    "OrientationFlip",
    "OrientedComplex2",
    "PermutationSet",
    "apply_orientation_flip",
    "apply_permutation",
    "build_cubical_from_grid",
    "build_simplicial",
    "neighborhood",
    "skeleton",
    "validate",
    "__version__",
]
