"""Reduced Khovanov homology of tangle closures and twist-family invariants."""

from ._khcore import (
    InputError,
    ResourceError,
    SuturedTangle,
    UnstabilizedError,
    determinant,
    homology,
    jones,
    kappa,
    mirror_check,
)

__all__ = [
    "InputError",
    "ResourceError",
    "SuturedTangle",
    "UnstabilizedError",
    "determinant",
    "homology",
    "jones",
    "kappa",
    "mirror_check",
]
