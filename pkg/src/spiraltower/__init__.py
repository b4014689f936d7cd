"""Finite spirals, their inverse system, spiral models and block permutation groups."""

from spiraltower.kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
