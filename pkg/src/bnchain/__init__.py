"""Limit linear series on curves of compact type bridged by chains of elliptic curves."""

from .bn_core import GrdParams, VanishingSeq, adjusted_rho, eh_dimension, eh_exists, rho
from .chain_search import ChainSpec, LimitWitness, Verdict, search, validate

__all__ = [
    "ChainSpec",
    "GrdParams",
    "LimitWitness",
    "VanishingSeq",
    "Verdict",
    "adjusted_rho",
    "eh_dimension",
    "eh_exists",
    "rho",
    "search",
    "validate",
]

__version__ = "0.1.0"
