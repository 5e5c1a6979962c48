"""Exact and budgeted searches for rho(G, m)."""
from .checkpoint import CheckpointError
from .engine import (
    InfeasibleError,
    SearchConfig,
    SearchWitness,
    Strategy,
    canonical_witnesses,
    orbit_representatives,
    rho,
)

__all__ = [
    "CheckpointError",
    "InfeasibleError",
    "SearchConfig",
    "SearchWitness",
    "Strategy",
    "canonical_witnesses",
    "orbit_representatives",
    "rho",
]
