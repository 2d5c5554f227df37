"""Weighted quasinorms, lattices, Dirichlet solutions and transference."""

from .constants import KappaConstants, beta_d
from .context import WeightedNormContext
from .dirichlet import dirichlet_solve, dirichlet_weighted, dirichlet_weighted_holds
from .lattice import (LatticeBasis, MinimaResult, ReducedBasis, determinant, diagonal_basis,
                      identity_basis, reduce_basis, rs_systole, successive_minima, weighted_minimum)
from .norms import rdist, rnorm, sdist, snorm, sup_norm, weighted_log
from .transference import Parallelepiped, TransferResult, kappa_constants, pseudocompound, transfer


def covol(L: LatticeBasis):
    """log_q of the covolume."""
    return L.covol_log()


__all__ = [
    "KappaConstants", "beta_d", "WeightedNormContext", "dirichlet_solve", "dirichlet_weighted",
    "dirichlet_weighted_holds", "LatticeBasis", "MinimaResult", "ReducedBasis", "determinant",
    "diagonal_basis", "identity_basis", "reduce_basis", "rs_systole", "successive_minima",
    "weighted_minimum", "rdist", "rnorm", "sdist", "snorm", "sup_norm", "weighted_log",
    "Parallelepiped", "TransferResult", "kappa_constants", "pseudocompound", "transfer", "covol",
]
