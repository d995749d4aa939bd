"""Quantum and classical nonlocal NLSE: Fock-space operators, parity metric, Bethe states."""

from .bethe import BetheState, eval_wavefunction, s_matrix_phase, solve_ring_bethe
from .fock import FockState, SectorBasis, enumerate_sector
from .lattice import MomentumGrid, PositionGrid, make_grid
from .qoperators import SectorOperator, build_hamiltonian

__all__ = [
    "BetheState",
    "FockState",
    "MomentumGrid",
    "PositionGrid",
    "SectorBasis",
    "SectorOperator",
    "build_hamiltonian",
    "enumerate_sector",
    "eval_wavefunction",
    "make_grid",
    "s_matrix_phase",
    "solve_ring_bethe",
]
