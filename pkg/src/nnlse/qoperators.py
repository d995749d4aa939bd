"""Sector matrices of the conserved charges, the Hamiltonian and parity.

All matrices act on the normalized occupation basis of a ``SectorBasis``.
Under the lattice conventions the interaction

    V = 2 pi c int (dp/2pi)^4 delta(p1+p2-p3-p4) a+(p1) a+(p2) a(p3) a(p4)

becomes V = (c/L) sum_{n1+n2=n3+n4} b+_{n1} b+_{n2} b_{n3} b_{n4}, with
quadruples leaving the mode window dropped.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import SectorBasis, apply_annihilation, apply_creation, enumerate_sector
from .lattice import MomentumGrid

PROVENANCES = ("momentum_space", "position_space", "composed")


@dataclass(frozen=True)
class SectorOperator:
    basis: SectorBasis
    matrix: np.ndarray
    provenance: str = "momentum_space"

    def __post_init__(self):
        d = self.basis.dim
        if self.matrix.shape != (d, d):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match basis dim {d}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def __add__(self, other: SectorOperator) -> SectorOperator:
        _check_same_basis(self, other)
        return SectorOperator(self.basis, self.matrix + other.matrix, "composed")

    def __sub__(self, other: SectorOperator) -> SectorOperator:
        _check_same_basis(self, other)
        return SectorOperator(self.basis, self.matrix - other.matrix, "composed")

    def __matmul__(self, other: SectorOperator) -> SectorOperator:
        _check_same_basis(self, other)
        return SectorOperator(self.basis, self.matrix @ other.matrix, "composed")

    @property
    def dagger(self) -> SectorOperator:
        return SectorOperator(self.basis, self.matrix.conj().T, "composed")


def _check_same_basis(a: SectorOperator, b: SectorOperator):
    if a.basis is not b.basis and a.basis.states != b.basis.states:
        raise ValueError("operators live on different bases")


def commutator(a: SectorOperator, b: SectorOperator) -> SectorOperator:
    return a @ b - b @ a


@dataclass(frozen=True)
class Coupling:
    c: float

    def __post_init__(self):
        if not np.isfinite(self.c):
            raise ValueError(f"coupling must be finite, got {self.c}")


def _coupling_value(coupling) -> float:
    return coupling.c if isinstance(coupling, Coupling) else float(Coupling(float(coupling)).c)


def _diagonal(basis: SectorBasis, values) -> SectorOperator:
    return SectorOperator(basis, np.diag(np.asarray(values, dtype=complex)).reshape(basis.dim, basis.dim))


def build_h0(basis: SectorBasis) -> SectorOperator:
    g = basis.grid
    return _diagonal(basis, [float(np.sum(g.momentum(np.array(s.modes)) ** 2)) for s in basis.states])


def build_number(basis: SectorBasis) -> SectorOperator:
    return _diagonal(basis, [s.particle_number for s in basis.states])


def build_momentum(basis: SectorBasis) -> SectorOperator:
    g = basis.grid
    return _diagonal(basis, [float(g.momentum(s.total_momentum_index)) for s in basis.states])


@lru_cache(maxsize=32)
def pair_table(grid: MomentumGrid) -> dict[int, tuple[tuple[int, int], ...]]:
    """Ordered mode pairs inside the window, keyed by their index sum."""
    table = defaultdict(list)
    for n1 in grid.modes:
        for n2 in grid.modes:
            table[n1 + n2].append((n1, n2))
    return {k: tuple(v) for k, v in table.items()}


def build_v_momentum(basis: SectorBasis, coupling) -> SectorOperator:
    c = _coupling_value(coupling)
    d = basis.dim
    mat = np.zeros((d, d), dtype=complex)
    if basis.particle_number < 2 or c == 0:
        return SectorOperator(basis, mat, "momentum_space")
    pairs = pair_table(basis.grid)
    pref = c / basis.grid.box_length
    for col, state in enumerate(basis.states):
        occupied = sorted(set(state.modes))
        for n3 in occupied:
            for n4 in occupied:
                r4 = apply_annihilation(state, n4)
                if r4 is None:
                    continue
                r3 = apply_annihilation(r4[0], n3)
                if r3 is None:
                    continue
                mid, amp_out = r3[0], r4[1] * r3[1]
                for n1, n2 in pairs[n3 + n4]:
                    s2, a2 = apply_creation(mid, n2)
                    s1, a1 = apply_creation(s2, n1)
                    row = basis.lookup(s1)
                    if row is not None:
                        mat[row, col] += pref * amp_out * a1 * a2
    return SectorOperator(basis, mat, "momentum_space")


def annihilation_matrix(source: SectorBasis, target: SectorBasis, n: int) -> np.ndarray:
    """Matrix of b_n mapping ``source`` (N particles) into ``target`` (N-1)."""
    out = np.zeros((target.dim, source.dim))
    for col, state in enumerate(source.states):
        res = apply_annihilation(state, n)
        if res is not None:
            row = target.lookup(res[0])
            if row is not None:
                out[row, col] = res[1]
    return out


def field_matrices(basis: SectorBasis, n_points: int | None = None):
    """psi(x_j) = L^{-1/2} sum_n exp(i p_n x_j) b_n as matrices into N-1 particles.

    Returns (position grid, lower basis, array of shape (n_points, dim_lower, dim)).
    """
    g = basis.grid
    pgrid = g.position_grid(n_points)
    lower = enumerate_sector(g, basis.particle_number - 1)
    b = np.stack([annihilation_matrix(basis, lower, n) for n in g.modes])
    phases = np.exp(1j * np.outer(pgrid.x, g.momenta)) / np.sqrt(g.box_length)
    return pgrid, lower, np.einsum("jn,nab->jab", phases, b)


def build_v_position(basis: SectorBasis, coupling) -> SectorOperator:
    """Normal-ordered contact interaction c sum_j dx psi+_j psi+_j psi_j psi_j.

    The position grid carries 4M+1 points: products of four fields contain
    index sums up to 4M, and a coarser grid would alias them (umklapp terms).
    """
    c = _coupling_value(coupling)
    d = basis.dim
    if basis.particle_number < 2 or c == 0:
        return SectorOperator(basis, np.zeros((d, d), dtype=complex), "position_space")
    n_points = 4 * basis.grid.mode_cutoff + 1
    pgrid, lower, psi = field_matrices(basis, n_points)
    _, _, psi_lower = field_matrices(lower, n_points)
    mat = np.zeros((d, d), dtype=complex)
    for j in range(n_points):
        pair = psi_lower[j] @ psi[j]
        mat += pair.conj().T @ pair
    return SectorOperator(basis, c * pgrid.dx * mat, "position_space")


def build_density(basis: SectorBasis, j: int, n_points: int | None = None) -> SectorOperator:
    """rho(x_j) = psi+(x_j) psi(x_j) on the (optionally oversampled) position grid."""
    if basis.particle_number == 0:
        return SectorOperator(basis, np.zeros((1, 1), dtype=complex), "position_space")
    _, _, psi = field_matrices(basis, n_points)
    return SectorOperator(basis, psi[j].conj().T @ psi[j], "position_space")


def build_hamiltonian(basis: SectorBasis, coupling, method: str = "momentum") -> SectorOperator:
    if method == "momentum":
        v = build_v_momentum(basis, coupling)
    elif method == "position":
        v = build_v_position(basis, coupling)
    else:
        raise ValueError(f"unknown assembly method {method!r}")
    return build_h0(basis) + v


def build_parity(basis: SectorBasis) -> SectorOperator:
    """Permutation sending each occupation state to its mode-negated partner.

    Only sectors closed under parity qualify: unfiltered or zero total momentum.
    """
    if basis.momentum_filter not in (None, 0):
        raise ValueError("parity maps momentum block k to -k; use an unfiltered or k=0 basis")
    d = basis.dim
    mat = np.zeros((d, d), dtype=complex)
    for col, state in enumerate(basis.states):
        mat[basis.lookup(state.reflected()), col] = 1.0
    return SectorOperator(basis, mat, "composed")
