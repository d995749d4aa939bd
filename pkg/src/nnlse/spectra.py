"""Exact diagonalization of sector Hamiltonians and the resolvent series.

The series sum_l (G0(w) V)^l |k> cannot use the i*eps prescription on a
finite grid. It uses the reduced resolvent instead: 1/(w - E) on basis
states off the energy shell and 0 on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import FockState, enumerate_sector
from .lattice import make_grid
from .qoperators import SectorOperator, build_h0, build_hamiltonian, build_v_momentum

RESIDUAL_TOL = 1e-9
DENSE_LIMIT = 4000


class NumericalError(RuntimeError):
    """Raised when a numerical routine fails its own post-check."""


@dataclass
class SpectrumResult:
    basis: object
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray


def diagonalize(h: SectorOperator, check: bool = True) -> SpectrumResult:
    m = h.matrix
    d = m.shape[0]
    if d > DENSE_LIMIT:
        raise ValueError(f"sector dimension {d} exceeds dense limit {DENSE_LIMIT}")
    if d == 0:
        return SpectrumResult(h.basis, np.zeros(0), np.zeros((0, 0), dtype=complex), np.zeros(0))
    herm = 0.5 * (m + m.conj().T)
    if np.max(np.abs(m - herm)) > 1e-10 * max(1.0, np.max(np.abs(m))):
        raise NumericalError("sector Hamiltonian is not Hermitian in the occupation basis")
    vals, vecs = np.linalg.eigh(herm)
    res = np.linalg.norm(m @ vecs - vecs * vals, axis=0) / np.linalg.norm(vecs, axis=0)
    # scale-aware: the absolute floor grows with the matrix norm
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    if check and np.any(res > RESIDUAL_TOL * scale):
        raise NumericalError(f"eigen-residual {res.max():.3e} exceeds tolerance; residuals={res}")
    return SpectrumResult(h.basis, vals, vecs, res)


@dataclass
class PerturbationSeries:
    reference: FockState
    order: int
    reference_energy: float
    terms: list[np.ndarray]
    on_shell: np.ndarray = field(repr=False)
    on_shell_norms: list[float] = field(default_factory=list)
    basis: object = None
    v: np.ndarray | None = field(default=None, repr=False)

    def partial_sum(self, upto: int | None = None) -> np.ndarray:
        upto = self.order if upto is None else upto
        return np.sum(self.terms[: upto + 1], axis=0)

    def first_order_energy(self) -> float:
        """w_k + <ref|V|ref>, both in the parity pairing (identity in this basis)."""
        i = self.basis.lookup(self.reference)
        return float(self.reference_energy + self.v[i, i].real)

    def second_order_energy(self) -> float:
        if self.order < 1:
            raise ValueError("second-order energy needs order >= 1")
        i = self.basis.lookup(self.reference)
        return float(self.first_order_energy() + (self.v[i] @ self.terms[1]).real)


def on_shell_mask(h0_diag: np.ndarray, w: float) -> np.ndarray:
    return np.abs(h0_diag - w) <= 1e-9 * max(1.0, abs(w))


def ls_series(reference: FockState, coupling, order: int, grid=None, basis=None) -> PerturbationSeries:
    """Terms (R0 V)^l |ref> for l = 0..order in the reference's momentum block."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if basis is None:
        if grid is None:
            raise ValueError("pass either a grid or a basis")
        basis = enumerate_sector(grid, reference.particle_number, reference.total_momentum_index)
    i = basis.lookup(reference)
    if i is None:
        raise ValueError(f"reference {reference} not in basis")
    e = build_h0(basis).matrix.diagonal().real
    w = float(e[i])
    shell = on_shell_mask(e, w)
    denom = np.where(shell, np.inf, w - e)
    v = build_v_momentum(basis, coupling).matrix
    t = np.zeros(basis.dim, dtype=complex)
    t[i] = 1.0
    terms, shell_norms = [t], []
    for _ in range(order):
        vt = v @ terms[-1]
        shell_norms.append(float(np.linalg.norm(vt[shell])))
        terms.append(vt / denom)
    return PerturbationSeries(reference, order, w, terms, shell, shell_norms, basis, v)


def ground_energy(n, coupling, box_length, mode_cutoff, momentum_block=None, n_levels=1):
    basis = enumerate_sector(make_grid(box_length, mode_cutoff), n, momentum_block)
    return diagonalize(build_hamiltonian(basis, coupling)).eigenvalues[:n_levels]


def convergence_sweep(n, coupling, cutoffs, box_length, momentum_block=None, n_levels=3):
    """Rows (M, lowest eigenvalues...) for ascending cutoffs."""
    cutoffs = list(cutoffs)
    if cutoffs != sorted(cutoffs):
        raise ValueError("cutoffs must be ascending")
    return [(M, ground_energy(n, coupling, box_length, M, momentum_block, n_levels)) for M in cutoffs]


def richardson_inverse(cutoffs, values, power=1.0):
    """Extrapolate values assumed to behave as a + b / M**power to M -> inf.

    Uses the last two points.
    """
    m1, m2 = cutoffs[-2], cutoffs[-1]
    v1, v2 = values[-2], values[-1]
    w1, w2 = m1**power, m2**power
    return (w2 * v2 - w1 * v1) / (w2 - w1)
