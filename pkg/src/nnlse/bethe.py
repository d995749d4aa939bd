"""Bethe-ansatz eigenstates of the contact-interacting Bose gas.

First-quantized Hamiltonian: H = -sum_i d^2/dx_i^2 + 2c sum_{i<j} delta(x_i - x_j).
Eigenfunctions take the product form

    chi(x) = sum_sigma prod_a exp(i k_a x_sigma(a))
             * prod_{a<b} (1 - i c eps(x_sigma(a) - x_sigma(b)) / (k_a - k_b))

with eps the signum and eps(0) = 0. Across x_i = x_j the relative
derivative jumps by [(d_j - d_i) chi]_{x_j = x_i^-}^{x_j = x_i^+} = 2c chi.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .spectra import NumericalError


def s_matrix_phase(k1, k2, c):
    """Two-body S-matrix (k2 - k1 - ic) / (k2 - k1 + ic)."""
    dk = np.asarray(k2) - np.asarray(k1)
    den = dk + 1j * np.asarray(c)
    if np.any(den == 0):
        raise ValueError("S-matrix undefined at k2 - k1 = 0 and c = 0")
    out = (dk - 1j * np.asarray(c)) / den
    return complex(out) if np.ndim(out) == 0 else out


def phase_shift(u, c):
    """Principal phase of (u + ic)/(u - ic) = s_matrix_phase(u, 0, c), i.e. 2 arctan(c/u).

    Odd in u, vanishes as c -> 0 and tends to pi sign(u) as c -> inf. Undefined at u = 0.
    """
    return 2.0 * np.arctan2(c * np.sign(u), np.abs(u))


@dataclass(frozen=True)
class BetheState:
    rapidities: tuple
    coupling: float

    def __post_init__(self):
        ks = tuple(complex(k) if np.iscomplexobj(k) and complex(k).imag != 0 else float(np.real(k)) for k in self.rapidities)
        object.__setattr__(self, "rapidities", ks)
        arr = np.array(ks, dtype=complex)
        for a in range(len(arr)):
            for b in range(a + 1, len(arr)):
                if abs(arr[a] - arr[b]) <= 1e-12:
                    raise ValueError("rapidities must be pairwise distinct")
        if not np.isfinite(self.coupling):
            raise ValueError("coupling must be finite")

    @classmethod
    def bound_pair(cls, coupling: float, total_momentum: float = 0.0) -> BetheState:
        """Two-particle bound state k = P/2 -+ i|c|/2 of the attractive gas."""
        if coupling >= 0:
            raise ValueError("bound states need c < 0")
        half = 0.5 * abs(coupling)
        return cls((total_momentum / 2 + 1j * half, total_momentum / 2 - 1j * half), coupling)

    @property
    def n(self) -> int:
        return len(self.rapidities)

    @property
    def k(self) -> np.ndarray:
        return np.array(self.rapidities, dtype=complex)

    @property
    def energy(self):
        e = np.sum(self.k**2)
        return float(e.real) if abs(e.imag) < 1e-12 else complex(e)

    @property
    def momentum(self):
        p = np.sum(self.k)
        return float(p.real) if abs(p.imag) < 1e-12 else complex(p)

    def sector_amplitude(self, order) -> complex:
        """Coefficient of exp(i sum_a k_order[a] y_a) on the ordered sector y_1 < ... < y_N.

        ``order[a]`` is the index of the rapidity carried at the a-th position.
        """
        k, c = self.k, self.coupling
        pos = np.empty(self.n, dtype=int)
        pos[list(order)] = np.arange(self.n)
        amp = 1.0 + 0j
        for a in range(self.n):
            for b in range(a + 1, self.n):
                amp *= 1 - 1j * c * np.sign(pos[a] - pos[b]) / (k[a] - k[b])
        return amp

    def normalization(self) -> complex:
        """Identity-ordered sector amplitude, or the largest one if it vanishes (bound states)."""
        lead = self.sector_amplitude(range(self.n))
        if abs(lead) > 1e-14:
            return lead
        return max((self.sector_amplitude(p) for p in permutations(range(self.n))), key=abs)


def _terms(state: BetheState, x: np.ndarray, eps: np.ndarray):
    """Per-permutation plane-wave terms; eps[..., i, j] is the sign of x_i - x_j."""
    k, c, n = state.k, state.coupling, state.n
    out = []
    for sigma in permutations(range(n)):
        s = np.asarray(sigma)
        coef = np.ones(x.shape[:-1], dtype=complex)
        for a in range(n):
            for b in range(a + 1, n):
                coef = coef * (1 - 1j * c * eps[..., s[a], s[b]] / (k[a] - k[b]))
        wave = np.exp(1j * np.einsum("...a,a->...", x[..., s], k))
        out.append((s, coef * wave))
    return out


def _signs(x):
    return np.sign(x[..., :, None] - x[..., None, :])


def eval_wavefunction(state: BetheState, positions) -> np.ndarray | complex:
    """Symmetrized coordinate wavefunction at positions[..., N]."""
    x = np.asarray(positions, dtype=float)
    if x.shape[-1] != state.n:
        raise ValueError(f"expected {state.n} coordinates, got {x.shape[-1]}")
    val = sum(t for _, t in _terms(state, x, _signs(x))) / state.normalization()
    return complex(val) if np.ndim(val) == 0 else val


def two_particle_theta_form(k1, k2, c, x1, x2):
    """Symmetrization of [theta(x1-x2) + theta(x2-x1) S] exp(i(k1 x1 + k2 x2)), k1 < k2."""
    s = s_matrix_phase(k1, k2, c)

    def f(a, b):
        return np.where(a > b, 1.0, s) * np.exp(1j * (k1 * a + k2 * b))

    return f(np.asarray(x1, float), np.asarray(x2, float)) + f(np.asarray(x2, float), np.asarray(x1, float))


def _value_and_gradient(state: BetheState, x: np.ndarray, eps: np.ndarray):
    k = state.k
    val, grad = 0j, np.zeros(state.n, dtype=complex)
    for s, term in _terms(state, x, eps):
        val += term
        grad[s] += 1j * k * term
    norm = state.normalization()
    return val / norm, grad / norm


def cusp_jump(state: BetheState, pair, point):
    """(jump of (d_j - d_i) chi across x_j = x_i, contact value of chi).

    ``point`` holds all N coordinates; x_j is overwritten by x_i.
    """
    i, j = pair
    if i == j or state.n < 2:
        raise ValueError("need two distinct particles")
    x = np.array(point, dtype=float)
    x[j] = x[i]
    base = _signs(x)
    upper, lower = base.copy(), base.copy()
    upper[j, i], upper[i, j] = 1.0, -1.0
    lower[j, i], lower[i, j] = -1.0, 1.0
    _, g_up = _value_and_gradient(state, x, upper)
    _, g_lo = _value_and_gradient(state, x, lower)
    value, _ = _value_and_gradient(state, x, base)
    jump = (g_up[j] - g_up[i]) - (g_lo[j] - g_lo[i])
    return jump, value


def check_cusp(state: BetheState, pair, point) -> float:
    jump, value = cusp_jump(state, pair, point)
    target = 2 * state.coupling * value
    return float(abs(jump - target) / (abs(target) + 1e-300))


def sample_grid(box: float, m: int) -> np.ndarray:
    return np.linspace(-box / 2, box / 2, m)


def fd_residual(psi: np.ndarray, h: float, coupling: float, energy) -> float:
    """||(H_h - E) psi|| / ||E psi|| on interior points of an N-dimensional grid.

    H_h is the second-difference Laplacian plus 2c/h on each coincidence
    hyperplane x_i = x_j (all axes share one 1D grid, so coincidences are
    exact grid points).
    """
    nd = psi.ndim
    inner = tuple(slice(1, -1) for _ in range(nd))
    core = psi[inner]
    lap = np.zeros_like(core)
    for ax in range(nd):
        up = [slice(1, -1)] * nd
        dn = [slice(1, -1)] * nd
        up[ax] = slice(2, None)
        dn[ax] = slice(None, -2)
        lap += psi[tuple(up)] + psi[tuple(dn)] - 2 * core
    h_psi = -lap / h**2
    m = psi.shape[0] - 2
    idx = np.indices((m,) * nd)
    for a in range(nd):
        for b in range(a + 1, nd):
            on_plane = idx[a] == idx[b]
            h_psi = h_psi + np.where(on_plane, 2 * coupling / h * core, 0)
    r = h_psi - energy * core
    return float(np.linalg.norm(r) / np.linalg.norm(energy * core))


def verify_eigenstate_fd(state: BetheState, box: float, m: int) -> float:
    if state.n not in (2, 3):
        raise ValueError("finite-difference oracle supports N = 2 or 3")
    min_m = 200 if state.n == 2 else 20
    if m < min_m:
        raise ValueError(f"grid of {m} points is too coarse for N={state.n} (need >= {min_m})")
    x = sample_grid(box, m)
    h = x[1] - x[0]
    mesh = np.stack(np.meshgrid(*([x] * state.n), indexing="ij"), axis=-1)
    psi = eval_wavefunction(state, mesh)
    return fd_residual(psi, h, state.coupling, state.energy)


def bound_pair_wavefunction(coupling: float, x1, x2):
    """exp(-|c| |x1 - x2| / 2), the zero-momentum bound pair for c < 0."""
    return np.exp(-0.5 * abs(coupling) * np.abs(np.asarray(x1) - np.asarray(x2)))


def verify_bound_pair_fd(coupling: float, box: float, m: int) -> float:
    x = sample_grid(box, m)
    x1, x2 = np.meshgrid(x, x, indexing="ij")
    psi = bound_pair_wavefunction(coupling, x1, x2).astype(complex)
    return fd_residual(psi, x[1] - x[0], coupling, -0.5 * coupling**2)


def ring_equations(k, box_length, c, quantum_numbers):
    k = np.asarray(k, float)
    u = k[:, None] - k[None, :]
    np.fill_diagonal(u, 1.0)
    th = phase_shift(u, c)
    np.fill_diagonal(th, 0.0)
    f = k * box_length - 2 * np.pi * np.asarray(quantum_numbers) - th.sum(axis=1)
    d = -2 * c / (u**2 + c**2)  # derivative of 2 arctan(c/u) w.r.t. u
    np.fill_diagonal(d, 0.0)
    jac = -d.copy()
    jac[np.diag_indices_from(jac)] = box_length + d.sum(axis=1)
    return f, jac


def solve_ring_bethe(n, box_length, c, quantum_numbers, tol=1e-12, max_iter=200) -> BetheState:
    """Newton solve of k_j L = 2 pi I_j + sum_l 2 arctan(c / (k_j - k_l)).

    Starts from the free solution 2 pi I / L with backtracking line search.
    """
    qn = np.asarray(sorted(quantum_numbers), dtype=float)
    if len(qn) != n:
        raise ValueError("need one quantum number per particle")
    if len(set(qn)) != n:
        raise ValueError("quantum numbers must be distinct")
    if not c > 0:
        raise ValueError("ring solver handles the repulsive case c > 0")
    k = 2 * np.pi * qn / box_length
    f, jac = ring_equations(k, box_length, c, qn)
    for _ in range(max_iter):
        if np.max(np.abs(f)) < tol:
            return BetheState(tuple(k), c)
        step = np.linalg.solve(jac, -f)
        t = 1.0
        while t > 1e-8:
            trial = k + t * step
            if np.all(np.diff(trial) > 0):
                f_new, jac_new = ring_equations(trial, box_length, c, qn)
                if np.linalg.norm(f_new) < (1 - 1e-4 * t) * np.linalg.norm(f) or np.max(np.abs(f_new)) < tol:
                    break
            t *= 0.5
        else:
            raise NumericalError(f"line search stalled at residual {np.max(np.abs(f)):.3e}")
        k, f, jac = trial, f_new, jac_new
    if np.max(np.abs(f)) < tol:
        return BetheState(tuple(k), c)
    raise NumericalError(f"Bethe equations did not converge: residual {np.max(np.abs(f)):.3e}")


def ring_residual(state: BetheState, box_length, quantum_numbers) -> float:
    f, _ = ring_equations(np.sort(state.k.real), box_length, state.coupling, sorted(quantum_numbers))
    return float(np.max(np.abs(f)))


__all__ = [
    "BetheState",
    "bound_pair_wavefunction",
    "check_cusp",
    "cusp_jump",
    "eval_wavefunction",
    "phase_shift",
    "ring_residual",
    "s_matrix_phase",
    "solve_ring_bethe",
    "two_particle_theta_form",
    "verify_bound_pair_fd",
    "verify_eigenstate_fd",
]
