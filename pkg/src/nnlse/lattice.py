"""Periodic-box discretization and the continuum <-> discrete conventions.

Every other module converts integrals and delta functions through the
constants defined here:

    int dp/2pi     ->  (1/L) sum_n
    2pi delta(p-q) ->  L [n = m]
    delta(x-y)     ->  [j = l] / dx

and the discrete Fourier pair

    psi_j      = (1/L) sum_n exp(i p_n x_j) psit_n
    psit_n     = sum_j dx exp(-i p_n x_j) psi_j
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PositionGrid:
    """Uniform periodic grid of ``size`` points with x = 0 on the grid.

    Sites are x_j = (j - size // 2) * dx, so they lie in [-L/2, L/2).
    """

    box_length: float
    size: int

    def __post_init__(self):
        if not self.box_length > 0:
            raise ValueError(f"box_length must be positive, got {self.box_length}")
        if self.size < 1:
            raise ValueError(f"size must be >= 1, got {self.size}")

    @property
    def dx(self) -> float:
        return self.box_length / self.size

    @property
    def center(self) -> int:
        return self.size // 2

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.size) - self.center) * self.dx

    def reflection(self) -> np.ndarray:
        """Index array r with x[r[j]] == -x[j] modulo L."""
        return (2 * self.center - np.arange(self.size)) % self.size

    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers in numpy FFT order."""
        return 2 * np.pi * np.fft.fftfreq(self.size, d=self.dx)


def reflect_index(grid: PositionGrid, j: int) -> int:
    if not 0 <= j < grid.size:
        raise IndexError(f"site index {j} outside [0, {grid.size})")
    return (2 * grid.center - j) % grid.size


@dataclass(frozen=True)
class MomentumGrid:
    """Modes n = -M..M on a ring of length L with momenta 2 pi n / L."""

    box_length: float
    mode_cutoff: int
    modes: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if not (np.isfinite(self.box_length) and self.box_length > 0):
            raise ValueError(f"box_length must be positive, got {self.box_length}")
        if int(self.mode_cutoff) != self.mode_cutoff or self.mode_cutoff < 1:
            raise ValueError(f"mode_cutoff must be a positive integer, got {self.mode_cutoff}")
        object.__setattr__(self, "mode_cutoff", int(self.mode_cutoff))
        M = self.mode_cutoff
        object.__setattr__(self, "modes", tuple(range(-M, M + 1)))

    @property
    def n_modes(self) -> int:
        return 2 * self.mode_cutoff + 1

    def momentum(self, n):
        return 2 * np.pi * np.asarray(n) / self.box_length

    @property
    def momenta(self) -> np.ndarray:
        return self.momentum(np.array(self.modes))

    def slot(self, n: int) -> int:
        """Position of mode n in ``modes``."""
        if abs(n) > self.mode_cutoff:
            raise IndexError(f"mode {n} outside cutoff {self.mode_cutoff}")
        return n + self.mode_cutoff

    @property
    def dx(self) -> float:
        return self.box_length / self.n_modes

    def position_grid(self, size: int | None = None) -> PositionGrid:
        """Position grid dual to the modes; ``size`` may oversample it."""
        return PositionGrid(self.box_length, self.n_modes if size is None else size)

    # continuum normalization factors
    def integral_weight(self) -> float:
        """Weight replacing int dp/2pi by a mode sum."""
        return 1.0 / self.box_length

    def delta_weight(self) -> float:
        """Value of 2 pi delta(p - q) at p = q."""
        return self.box_length

    def mode_scale(self) -> float:
        """a(p_n) = mode_scale * b_n."""
        return float(np.sqrt(self.box_length))

    def to_position(self, amplitudes: np.ndarray, pgrid: PositionGrid | None = None) -> np.ndarray:
        """Field samples psi_j from continuum-normalized mode amplitudes."""
        pgrid = pgrid or self.position_grid()
        phase = np.exp(1j * np.outer(pgrid.x, self.momenta))
        return phase @ np.asarray(amplitudes) / self.box_length

    def to_modes(self, samples: np.ndarray, pgrid: PositionGrid | None = None) -> np.ndarray:
        pgrid = pgrid or self.position_grid()
        phase = np.exp(-1j * np.outer(self.momenta, pgrid.x))
        return pgrid.dx * (phase @ np.asarray(samples))


def make_grid(box_length: float, mode_cutoff: int) -> MomentumGrid:
    return MomentumGrid(float(box_length), mode_cutoff)
