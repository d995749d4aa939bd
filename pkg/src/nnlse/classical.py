"""Classical nonlocal NLSE on a periodic grid, with its charges N, P, H.

    (i d/dt + d^2/dx^2) psi = 2c psi*(-x, t) psi^2

Integrated by Strang splitting: exact linear half-steps in Fourier space
around an RK4 step of psi_t = -2ic psi*(-x) psi^2. The reflected field is
read through the grid's reflection map.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .lattice import PositionGrid
from .spectra import NumericalError


@dataclass(frozen=True)
class ClassicalField:
    grid: PositionGrid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.size,):
            raise ValueError(f"field has shape {v.shape}, grid needs ({self.grid.size},)")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", v)

    def reflected_conjugate(self) -> np.ndarray:
        """psi*(-x) sampled on the grid."""
        return np.conj(self.values[self.grid.reflection()])

    def shifted(self, sites: int) -> ClassicalField:
        """psi(x - sites*dx)."""
        return replace(self, values=np.roll(self.values, sites))


@dataclass(frozen=True)
class ChargeTriple:
    N: complex
    P: complex
    H: complex
    time: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.N, self.P, self.H])


def spectral_derivative(values: np.ndarray, grid: PositionGrid) -> np.ndarray:
    k = grid.wavenumbers()
    if grid.size % 2 == 0:
        k = k.copy()
        k[grid.size // 2] = 0.0
    return np.fft.ifft(1j * k * np.fft.fft(values))


def charges(field: ClassicalField, coupling: float) -> ChargeTriple:
    """N, P, H with pi(x) = i psi*(-x) substituted.

    Writing phi(x) = psi*(-x):
        N = int psi phi,   P = i int phi psi_x,   H = int (phi_x psi_x + c phi^2 psi^2).

    Reflecting x -> -x conjugates each integrand, so N and H come out real
    and P imaginary up to rounding; they are still returned as complex.
    """
    g = field.grid
    psi = field.values
    phi = field.reflected_conjugate()
    psi_x = spectral_derivative(psi, g)
    phi_x = spectral_derivative(phi, g)
    dx = g.dx
    n = np.sum(psi * phi) * dx
    p = 1j * np.sum(phi * psi_x) * dx
    h = np.sum(phi_x * psi_x + coupling * phi**2 * psi**2) * dx
    return ChargeTriple(complex(n), complex(p), complex(h), field.time)


def _nonlinear_rhs(psi, refl, c):
    return -2j * c * np.conj(psi[refl]) * psi**2


def _rk4(psi, refl, c, dt):
    k1 = _nonlinear_rhs(psi, refl, c)
    k2 = _nonlinear_rhs(psi + 0.5 * dt * k1, refl, c)
    k3 = _nonlinear_rhs(psi + 0.5 * dt * k2, refl, c)
    k4 = _nonlinear_rhs(psi + dt * k3, refl, c)
    return psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def evolve(field: ClassicalField, coupling: float, dt: float, steps: int, observer=None, every: int = 1) -> ClassicalField:
    """Advance ``steps`` Strang steps of size ``dt``.

    ``observer(field)`` is called on the initial field and every ``every`` steps.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    g = field.grid
    k = g.wavenumbers()
    if dt * np.max(k**2) >= 1:
        warnings.warn(f"dt * p_max^2 = {dt * np.max(k**2):.3g} >= 1; splitting error may be large", stacklevel=2)
    half = np.exp(-1j * k**2 * dt / 2)
    refl = g.reflection()
    psi = field.values.copy()
    t0 = field.time
    if observer is not None:
        observer(field)
    for step in range(1, steps + 1):
        psi = np.fft.ifft(half * np.fft.fft(psi))
        if coupling != 0:
            with np.errstate(over="ignore", invalid="ignore"):
                psi = _rk4(psi, refl, coupling, dt)
        psi = np.fft.ifft(half * np.fft.fft(psi))
        if not np.all(np.isfinite(psi)):
            raise NumericalError(f"non-finite field at step {step}")
        if observer is not None and step % every == 0:
            observer(ClassicalField(g, psi, t0 + step * dt))
    return ClassicalField(g, psi, t0 + steps * dt)


def trajectory(field: ClassicalField, coupling: float, dt: float, steps: int, every: int = 1):
    """Final field and the charge history sampled every ``every`` steps."""
    history: list[ChargeTriple] = []
    final = evolve(field, coupling, dt, steps, lambda f: history.append(charges(f, coupling)), every)
    return final, history


def relative_drift(history) -> dict[str, float]:
    q0 = history[0].as_array()
    q = np.array([h.as_array() for h in history])
    scale = np.maximum(np.abs(q0), 1e-12)
    drift = np.max(np.abs(q - q0), axis=0) / scale
    return dict(zip("NPH", map(float, drift)))


def translation_covariance_test(field: ClassicalField, shift: int, coupling: float, dt: float, steps: int) -> float:
    """max |evolve(shift(psi)) - shift(evolve(psi))| for a shift of ``shift`` sites.

    Vanishes for c = 0 only: the reflected argument pins x = 0.
    """
    if int(shift) != shift:
        raise ValueError("shift must be an integer number of grid sites")
    a = evolve(field.shifted(int(shift)), coupling, dt, steps)
    b = evolve(field, coupling, dt, steps).shifted(int(shift))
    return float(np.max(np.abs(a.values - b.values)))


def gaussian(grid: PositionGrid, center=0.0, width=1.0, amplitude=1.0, momentum=0.0) -> ClassicalField:
    x = grid.x
    return ClassicalField(grid, amplitude * np.exp(-((x - center) ** 2) / (2 * width**2) + 1j * momentum * x))


def plane_wave(grid: PositionGrid, mode: int, amplitude=1.0) -> ClassicalField:
    k = 2 * np.pi * mode / grid.box_length
    return ClassicalField(grid, amplitude * np.exp(1j * k * grid.x))


def self_convergence_order(field: ClassicalField, coupling: float, t_final: float, dts) -> float:
    """Order estimated from successive differences of runs at dt, dt/2, dt/4."""
    runs = [evolve(field, coupling, dt, int(round(t_final / dt))).values for dt in dts]
    e1 = np.max(np.abs(runs[0] - runs[1]))
    e2 = np.max(np.abs(runs[1] - runs[2]))
    return float(np.log(e1 / e2) / np.log(dts[0] / dts[1]))
