"""The two pairings on the Fock space: Dirac (pathological) and parity.

Gram matrices are evaluated on the unnormalized continuum states
|k1..kn> = a+(k1)...a+(kn)|vac> purely from the commutation algebra.
The Dirac pairing follows from the adjoint rule a+^h(p) = a-(-p), so the
bra <p1..pn| annihilates the negated modes. Inserting parity negates them
back and gives the ordinary bosonic Gram.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .fock import SectorBasis
from .qoperators import SectorOperator, build_parity

CREATE = "create"
ANNIHILATE = "annihilate"
KINDS = ("dirac", "parity")


def wick_vev(ops: Sequence[tuple[str, int]], contraction: Callable[[int, int], complex] | None = None) -> complex:
    """<vac| O_1 ... O_k |vac> for a string of ladder operators.

    Annihilators are moved to the right; each time one passes a creator it
    leaves a contraction term. ``contraction(n, m)`` is [b_n, b+_m], the
    unit-normalized Kronecker delta by default.
    """
    if contraction is None:
        contraction = lambda n, m: 1.0 if n == m else 0.0  # noqa: E731
    ops = tuple(ops)
    for kind, _ in ops:
        if kind not in (CREATE, ANNIHILATE):
            raise ValueError(f"unknown operator kind {kind!r}")
    n_create = sum(1 for k, _ in ops if k == CREATE)
    if 2 * n_create != len(ops):
        return 0.0
    return _vev(ops, contraction)


def _vev(ops, contraction):
    if not ops:
        return 1.0
    if ops[0][0] == CREATE or ops[-1][0] == ANNIHILATE:
        return 0.0
    _, n = ops[0]
    total = 0.0
    for i in range(1, len(ops)):
        kind, m = ops[i]
        if kind == CREATE:
            w = contraction(n, m)
            if w != 0:
                total += w * _vev(ops[1:i] + ops[i + 1 :], contraction)
    return total


def pairing(bra: Sequence[int], ket: Sequence[int], kind: str, box_length: float = 1.0) -> complex:
    """<bra|ket> between a+ strings in the continuum normalization.

    Each contraction contributes 2 pi delta -> L.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown pairing kind {kind!r}")
    if len(bra) != len(ket):
        return 0.0
    sign = -1 if kind == "dirac" else 1
    ops = [(ANNIHILATE, sign * p) for p in reversed(bra)] + [(CREATE, q) for q in ket]
    return wick_vev(ops, lambda n, m: box_length if n == m else 0.0)


@dataclass(frozen=True)
class GramMatrix:
    basis: SectorBasis
    kind: str
    matrix: np.ndarray


def gram(basis: SectorBasis, kind: str) -> GramMatrix:
    if kind not in KINDS:
        raise ValueError(f"unknown pairing kind {kind!r}")
    if kind == "dirac" and basis.momentum_filter not in (None, 0):
        raise ValueError("the Dirac pairing couples momentum block k with -k; use an unfiltered basis")
    L = basis.grid.box_length
    d = basis.dim
    mat = np.zeros((d, d), dtype=complex)
    for i, bra in enumerate(basis.states):
        for j, ket in enumerate(basis.states):
            mat[i, j] = pairing(bra.modes, ket.modes, kind, L)
    return GramMatrix(basis, kind, mat)


def dirac_gram_spectrum(basis: SectorBasis) -> np.ndarray:
    """Ascending eigenvalues of the Dirac Gram (indefinite for n >= 1)."""
    return np.linalg.eigvalsh(gram(basis, "dirac").matrix)


def normalized_gram(basis: SectorBasis, kind: str) -> np.ndarray:
    """Pairing matrix in the orthonormal occupation basis used by operator matrices."""
    g = gram(basis, kind).matrix
    scale = np.array([np.sqrt(s.norm_squared() * basis.grid.box_length**basis.particle_number) for s in basis.states])
    return g / np.outer(scale, scale)


def parity_adjoint(op: SectorOperator) -> SectorOperator:
    """O^p = P O^dagger P."""
    p = build_parity(op.basis).matrix
    return SectorOperator(op.basis, p @ op.matrix.conj().T @ p, "composed")


def pseudo_hermiticity_defect(op: SectorOperator) -> float:
    return float(np.max(np.abs(parity_adjoint(op).matrix - op.matrix), initial=0.0))


def self_adjointness_defect(op: SectorOperator, kind: str) -> float:
    """max |G O - O^dagger G| with G the normalized pairing matrix of ``kind``."""
    g = normalized_gram(op.basis, kind)
    return float(np.max(np.abs(g @ op.matrix - op.matrix.conj().T @ g), initial=0.0))


def max_imag_eigenvalue(op: SectorOperator) -> float:
    """Largest |Im| over eigenvalues from a general (non-Hermitian) eigensolver."""
    return float(np.max(np.abs(np.linalg.eigvals(op.matrix).imag), initial=0.0))
