"""Exit criteria. Each test prints one PASS/FAIL line (see the terminal summary)."""

import time
import warnings
from itertools import combinations

import numpy as np
import pytest

from nnlse.bethe import (
    BetheState,
    check_cusp,
    ring_residual,
    s_matrix_phase,
    solve_ring_bethe,
    verify_bound_pair_fd,
    verify_eigenstate_fd,
)
from nnlse.classical import gaussian, plane_wave, relative_drift, self_convergence_order, evolve, trajectory
from nnlse.fock import FockState, enumerate_sector
from nnlse.lattice import PositionGrid, make_grid
from nnlse.metric import dirac_gram_spectrum, gram, max_imag_eigenvalue, parity_adjoint
from nnlse.qoperators import (
    build_hamiltonian,
    build_momentum,
    build_number,
    build_v_momentum,
    build_v_position,
    commutator,
)
from nnlse.spectra import convergence_sweep, diagonalize, ls_series, richardson_inverse

pytestmark = pytest.mark.acceptance


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_01_pathology_reproduction(criterion):
    with Timer() as t:
        L, M = 1.0, 4
        b = enumerate_sector(make_grid(L, M), 1)
        gd = gram(b, "dirac").matrix
        gp = gram(b, "parity").matrix
        diag = np.diag(gd)
        zero = b.lookup(FockState((0,)))
        diag_ok = abs(diag[zero] - L) <= 1e-14 and np.all(np.abs(np.delete(diag, zero)) <= 1e-14)
        ev = dirac_gram_spectrum(b)
        ev_ok = np.allclose(ev, [-L] * M + [L] * (M + 1), atol=1e-14, rtol=0)
        par_ok = np.max(np.abs(gp - L * np.eye(b.dim))) <= 1e-14
    ok = diag_ok and ev_ok and par_ok and t.elapsed < 1
    criterion(1, "Dirac zero norms / parity Gram = L*I", ok,
              f"diag ok={diag_ok}, spectrum ok={ev_ok}, parity ok={par_ok}, {t.elapsed:.2f}s")
    assert ok


def test_02_pseudo_hermiticity(criterion):
    with Timer() as t:
        b = enumerate_sector(make_grid(2 * np.pi, 6), 2)
        worst_h = worst_n = worst_im = 0.0
        for c in (1.0, -1.0):
            h, n = build_hamiltonian(b, c), build_number(b)
            worst_h = max(worst_h, np.max(np.abs(parity_adjoint(h).matrix - h.matrix)))
            worst_n = max(worst_n, np.max(np.abs(parity_adjoint(n).matrix - n.matrix)))
            worst_im = max(worst_im, max_imag_eigenvalue(h))
    ok = worst_h <= 1e-12 and worst_n <= 1e-12 and worst_im <= 1e-10 and t.elapsed < 10
    criterion(2, "P H^dag P = H, P N^dag P = N, real spectrum", ok,
              f"|PH'P-H|={worst_h:.1e}, |PN'P-N|={worst_n:.1e}, max|Im E|={worst_im:.1e}, {t.elapsed:.2f}s")
    assert ok


def test_03_locality_equivalence(criterion):
    with Timer() as t:
        worst = 0.0
        for M in range(3, 7):
            for n in (2, 3):
                b = enumerate_sector(make_grid(2 * np.pi, M), n)
                vm, vp = build_v_momentum(b, 1.0).matrix, build_v_position(b, 1.0).matrix
                worst = max(worst, np.linalg.norm(vm - vp) / np.linalg.norm(vm))
    ok = worst <= 1e-12 and t.elapsed < 30
    criterion(3, "momentum-space V == position-space contact V", ok, f"max rel Frobenius {worst:.1e}, {t.elapsed:.2f}s")
    assert ok


def test_04_commuting_charges(criterion):
    with Timer() as t:
        worst = 0.0
        for M in range(3, 7):
            for n in (2, 3):
                b = enumerate_sector(make_grid(2 * np.pi, M), n)
                for c in (1.0, -1.0):
                    h = build_hamiltonian(b, c)
                    worst = max(worst, np.max(np.abs(commutator(h, build_number(b)).matrix)),
                                np.max(np.abs(commutator(h, build_momentum(b)).matrix)))
    ok = worst < 1e-12 and t.elapsed < 10
    criterion(4, "[H,N] = [H,P] = 0", ok, f"max entry {worst:.1e}, {t.elapsed:.2f}s")
    assert ok


def test_05_bethe_eigenstates(criterion):
    with Timer() as t:
        s2 = BetheState((-1.0, 2.0), 1.5)
        r_coarse = verify_eigenstate_fd(s2, 30.0, 201)
        r_fine = verify_eigenstate_fd(s2, 30.0, 401)  # h halves
        ratio = r_coarse / r_fine
        cusp2 = check_cusp(s2, (0, 1), [0.37, 0.0])
        rng = np.random.default_rng(2024)
        worst3 = 0.0
        for _ in range(10):
            ks = np.sort(rng.uniform(-3, 3, 3))
            while np.min(np.diff(ks)) < 1e-3:
                ks = np.sort(rng.uniform(-3, 3, 3))
            s3 = BetheState(tuple(ks), rng.uniform(0.1, 3.0))
            for pair in combinations(range(3), 2):
                worst3 = max(worst3, check_cusp(s3, pair, rng.uniform(-3, 3, 3)))
    ok = ratio > 1.8 and cusp2 < 1e-10 and worst3 < 1e-9 and t.elapsed < 60
    criterion(5, "Bethe state FD refinement and cusps", ok,
              f"FD {r_coarse:.2e}->{r_fine:.2e} (ratio {ratio:.2f}), cusp N=2 {cusp2:.1e}, "
              f"cusp N=3 max {worst3:.1e}, {t.elapsed:.2f}s")
    assert ok


def test_06_s_matrix(criterion):
    with Timer() as t:
        rng = np.random.default_rng(6)
        k1, k2 = rng.normal(scale=5, size=(2, 10_000))
        c = rng.normal(scale=3, size=10_000)
        s = s_matrix_phase(k1, k2, c)
        mod = np.max(np.abs(np.abs(s) - 1))
        inv = np.max(np.abs(s * s_matrix_phase(k2, k1, c) - 1))
        val = abs(s_matrix_phase(0.0, 1.0, 1.0) - (-1j))
    ok = mod <= 1e-12 and inv <= 1e-12 and val <= 1e-12 and t.elapsed < 1
    criterion(6, "S-matrix unit modulus, exchange inverse, value -i", ok,
              f"modulus {mod:.1e}, inverse {inv:.1e}, |S(1,1)+i| {val:.1e}, {t.elapsed:.2f}s")
    assert ok


def test_07_bound_state(criterion):
    with Timer() as t:
        c, L = -2.0, 20.0
        cutoffs = [8, 16, 24, 32]
        energies = [e[0] for _, e in convergence_sweep(2, c, cutoffs, L, momentum_block=0, n_levels=1)]
        exact = -0.5 * c**2
        decreasing = all(a > b for a, b in zip(energies, energies[1:]))
        above = all(e > exact for e in energies)
        gap = energies[-1] - exact
        fd = [verify_bound_pair_fd(c, 30.0, m) for m in (201, 401)]
        fd_ok = fd[0] / fd[1] > 1.8
    ok = decreasing and above and gap < 0.1 and fd_ok and t.elapsed < 120
    criterion(7, "bound state ED -> -c^2/2 and FD oracle", ok,
              f"E(M={cutoffs})={np.round(energies, 4).tolist()}, final gap {gap:.3f} (need < 0.1), "
              f"FD {fd[0]:.2e}->{fd[1]:.2e}, {t.elapsed:.2f}s")
    assert ok


def test_08_perturbation_consistency(criterion):
    with Timer() as t:
        g = make_grid(2 * np.pi, 6)
        ref = FockState((0, 0))
        c = 1e-3
        s = ls_series(ref, c, 1, grid=g)
        blk = enumerate_sector(g, 2, 0)
        e = lambda cc: diagonalize(build_hamiltonian(blk, cc)).eigenvalues[0]  # noqa: E731
        slope = (e(c) - e(-c)) / (2 * c)
        shift = s.first_order_energy() - s.reference_energy
        rel = abs(shift - slope * c) / abs(slope * c)
    ok = rel <= 1e-6 and t.elapsed < 30
    criterion(8, "first-order LS energy vs exact slope at c=0", ok, f"relative mismatch {rel:.1e}, {t.elapsed:.2f}s")
    assert ok


def test_09_ring_bethe_vs_diagonalization(criterion):
    with Timer() as t:
        L, c, qn = 2 * np.pi, 1.0, [0, 1]
        st = solve_ring_bethe(2, L, c, qn)
        resid = ring_residual(st, L, qn)
        block = round(st.momentum * L / (2 * np.pi))
        cutoffs = [8, 16, 32, 64, 128, 256]
        energies = [e[0] for _, e in convergence_sweep(2, c, cutoffs, L, momentum_block=block, n_levels=1)]
        monotone = all(a > b for a, b in zip(energies, energies[1:])) and energies[-1] > st.energy
        gap = (energies[-1] - st.energy) / st.energy
        extrap = richardson_inverse(cutoffs, energies)
        extrap_rel = abs(extrap - st.energy) / st.energy
    ok = resid < 1e-12 and monotone and gap < 0.05 and extrap_rel < 1e-3 and t.elapsed < 120
    criterion(9, "ring Bethe energy vs ED sweep", ok,
              f"Newton residual {resid:.1e}, E_Bethe={st.energy:.8f}, ED(M=256)={energies[-1]:.8f}, "
              f"gap {gap:.1e}, 1/M extrapolation off by {extrap_rel:.1e}, {t.elapsed:.2f}s")
    assert ok


def test_10_classical_conservation(criterion):
    with Timer() as t, warnings.catch_warnings():
        warnings.simplefilter("ignore")
        grid = PositionGrid(20.0, 512)
        f0 = gaussian(grid, center=1.0, width=1.0, amplitude=0.8, momentum=0.5)
        drifts = {}
        for c in (1.0, -1.0):
            _, hist = trajectory(f0, c, 1e-4, 10_000, every=100)
            drifts[c] = relative_drift(hist)
        worst = max(max(d.values()) for d in drifts.values())
        pw = plane_wave(grid, 3, 0.7)
        k = 2 * np.pi * 3 / grid.box_length
        free_err = np.max(np.abs(evolve(pw, 0.0, 1e-4, 10_000).values - 0.7 * np.exp(1j * (k * grid.x - k**2))))
        order = self_convergence_order(f0, 1.0, 1.0, [0.02, 0.01, 0.005])
    ok = worst < 1e-6 and free_err < 1e-10 and 1.8 <= order <= 2.2 and t.elapsed < 120
    criterion(10, "classical charges conserved, free propagation, order 2", ok,
              f"max rel drift {worst:.1e}, free error {free_err:.1e}, order {order:.3f}, {t.elapsed:.2f}s")
    assert ok
