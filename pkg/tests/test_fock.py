from itertools import combinations_with_replacement
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nnlse.fock import VACUUM, FockState, apply_annihilation, apply_creation, enumerate_sector
from nnlse.lattice import make_grid
from nnlse.qoperators import annihilation_matrix, build_number


def test_dimension_small_cases():
    g = make_grid(1.0, 1)
    assert enumerate_sector(g, 2).dim == 6
    assert enumerate_sector(g, 0).states == (VACUUM,)
    blk = enumerate_sector(g, 2, 0)
    assert set(blk.states) == {FockState((0, 0)), FockState((-1, 1))}


@given(st.integers(1, 4), st.integers(0, 4))
def test_stars_and_bars(M, n):
    b = enumerate_sector(make_grid(1.0, M), n)
    assert b.dim == comb(2 * M + 1 + n - 1, n)
    assert len(set(b.states)) == b.dim
    assert [b.lookup(s) for s in b.states] == list(range(b.dim))


@given(st.integers(1, 4), st.integers(1, 4), st.integers(-8, 8))
def test_filtered_matches_brute_force(M, n, k):
    g = make_grid(1.0, M)
    brute = sorted(FockState(t) for t in combinations_with_replacement(g.modes, n) if sum(t) == k)
    assert list(enumerate_sector(g, n, k).states) == brute


def test_enumeration_is_deterministic():
    g = make_grid(2.0, 3)
    assert enumerate_sector(g, 3).states == enumerate_sector(g, 3).states


def test_canonical_form():
    assert FockState((2, -1, 2)) == FockState.from_occupation({-1: 1, 2: 2})
    assert FockState((2, -1, 2)).total_momentum_index == 3
    assert FockState((2, -1, 2)).norm_squared() == 2


def test_creation_amplitudes():
    s, a = apply_creation(VACUUM, 3)
    assert s == FockState((3,)) and a == 1.0
    s2, a2 = apply_creation(s, 3)
    assert s2.count(3) == 2 and a2 == pytest.approx(np.sqrt(2))


def test_annihilation_amplitudes():
    assert apply_annihilation(VACUUM, 0) is None
    s, a = apply_annihilation(FockState((1, 1)), 1)
    assert s == FockState((1,)) and a == pytest.approx(np.sqrt(2))
    assert apply_annihilation(FockState((1,)), 2) is None


def test_commutator_b_bdag_on_one_particle_states():
    g = make_grid(2.0, 2)
    b0 = enumerate_sector(g, 0)
    b1 = enumerate_sector(g, 1)
    b2 = enumerate_sector(g, 2)
    for n in g.modes:
        for m in g.modes:
            # [b_n, b+_m] restricted to the 1-particle sector
            bn_12 = annihilation_matrix(b2, b1, n)
            bm_12 = annihilation_matrix(b2, b1, m)
            bn_01 = annihilation_matrix(b1, b0, n)
            bm_01 = annihilation_matrix(b1, b0, m)
            comm = bn_12 @ bm_12.T - bm_01.T @ bn_01
            np.testing.assert_allclose(comm, np.eye(b1.dim) * (n == m), atol=1e-14)


@given(st.integers(0, 2**32 - 1))
def test_number_raised_by_creation(seed):
    # [N, b+] = b+ between sectors 2 -> 3
    g = make_grid(1.0, 2)
    lo, hi = enumerate_sector(g, 2), enumerate_sector(g, 3)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(-2, 3))
    bdag = annihilation_matrix(hi, lo, n).T
    comm = build_number(hi).matrix @ bdag - bdag @ build_number(lo).matrix
    v = rng.normal(size=lo.dim)
    np.testing.assert_allclose(comm @ v, bdag @ v, atol=1e-13)


def test_continuum_commutator_scale():
    # a(p) = sqrt(L) b  =>  [a(p_n), a+(p_m)] = L [n = m]
    g = make_grid(3.5, 2)
    b0, b1 = enumerate_sector(g, 0), enumerate_sector(g, 1)
    s = g.mode_scale()
    for n in g.modes:
        a = s * annihilation_matrix(b1, b0, n)
        assert (a @ a.T)[0, 0] == pytest.approx(g.box_length)
