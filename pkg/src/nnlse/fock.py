"""Bosonic Fock bases on a truncated mode set and ladder operator actions.

States are stored in terms of unit-normalized discrete modes b_n with
[b_n, b_m^+] = [n = m]. The continuum operators of the field theory are
a(p_n) = sqrt(L) b_n; that conversion only happens in ``metric`` and
``qoperators`` where the continuum formulas demand it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb, sqrt

from .lattice import MomentumGrid


@dataclass(frozen=True, order=True)
class FockState:
    """Occupation state, canonically the sorted tuple of occupied modes.

    ``FockState((-1, 1))`` is b_{-1}^+ b_1^+ |vac>, ``FockState(())`` the vacuum.
    """

    modes: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(sorted(int(n) for n in self.modes)))

    @classmethod
    def from_occupation(cls, occupation: dict[int, int]) -> FockState:
        if any(v < 0 for v in occupation.values()):
            raise ValueError("occupation counts must be non-negative")
        return cls(tuple(n for n, k in occupation.items() for _ in range(k)))

    @property
    def occupation(self) -> dict[int, int]:
        return dict(Counter(self.modes))

    def count(self, n: int) -> int:
        return self.modes.count(n)

    @property
    def particle_number(self) -> int:
        return len(self.modes)

    @property
    def total_momentum_index(self) -> int:
        return sum(self.modes)

    def reflected(self) -> FockState:
        return FockState(tuple(-n for n in self.modes))

    def norm_squared(self) -> int:
        """<vac| (prod b)(prod b^+) |vac> for the unnormalized string, i.e. prod count!."""
        out = 1
        for k in Counter(self.modes).values():
            for j in range(2, k + 1):
                out *= j
        return out


VACUUM = FockState(())


def apply_creation(state: FockState, n: int) -> tuple[FockState, float]:
    return FockState(state.modes + (n,)), sqrt(state.count(n) + 1)


def apply_annihilation(state: FockState, n: int) -> tuple[FockState, float] | None:
    """b_n on a normalized occupation state; ``None`` is the zero vector."""
    k = state.count(n)
    if k == 0:
        return None
    modes = list(state.modes)
    modes.remove(n)
    return FockState(tuple(modes)), sqrt(k)


def _sorted_tuples(n, lo, hi, target):
    """Non-decreasing length-n tuples in [lo, hi], with sum == target if given."""
    if n == 0:
        if target is None or target == 0:
            yield ()
        return
    for first in range(lo, hi + 1):
        if target is not None:
            rest = target - first
            if rest < first * (n - 1) or rest > hi * (n - 1):
                continue
        for tail in _sorted_tuples(n - 1, first, hi, None if target is None else target - first):
            yield (first,) + tail


@dataclass(frozen=True)
class SectorBasis:
    grid: MomentumGrid
    particle_number: int
    momentum_filter: int | None
    states: tuple[FockState, ...]
    index: dict[FockState, int] = field(repr=False, compare=False)

    def __len__(self):
        return len(self.states)

    @property
    def dim(self) -> int:
        return len(self.states)

    def lookup(self, state: FockState) -> int | None:
        return self.index.get(state)

    def momentum_indices(self) -> list[int]:
        return [s.total_momentum_index for s in self.states]


def enumerate_sector(grid: MomentumGrid, n: int, momentum_filter: int | None = None) -> SectorBasis:
    """All n-boson states over the grid modes, lexicographic in sorted mode tuples."""
    if int(n) != n or n < 0:
        raise ValueError(f"particle number must be a non-negative integer, got {n}")
    M = grid.mode_cutoff
    if momentum_filter is not None and n == 0 and momentum_filter != 0:
        states: tuple[FockState, ...] = ()
    else:
        states = tuple(FockState(t) for t in _sorted_tuples(int(n), -M, M, momentum_filter))
    return SectorBasis(grid, int(n), momentum_filter, states, {s: i for i, s in enumerate(states)})


def sector_dimension(n_modes: int, n: int) -> int:
    return comb(n_modes + n - 1, n)
