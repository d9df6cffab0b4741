"""Exact state-vector evolution of a three-state quantum walk on the integer line.

The walker carries a three-component coin with basis order ``(L, S, R)``:
the L component moves one site left per step, S stays, R moves right.  One
step applies the coin to every site and then shifts the components.  Sites
declared absorbing are measured after every step; mass found there is
removed from the state and recorded instead of renormalizing, so per-step
absorbed masses are directly the squared first-hit amplitudes that the
analytic modules reproduce.

Two surfaces are provided: a sparse, value-semantic one built around
:class:`WalkState` (``apply_evolution``, ``project_is_at``) that is
convenient for small hand checks, and the dense :class:`WindowWalk`
engine used by :func:`run_walk` and the localization studies, which is
fast enough for thousands of steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

__all__ = [
    "COIN_ORDER",
    "CoinSpinor",
    "BoundarySpec",
    "WalkState",
    "AbsorptionReport",
    "WindowWalk",
    "grover_coin",
    "apply_evolution",
    "project_is_at",
    "run_walk",
    "first_hit_amplitudes",
    "position_distribution",
    "spinor_mass_history",
]

COIN_ORDER = ("L", "S", "R")

#: normalization slack accepted for initial spinors; anything worse is rejected
INIT_NORM_TOL = 1e-9


def grover_coin() -> np.ndarray:
    """Return the 3x3 Grover coin: -1/3 on the diagonal, 2/3 elsewhere.

    The matrix is real, symmetric, unitary and involutory.  Row and column
    order is ``(L, S, R)``.

    Examples
    --------
    >>> G = grover_coin()
    >>> (G @ G == np.eye(3)).all()
    np.True_
    >>> G @ np.array([0.0, 0.0, 1.0])
    array([ 0.66666667,  0.66666667, -0.33333333])
    """
    return (2.0 * np.ones((3, 3)) - 3.0 * np.eye(3)) / 3.0


@dataclass(frozen=True)
class CoinSpinor:
    """Coin amplitudes at one lattice site, in ``(L, S, R)`` order."""

    aL: complex = 0j
    aS: complex = 0j
    aR: complex = 0j

    @classmethod
    def from_array(cls, v) -> "CoinSpinor":
        return cls(complex(v[0]), complex(v[1]), complex(v[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.aL, self.aS, self.aR], dtype=complex)

    @property
    def norm2(self) -> float:
        return abs(self.aL) ** 2 + abs(self.aS) ** 2 + abs(self.aR) ** 2

    def is_normalized(self, tol: float = INIT_NORM_TOL) -> bool:
        return abs(self.norm2 - 1.0) <= tol


@dataclass(frozen=True)
class BoundarySpec:
    """Optional absorbing sites: ``left=M`` puts one at -M, ``right=N`` at +N."""

    left: int | None = None
    right: int | None = None

    def __post_init__(self):
        for name, v in (("left", self.left), ("right", self.right)):
            if v is not None and (not isinstance(v, int) or v < 1):
                raise ValueError(f"{name} boundary must be a positive integer, got {v!r}")

    @property
    def any(self) -> bool:
        return self.left is not None or self.right is not None


@dataclass(frozen=True)
class WalkState:
    """Sparse walker state: position -> spinor, plus absorbed-mass ledgers.

    States inside a walk are intentionally left unnormalized after a
    no-branch projection; the removed mass lives in ``absorbed_left`` /
    ``absorbed_right`` (one entry per completed step), so that
    ``norm2 + sum(absorbed_left) + sum(absorbed_right)`` stays 1.
    """

    amplitudes: dict[int, CoinSpinor] = field(default_factory=dict)
    t: int = 0
    absorbed_left: tuple[float, ...] = ()
    absorbed_right: tuple[float, ...] = ()

    @classmethod
    def initial(cls, spinor: CoinSpinor, position: int = 0) -> "WalkState":
        return cls(amplitudes={position: spinor})

    @property
    def norm2(self) -> float:
        return sum(sp.norm2 for sp in self.amplitudes.values())

    @property
    def total_absorbed_left(self) -> float:
        return float(sum(self.absorbed_left))

    @property
    def total_absorbed_right(self) -> float:
        return float(sum(self.absorbed_right))

    def support(self) -> list[int]:
        return sorted(self.amplitudes)


def apply_evolution(state: WalkState, coin: np.ndarray | None = None) -> WalkState:
    """One evolution step: coin on every site, then the component shift.

    Returns a new state with ``t`` incremented; absorbed ledgers carry over
    untouched (measurement is a separate operation).
    """
    if coin is None:
        coin = grover_coin()
    acc: dict[int, np.ndarray] = {}

    def bump(m: int, idx: int, amp: complex) -> None:
        if m not in acc:
            acc[m] = np.zeros(3, dtype=complex)
        acc[m][idx] += amp

    for m, sp in state.amplitudes.items():
        phi = coin @ sp.as_array()
        bump(m - 1, 0, phi[0])
        bump(m, 1, phi[1])
        bump(m + 1, 2, phi[2])
    new_amps = {
        m: CoinSpinor.from_array(v) for m, v in acc.items() if np.any(v != 0)
    }
    return replace(state, amplitudes=new_amps, t=state.t + 1)


def project_is_at(
    state: WalkState, n: int, normalized: bool = False
) -> tuple[float, WalkState, WalkState]:
    """Measure "is the walker at site n?".

    Returns ``(prob_yes, state_yes, state_no)`` where ``prob_yes`` is the
    squared norm at ``n`` relative to the squared norm of the whole state
    (0 for a zero state).  The two branch states are raw projections by
    default, so their squared norms add up to the input's; pass
    ``normalized=True`` to get collapsed (unit-norm) branches instead.
    """
    total = state.norm2
    at_n = state.amplitudes.get(n)
    yes_amps = {n: at_n} if at_n is not None else {}
    no_amps = {m: sp for m, sp in state.amplitudes.items() if m != n}
    prob_yes = (at_n.norm2 / total) if (at_n is not None and total > 0) else 0.0
    yes_state = replace(state, amplitudes=yes_amps)
    no_state = replace(state, amplitudes=no_amps)
    if normalized:
        yes_state = _rescaled(yes_state)
        no_state = _rescaled(no_state)
    return prob_yes, yes_state, no_state


def _rescaled(state: WalkState) -> WalkState:
    n2 = state.norm2
    if n2 == 0:
        return state
    c = 1.0 / np.sqrt(n2)
    return replace(
        state,
        amplitudes={
            m: CoinSpinor(c * sp.aL, c * sp.aS, c * sp.aR)
            for m, sp in state.amplitudes.items()
        },
    )


def position_distribution(state: WalkState) -> dict[int, float]:
    """P(m) = |aL|^2 + |aS|^2 + |aR|^2 at each occupied position."""
    return {m: sp.norm2 for m, sp in state.amplitudes.items()}


class WindowWalk:
    """Dense evolution of the walk on the window of reachable positions.

    Positions run from ``lo`` to ``hi`` inclusive; a bounded side pins the
    window edge at the boundary site, a free side leaves ``steps + 1`` of
    slack so nothing ever falls off the edge.  After each step the
    amplitude at a boundary site (only its L component can be populated on
    the left edge, only R on the right) is recorded and zeroed.
    """

    def __init__(self, init: CoinSpinor, bounds: BoundarySpec, steps: int):
        if steps < 0:
            raise ValueError("steps must be >= 0")
        self.bounds = bounds
        self.lo = -bounds.left if bounds.left is not None else -(steps + 1)
        self.hi = bounds.right if bounds.right is not None else steps + 1
        width = self.hi - self.lo + 1
        self.amps = np.zeros((3, width), dtype=complex)
        self.amps[:, -self.lo] = init.as_array()
        self.t = 0
        self.hit_left: list[complex] = []
        self.hit_right: list[complex] = []
        self._coin = grover_coin()

    def index(self, m: int) -> int:
        return m - self.lo

    def step(self) -> None:
        """Advance one step: coin, shift, then boundary measurements (left first)."""
        phi = self._coin @ self.amps
        out = np.zeros_like(self.amps)
        out[0, :-1] = phi[0, 1:]
        out[1] = phi[1]
        out[2, 1:] = phi[2, :-1]
        self.amps = out
        self.t += 1
        if self.bounds.left is not None:
            self.hit_left.append(complex(self.amps[0, 0]))
            self.amps[:, 0] = 0
        if self.bounds.right is not None:
            self.hit_right.append(complex(self.amps[2, -1]))
            self.amps[:, -1] = 0

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def position_probability(self, m: int) -> float:
        i = self.index(m)
        if not 0 <= i < self.amps.shape[1]:
            return 0.0
        return float(np.sum(np.abs(self.amps[:, i]) ** 2))

    def probability_array(self) -> np.ndarray:
        """P(m) over the whole window, indexed by ``index(m)``."""
        return np.sum(np.abs(self.amps) ** 2, axis=0)

    def mass_within(self, radius: int) -> float:
        """Total probability at positions m with |m| <= radius."""
        i0 = max(0, self.index(-radius))
        i1 = min(self.amps.shape[1], self.index(radius) + 1)
        return float(np.sum(np.abs(self.amps[:, i0:i1]) ** 2))

    def to_state(self) -> WalkState:
        amps = {}
        for i in range(self.amps.shape[1]):
            col = self.amps[:, i]
            if np.any(col != 0):
                amps[self.lo + i] = CoinSpinor.from_array(col)
        return WalkState(
            amplitudes=amps,
            t=self.t,
            absorbed_left=tuple(abs(a) ** 2 for a in self.hit_left),
            absorbed_right=tuple(abs(a) ** 2 for a in self.hit_right),
        )


@dataclass(frozen=True)
class AbsorptionReport:
    """Outcome of a bounded (or free) walk run.

    ``absorbed_left[t-1]`` is the probability mass absorbed at the left
    boundary on step t (empty array when that side is free); likewise for
    the right.  ``first_hit_left`` holds the underlying complex amplitudes.
    ``residual_norm`` is the squared norm still on the lattice after the
    last step; for bounded runs it estimates the localization deficit, the
    mass that will never be absorbed.
    """

    steps: int
    absorbed_left: np.ndarray
    absorbed_right: np.ndarray
    first_hit_left: np.ndarray
    first_hit_right: np.ndarray
    residual_norm: float
    final_state: WalkState

    @property
    def cumulative_left(self) -> float:
        return float(np.sum(self.absorbed_left))

    @property
    def cumulative_right(self) -> float:
        return float(np.sum(self.absorbed_right))

    @property
    def deficit(self) -> float:
        return self.residual_norm


def run_walk(init: CoinSpinor, bounds: BoundarySpec, steps: int) -> AbsorptionReport:
    """Run the measured walk for ``steps`` steps from spinor ``init`` at 0.

    The initial spinor must be normalized within 1e-9; anything else is
    rejected rather than silently rescaled.  Each step applies the
    evolution and then measures the left boundary, then the right one
    (the projectors commute, the order is fixed for reproducibility).
    """
    if not init.is_normalized():
        raise ValueError(
            f"initial spinor must have unit norm within {INIT_NORM_TOL}, "
            f"got squared norm {init.norm2!r}"
        )
    w = WindowWalk(init, bounds, steps)
    for _ in range(steps):
        w.step()
    return AbsorptionReport(
        steps=steps,
        absorbed_left=np.abs(np.array(w.hit_left)) ** 2,
        absorbed_right=np.abs(np.array(w.hit_right)) ** 2,
        first_hit_left=np.array(w.hit_left),
        first_hit_right=np.array(w.hit_right),
        residual_norm=w.norm2(),
        final_state=w.to_state(),
    )


_BASIS = {"L": CoinSpinor(1, 0, 0), "S": CoinSpinor(0, 1, 0), "R": CoinSpinor(0, 0, 1)}


def first_hit_amplitudes(
    init_coin: str, bounds: BoundarySpec, steps: int
) -> np.ndarray:
    """Left-boundary first-hit amplitudes for a basis initial coin.

    Entry ``t-1`` is the amplitude of arriving at the left boundary for
    the first time on step t.  Only the L coin component can populate a
    left boundary site, so a single complex number per step is complete.
    """
    if init_coin not in _BASIS:
        raise ValueError(f"init_coin must be one of {sorted(_BASIS)}, got {init_coin!r}")
    if bounds.left is None:
        raise ValueError("first_hit_amplitudes needs a left boundary")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    report = run_walk(_BASIS[init_coin], bounds, steps)
    return report.first_hit_left


def spinor_mass_history(
    init: CoinSpinor, bounds: BoundarySpec, steps: int, positions: Iterable[int]
) -> np.ndarray:
    """P(t, m) for t = 1..steps at the given positions, shape (steps, len).

    Convenience driver for localization traces; runs the dense engine once.
    """
    pos = list(positions)
    w = WindowWalk(init, bounds, steps)
    out = np.empty((steps, len(pos)))
    for t in range(steps):
        w.step()
        for j, m in enumerate(pos):
            out[t, j] = w.position_probability(m)
    return out
