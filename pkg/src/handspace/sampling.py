"""Uniform joint-space sampling grids with an optional palm coupling limit."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

COUPLING_TOL = 1e-12


@dataclass(frozen=True)
class JointRange:
    lo: float
    hi: float
    step: float

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.lo > self.hi:
            raise ValueError("lo must not exceed hi")


@dataclass(frozen=True)
class PairCoupling:
    """Reject samples where q[i] + q[j] exceeds the bound."""

    i: int
    j: int
    bound: float

    def ok(self, qi: float, qj: float) -> bool:
        return qi + qj <= self.bound + COUPLING_TOL


def sample_axis(rng: JointRange) -> np.ndarray:
    """Uniform samples over [lo, hi] including both endpoints.

    The count is round(span/step) + 1, so the effective spacing may differ
    slightly from the requested step when the span is not a multiple of it.
    """
    span = rng.hi - rng.lo
    if span == 0.0:
        return np.array([rng.lo])
    n = int(math.floor(span / rng.step + 0.5)) + 1
    return np.linspace(rng.lo, rng.hi, n)


@dataclass(frozen=True)
class JointGrid:
    ranges: tuple[JointRange, ...]
    coupling: Optional[PairCoupling] = None

    def __post_init__(self):
        # an empty tuple is allowed: a zero-DoF chain has exactly one sample
        if self.coupling is not None:
            n = len(self.ranges)
            c = self.coupling
            if c.i == c.j or not (0 <= c.i < n and 0 <= c.j < n):
                raise ValueError("coupling must reference two distinct axes")

    @property
    def dof(self) -> int:
        return len(self.ranges)

    def axes(self) -> list[np.ndarray]:
        return [sample_axis(r) for r in self.ranges]

    def axis_counts(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.axes())

    def count(self) -> int:
        """Number of samples the grid emits, coupling rejections included."""
        counts = self.axis_counts()
        total = 1
        for c in counts:
            total *= c
        if self.coupling is None:
            return total
        axes = self.axes()
        ci, cj = self.coupling.i, self.coupling.j
        valid_pairs = sum(
            1
            for qi in axes[ci]
            for qj in axes[cj]
            if self.coupling.ok(qi, qj)
        )
        rest = total // (counts[ci] * counts[cj])
        return valid_pairs * rest

    def samples(self) -> Iterator[tuple[float, ...]]:
        """All joint vectors in lexicographic order, coupling applied."""
        axes = self.axes()
        coupling = self.coupling

        def rec(level: int, prefix: tuple[float, ...]):
            if level == len(axes):
                yield prefix
                return
            for v in axes[level]:
                if coupling is not None and level == max(coupling.i, coupling.j):
                    qi = v if level == coupling.i else prefix[coupling.i]
                    qj = v if level == coupling.j else prefix[coupling.j]
                    if not coupling.ok(qi, qj):
                        continue
                yield from rec(level + 1, prefix + (v,))

        yield from rec(0, ())


def grid_samples(grid: JointGrid) -> Iterator[tuple[float, ...]]:
    return grid.samples()
