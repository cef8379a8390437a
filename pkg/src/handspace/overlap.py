"""Thumb-finger overlap volumes and per-voxel configuration statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .voxelize import VoxelKey, VoxelSet


class EmptyOverlapError(ValueError):
    """Raised when statistics are requested for an empty overlap."""


@dataclass(frozen=True)
class VwrcStats:
    """Mean and lower 10th percentile of configurations per voxel."""

    mean: float
    p10: int
    voxels: int


@dataclass
class OverlapResult:
    pair: tuple[str, str]
    delta: float
    keys: set[VoxelKey]
    thumb_counts: dict[VoxelKey, int]
    finger_counts: dict[VoxelKey, int]

    def volume(self) -> float:
        return len(self.keys) * self.delta ** 3


def overlap(thumb_set: VoxelSet, finger_set: VoxelSet,
            pair: tuple[str, str] = ("thumb", "finger")) -> OverlapResult:
    """Intersection of two voxel sets with both count maps restricted to it."""
    if thumb_set.delta != finger_set.delta:
        raise ValueError("voxel sets must share the same delta")
    keys = thumb_set.keys() & finger_set.keys()
    return OverlapResult(
        pair=pair,
        delta=thumb_set.delta,
        keys=keys,
        thumb_counts={k: thumb_set.occupancy[k] for k in keys},
        finger_counts={k: finger_set.occupancy[k] for k in keys},
    )


def vwrc(counts: dict[VoxelKey, int]) -> VwrcStats:
    """Summarize a per-voxel count map; p10 is the nearest-rank percentile."""
    if not counts:
        raise EmptyOverlapError("no overlap voxels to summarize")
    values = sorted(counts.values())
    n = len(values)
    rank = max(1, math.ceil(0.10 * n))
    return VwrcStats(mean=sum(values) / n, p10=values[rank - 1], voxels=n)


def overlap_ratio(overlap_vol: float, reachable_vol: float) -> float:
    """Overlap volume as a percentage of a reachable volume."""
    if reachable_vol <= 0:
        raise ZeroDivisionError("reachable volume must be positive")
    return 100.0 * overlap_vol / reachable_vol
