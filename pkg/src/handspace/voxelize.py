"""Voxel occupancy of fingertip positions with per-voxel configuration counts.

A position maps to the cell (floor(x/d), floor(y/d), floor(z/d)); exact
multiples of the voxel edge belong to the upper cell, and negative
coordinates floor toward minus infinity. The workspace volume of a set is
the number of occupied cells times the cell volume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .kinematics import KinematicChain, rot_x, rot_z, trans_x, trans_z
from .sampling import JointGrid

VoxelKey = tuple[int, int, int]

# packed-key layout: 21 bits per signed axis index
_PACK_BITS = 21
_PACK_OFF = 1 << (_PACK_BITS - 1)
_PACK_MASK = (1 << _PACK_BITS) - 1


def voxel_index(p: Sequence[float], delta: float) -> VoxelKey:
    """Cell key of a single position."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    x, y, z = float(p[0]), float(p[1]), float(p[2])
    if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
        raise ValueError("position must be finite")
    return (math.floor(x / delta), math.floor(y / delta), math.floor(z / delta))


def _pack(keys: np.ndarray) -> np.ndarray:
    return (((keys[:, 0] + _PACK_OFF) << (2 * _PACK_BITS))
            | ((keys[:, 1] + _PACK_OFF) << _PACK_BITS)
            | (keys[:, 2] + _PACK_OFF))


def _unpack(packed: int) -> VoxelKey:
    kx = (packed >> (2 * _PACK_BITS)) - _PACK_OFF
    ky = ((packed >> _PACK_BITS) & _PACK_MASK) - _PACK_OFF
    kz = (packed & _PACK_MASK) - _PACK_OFF
    return (int(kx), int(ky), int(kz))


@dataclass
class VoxelSet:
    """Occupied cells and how many joint samples landed in each."""

    delta: float
    occupancy: dict[VoxelKey, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")

    def __len__(self) -> int:
        return len(self.occupancy)

    def keys(self) -> set[VoxelKey]:
        return set(self.occupancy)

    @property
    def sample_count(self) -> int:
        return sum(self.occupancy.values())

    def volume(self) -> float:
        return len(self.occupancy) * self.delta ** 3

    def add(self, p: Sequence[float]) -> None:
        key = voxel_index(p, self.delta)
        self.occupancy[key] = self.occupancy.get(key, 0) + 1

    def merge(self, other: "VoxelSet") -> None:
        if other.delta != self.delta:
            raise ValueError("voxel sets must share the same delta")
        for key, count in other.occupancy.items():
            self.occupancy[key] = self.occupancy.get(key, 0) + count

    def _ingest(self, packed: np.ndarray, counts: np.ndarray) -> None:
        occ = self.occupancy
        for pk, ct in zip(packed.tolist(), counts.tolist()):
            key = _unpack(pk)
            occ[key] = occ.get(key, 0) + ct


def accumulate(vset: VoxelSet, p: Sequence[float]) -> VoxelSet:
    """Insert one position, returning the same set for chaining."""
    vset.add(p)
    return vset


def volume(vset: VoxelSet) -> float:
    return vset.volume()


# ---------------------------------------------------------------------------
# batch evaluation over a joint grid

def _compile_segments(chain: KinematicChain) -> tuple[list[np.ndarray], np.ndarray]:
    """Fold fixed rows into constants between the joint rotations.

    The chain transform becomes C0.Rz(q0).C1.Rz(q1)...C(m-1).Rz(q(m-1)).Cm,
    which lets the grid evaluation share partial products across samples.
    """
    consts = []
    cur = np.eye(4)
    for row in chain.rows:
        cur = cur @ rot_x(row.alpha_prev) @ trans_x(row.a_prev)
        if row.is_fixed:
            cur = cur @ rot_z(row.theta) @ trans_z(row.d)
        else:
            cur = cur @ rot_z(row.theta)
            consts.append(cur)
            cur = trans_z(row.d)
    return consts, cur


def _apply(m: np.ndarray, pts: np.ndarray) -> np.ndarray:
    return pts @ m[:3, :3].T + m[:3, 3]


def workspace_many(chain: KinematicChain, grid: JointGrid,
                   deltas: Sequence[float],
                   chunk_cap: int = 4_000_000) -> list[VoxelSet]:
    """Voxelize the fingertip positions of every grid sample, once per delta.

    Forward kinematics is evaluated with shared suffix products: the points
    reachable by the trailing joints are computed once and re-transformed
    for every combination of the leading joints. Results are independent of
    chunking and enumeration order.
    """
    if grid.dof != chain.dof:
        raise ValueError(
            f"{chain.label}: grid has {grid.dof} axes, chain has {chain.dof} joints")
    for d in deltas:
        if d <= 0:
            raise ValueError("delta must be positive")

    consts, final = _compile_segments(chain)
    axes = grid.axes()
    m = len(axes)
    coupling = grid.coupling

    # suffix axes s..m-1 are materialized as one point array; the leading
    # axes are enumerated, which also keeps any coupled pair explicit
    min_split = 0
    if coupling is not None:
        min_split = max(coupling.i, coupling.j) + 1
    split = m
    prod = 1
    while split > min_split and prod * len(axes[split - 1]) <= chunk_cap:
        split -= 1
        prod *= len(axes[split])

    pts = final[:3, 3].reshape(1, 3)
    for level in range(m - 1, split - 1, -1):
        base = consts[level]
        out = np.empty((len(axes[level]) * len(pts), 3))
        for i, t in enumerate(axes[level]):
            mt = base @ rot_z(t)
            out[i * len(pts):(i + 1) * len(pts)] = _apply(mt, pts)
        pts = out

    vsets = [VoxelSet(d) for d in deltas]

    def emit(prefix: np.ndarray) -> None:
        p = _apply(prefix, pts)
        for vset in vsets:
            keys = np.floor(p / vset.delta).astype(np.int64)
            packed, counts = np.unique(_pack(keys), return_counts=True)
            vset._ingest(packed, counts)

    def enumerate_prefix(level: int, prefix: np.ndarray, chosen: list[float]) -> None:
        if level == split:
            emit(prefix)
            return
        base = prefix @ consts[level]
        for t in axes[level]:
            if coupling is not None and level == max(coupling.i, coupling.j):
                lo = min(coupling.i, coupling.j)
                if not coupling.ok(chosen[lo], t):
                    continue
            enumerate_prefix(level + 1, base @ rot_z(t), chosen + [t])

    enumerate_prefix(0, np.eye(4), [])
    return vsets


def workspace(chain: KinematicChain, grid: JointGrid, delta: float,
              chunk_cap: int = 4_000_000) -> VoxelSet:
    """Reachable-workspace voxel set of one digit over its joint grid."""
    return workspace_many(chain, grid, [delta], chunk_cap=chunk_cap)[0]


# ---------------------------------------------------------------------------
# file formats

def write_csv(vset: VoxelSet, path: str | Path) -> None:
    """Rows kx,ky,kz,count sorted by key."""
    lines = ["kx,ky,kz,count"]
    for key in sorted(vset.occupancy):
        lines.append(f"{key[0]},{key[1]},{key[2]},{vset.occupancy[key]}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path: str | Path, delta: float) -> VoxelSet:
    text = Path(path).read_text().strip().splitlines()
    if not text or text[0].strip() != "kx,ky,kz,count":
        raise ValueError(f"{path}: expected header kx,ky,kz,count")
    occ: dict[VoxelKey, int] = {}
    for line in text[1:]:
        kx, ky, kz, count = (int(v) for v in line.split(","))
        occ[(kx, ky, kz)] = count
    return VoxelSet(delta, occ)


def write_ply(vset: VoxelSet, path: str | Path) -> None:
    """ASCII point cloud of cell centers."""
    keys = sorted(vset.occupancy)
    d = vset.delta
    lines = [
        "ply", "format ascii 1.0",
        f"element vertex {len(keys)}",
        "property float x", "property float y", "property float z",
        "end_header",
    ]
    for kx, ky, kz in keys:
        lines.append(f"{(kx + 0.5) * d:.6f} {(ky + 0.5) * d:.6f} {(kz + 0.5) * d:.6f}")
    Path(path).write_text("\n".join(lines) + "\n")
