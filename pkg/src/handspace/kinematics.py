"""Kinematic chains for the five-finger hand model.

Chains are described row by row in the modified DH convention: each row
applies RotX(alpha_prev) . TransX(a_prev) . RotZ(theta) . TransZ(d), where
theta is either a fixed angle or a joint variable plus a constant offset.
All lengths are normalized to a hand length of 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

DIGITS = ("thumb", "index", "middle", "ring", "little")


def _snap(v: float) -> float:
    # cos/sin of right angles carry ~1e-16 dirt; snapping keeps straight
    # poses exactly on coordinate planes so voxel assignment is stable
    if abs(v) < 1e-12:
        return 0.0
    if abs(v - 1.0) < 1e-12:
        return 1.0
    if abs(v + 1.0) < 1e-12:
        return -1.0
    return v


def rot_x(a: float) -> np.ndarray:
    c, s = _snap(math.cos(a)), _snap(math.sin(a))
    return np.array([[1.0, 0.0, 0.0, 0.0],
                     [0.0, c, -s, 0.0],
                     [0.0, s, c, 0.0],
                     [0.0, 0.0, 0.0, 1.0]])


def rot_z(t: float) -> np.ndarray:
    c, s = _snap(math.cos(t)), _snap(math.sin(t))
    return np.array([[c, -s, 0.0, 0.0],
                     [s, c, 0.0, 0.0],
                     [0.0, 0.0, 1.0, 0.0],
                     [0.0, 0.0, 0.0, 1.0]])


def trans_x(a: float) -> np.ndarray:
    m = np.eye(4)
    m[0, 3] = a
    return m


def trans_z(d: float) -> np.ndarray:
    m = np.eye(4)
    m[2, 3] = d
    return m


@dataclass(frozen=True)
class DHRow:
    """One modified-DH row.

    ``joint`` is None for a fixed row (theta is then the constant angle),
    or an index into the chain's joint vector (theta becomes a constant
    offset added to that joint value).
    """

    alpha_prev: float
    a_prev: float
    d: float
    joint: Optional[int] = None
    theta: float = 0.0

    def __post_init__(self):
        for name in ("alpha_prev", "a_prev", "d", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.a_prev < 0 or self.d < 0:
            raise ValueError("link lengths must be non-negative in this model")

    @property
    def is_fixed(self) -> bool:
        return self.joint is None


@dataclass(frozen=True)
class KinematicChain:
    """Ordered DH rows for one digit, ending in a fixed tool-tip row."""

    label: str
    rows: tuple[DHRow, ...]

    def __post_init__(self):
        if not self.rows:
            raise ValueError("chain needs at least one row")
        last = self.rows[-1]
        if not (last.is_fixed and last.theta == 0.0):
            raise ValueError("last row must be fixed with zero theta")
        joints = [r.joint for r in self.rows if not r.is_fixed]
        if joints != list(range(len(joints))):
            raise ValueError("joint indices must be 0..dof-1 in chain order")

    @property
    def dof(self) -> int:
        return sum(1 for r in self.rows if not r.is_fixed)


def dh_transform(row: DHRow, joint_values: Sequence[float]) -> np.ndarray:
    """4x4 transform of a single row for the given joint vector."""
    theta = row.theta
    if not row.is_fixed:
        theta = theta + joint_values[row.joint]
    return rot_x(row.alpha_prev) @ trans_x(row.a_prev) @ rot_z(theta) @ trans_z(row.d)


def chain_transform(chain: KinematicChain, q: Sequence[float]) -> np.ndarray:
    """Product of all row transforms, base frame to tool tip."""
    if len(q) != chain.dof:
        raise ValueError(f"{chain.label}: expected {chain.dof} joint values, got {len(q)}")
    t = np.eye(4)
    for row in chain.rows:
        t = t @ dh_transform(row, q)
    return t


def chain_fk(chain: KinematicChain, q: Sequence[float]) -> np.ndarray:
    """Fingertip position in the base frame for joint vector q."""
    return chain_transform(chain, q)[:3, 3]


@dataclass(frozen=True)
class HandParams:
    """Normalized link lengths and spacings (hand length = 1).

    ``l2d`` holds the phalanx lengths of the reduced two-flexion finger.
    The defaults drop the distal joint and merge the two distal phalanges,
    preserving total finger length; both entries are configurable.
    """

    hl: float = 1.0
    hw: float = 0.54
    a_w: float = 0.18
    d_a: float = 0.46
    l3d: tuple[float, float, float] = (0.18, 0.18, 0.18)
    l2d: tuple[float, float] = (0.18, 0.36)
    lt: tuple[float, float, float, float] = (0.10, 0.20, 0.20, 0.20)

    def validate(self) -> None:
        tol = 1e-9
        if abs(self.hw - 0.54 * self.hl) > tol:
            raise ValueError("hw must equal 0.54*hl")
        if abs(self.hw - 3.0 * self.a_w) > tol:
            raise ValueError("hw must equal 3*a_w")
        if abs(self.d_a + sum(self.l3d) - self.hl) > tol:
            raise ValueError("d_a + three-flexion phalanges must equal hl")

    def to_dict(self) -> dict:
        return {
            "hl": self.hl, "hw": self.hw, "a_w": self.a_w, "d_a": self.d_a,
            "l3d": list(self.l3d), "l2d": list(self.l2d), "lt": list(self.lt),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HandParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown hand parameter keys: {sorted(unknown)}")
        kwargs = dict(data)
        for key in ("l3d", "l2d", "lt"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> "HandParams":
        with open(path) as fh:
            params = cls.from_dict(json.load(fh))
        params.validate()
        return params


def thumb_chain(p: HandParams) -> KinematicChain:
    """Five-joint thumb anchored at the hand origin.

    The base axis is tilted by -pi/3 about x. The offset between the two
    CMC joints runs along the first joint axis, so the second joint stays
    on that axis while the first joint spins.
    """
    rows = (
        DHRow(-math.pi / 3, 0.0, p.lt[0], joint=0),
        DHRow(-math.pi / 2, 0.0, 0.0, joint=1),
        DHRow(math.pi / 2, p.lt[1], 0.0, joint=2),
        DHRow(-math.pi / 2, 0.0, 0.0, joint=3),
        DHRow(0.0, p.lt[2], 0.0, joint=4),
        DHRow(0.0, p.lt[3], 0.0),
    )
    return KinematicChain("thumb", rows)


def finger_chain(label: str, lateral_offset: float, p: HandParams,
                 flexion_dof: int = 3) -> KinematicChain:
    """Four-joint finger (abduction + 3 flexion) without palm motion.

    ``lateral_offset`` is the base placement along z, a multiple of a_w.
    """
    links = p.l3d if flexion_dof == 3 else p.l2d
    rows = [
        DHRow(0.0, 0.0, lateral_offset, theta=math.pi / 2),
        DHRow(math.pi / 2, p.d_a, 0.0, joint=0),
        DHRow(-math.pi / 2, 0.0, 0.0, joint=1),
    ]
    for j, link in enumerate(links[:-1]):
        rows.append(DHRow(0.0, link, 0.0, joint=2 + j))
    rows.append(DHRow(0.0, links[-1], 0.0))
    return KinematicChain(label, tuple(rows))


def palm_finger_chain(label: str, palm_links: Sequence[float], final_link: float,
                      p: HandParams, flexion_dof: int = 3) -> KinematicChain:
    """Finger whose base rides on one or two serial palm joints.

    ``palm_links`` gives the link length before each palm joint in order;
    ``final_link`` closes the lateral run to the finger base, where the
    palm-depth offset d_a is applied before the finger joints.
    """
    rows = [DHRow(-math.pi / 2, 0.0, 0.0, theta=-math.pi / 2)]
    j = 0
    for link in palm_links:
        rows.append(DHRow(0.0, link, 0.0, joint=j))
        j += 1
    rows.append(DHRow(0.0, final_link, p.d_a))
    rows.append(DHRow(-math.pi / 2, 0.0, 0.0, joint=j, theta=-math.pi / 2))
    rows.append(DHRow(-math.pi / 2, 0.0, 0.0, joint=j + 1))
    j += 2
    links = p.l3d if flexion_dof == 3 else p.l2d
    for link in links[:-1]:
        rows.append(DHRow(0.0, link, 0.0, joint=j))
        j += 1
    rows.append(DHRow(0.0, links[-1], 0.0))
    return KinematicChain(label, tuple(rows))
