"""The seven palm/finger DoF configurations and their joint grids.

Palm joints sit between adjacent fingers: ``ring_side`` between middle and
ring, ``little_side`` between ring and little. A case assigns a subset of
palm joints plus the flexion DoF count (2 or 3) of the ring and little
fingers. The index and middle fingers and the thumb are the same in every
case.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .kinematics import (
    DIGITS,
    HandParams,
    KinematicChain,
    finger_chain,
    palm_finger_chain,
    thumb_chain,
)
from .sampling import JointGrid, JointRange, PairCoupling

PALM_RING = "ring_side"
PALM_LITTLE = "little_side"

THUMB_LIMITS = (
    (0.0, math.pi / 2),
    (-math.pi / 2, 0.0),
    (-math.pi / 6, math.pi / 6),
    (-math.pi / 2, 0.0),
    (-math.pi / 2, 0.0),
)
FINGER_LIMITS = (
    (-math.pi / 12, math.pi / 12),   # abduction
    (-math.pi / 2, math.pi / 9),     # proximal flexion
    (-math.pi / 2, 0.0),
    (-math.pi / 2, 0.0),
)
PALM_RING_LIMIT = (0.0, math.pi / 9)
PALM_LITTLE_LIMIT = (0.0, math.pi / 6)
PALM_COUPLING_BOUND = 11.0 * math.pi / 45.0

# case id -> (palm joints, ring flexion DoF, little flexion DoF)
_CASE_TABLE: dict[int, tuple[frozenset[str], int, int]] = {
    1: (frozenset(), 3, 3),
    2: (frozenset({PALM_LITTLE}), 3, 3),
    3: (frozenset({PALM_RING}), 3, 3),
    4: (frozenset({PALM_RING, PALM_LITTLE}), 3, 3),
    5: (frozenset({PALM_LITTLE}), 3, 2),
    6: (frozenset({PALM_RING}), 2, 3),
    7: (frozenset({PALM_RING, PALM_LITTLE}), 2, 2),
}


@dataclass(frozen=True)
class CaseSpec:
    id: int
    palm_joints: frozenset[str]
    ring_flexion_dof: int
    little_flexion_dof: int

    def __post_init__(self):
        if self.palm_joints - {PALM_RING, PALM_LITTLE}:
            raise ValueError(f"unknown palm joint in {sorted(self.palm_joints)}")
        if self.ring_flexion_dof not in (2, 3) or self.little_flexion_dof not in (2, 3):
            raise ValueError("finger flexion DoF must be 2 or 3")

    @property
    def total_dof(self) -> int:
        return (5 + 4 + 4 + (1 + self.ring_flexion_dof)
                + (1 + self.little_flexion_dof) + len(self.palm_joints))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "palm_joints": sorted(self.palm_joints),
            "ring_flexion_dof": self.ring_flexion_dof,
            "little_flexion_dof": self.little_flexion_dof,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CaseSpec":
        return cls(
            id=int(data["id"]),
            palm_joints=frozenset(data["palm_joints"]),
            ring_flexion_dof=int(data["ring_flexion_dof"]),
            little_flexion_dof=int(data["little_flexion_dof"]),
        )


def case_spec(case_id: int) -> CaseSpec:
    if case_id not in _CASE_TABLE:
        raise ValueError(f"case id must be 1..7, got {case_id}")
    palm, ring_dof, little_dof = _CASE_TABLE[case_id]
    return CaseSpec(case_id, palm, ring_dof, little_dof)


def all_cases() -> list[CaseSpec]:
    return [case_spec(i) for i in sorted(_CASE_TABLE)]


def normalized_params() -> HandParams:
    params = HandParams()
    params.validate()
    return params


def write_case_catalog(path: str | Path) -> None:
    """Emit the built-in cases in the custom-case config schema."""
    payload = {"cases": [c.to_dict() for c in all_cases()]}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_case_catalog(path: str | Path) -> list[CaseSpec]:
    data = json.loads(Path(path).read_text())
    return [CaseSpec.from_dict(entry) for entry in data["cases"]]


# ---------------------------------------------------------------------------
# chains and grids per digit

def _ring_chain(case: CaseSpec, p: HandParams) -> KinematicChain:
    if PALM_RING in case.palm_joints:
        return palm_finger_chain("ring", [1.5 * p.a_w], 0.5 * p.a_w, p,
                                 flexion_dof=case.ring_flexion_dof)
    return finger_chain("ring", 2 * p.a_w, p, flexion_dof=case.ring_flexion_dof)


def _little_chain(case: CaseSpec, p: HandParams) -> KinematicChain:
    has_ring = PALM_RING in case.palm_joints
    has_little = PALM_LITTLE in case.palm_joints
    if has_ring and has_little:
        return palm_finger_chain("little", [1.5 * p.a_w, p.a_w], 0.5 * p.a_w, p,
                                 flexion_dof=case.little_flexion_dof)
    if has_ring:
        return palm_finger_chain("little", [1.5 * p.a_w], 1.5 * p.a_w, p,
                                 flexion_dof=case.little_flexion_dof)
    if has_little:
        return palm_finger_chain("little", [2.5 * p.a_w], 0.5 * p.a_w, p,
                                 flexion_dof=case.little_flexion_dof)
    return finger_chain("little", 3 * p.a_w, p, flexion_dof=case.little_flexion_dof)


def build_hand(case: CaseSpec, params: Optional[HandParams] = None) -> list[KinematicChain]:
    """Chains for (thumb, index, middle, ring, little) under one case."""
    p = params or normalized_params()
    return [
        thumb_chain(p),
        finger_chain("index", 0.0, p),
        finger_chain("middle", p.a_w, p),
        _ring_chain(case, p),
        _little_chain(case, p),
    ]


def _finger_ranges(flexion_dof: int, step: float) -> list[JointRange]:
    limits = FINGER_LIMITS if flexion_dof == 3 else FINGER_LIMITS[:-1]
    return [JointRange(lo, hi, step) for lo, hi in limits]


def joint_grid(case: CaseSpec, digit: str, step: float) -> JointGrid:
    """Sampling grid matching the digit's chain under this case."""
    if digit not in DIGITS:
        raise ValueError(f"unknown digit {digit!r}")
    if digit == "thumb":
        return JointGrid(tuple(JointRange(lo, hi, step) for lo, hi in THUMB_LIMITS))
    if digit in ("index", "middle"):
        return JointGrid(tuple(_finger_ranges(3, step)))

    flex = case.ring_flexion_dof if digit == "ring" else case.little_flexion_dof
    palm: list[JointRange] = []
    coupling = None
    if digit == "ring":
        if PALM_RING in case.palm_joints:
            palm = [JointRange(*PALM_RING_LIMIT, step)]
    else:
        has_ring = PALM_RING in case.palm_joints
        has_little = PALM_LITTLE in case.palm_joints
        if has_ring:
            palm.append(JointRange(*PALM_RING_LIMIT, step))
        if has_little:
            palm.append(JointRange(*PALM_LITTLE_LIMIT, step))
        if has_ring and has_little:
            coupling = PairCoupling(0, 1, PALM_COUPLING_BOUND)
    return JointGrid(tuple(palm + _finger_ranges(flex, step)), coupling)
