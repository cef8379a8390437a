"""Case runs, cross-case statistics, reference comparison, and file outputs."""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .cases import CaseSpec, build_hand, case_spec, joint_grid, normalized_params
from .kinematics import DIGITS, HandParams, KinematicChain
from .overlap import OverlapResult, VwrcStats, overlap, overlap_ratio, vwrc
from .sampling import JointGrid
from .voxelize import VoxelSet, workspace, write_csv, write_ply

FINGERS = ("index", "middle", "ring", "little")
DEFAULT_DELTA = 0.05
DEFAULT_STEP = math.pi / 60


@dataclass
class DigitResult:
    label: str
    voxels: VoxelSet
    axis_counts: tuple[int, ...]

    @property
    def volume(self) -> float:
        return self.voxels.volume()

    @property
    def samples(self) -> int:
        return self.voxels.sample_count


@dataclass
class PairResult:
    finger: str
    result: OverlapResult
    pct_of_finger: float
    pct_of_case1_finger: Optional[float]
    vwrc_thumb: Optional[VwrcStats]
    vwrc_finger: Optional[VwrcStats]

    @property
    def volume(self) -> float:
        return self.result.volume()


@dataclass
class CaseReport:
    case: CaseSpec
    delta: float
    step: float
    digits: dict[str, DigitResult]
    pairs: dict[str, PairResult]
    baseline_overlap_change_pct: dict[str, float] = field(default_factory=dict)
    duration_s: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "case": self.case.id,
            "total_dof": self.case.total_dof,
            "delta": self.delta,
            "step": self.step,
            "digits": {
                name: {
                    "volume": d.volume,
                    "voxels": len(d.voxels),
                    "samples": d.samples,
                    "axis_counts": list(d.axis_counts),
                }
                for name, d in self.digits.items()
            },
            "overlaps": {
                name: {
                    "volume": p.volume,
                    "voxels": len(p.result.keys),
                    "pct_of_finger": p.pct_of_finger,
                    "pct_of_case1_finger": p.pct_of_case1_finger,
                    "vwrc_thumb": _vwrc_dict(p.vwrc_thumb),
                    "vwrc_finger": _vwrc_dict(p.vwrc_finger),
                }
                for name, p in self.pairs.items()
            },
            "baseline_overlap_change_pct": dict(self.baseline_overlap_change_pct),
        }
        if include_timing:
            out["duration_s"] = self.duration_s
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing=include_timing),
                          indent=2, sort_keys=True) + "\n"


def _vwrc_dict(stats: Optional[VwrcStats]) -> Optional[dict]:
    if stats is None:
        return None
    return {"mean": stats.mean, "p10": stats.p10, "voxels": stats.voxels}


DigitCache = dict[tuple[KinematicChain, JointGrid, float], VoxelSet]


def _digit_workspaces(case: CaseSpec, delta: float, step: float,
                      params: HandParams, threads: int,
                      cache: DigitCache) -> dict[str, DigitResult]:
    chains = build_hand(case, params)
    grids = {c.label: joint_grid(case, c.label, step) for c in chains}
    todo = [(c, grids[c.label]) for c in chains
            if (c, grids[c.label], delta) not in cache]

    def job(item):
        chain, grid = item
        return workspace(chain, grid, delta)

    if threads > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for (chain, grid), vset in zip(todo, pool.map(job, todo)):
                cache[(chain, grid, delta)] = vset
    else:
        for chain, grid in todo:
            cache[(chain, grid, delta)] = job((chain, grid))

    return {
        c.label: DigitResult(c.label, cache[(c, grids[c.label], delta)],
                             grids[c.label].axis_counts())
        for c in chains
    }


def run_case(case_id: int, delta: float = DEFAULT_DELTA, step: float = DEFAULT_STEP,
             params: Optional[HandParams] = None, threads: int = 1,
             cache: Optional[DigitCache] = None,
             with_baseline: bool = True) -> CaseReport:
    """Full pipeline for one case: workspaces, overlaps, ratios, statistics.

    Case-1 finger volumes and overlaps serve as the cross-case baseline for
    the secondary ratio and the percent-change entries; digit workspaces are
    cached so the shared thumb, index, and middle are computed once.
    """
    t0 = time.perf_counter()
    params = params or normalized_params()
    cache = cache if cache is not None else {}
    case = case_spec(case_id)

    digits = _digit_workspaces(case, delta, step, params, threads, cache)

    baseline = None
    if with_baseline and case_id != 1:
        baseline = run_case(1, delta, step, params, threads, cache,
                            with_baseline=False)

    thumb = digits["thumb"].voxels
    pairs: dict[str, PairResult] = {}
    for finger in FINGERS:
        res = overlap(thumb, digits[finger].voxels, pair=("thumb", finger))
        vol = res.volume()
        base_pct = None
        if case_id == 1:
            base_pct = overlap_ratio(vol, digits[finger].volume)
        elif baseline is not None:
            base_pct = overlap_ratio(vol, baseline.digits[finger].volume)
        pairs[finger] = PairResult(
            finger=finger,
            result=res,
            pct_of_finger=overlap_ratio(vol, digits[finger].volume),
            pct_of_case1_finger=base_pct,
            vwrc_thumb=vwrc(res.thumb_counts) if res.keys else None,
            vwrc_finger=vwrc(res.finger_counts) if res.keys else None,
        )

    change: dict[str, float] = {}
    if baseline is not None:
        for finger in FINGERS:
            ref = baseline.pairs[finger].volume
            if ref > 0:
                change[finger] = 100.0 * (pairs[finger].volume - ref) / ref

    return CaseReport(case, delta, step, digits, pairs, change,
                      duration_s=time.perf_counter() - t0)


def run_all(delta: float = DEFAULT_DELTA, step: float = DEFAULT_STEP,
            params: Optional[HandParams] = None, threads: int = 1) -> dict[int, CaseReport]:
    """All seven cases with shared digit workspaces."""
    cache: DigitCache = {}
    return {
        cid: run_case(cid, delta, step, params, threads, cache)
        for cid in range(1, 8)
    }


# ---------------------------------------------------------------------------
# convergence study

def convergence_study(deltas: list[float], steps: list[float],
                      digits: tuple[str, ...] = ("thumb", "index", "little"),
                      case_id: int = 7,
                      params: Optional[HandParams] = None) -> dict:
    """Workspace volume for each digit over a (delta, step) grid.

    For each digit and voxel size, reports the coarsest step whose next
    refinement changes the volume by less than 3 percent. Steps are sorted
    coarse to fine internally.
    """
    from .voxelize import workspace_many

    params = params or normalized_params()
    case = case_spec(case_id)
    chains = {c.label: c for c in build_hand(case, params)}
    steps_sorted = sorted(steps, reverse=True)

    volumes: dict[str, dict[float, dict[float, float]]] = {}
    for digit in digits:
        per_delta: dict[float, dict[float, float]] = {d: {} for d in deltas}
        for step in steps_sorted:
            grid = joint_grid(case, digit, step)
            vsets = workspace_many(chains[digit], grid, deltas)
            for d, vset in zip(deltas, vsets):
                per_delta[d][step] = vset.volume()
        volumes[digit] = per_delta

    converged: dict[str, dict[float, Optional[float]]] = {}
    for digit in digits:
        converged[digit] = {}
        for d in deltas:
            flagged = None
            for coarse, fine in zip(steps_sorted, steps_sorted[1:]):
                v0, v1 = volumes[digit][d][coarse], volumes[digit][d][fine]
                if v0 > 0 and abs(v1 - v0) / v0 < 0.03:
                    flagged = coarse
                    break
            converged[digit][d] = flagged

    return {"volumes": volumes, "converged_step": converged}


# ---------------------------------------------------------------------------
# reference comparison

@dataclass(frozen=True)
class ReferenceEntry:
    case: int
    digit: str
    metric: str              # reachable_volume | overlap_volume
    expected: float
    tol_pct: float


@dataclass
class ReferenceTable:
    entries: list[ReferenceEntry]

    @classmethod
    def bundled(cls) -> "ReferenceTable":
        text = resources.files("handspace.data").joinpath("reference_values.json").read_text()
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_dict(cls, data: dict) -> "ReferenceTable":
        return cls([ReferenceEntry(**e) for e in data["entries"]])


@dataclass
class CompareRow:
    key: str
    expected: float
    actual: float
    rel_err_pct: float
    ok: bool


def compare(report: CaseReport, ref: ReferenceTable) -> list[CompareRow]:
    """Diff one case report against the reference entries for its case."""
    rows = []
    for entry in ref.entries:
        if entry.case != report.case.id:
            continue
        if entry.metric == "reachable_volume":
            actual = report.digits[entry.digit].volume
        elif entry.metric == "overlap_volume":
            actual = report.pairs[entry.digit].volume
        else:
            raise ValueError(f"unknown reference metric {entry.metric!r}")
        err = 100.0 * abs(actual - entry.expected) / abs(entry.expected)
        rows.append(CompareRow(
            key=f"case{entry.case}.{entry.digit}.{entry.metric}",
            expected=entry.expected,
            actual=actual,
            rel_err_pct=err,
            ok=err <= entry.tol_pct,
        ))
    return rows


# ---------------------------------------------------------------------------
# exports

def export_report(report: CaseReport, out_dir: str | Path,
                  formats: tuple[str, ...] = ("json",),
                  include_timing: bool = False) -> list[Path]:
    """Write the report and, optionally, voxel clouds; returns written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    tag = f"case{report.case.id}"
    if "json" in formats:
        path = out / f"{tag}_report.json"
        path.write_text(report.to_json(include_timing=include_timing))
        written.append(path)
    for fmt, writer in (("csv", write_csv), ("ply", write_ply)):
        if fmt not in formats:
            continue
        for name, digit in report.digits.items():
            path = out / f"{tag}_{name}.{fmt}"
            writer(digit.voxels, path)
            written.append(path)
        for name, pair in report.pairs.items():
            cloud = VoxelSet(report.delta,
                             {k: pair.result.finger_counts[k] for k in pair.result.keys})
            path = out / f"{tag}_overlap_{name}.{fmt}"
            writer(cloud, path)
            written.append(path)
    return written
