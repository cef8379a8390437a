"""Voxel workspace and thumb-opposability analysis for a five-finger hand."""

from .kinematics import (
    DIGITS,
    DHRow,
    HandParams,
    KinematicChain,
    chain_fk,
    chain_transform,
    dh_transform,
    finger_chain,
    palm_finger_chain,
    thumb_chain,
)
from .sampling import JointGrid, JointRange, PairCoupling, grid_samples, sample_axis
from .voxelize import (
    VoxelSet,
    accumulate,
    read_csv,
    volume,
    voxel_index,
    workspace,
    workspace_many,
    write_csv,
    write_ply,
)
from .overlap import EmptyOverlapError, OverlapResult, VwrcStats, overlap, overlap_ratio, vwrc
from .cases import (
    CaseSpec,
    all_cases,
    build_hand,
    case_spec,
    joint_grid,
    normalized_params,
    read_case_catalog,
    write_case_catalog,
)
from .report import (
    CaseReport,
    ReferenceTable,
    compare,
    convergence_study,
    export_report,
    run_all,
    run_case,
)

__version__ = "0.1.0"
