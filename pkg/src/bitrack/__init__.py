"""Occlusion-aware multi-object tracking via bi-directional motion matching,
with CLEAR-MOT evaluation, a deterministic scenario simulator, and Gaussian
center-heatmap utilities."""

from .core import (
    BoundingBox,
    Detection,
    FrameInput,
    FrameOutput,
    StrandedEntry,
    Track,
    TrackEntry,
    TrackerConfig,
    area,
)
from .distance import DistanceMatrix, distance_matrix, predict_previous_center
from .assignment import Assignment, greedy_assign, hungarian
from .tracker import Tracker, first_match, second_match, track_sequence
from .metrics import (
    ClearCounts,
    EvalReport,
    Trajectory,
    clear_match,
    combine_reports,
    evaluate,
    idf1,
    iou,
    mota,
    mt_ml,
    trajectories_from_outputs,
)
from .simulator import (
    NoiseConfig,
    OcclusionConfig,
    ScenarioConfig,
    apply_occlusion,
    generate,
    perturb,
)
from .heatmap import Heatmap, decode_peaks, gaussian_radius, load_heatmap, render, save_heatmap
from .sweep import SweepRow, run_sweep

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BoundingBox",
    "ClearCounts",
    "Detection",
    "DistanceMatrix",
    "EvalReport",
    "FrameInput",
    "FrameOutput",
    "Heatmap",
    "NoiseConfig",
    "OcclusionConfig",
    "ScenarioConfig",
    "StrandedEntry",
    "SweepRow",
    "Track",
    "TrackEntry",
    "Tracker",
    "TrackerConfig",
    "Trajectory",
    "apply_occlusion",
    "area",
    "clear_match",
    "combine_reports",
    "decode_peaks",
    "distance_matrix",
    "evaluate",
    "first_match",
    "gaussian_radius",
    "generate",
    "greedy_assign",
    "hungarian",
    "idf1",
    "iou",
    "load_heatmap",
    "mota",
    "mt_ml",
    "perturb",
    "predict_previous_center",
    "render",
    "run_sweep",
    "save_heatmap",
    "second_match",
    "track_sequence",
    "trajectories_from_outputs",
]
