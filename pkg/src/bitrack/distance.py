"""Gated squared-distance matrix between previous-frame tracks and detections.

Each detection's center is first pushed back to the previous frame by its
backward motion vector; the matrix entry is the squared euclidean distance
(in px²) between that predicted center and the track center. Entries larger
than the smaller of the two box areas are forbidden and set to +inf, which
forbids implausible matches and keeps the comparison in px² on both sides.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Detection, Vector

INFEASIBLE = np.inf


@dataclass(frozen=True)
class DistanceMatrix:
    """float64 grid, rows = detections, cols = tracks; +inf marks forbidden pairs."""

    values: np.ndarray

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.values)


def predict_previous_center(det: Detection) -> Vector:
    """Center the detection is predicted to have occupied in the previous frame."""
    return (det.box.cx + det.backward_motion[0], det.box.cy + det.backward_motion[1])


def distance_matrix(tracks: Sequence, detections: Sequence[Detection]) -> DistanceMatrix:
    """Build the gated matrix of squared center distances.

    `tracks` may be any sequence of objects exposing a `.box` BoundingBox
    (live tracks, or stranded entries standing in via their propagated
    center and frozen size). Either sequence may be empty.
    """
    m, n = len(detections), len(tracks)
    if m == 0 or n == 0:
        return DistanceMatrix(np.zeros((m, n), dtype=np.float64))

    pred = np.array([predict_previous_center(d) for d in detections], dtype=np.float64)
    track_centers = np.array([[t.box.cx, t.box.cy] for t in tracks], dtype=np.float64)
    diff = pred[:, None, :] - track_centers[None, :, :]
    values = np.einsum("ijk,ijk->ij", diff, diff)

    det_areas = np.array([d.box.area() for d in detections], dtype=np.float64)
    track_areas = np.array([t.box.area() for t in tracks], dtype=np.float64)
    gate = np.minimum(track_areas[None, :], det_areas[:, None])
    values[values > gate] = INFEASIBLE
    return DistanceMatrix(values)
