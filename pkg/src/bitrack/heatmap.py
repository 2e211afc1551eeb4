"""Gaussian center-heatmap labels: radius solving, rendering, peak decoding,
and a small binary file format for exchanging grids with other tools."""

import math
import struct
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter

from .core import BoundingBox, Vector

_MAGIC = b"BHM1"
_HEADER = struct.Struct("<4sIId")


@dataclass(frozen=True)
class Heatmap:
    """Grid of nonnegative scores; cell (row i, col j) samples px point
    (j * stride, i * stride)."""

    width: int
    height: int
    stride: float
    values: np.ndarray


def gaussian_radius(w: float, h: float, rate: float) -> float:
    """Radius at which a box shrunk inward along its diagonal keeps the
    given fraction of its area.

    Solves (wh/d²)·r² − d·r + wh(1 − rate) = 0 with d = √(w² + h²) and
    returns the smaller nonnegative root; the larger root exceeds the box
    dimensions and yields a negative shrunken side.
    """
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    if w <= 0 or h <= 0:
        raise ValueError("box dimensions must be positive")
    d = math.sqrt(w * w + h * h)
    a = w * h / (d * d)
    c = w * h * (1.0 - rate)
    disc = d * d - 4.0 * a * c
    return (d - math.sqrt(disc)) / (2.0 * a)


def render(
    objects: list[tuple[Vector, BoundingBox]],
    width: int,
    height: int,
    stride: float = 1.0,
    rate: float = 0.7,
    normalize: bool = False,
) -> Heatmap:
    """Splat one Gaussian per (center, box) pair; overlaps combine by max.

    Peak amplitude is 1/(2πr²) by default; normalize=True rescales every
    peak to 1. Centers must lie inside the grid extent [0, dim * stride).
    """
    values = np.zeros((height, width), dtype=np.float64)
    for (cx, cy), box in objects:
        if not (0.0 <= cx < width * stride and 0.0 <= cy < height * stride):
            raise ValueError(f"center ({cx}, {cy}) outside the grid extent")
        r = gaussian_radius(box.w, box.h, rate)
        r = max(r, stride / 2.0)  # degenerate radii would blow up the amplitude
        amp = 1.0 if normalize else 1.0 / (2.0 * math.pi * r * r)
        reach = 4.0 * r
        j0 = max(0, math.ceil((cx - reach) / stride))
        j1 = min(width - 1, math.floor((cx + reach) / stride))
        i0 = max(0, math.ceil((cy - reach) / stride))
        i1 = min(height - 1, math.floor((cy + reach) / stride))
        if j1 < j0 or i1 < i0:
            continue
        dx = np.arange(j0, j1 + 1) * stride - cx
        dy = np.arange(i0, i1 + 1) * stride - cy
        g = amp * np.exp(-(dx[None, :] ** 2 + dy[:, None] ** 2) / (2.0 * r * r))
        region = values[i0 : i1 + 1, j0 : j1 + 1]
        np.maximum(region, g, out=region)
    return Heatmap(width, height, stride, values)


def decode_peaks(hm: Heatmap, threshold: float, window: int = 3) -> list[tuple[Vector, float]]:
    """Extract local maxima above the threshold.

    A cell is a peak iff it equals the maximum over its window×window
    neighborhood and exceeds the threshold; on a plateau every attaining
    cell is reported. Results are (center px, score), score descending.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be a positive odd integer, got {window}")
    pooled = maximum_filter(hm.values, size=window, mode="constant", cval=-np.inf)
    mask = (hm.values == pooled) & (hm.values > threshold)
    rows, cols = np.nonzero(mask)
    peaks = [
        ((float(c) * hm.stride, float(r) * hm.stride), float(hm.values[r, c]))
        for r, c in zip(rows, cols)
    ]
    peaks.sort(key=lambda p: (-p[1], p[0][1], p[0][0]))
    return peaks


def save_heatmap(hm: Heatmap, path) -> None:
    """Write the grid as a flat little-endian binary with a small header."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, hm.width, hm.height, hm.stride))
        fh.write(np.ascontiguousarray(hm.values, dtype="<f8").tobytes())


def load_heatmap(path) -> Heatmap:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise ValueError(f"{path}: truncated heatmap header")
        magic, width, height, stride = _HEADER.unpack(header)
        if magic != _MAGIC:
            raise ValueError(f"{path}: not a heatmap file")
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != width * height:
        raise ValueError(f"{path}: expected {width * height} values, found {data.size}")
    return Heatmap(width, height, stride, data.reshape(height, width).copy())
