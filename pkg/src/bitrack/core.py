"""Domain types shared by the tracker, metrics, simulator and I/O layers.

Boxes are stored in center+size form everywhere inside the package; the
corner (left, top, width, height) form only appears at the file boundary.
"""

import math
from dataclasses import dataclass, field

Vector = tuple[float, float]

STATUS_ACTIVE = "active"
STATUS_REACTIVATED = "reactivated"
STATUS_NEW = "new"

MODE_BIDIRECTIONAL = "bidirectional"
MODE_SINGLE = "single_direction"

FALLBACK_NEGATED_BACKWARD = "negated_backward"
FALLBACK_ZERO = "zero"


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box given by center (cx, cy) and positive size (w, h), in px."""

    cx: float
    cy: float
    w: float
    h: float

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0):
            raise ValueError(f"box size must be positive, got w={self.w}, h={self.h}")

    def area(self) -> float:
        return self.w * self.h

    @property
    def center(self) -> Vector:
        return (self.cx, self.cy)

    def to_ltwh(self) -> tuple[float, float, float, float]:
        return (self.cx - self.w / 2.0, self.cy - self.h / 2.0, self.w, self.h)

    @classmethod
    def from_ltwh(cls, left: float, top: float, w: float, h: float) -> "BoundingBox":
        return cls(left + w / 2.0, top + h / 2.0, w, h)


def area(box: BoundingBox) -> float:
    """Box area in px²."""
    return box.area()


@dataclass(frozen=True)
class Detection:
    """One observed object in one frame.

    backward_motion predicts the object's center in the previous frame;
    forward_motion predicts it in the next frame. forward_motion may be
    None when the detection source provides no forward vector, in which
    case the tracker applies its configured fallback.
    """

    box: BoundingBox
    confidence: float
    backward_motion: Vector = (0.0, 0.0)
    forward_motion: Vector | None = None

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")
        components = list(self.backward_motion)
        if self.forward_motion is not None:
            components += list(self.forward_motion)
        if not all(math.isfinite(c) for c in components):
            raise ValueError("motion components must be finite")


@dataclass
class Track:
    """A live identity: its box and confidence at the last matched frame.

    forward_motion holds the resolved forward vector of the last matched
    detection; it is frozen into a StrandedEntry if the track goes unmatched.
    """

    id: int
    box: BoundingBox
    last_matched_frame: int
    confidence: float
    forward_motion: Vector = (0.0, 0.0)


@dataclass
class StrandedEntry:
    """An occluded identity held for re-matching.

    center is the propagated position estimate, size the box frozen at
    strand time, life the number of frames left before removal.
    """

    id: int
    center: Vector
    size: Vector
    forward_motion: Vector
    life: int

    @property
    def box(self) -> BoundingBox:
        # lets a stranded entry stand in for a track when building distance matrices
        return BoundingBox(self.center[0], self.center[1], self.size[0], self.size[1])


@dataclass(frozen=True)
class FrameInput:
    """Detections of one frame. Frame indices fed to a tracker must increase by 1."""

    frame: int
    detections: tuple[Detection, ...]

    def __post_init__(self):
        if self.frame < 1:
            raise ValueError(f"frame index must be positive, got {self.frame}")
        object.__setattr__(self, "detections", tuple(self.detections))


@dataclass(frozen=True)
class TrackEntry:
    id: int
    box: BoundingBox
    confidence: float
    status: str


@dataclass(frozen=True)
class FrameOutput:
    """Tracker output for one frame; ids within one output are pairwise distinct."""

    frame: int
    entries: tuple[TrackEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))


@dataclass(frozen=True)
class TrackerConfig:
    conf_threshold: float = 0.4
    life_max: int = 20
    mode: str = MODE_BIDIRECTIONAL
    forward_fallback: str = FALLBACK_NEGATED_BACKWARD

    def __post_init__(self):
        if not 0.0 <= self.conf_threshold <= 1.0:
            raise ValueError(f"conf_threshold must be in [0, 1], got {self.conf_threshold}")
        if self.life_max < 1:
            raise ValueError(f"life_max must be >= 1, got {self.life_max}")
        if self.mode not in (MODE_BIDIRECTIONAL, MODE_SINGLE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.forward_fallback not in (FALLBACK_NEGATED_BACKWARD, FALLBACK_ZERO):
            raise ValueError(f"unknown forward_fallback {self.forward_fallback!r}")
