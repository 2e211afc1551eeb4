"""Deterministic synthetic scenario generator and occlusion masking.

Objects move at constant speed inside a rectangular arena, reflecting off
the walls. Every live object emits one exact detection per frame carrying
its true backward and forward motion vectors, which makes the generator an
oracle for the tracker: with no noise and no masking, every association is
a distance-zero match. Occlusion masking deletes detections in seeded
events of bounded duration, calibrated to hit a target fraction of the
ground-truth detection-frames; ground truth itself is never modified.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .assignment import hungarian
from .core import BoundingBox, Detection, FrameInput
from .metrics import Trajectory


@dataclass(frozen=True)
class ScenarioConfig:
    arena: tuple[float, float] = (1280.0, 960.0)
    n_objects: int = 20
    n_frames: int = 500
    speed_range: tuple[float, float] = (0.5, 2.0)
    box_size_range: tuple[float, float] = (24.0, 56.0)
    spawn_prob: float = 0.0
    despawn_prob: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_objects < 1 or self.n_frames < 1:
            raise ValueError("n_objects and n_frames must be positive")
        if self.speed_range[0] > self.speed_range[1] or self.speed_range[0] < 0:
            raise ValueError(f"bad speed_range {self.speed_range}")
        if self.box_size_range[0] > self.box_size_range[1] or self.box_size_range[0] <= 0:
            raise ValueError(f"bad box_size_range {self.box_size_range}")
        for p in (self.spawn_prob, self.despawn_prob):
            if not 0.0 <= p <= 1.0:
                raise ValueError("probabilities must be in [0, 1]")
        if self.box_size_range[1] > min(self.arena):
            raise ValueError("largest box must fit inside the arena")


@dataclass(frozen=True)
class NoiseConfig:
    center_jitter_sigma: float = 0.0
    motion_noise_sigma: float = 0.0
    confidence_range: tuple[float, float] = (1.0, 1.0)
    false_positive_rate: float = 0.0

    def __post_init__(self):
        if self.center_jitter_sigma < 0 or self.motion_noise_sigma < 0:
            raise ValueError("noise sigmas must be >= 0")
        lo, hi = self.confidence_range
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValueError(f"bad confidence_range {self.confidence_range}")
        if self.false_positive_rate < 0:
            raise ValueError("false_positive_rate must be >= 0")


@dataclass(frozen=True)
class OcclusionConfig:
    target_rate: float
    duration_range: tuple[int, int] = (1, 30)
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.target_rate <= 1.0:
            raise ValueError(f"target_rate must be in [0, 1], got {self.target_rate}")
        if self.duration_range[0] < 1 or self.duration_range[0] > self.duration_range[1]:
            raise ValueError(f"bad duration_range {self.duration_range}")


@dataclass
class _MovingObject:
    id: int
    pos: np.ndarray
    vel: np.ndarray
    w: float
    h: float


def _spawn(rng: np.random.Generator, cfg: ScenarioConfig, oid: int) -> _MovingObject:
    w = float(rng.uniform(*cfg.box_size_range))
    h = float(rng.uniform(*cfg.box_size_range))
    cx = float(rng.uniform(w / 2.0, cfg.arena[0] - w / 2.0))
    cy = float(rng.uniform(h / 2.0, cfg.arena[1] - h / 2.0))
    speed = float(rng.uniform(*cfg.speed_range))
    angle = float(rng.uniform(0.0, 2.0 * math.pi))
    vel = np.array([speed * math.cos(angle), speed * math.sin(angle)])
    return _MovingObject(oid, np.array([cx, cy]), vel, w, h)


def _advance(obj: _MovingObject, arena: tuple[float, float]) -> None:
    obj.pos = obj.pos + obj.vel
    for axis, (size, extent) in enumerate(((obj.w, arena[0]), (obj.h, arena[1]))):
        lo, hi = size / 2.0, extent - size / 2.0
        while obj.pos[axis] < lo or obj.pos[axis] > hi:
            if obj.pos[axis] < lo:
                obj.pos[axis] = 2.0 * lo - obj.pos[axis]
            else:
                obj.pos[axis] = 2.0 * hi - obj.pos[axis]
            obj.vel[axis] = -obj.vel[axis]


def generate(cfg: ScenarioConfig) -> tuple[dict[int, Trajectory], list[FrameInput]]:
    """Simulate a scenario; returns (ground truth trajectories, detection stream).

    Detections are exact: box equals the ground truth box, confidence 1.0,
    backward motion is minus the current velocity and forward motion plus it.
    Fully determined by the config seed.
    """
    rng = np.random.default_rng(cfg.seed)
    gt: dict[int, Trajectory] = {}
    stream: list[FrameInput] = []
    live: list[_MovingObject] = []
    next_id = 1

    for f in range(1, cfg.n_frames + 1):
        if f == 1:
            for _ in range(cfg.n_objects):
                live.append(_spawn(rng, cfg, next_id))
                next_id += 1
        else:
            for obj in live:
                _advance(obj, cfg.arena)
            if cfg.despawn_prob > 0.0:
                live = [obj for obj in live if rng.random() >= cfg.despawn_prob]
            if cfg.spawn_prob > 0.0 and rng.random() < cfg.spawn_prob:
                live.append(_spawn(rng, cfg, next_id))
                next_id += 1

        dets = []
        for obj in live:
            box = BoundingBox(float(obj.pos[0]), float(obj.pos[1]), obj.w, obj.h)
            gt.setdefault(obj.id, Trajectory(obj.id)).boxes[f] = box
            dets.append(
                Detection(
                    box=box,
                    confidence=1.0,
                    backward_motion=(-float(obj.vel[0]), -float(obj.vel[1])),
                    forward_motion=(float(obj.vel[0]), float(obj.vel[1])),
                )
            )
        stream.append(FrameInput(f, tuple(dets)))
    return gt, stream


def _expected_mask_fraction(q: float, mean_duration: float) -> float:
    # renewal process: geometric wait with success prob q, then one event
    if q <= 0.0:
        return 0.0
    return mean_duration / ((1.0 - q) / q + mean_duration)


def _bisect_start_prob(target: float, mean_duration: float) -> float:
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2.0
        if _expected_mask_fraction(mid, mean_duration) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def _correspondences(stream: list[FrameInput], gt: dict[int, Trajectory]) -> dict[int, list[tuple[int, int]]]:
    """Per object: ordered (frame, detection index) pairs it can be masked at."""
    by_object: dict[int, list[tuple[int, int]]] = {oid: [] for oid in sorted(gt)}
    gt_by_frame: dict[int, list[tuple[int, BoundingBox]]] = {}
    for oid in sorted(gt):
        for f, box in gt[oid].boxes.items():
            gt_by_frame.setdefault(f, []).append((oid, box))

    for frame_input in stream:
        gt_here = gt_by_frame.get(frame_input.frame)
        if not gt_here or not frame_input.detections:
            continue
        gt_centers = np.array([[b.cx, b.cy] for _, b in gt_here])
        det_centers = np.array([[d.box.cx, d.box.cy] for d in frame_input.detections])
        diff = gt_centers[:, None, :] - det_centers[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        # gate at the box diagonal so stray detections cannot steal a slot
        gates = np.array([b.w**2 + b.h**2 for _, b in gt_here])
        cost = np.where(d2 <= gates[:, None], d2, np.inf)
        for gi, di in hungarian(cost).pairs:
            by_object[gt_here[gi][0]].append((frame_input.frame, di))
    return by_object


def apply_occlusion(
    stream: list[FrameInput], gt: dict[int, Trajectory], cfg: OcclusionConfig
) -> list[FrameInput]:
    """Delete detections in per-object occlusion events of bounded duration.

    The event start probability is calibrated against the analytic expected
    mask fraction, then a seeded trim pass lands the realized masked count
    on round(target_rate * detection_frames). Ground truth is untouched.
    """
    if cfg.target_rate > 0.95:
        raise ValueError(f"target_rate {cfg.target_rate} too high to calibrate (max 0.95)")
    if cfg.target_rate == 0.0:
        return list(stream)

    rng = np.random.default_rng(cfg.seed)
    dmin, dmax = cfg.duration_range
    maskable = _correspondences(stream, gt)
    total = sum(len(v) for v in maskable.values())
    if total == 0:
        return list(stream)
    target_count = int(round(cfg.target_rate * total))
    if target_count == 0:
        return list(stream)

    # oversample a little so the trim pass always has enough candidates
    mean_d = (dmin + dmax) / 2.0
    oversample = min(0.98, max(cfg.target_rate * 1.2, cfg.target_rate + 0.02))
    q = _bisect_start_prob(oversample, mean_d)

    events: list[list[tuple[int, int]]] = []
    for oid in sorted(maskable):
        slots = maskable[oid]
        i = 0
        while i < len(slots):
            if rng.random() < q:
                d = int(rng.integers(dmin, dmax + 1))
                events.append(slots[i : i + d])
                i += d
            else:
                i += 1
    for _ in range(50):
        # rare: resample over the still-unmasked slots until enough candidates
        if sum(len(e) for e in events) >= target_count:
            break
        taken = {s for e in events for s in e}
        for oid in sorted(maskable):
            slots = [s for s in maskable[oid] if s not in taken]
            i = 0
            while i < len(slots):
                if rng.random() < q:
                    d = int(rng.integers(dmin, dmax + 1))
                    events.append(slots[i : i + d])
                    i += d
                else:
                    i += 1
    deficit = target_count - sum(len(e) for e in events)
    if deficit > 0:
        taken = {s for e in events for s in e}
        free = [s for oid in sorted(maskable) for s in maskable[oid] if s not in taken]
        order = rng.permutation(len(free))
        events.extend([free[int(k)]] for k in order[:deficit])

    masked: set[tuple[int, int]] = set()
    for k in rng.permutation(len(events)):
        event = events[int(k)]
        room = target_count - len(masked)
        if room <= 0:
            break
        masked.update(event[:room])

    out = []
    for frame_input in stream:
        drop = {di for (f, di) in masked if f == frame_input.frame}
        if not drop:
            out.append(frame_input)
        else:
            kept = tuple(d for i, d in enumerate(frame_input.detections) if i not in drop)
            out.append(FrameInput(frame_input.frame, kept))
    return out


def perturb(stream: list[FrameInput], cfg: NoiseConfig, seed: int) -> list[FrameInput]:
    """Detector-style corruption: center jitter, motion-vector noise,
    confidence resampling and injected false positives. Deterministic
    given the seed; with a zero false-positive rate the per-frame
    detection count is preserved."""
    rng = np.random.default_rng(seed)

    all_dets = [d for fi in stream for d in fi.detections]
    if all_dets:
        cxs = [d.box.cx for d in all_dets]
        cys = [d.box.cy for d in all_dets]
        ws = [d.box.w for d in all_dets]
        hs = [d.box.h for d in all_dets]
        envelope = (min(cxs), max(cxs), min(cys), max(cys), min(ws), max(ws), min(hs), max(hs))
    else:
        envelope = (0.0, 1.0, 0.0, 1.0, 1.0, 2.0, 1.0, 2.0)

    lo_conf, hi_conf = cfg.confidence_range
    out = []
    for frame_input in stream:
        dets = []
        for d in frame_input.detections:
            jx, jy = rng.normal(0.0, cfg.center_jitter_sigma, size=2)
            bx, by = rng.normal(0.0, cfg.motion_noise_sigma, size=2)
            backward = (d.backward_motion[0] + bx, d.backward_motion[1] + by)
            if d.forward_motion is None:
                forward = None
            else:
                fx, fy = rng.normal(0.0, cfg.motion_noise_sigma, size=2)
                forward = (d.forward_motion[0] + fx, d.forward_motion[1] + fy)
            dets.append(
                Detection(
                    box=BoundingBox(d.box.cx + jx, d.box.cy + jy, d.box.w, d.box.h),
                    confidence=float(rng.uniform(lo_conf, hi_conf)),
                    backward_motion=backward,
                    forward_motion=forward,
                )
            )
        n_fp = int(cfg.false_positive_rate)
        if rng.random() < cfg.false_positive_rate - n_fp:
            n_fp += 1
        for _ in range(n_fp):
            x0, x1, y0, y1, w0, w1, h0, h1 = envelope
            dets.append(
                Detection(
                    box=BoundingBox(
                        float(rng.uniform(x0, x1)) if x1 > x0 else x0,
                        float(rng.uniform(y0, y1)) if y1 > y0 else y0,
                        float(rng.uniform(w0, w1)) if w1 > w0 else w0,
                        float(rng.uniform(h0, h1)) if h1 > h0 else h0,
                    ),
                    confidence=float(rng.uniform(lo_conf, hi_conf)),
                    backward_motion=(0.0, 0.0),
                    forward_motion=(0.0, 0.0),
                )
            )
        out.append(FrameInput(frame_input.frame, tuple(dets)))
    return out
