"""MOTChallenge-style CSV files, the motion sidecar, flat key=value scenario
configs, and JSON report output.

Result/detection lines are
    frame,id,bb_left,bb_top,bb_width,bb_height,conf,x,y,z
with id = -1 on detection files and x,y,z unused (-1). Output formatting is
fixed (one decimal for box coordinates, three for confidence) so identical
runs produce identical bytes.
"""

import json
from dataclasses import dataclass

from .core import (
    FALLBACK_ZERO,
    BoundingBox,
    Detection,
    FrameInput,
    FrameOutput,
)
from .metrics import EvalReport, Trajectory
from .simulator import NoiseConfig, ScenarioConfig


@dataclass(frozen=True)
class MotLine:
    frame: int
    id: int
    bb_left: float
    bb_top: float
    bb_width: float
    bb_height: float
    conf: float
    x: float = -1.0
    y: float = -1.0
    z: float = -1.0


def _parse_line(line: str, lineno: int, path) -> MotLine:
    parts = line.split(",")
    if len(parts) < 7:
        raise ValueError(f"{path}:{lineno}: expected at least 7 comma-separated fields")
    try:
        frame = int(float(parts[0]))
        obj_id = int(float(parts[1]))
        left, top, w, h, conf = (float(v) for v in parts[2:7])
    except ValueError as exc:
        raise ValueError(f"{path}:{lineno}: malformed line: {exc}") from None
    if frame < 1:
        raise ValueError(f"{path}:{lineno}: frame index must be >= 1, got {frame}")
    if w <= 0 or h <= 0:
        raise ValueError(f"{path}:{lineno}: box size must be positive")
    return MotLine(frame, obj_id, left, top, w, h, conf)


def _read_lines(path) -> list[MotLine]:
    lines = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            lines.append(_parse_line(raw, lineno, path))
    return lines


def parse_mot(path, as_detections: bool | None = None, forward_fallback: str = FALLBACK_ZERO):
    """Load a MOT CSV file.

    Files whose lines all carry id = -1 are detection files and load as a
    dense list of FrameInput covering frames 1..max (detections keep their
    within-frame file order, with zero backward motion and the fallback
    forward vector); anything else loads as trajectories keyed by id.
    Frames may appear out of order in the file; they are sorted on load.
    `as_detections` overrides the autodetection.
    """
    lines = _read_lines(path)
    if as_detections is None:
        as_detections = bool(lines) and all(ln.id == -1 for ln in lines)

    if as_detections:
        by_frame: dict[int, list[MotLine]] = {}
        for ln in lines:
            by_frame.setdefault(ln.frame, []).append(ln)
        if not by_frame:
            return []
        forward = None if forward_fallback != FALLBACK_ZERO else (0.0, 0.0)
        stream = []
        for f in range(1, max(by_frame) + 1):
            dets = tuple(
                Detection(
                    box=BoundingBox.from_ltwh(ln.bb_left, ln.bb_top, ln.bb_width, ln.bb_height),
                    confidence=min(max(ln.conf, 0.0), 1.0),
                    backward_motion=(0.0, 0.0),
                    forward_motion=forward,
                )
                for ln in by_frame.get(f, [])
            )
            stream.append(FrameInput(f, dets))
        return stream

    trajectories: dict[int, Trajectory] = {}
    for ln in lines:
        traj = trajectories.setdefault(ln.id, Trajectory(ln.id))
        traj.boxes[ln.frame] = BoundingBox.from_ltwh(ln.bb_left, ln.bb_top, ln.bb_width, ln.bb_height)
    return trajectories


def parse_motion_sidecar(path) -> dict[tuple[int, int], tuple[tuple[float, float], tuple[float, float]]]:
    """Load "frame,det_index,bvx,bvy,fvx,fvy" rows; duplicates are an error."""
    vectors: dict[tuple[int, int], tuple[tuple[float, float], tuple[float, float]]] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            parts = raw.split(",")
            if len(parts) != 6:
                raise ValueError(f"{path}:{lineno}: expected 6 fields")
            try:
                frame = int(float(parts[0]))
                det_index = int(float(parts[1]))
                bvx, bvy, fvx, fvy = (float(v) for v in parts[2:])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: malformed line: {exc}") from None
            key = (frame, det_index)
            if key in vectors:
                raise ValueError(f"{path}:{lineno}: duplicate entry for frame {frame}, detection {det_index}")
            vectors[key] = ((bvx, bvy), (fvx, fvy))
    return vectors


def attach_motion(stream: list[FrameInput], vectors) -> list[FrameInput]:
    """Apply sidecar vectors to the referenced detections.

    A reference to a frame/index that does not exist in the stream raises.
    """
    by_frame = {fi.frame: fi for fi in stream}
    for frame, det_index in vectors:
        fi = by_frame.get(frame)
        if fi is None or not 0 <= det_index < len(fi.detections):
            raise ValueError(f"motion sidecar references nonexistent detection {det_index} in frame {frame}")
    out = []
    for fi in stream:
        dets = []
        for i, d in enumerate(fi.detections):
            vec = vectors.get((fi.frame, i))
            if vec is None:
                dets.append(d)
            else:
                dets.append(
                    Detection(
                        box=d.box,
                        confidence=d.confidence,
                        backward_motion=vec[0],
                        forward_motion=vec[1],
                    )
                )
        out.append(FrameInput(fi.frame, tuple(dets)))
    return out


def write_results(outputs: list[FrameOutput], path) -> None:
    """Write tracker outputs as MOT result lines, frames ascending and ids
    ascending within each frame."""
    with open(path, "w") as fh:
        for out in sorted(outputs, key=lambda o: o.frame):
            for entry in sorted(out.entries, key=lambda e: e.id):
                left, top, w, h = entry.box.to_ltwh()
                fh.write(
                    f"{out.frame},{entry.id},{left:.1f},{top:.1f},{w:.1f},{h:.1f},"
                    f"{entry.confidence:.3f},-1,-1,-1\n"
                )


def write_gt(trajectories: dict[int, Trajectory], path) -> None:
    """Write ground truth trajectories as MOT lines with confidence 1."""
    rows = []
    for tid in sorted(trajectories):
        for f, box in trajectories[tid].boxes.items():
            rows.append((f, tid, box))
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(path, "w") as fh:
        for f, tid, box in rows:
            left, top, w, h = box.to_ltwh()
            fh.write(f"{f},{tid},{left:.1f},{top:.1f},{w:.1f},{h:.1f},1.000,-1,-1,-1\n")


def write_detections(stream: list[FrameInput], path, motion_path=None) -> None:
    """Write a detection stream (id -1); optionally also the motion sidecar."""
    with open(path, "w") as fh:
        for fi in stream:
            for d in fi.detections:
                left, top, w, h = d.box.to_ltwh()
                fh.write(f"{fi.frame},-1,{left:.1f},{top:.1f},{w:.1f},{h:.1f},{d.confidence:.3f},-1,-1,-1\n")
    if motion_path is not None:
        with open(motion_path, "w") as fh:
            for fi in stream:
                for i, d in enumerate(fi.detections):
                    bv = d.backward_motion
                    fv = d.forward_motion if d.forward_motion is not None else (0.0, 0.0)
                    fh.write(f"{fi.frame},{i},{bv[0]:.6f},{bv[1]:.6f},{fv[0]:.6f},{fv[1]:.6f}\n")


def write_report_json(report: EvalReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


_SCENARIO_KEYS = {
    "arena_width", "arena_height", "n_objects", "n_frames", "speed_min", "speed_max",
    "box_size_min", "box_size_max", "spawn_prob", "despawn_prob", "seed",
}
_NOISE_KEYS = {
    "center_jitter_sigma", "motion_noise_sigma", "confidence_min", "confidence_max",
    "false_positive_rate",
}
_OCCLUSION_KEYS = {"duration_min", "duration_max"}


def parse_config_file(path) -> dict[str, float]:
    """Flat "key = value" scenario/noise/occlusion settings; '#' starts a comment."""
    values: dict[str, float] = {}
    known = _SCENARIO_KEYS | _NOISE_KEYS | _OCCLUSION_KEYS
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = float(value.strip())
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric value for {key!r}") from None
    return values


def scenario_from_config(values: dict[str, float], seed: int | None = None) -> ScenarioConfig:
    base = ScenarioConfig()
    return ScenarioConfig(
        arena=(values.get("arena_width", base.arena[0]), values.get("arena_height", base.arena[1])),
        n_objects=int(values.get("n_objects", base.n_objects)),
        n_frames=int(values.get("n_frames", base.n_frames)),
        speed_range=(values.get("speed_min", base.speed_range[0]), values.get("speed_max", base.speed_range[1])),
        box_size_range=(
            values.get("box_size_min", base.box_size_range[0]),
            values.get("box_size_max", base.box_size_range[1]),
        ),
        spawn_prob=values.get("spawn_prob", base.spawn_prob),
        despawn_prob=values.get("despawn_prob", base.despawn_prob),
        seed=int(values["seed"]) if seed is None and "seed" in values else (seed if seed is not None else base.seed),
    )


def noise_from_config(values: dict[str, float]) -> NoiseConfig:
    base = NoiseConfig()
    return NoiseConfig(
        center_jitter_sigma=values.get("center_jitter_sigma", base.center_jitter_sigma),
        motion_noise_sigma=values.get("motion_noise_sigma", base.motion_noise_sigma),
        confidence_range=(
            values.get("confidence_min", base.confidence_range[0]),
            values.get("confidence_max", base.confidence_range[1]),
        ),
        false_positive_rate=values.get("false_positive_rate", base.false_positive_rate),
    )


def durations_from_config(values: dict[str, float]) -> tuple[int, int]:
    return (int(values.get("duration_min", 1)), int(values.get("duration_max", 30)))
