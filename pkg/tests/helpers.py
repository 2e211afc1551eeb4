"""Hand-built constant-velocity streams used as tracker oracles."""

from bitrack import BoundingBox, Detection, FrameInput, Trajectory


def linear_scenario(objects, n_frames):
    """Build (gt, stream) for objects moving at exact constant velocity.

    objects: list of (cx0, cy0, vx, vy, w, h); ids are 1-based in list order.
    No walls: positions are p0 + (frame - 1) * v, detections are exact with
    true backward/forward vectors.
    """
    gt = {}
    stream = []
    for f in range(1, n_frames + 1):
        k = f - 1
        dets = []
        for oid, (cx0, cy0, vx, vy, w, h) in enumerate(objects, start=1):
            box = BoundingBox(cx0 + k * vx, cy0 + k * vy, w, h)
            gt.setdefault(oid, Trajectory(oid)).boxes[f] = box
            dets.append(Detection(box, 1.0, (-vx, -vy), (vx, vy)))
        stream.append(FrameInput(f, tuple(dets)))
    return gt, stream


def mask_object(stream, gt, object_id, frames):
    """Delete the given object's detections in the given frames."""
    frames = set(frames)
    out = []
    for fi in stream:
        if fi.frame not in frames:
            out.append(fi)
            continue
        target = gt[object_id].boxes[fi.frame].center
        kept = tuple(d for d in fi.detections if d.box.center != target)
        out.append(FrameInput(fi.frame, kept))
    return out


def missing_runs(stream, gt):
    """Per object: lengths of maximal runs of frames whose detection is absent."""
    present = {fi.frame: {d.box.center for d in fi.detections} for fi in stream}
    runs = {}
    for oid, traj in gt.items():
        lengths = []
        current = 0
        for f in sorted(traj.boxes):
            if traj.boxes[f].center in present.get(f, set()):
                if current:
                    lengths.append(current)
                current = 0
            else:
                current += 1
        if current:
            lengths.append(current)
        runs[oid] = lengths
    return runs
