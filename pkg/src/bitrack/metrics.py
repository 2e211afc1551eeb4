"""Tracking evaluation: per-frame CLEAR counting (FP/FN/IDS/FM), the derived
accuracy score, the identification F1 over a globally optimal trajectory
pairing, and mostly-tracked / mostly-lost fractions.

Correspondence between ground truth and hypotheses uses IoU with a 0.5
default threshold. Frame-level correspondences persist: a pair that still
overlaps enough is carried over before any re-matching, which keeps jitter
from inflating the switch count.
"""

from dataclasses import dataclass, field, asdict
from typing import Iterable, Mapping

import numpy as np

from .assignment import hungarian
from .core import BoundingBox, FrameOutput


@dataclass
class Trajectory:
    """Per-identity time series of boxes, keyed by frame index."""

    id: int
    boxes: dict[int, BoundingBox] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.boxes)


TrajectoryMap = Mapping[int, Trajectory]


def trajectories_from_outputs(outputs: Iterable[FrameOutput]) -> dict[int, Trajectory]:
    """Group tracker frame outputs into per-id trajectories."""
    trajectories: dict[int, Trajectory] = {}
    for out in outputs:
        for entry in out.entries:
            traj = trajectories.setdefault(entry.id, Trajectory(entry.id))
            traj.boxes[out.frame] = entry.box
    return trajectories


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two axis-aligned boxes, in [0, 1]."""
    ax1, ay1 = a.cx - a.w / 2.0, a.cy - a.h / 2.0
    ax2, ay2 = a.cx + a.w / 2.0, a.cy + a.h / 2.0
    bx1, by1 = b.cx - b.w / 2.0, b.cy - b.h / 2.0
    bx2, by2 = b.cx + b.w / 2.0, b.cy + b.h / 2.0
    iw = min(ax2, bx2) - max(ax1, bx1)
    ih = min(ay2, by2) - max(ay1, by1)
    if iw <= 0.0 or ih <= 0.0:
        return 0.0
    inter = iw * ih
    return inter / (a.area() + b.area() - inter)


def _iou_matrix(gt_boxes: list[BoundingBox], pred_boxes: list[BoundingBox]) -> np.ndarray:
    g = np.array([[b.cx, b.cy, b.w, b.h] for b in gt_boxes], dtype=np.float64)
    p = np.array([[b.cx, b.cy, b.w, b.h] for b in pred_boxes], dtype=np.float64)
    g1 = g[:, :2] - g[:, 2:] / 2.0
    g2 = g[:, :2] + g[:, 2:] / 2.0
    p1 = p[:, :2] - p[:, 2:] / 2.0
    p2 = p[:, :2] + p[:, 2:] / 2.0
    iw = np.minimum(g2[:, None, 0], p2[None, :, 0]) - np.maximum(g1[:, None, 0], p1[None, :, 0])
    ih = np.minimum(g2[:, None, 1], p2[None, :, 1]) - np.maximum(g1[:, None, 1], p1[None, :, 1])
    inter = np.clip(iw, 0.0, None) * np.clip(ih, 0.0, None)
    areas_g = g[:, 2] * g[:, 3]
    areas_p = p[:, 2] * p[:, 3]
    return inter / (areas_g[:, None] + areas_p[None, :] - inter)


@dataclass
class ClearCounts:
    """Per-frame correspondence counts plus global fragmentation."""

    frames: list[int] = field(default_factory=list)
    fp: dict[int, int] = field(default_factory=dict)
    fn: dict[int, int] = field(default_factory=dict)
    ids: dict[int, int] = field(default_factory=dict)
    gt: dict[int, int] = field(default_factory=dict)
    fm: int = 0
    matched_per_gt: dict[int, int] = field(default_factory=dict)

    @property
    def total_fp(self) -> int:
        return sum(self.fp.values())

    @property
    def total_fn(self) -> int:
        return sum(self.fn.values())

    @property
    def total_ids(self) -> int:
        return sum(self.ids.values())

    @property
    def total_gt(self) -> int:
        return sum(self.gt.values())


def _frame_index(trajectories: TrajectoryMap) -> dict[int, list[tuple[int, BoundingBox]]]:
    by_frame: dict[int, list[tuple[int, BoundingBox]]] = {}
    for tid in sorted(trajectories):
        for f, box in trajectories[tid].boxes.items():
            by_frame.setdefault(f, []).append((tid, box))
    return by_frame


def clear_match(gt: TrajectoryMap, pred: TrajectoryMap, iou_threshold: float = 0.5) -> ClearCounts:
    """Frame-by-frame CLEAR correspondence and event counting.

    Per frame: carry over still-valid correspondences from the previous
    frame, match the rest optimally on 1 - IoU (pairs below the threshold
    rejected), then count unmatched ground truth as misses, unmatched
    hypotheses as false positives, correspondent changes as switches, and
    matched->unmatched->matched transitions as one fragmentation per gap.
    """
    if not 0.0 < iou_threshold <= 1.0:
        raise ValueError(f"iou_threshold must be in (0, 1], got {iou_threshold}")
    gt_frames = _frame_index(gt)
    pred_frames = _frame_index(pred)
    all_frames = sorted(set(gt_frames) | set(pred_frames))

    counts = ClearCounts()
    counts.matched_per_gt = {tid: 0 for tid in gt}
    last_corr: dict[int, int] = {}       # gt id -> last matched pred id (persists across gaps)
    prev_pairs: dict[int, int] = {}      # correspondences active in the previous frame
    in_gap: dict[int, bool] = {tid: False for tid in gt}

    for f in all_frames:
        gt_here = gt_frames.get(f, [])
        pred_here = pred_frames.get(f, [])
        gt_ids = [tid for tid, _ in gt_here]
        gt_boxes = [box for _, box in gt_here]
        pred_ids = [tid for tid, _ in pred_here]
        pred_boxes = [box for _, box in pred_here]
        pred_pos = {tid: k for k, tid in enumerate(pred_ids)}

        matched_gt: dict[int, int] = {}
        used_pred: set[int] = set()

        overlaps = None
        if gt_boxes and pred_boxes:
            overlaps = _iou_matrix(gt_boxes, pred_boxes)
            # carry over previous-frame pairs that still overlap enough
            for gi, gid in enumerate(gt_ids):
                pid = prev_pairs.get(gid)
                if pid is None or pid not in pred_pos or pid in used_pred:
                    continue
                if overlaps[gi, pred_pos[pid]] >= iou_threshold:
                    matched_gt[gid] = pid
                    used_pred.add(pid)
            # optimal matching for the remainder
            free_g = [gi for gi, gid in enumerate(gt_ids) if gid not in matched_gt]
            free_p = [pi for pi, pid in enumerate(pred_ids) if pid not in used_pred]
            if free_g and free_p:
                sub = overlaps[np.ix_(free_g, free_p)]
                cost = np.where(sub >= iou_threshold, 1.0 - sub, np.inf)
                for r, c in hungarian(cost).pairs:
                    gid = gt_ids[free_g[r]]
                    pid = pred_ids[free_p[c]]
                    matched_gt[gid] = pid
                    used_pred.add(pid)

        ids_t = 0
        for gid, pid in matched_gt.items():
            prev = last_corr.get(gid)
            if prev is not None and prev != pid:
                ids_t += 1
            last_corr[gid] = pid
            counts.matched_per_gt[gid] = counts.matched_per_gt.get(gid, 0) + 1
            if in_gap.get(gid, False):
                counts.fm += 1
            in_gap[gid] = False
        for gid in gt_ids:
            if gid not in matched_gt and gid in last_corr:
                in_gap[gid] = True

        counts.frames.append(f)
        counts.gt[f] = len(gt_ids)
        counts.fn[f] = len(gt_ids) - len(matched_gt)
        counts.fp[f] = len(pred_ids) - len(matched_gt)
        counts.ids[f] = ids_t
        prev_pairs = matched_gt

    return counts


def mota(counts: ClearCounts) -> float:
    """1 minus the normalized sum of misses, false positives and switches."""
    total_gt = counts.total_gt
    if total_gt == 0:
        raise ValueError("cannot compute tracking accuracy with zero ground truth boxes")
    return 1.0 - (counts.total_fn + counts.total_fp + counts.total_ids) / total_gt


def _idf1_counts(gt: TrajectoryMap, pred: TrajectoryMap, iou_threshold: float) -> tuple[int, int, int]:
    """(IDTP, IDFP, IDFN) under the best global one-to-one trajectory pairing."""
    gt_total = sum(len(t) for t in gt.values())
    pred_total = sum(len(t) for t in pred.values())
    if gt_total == 0 or pred_total == 0:
        return 0, pred_total, gt_total

    gt_ids = sorted(gt)
    pred_ids = sorted(pred)
    gt_pos = {tid: k for k, tid in enumerate(gt_ids)}
    pred_pos = {tid: k for k, tid in enumerate(pred_ids)}
    overlap = np.zeros((len(gt_ids), len(pred_ids)), dtype=np.float64)

    # accumulate per-pair counts of frames with enough overlap, frame by frame
    gt_frames = _frame_index(gt)
    pred_frames = _frame_index(pred)
    for f in sorted(set(gt_frames) & set(pred_frames)):
        gt_here = gt_frames[f]
        pred_here = pred_frames[f]
        m = _iou_matrix([b for _, b in gt_here], [b for _, b in pred_here])
        good = m >= iou_threshold
        for gi, (gid, _) in enumerate(gt_here):
            row = good[gi]
            if row.any():
                gr = gt_pos[gid]
                for pi in np.nonzero(row)[0]:
                    overlap[gr, pred_pos[pred_here[pi][0]]] += 1.0

    assign = hungarian(-overlap)
    idtp = int(round(sum(overlap[r, c] for r, c in assign.pairs)))
    return idtp, pred_total - idtp, gt_total - idtp


def idf1(gt: TrajectoryMap, pred: TrajectoryMap, iou_threshold: float = 0.5) -> float:
    """Identification F1 score over the optimal trajectory-level pairing.

    Defined as 1.0 when both sides are empty and 0.0 when exactly one is.
    """
    if not gt and not pred:
        return 1.0
    if not gt or not pred:
        return 0.0
    idtp, idfp, idfn = _idf1_counts(gt, pred, iou_threshold)
    denom = 2 * idtp + idfp + idfn
    if denom == 0:
        return 1.0
    return 2.0 * idtp / denom


def mt_ml(gt: TrajectoryMap, counts: ClearCounts) -> tuple[float, float]:
    """Fractions of trajectories tracked >= 80% and < 20% of their length."""
    if not gt:
        raise ValueError("mt_ml requires at least one ground truth trajectory")
    n_mt = 0
    n_ml = 0
    for tid, traj in gt.items():
        frac = counts.matched_per_gt.get(tid, 0) / len(traj)
        if frac >= 0.8:
            n_mt += 1
        if frac < 0.2:
            n_ml += 1
    n = len(gt)
    return n_mt / n, n_ml / n


@dataclass(frozen=True)
class EvalReport:
    """Aggregate metrics plus the raw counts they were computed from."""

    mota: float
    idf1: float
    ids_ratio: float
    fm_ratio: float
    mt: float
    ml: float
    fp: int
    fn: int
    ids: int
    fm: int
    idtp: int
    idfp: int
    idfn: int
    gt_total: int
    n_trajectories: int
    n_mostly_tracked: int
    n_mostly_lost: int

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate(gt: TrajectoryMap, pred: TrajectoryMap, iou_threshold: float = 0.5) -> EvalReport:
    """Full evaluation of predicted trajectories against ground truth."""
    counts = clear_match(gt, pred, iou_threshold)
    total_gt = counts.total_gt
    score = mota(counts)
    idtp, idfp, idfn = _idf1_counts(gt, pred, iou_threshold)
    denom = 2 * idtp + idfp + idfn
    f1 = 1.0 if denom == 0 else 2.0 * idtp / denom
    mt, ml = mt_ml(gt, counts)
    n = len(gt)
    return EvalReport(
        mota=score,
        idf1=f1,
        ids_ratio=counts.total_ids / total_gt,
        fm_ratio=counts.fm / total_gt,
        mt=mt,
        ml=ml,
        fp=counts.total_fp,
        fn=counts.total_fn,
        ids=counts.total_ids,
        fm=counts.fm,
        idtp=idtp,
        idfp=idfp,
        idfn=idfn,
        gt_total=total_gt,
        n_trajectories=n,
        n_mostly_tracked=round(mt * n),
        n_mostly_lost=round(ml * n),
    )


def combine_reports(reports: Iterable[EvalReport]) -> EvalReport:
    """Micro-average: sum raw counts across sequences, then recompute ratios."""
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to combine")
    fp = sum(r.fp for r in reports)
    fn = sum(r.fn for r in reports)
    ids = sum(r.ids for r in reports)
    fm = sum(r.fm for r in reports)
    idtp = sum(r.idtp for r in reports)
    idfp = sum(r.idfp for r in reports)
    idfn = sum(r.idfn for r in reports)
    gt_total = sum(r.gt_total for r in reports)
    n_traj = sum(r.n_trajectories for r in reports)
    n_mt = sum(r.n_mostly_tracked for r in reports)
    n_ml = sum(r.n_mostly_lost for r in reports)
    if gt_total == 0:
        raise ValueError("combined reports cover zero ground truth boxes")
    denom = 2 * idtp + idfp + idfn
    return EvalReport(
        mota=1.0 - (fn + fp + ids) / gt_total,
        idf1=1.0 if denom == 0 else 2.0 * idtp / denom,
        ids_ratio=ids / gt_total,
        fm_ratio=fm / gt_total,
        mt=n_mt / n_traj if n_traj else 0.0,
        ml=n_ml / n_traj if n_traj else 0.0,
        fp=fp,
        fn=fn,
        ids=ids,
        fm=fm,
        idtp=idtp,
        idfp=idfp,
        idfn=idfn,
        gt_total=gt_total,
        n_trajectories=n_traj,
        n_mostly_tracked=n_mt,
        n_mostly_lost=n_ml,
    )
