"""Two-stage greedy matching tracker with a stranded area.

The first match associates current detections (sorted by confidence) with
live tracks through the backward-motion distance matrix. Tracks that fail
to match are not dropped: they move into a stranded buffer where their
position keeps advancing along the forward motion vector frozen at strand
time and a per-entry life value counts down. Detections left over after
the first match get a second chance against that buffer, so an object
re-emerging from a short occlusion recovers its old id instead of minting
a new one. A single-direction mode (no stranded buffer) is provided as the
baseline for comparisons.
"""

from typing import Sequence

from .assignment import greedy_assign
from .core import (
    MODE_BIDIRECTIONAL,
    MODE_SINGLE,
    FALLBACK_ZERO,
    STATUS_ACTIVE,
    STATUS_NEW,
    STATUS_REACTIVATED,
    Detection,
    FrameInput,
    FrameOutput,
    StrandedEntry,
    Track,
    TrackEntry,
    TrackerConfig,
    Vector,
)
from .distance import distance_matrix


def first_match(
    tracks: Sequence[Track], sorted_detections: Sequence[Detection]
) -> tuple[list[tuple[int, int]], list[int], list[int]]:
    """Greedy association of confidence-sorted detections against live tracks.

    Returns (matches, unmatched_track_indices, unmatched_detection_indices)
    where matches are (detection_index, track_index) pairs. Each detection,
    in order, takes the nearest still-free track with a finite gated
    distance; distance ties break toward the lowest track index.
    """
    dm = distance_matrix(tracks, sorted_detections)
    assign = greedy_assign(dm, range(len(sorted_detections)))
    matched_dets = {r for r, _ in assign.pairs}
    matched_trks = {c for _, c in assign.pairs}
    unmatched_tracks = [j for j in range(len(tracks)) if j not in matched_trks]
    unmatched_dets = [i for i in range(len(sorted_detections)) if i not in matched_dets]
    return list(assign.pairs), unmatched_tracks, unmatched_dets


def second_match(
    unmatched_detections: Sequence[Detection], stranded: Sequence[StrandedEntry]
) -> tuple[list[tuple[int, int]], list[int], list[StrandedEntry]]:
    """Same greedy rule against the stranded buffer.

    Detections must still be in confidence-descending order. Returns
    (matches, still_unmatched_detection_indices, remaining_stranded) with
    matches as (detection_index, stranded_index) pairs; matched entries
    leave the buffer.
    """
    if not stranded or not unmatched_detections:
        return [], list(range(len(unmatched_detections))), list(stranded)
    dm = distance_matrix(stranded, unmatched_detections)
    assign = greedy_assign(dm, range(len(unmatched_detections)))
    matched_dets = {r for r, _ in assign.pairs}
    matched_entries = {c for _, c in assign.pairs}
    still_unmatched = [i for i in range(len(unmatched_detections)) if i not in matched_dets]
    remaining = [e for k, e in enumerate(stranded) if k not in matched_entries]
    return list(assign.pairs), still_unmatched, remaining


class Tracker:
    """Stateful per-sequence tracker; one instance per video sequence.

    Frame indices passed to step() must start at 1 and increase by 1.
    Ids are 1-based and monotonically increasing; an id is only ever
    re-issued to the same object, via recovery from the stranded buffer.
    """

    def __init__(self, config: TrackerConfig | None = None):
        self.config = config or TrackerConfig()
        self.tracks: list[Track] = []
        self.stranded: list[StrandedEntry] = []
        self.next_id = 1
        self.frame = 0

    def _resolve_forward(self, det: Detection) -> Vector:
        if det.forward_motion is not None:
            return det.forward_motion
        if self.config.forward_fallback == FALLBACK_ZERO:
            return (0.0, 0.0)
        return (-det.backward_motion[0], -det.backward_motion[1])

    def _new_track(self, det: Detection, frame: int) -> Track:
        track = Track(
            id=self.next_id,
            box=det.box,
            last_matched_frame=frame,
            confidence=det.confidence,
            forward_motion=self._resolve_forward(det),
        )
        self.next_id += 1
        return track

    def step(self, frame_input: FrameInput) -> FrameOutput:
        """Process one frame and return the surviving detections with ids."""
        if frame_input.frame != self.frame + 1:
            raise ValueError(
                f"expected frame {self.frame + 1}, got {frame_input.frame}; "
                "frames must be consecutive (the tracker does not interpolate)"
            )
        frame = frame_input.frame
        dets = [d for d in frame_input.detections if d.confidence >= self.config.conf_threshold]
        dets.sort(key=lambda d: d.confidence, reverse=True)  # stable: ties keep input order

        if self.config.mode == MODE_SINGLE:
            output = self._step_single(dets, frame)
        else:
            output = self._step_bidirectional(dets, frame)
        self.frame = frame
        return output

    def _apply_match(self, track: Track, det: Detection, frame: int) -> None:
        track.box = det.box
        track.confidence = det.confidence
        track.last_matched_frame = frame
        track.forward_motion = self._resolve_forward(det)

    def _step_bidirectional(self, dets: list[Detection], frame: int) -> FrameOutput:
        entries = []

        # first match: detections vs live tracks
        matches, unmatched_trk, unmatched_det = first_match(self.tracks, dets)
        for di, ti in matches:
            track = self.tracks[ti]
            self._apply_match(track, dets[di], frame)
            entries.append(TrackEntry(track.id, track.box, track.confidence, STATUS_ACTIVE))

        # second match: leftovers vs the stranded buffer
        rem_dets = [dets[i] for i in unmatched_det]
        s_matches, still_unmatched, remaining = second_match(rem_dets, self.stranded)
        revived = []
        for di, si in s_matches:
            det = rem_dets[di]
            entry = self.stranded[si]
            track = Track(
                id=entry.id,
                box=det.box,
                last_matched_frame=frame,
                confidence=det.confidence,
                forward_motion=self._resolve_forward(det),
            )
            revived.append(track)
            entries.append(TrackEntry(track.id, track.box, track.confidence, STATUS_REACTIVATED))

        # life decay and removal for entries that stayed stranded
        for entry in remaining:
            entry.life -= 1
        remaining = [e for e in remaining if e.life > 0]

        # unmatched tracks enter the stranded area before propagation,
        # so they too take one forward step this frame
        unmatched_set = set(unmatched_trk)
        survivors = [t for j, t in enumerate(self.tracks) if j not in unmatched_set]
        for j in unmatched_trk:
            track = self.tracks[j]
            remaining.append(
                StrandedEntry(
                    id=track.id,
                    center=(track.box.cx, track.box.cy),
                    size=(track.box.w, track.box.h),
                    forward_motion=track.forward_motion,
                    life=self.config.life_max,
                )
            )
        for entry in remaining:
            vx, vy = entry.forward_motion
            entry.center = (entry.center[0] + vx, entry.center[1] + vy)
        self.stranded = remaining

        # whatever failed both matches is a new object
        new_tracks = []
        for di in still_unmatched:
            track = self._new_track(rem_dets[di], frame)
            new_tracks.append(track)
            entries.append(TrackEntry(track.id, track.box, track.confidence, STATUS_NEW))

        self.tracks = survivors + revived + new_tracks
        return FrameOutput(frame, tuple(entries))

    def _step_single(self, dets: list[Detection], frame: int) -> FrameOutput:
        entries = []
        matches, unmatched_trk, unmatched_det = first_match(self.tracks, dets)
        for di, ti in matches:
            track = self.tracks[ti]
            self._apply_match(track, dets[di], frame)
            entries.append(TrackEntry(track.id, track.box, track.confidence, STATUS_ACTIVE))

        unmatched_set = set(unmatched_trk)
        survivors = [t for j, t in enumerate(self.tracks) if j not in unmatched_set]
        new_tracks = []
        for di in unmatched_det:
            track = self._new_track(dets[di], frame)
            new_tracks.append(track)
            entries.append(TrackEntry(track.id, track.box, track.confidence, STATUS_NEW))

        self.tracks = survivors + new_tracks
        return FrameOutput(frame, tuple(entries))


def track_sequence(stream: Sequence[FrameInput], config: TrackerConfig | None = None) -> list[FrameOutput]:
    """Run a fresh tracker over a whole detection stream."""
    tracker = Tracker(config)
    return [tracker.step(frame_input) for frame_input in stream]
