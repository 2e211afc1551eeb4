import numpy as np
import pytest

from bitrack import (
    BoundingBox,
    Detection,
    FrameInput,
    NoiseConfig,
    OcclusionConfig,
    ScenarioConfig,
    StrandedEntry,
    Track,
    Tracker,
    TrackerConfig,
    apply_occlusion,
    first_match,
    generate,
    perturb,
    second_match,
    track_sequence,
)
from helpers import linear_scenario, mask_object


def det(cx, cy, conf=1.0, w=10.0, h=10.0, backward=(0.0, 0.0), forward=None):
    return Detection(BoundingBox(cx, cy, w, h), conf, backward, forward)


def test_create_starts_empty():
    tracker = Tracker()
    assert tracker.tracks == [] and tracker.stranded == []
    assert tracker.next_id == 1 and tracker.frame == 0


def test_create_keeps_life_setting():
    assert Tracker(TrackerConfig(life_max=20)).config.life_max == 20


def test_bootstrap_assigns_fresh_ids():
    tracker = Tracker()
    out = tracker.step(FrameInput(1, (det(10, 10), det(50, 50), det(90, 90))))
    assert sorted(e.id for e in out.entries) == [1, 2, 3]
    assert all(e.status == "new" for e in out.entries)


def test_low_confidence_detections_are_dropped():
    tracker = Tracker(TrackerConfig(conf_threshold=0.4))
    out = tracker.step(FrameInput(1, (det(10, 10, conf=0.39), det(50, 50, conf=0.4))))
    assert len(out.entries) == 1
    assert out.entries[0].box.cx == 50


def test_non_consecutive_frame_rejected():
    tracker = Tracker()
    tracker.step(FrameInput(1, ()))
    with pytest.raises(ValueError):
        tracker.step(FrameInput(3, ()))


def test_empty_frame_strands_all_tracks():
    tracker = Tracker()
    tracker.step(FrameInput(1, (det(10, 10), det(80, 80))))
    out = tracker.step(FrameInput(2, ()))
    assert out.entries == ()
    assert tracker.tracks == []
    assert sorted(e.id for e in tracker.stranded) == [1, 2]
    assert all(e.life == 20 for e in tracker.stranded)


def occluded_run(gap_frames, life_max=20, n_frames=60, occluded_id=1):
    """Single constant-velocity object, detection removed for a block of frames."""
    objects = [(100.0, 100.0, 2.0, 1.0, 12.0, 12.0), (400.0, 400.0, -1.0, 0.5, 12.0, 12.0)]
    gt, stream = linear_scenario(objects, n_frames)
    start = 10
    stream = mask_object(stream, gt, occluded_id, range(start, start + gap_frames))
    tracker = Tracker(TrackerConfig(life_max=life_max))
    id_by_frame = {}
    for fi in stream:
        out = tracker.step(fi)
        for entry in out.entries:
            target = gt[occluded_id].boxes.get(fi.frame)
            if target is not None and entry.box.center == target.center:
                id_by_frame[fi.frame] = (entry.id, entry.status)
    return id_by_frame, start, gap_frames


def test_short_occlusion_recovers_the_same_id():
    ids, start, gap = occluded_run(gap_frames=5)
    before = ids[start - 1]
    after = ids[start + gap]
    assert after[0] == before[0]
    assert after[1] == "reactivated"


def test_occlusion_longer_than_life_gets_a_fresh_id():
    ids, start, gap = occluded_run(gap_frames=25, life_max=20)
    before = ids[start - 1]
    after = ids[start + gap]
    assert after[0] != before[0]
    assert after[1] == "new"


def test_life_boundary_twenty_recovers_twentyone_does_not():
    ids20, start, gap = occluded_run(gap_frames=20, life_max=20)
    assert ids20[start + gap][0] == ids20[start - 1][0]
    ids21, start, gap = occluded_run(gap_frames=21, life_max=20)
    assert ids21[start + gap][0] != ids21[start - 1][0]


def test_single_direction_always_switches_after_a_gap():
    objects = [(100.0, 100.0, 2.0, 1.0, 12.0, 12.0)]
    gt, stream = linear_scenario(objects, 30)
    stream = mask_object(stream, gt, 1, range(10, 15))
    outputs = track_sequence(stream, TrackerConfig(mode="single_direction"))
    ids = {o.frame: o.entries[0].id for o in outputs if o.entries}
    assert ids[9] == 1
    assert ids[15] != ids[9]
    assert all(o.entries[0].status in ("active", "new") for o in outputs if o.entries)


def test_single_direction_empty_frame_drops_all_tracks():
    tracker = Tracker(TrackerConfig(mode="single_direction"))
    tracker.step(FrameInput(1, (det(10, 10), det(80, 80))))
    tracker.step(FrameInput(2, ()))
    assert tracker.tracks == [] and tracker.stranded == []


def test_modes_agree_when_nothing_is_ever_unmatched():
    gt, stream = linear_scenario(
        [(100.0, 100.0, 1.5, 0.5, 14.0, 14.0), (300.0, 200.0, -1.0, 1.0, 14.0, 14.0)], 50
    )
    out_bi = track_sequence(stream, TrackerConfig(mode="bidirectional"))
    out_sd = track_sequence(stream, TrackerConfig(mode="single_direction"))
    assert out_bi == out_sd


def test_first_match_prefers_higher_confidence():
    track = Track(1, BoundingBox(10, 10, 10, 10), 0, 1.0)
    strong = det(10, 10, conf=0.9)
    weak = det(11, 10, conf=0.8)
    matches, _, unmatched_dets = first_match([track], [strong, weak])
    assert matches == [(0, 0)]
    assert unmatched_dets == [1]


def test_first_match_diagonal_is_forced():
    tracks = [Track(1, BoundingBox(0, 0, 10, 10), 0, 1.0), Track(2, BoundingBox(100, 100, 10, 10), 0, 1.0)]
    dets = [det(0, 0), det(100, 100)]
    matches, unmatched_trk, unmatched_det = first_match(tracks, dets)
    assert set(matches) == {(0, 0), (1, 1)}
    assert unmatched_trk == [] and unmatched_det == []


def test_first_match_all_gated_means_no_matches():
    tracks = [Track(1, BoundingBox(0, 0, 2, 2), 0, 1.0)]
    dets = [det(500, 500, w=2, h=2)]
    matches, unmatched_trk, unmatched_det = first_match(tracks, dets)
    assert matches == [] and unmatched_trk == [0] and unmatched_det == [0]


def test_second_match_empty_stranded_passes_through():
    dets = [det(10, 10)]
    matches, unmatched, remaining = second_match(dets, [])
    assert matches == [] and unmatched == [0] and remaining == []


def test_second_match_zero_distance_recovery():
    # the stranded center equals the backward-predicted detection center
    entry = StrandedEntry(id=7, center=(20.0, 20.0), size=(10.0, 10.0), forward_motion=(2.0, 0.0), life=10)
    d = det(22, 20, backward=(-2.0, 0.0))
    matches, unmatched, remaining = second_match([d], [entry])
    assert matches == [(0, 0)]
    assert unmatched == [] and remaining == []


def test_second_match_respects_gating():
    entry = StrandedEntry(id=7, center=(500.0, 500.0), size=(5.0, 5.0), forward_motion=(0.0, 0.0), life=10)
    d = det(10, 10, w=5, h=5)
    matches, unmatched, remaining = second_match([d], [entry])
    assert matches == []
    assert unmatched == [0]
    assert remaining == [entry]


def test_stranded_life_counts_down_exactly():
    gt, stream = linear_scenario([(100.0, 100.0, 2.0, 0.0, 12.0, 12.0)], 40)
    stream = mask_object(stream, gt, 1, range(10, 40))
    tracker = Tracker(TrackerConfig(life_max=20))
    lives = {}
    for fi in stream:
        tracker.step(fi)
        if tracker.stranded:
            lives[fi.frame] = tracker.stranded[0].life
    # stranded during frame 10 at life 20; k subsequent unmatched frames leave life 20 - k
    assert lives[10] == 20
    for k in range(1, 20):
        assert lives[10 + k] == 20 - k
    assert 30 not in lives  # removed once life reaches zero
    assert tracker.stranded == []


def test_stranded_center_tracks_the_object_position():
    # after step f the stranded center estimates the object's frame-f position
    vx, vy = 3.0, -1.5
    gt, stream = linear_scenario([(100.0, 100.0, vx, vy, 12.0, 12.0)], 30)
    stream = mask_object(stream, gt, 1, range(10, 25))
    tracker = Tracker()
    for fi in stream:
        tracker.step(fi)
        if tracker.stranded:
            true = gt[1].boxes[fi.frame]
            cx, cy = tracker.stranded[0].center
            assert cx == pytest.approx(true.cx, abs=1e-9)
            assert cy == pytest.approx(true.cy, abs=1e-9)


def test_forward_fallback_negated_backward():
    tracker = Tracker(TrackerConfig(forward_fallback="negated_backward"))
    tracker.step(FrameInput(1, (det(10, 10, backward=(-2.0, 1.0), forward=None),)))
    assert tracker.tracks[0].forward_motion == (2.0, -1.0)


def test_forward_fallback_zero():
    tracker = Tracker(TrackerConfig(forward_fallback="zero"))
    tracker.step(FrameInput(1, (det(10, 10, backward=(-2.0, 1.0), forward=None),)))
    assert tracker.tracks[0].forward_motion == (0.0, 0.0)


def _noisy_stream(seed):
    cfg = ScenarioConfig(arena=(800, 600), n_objects=12, n_frames=80, seed=seed)
    gt, stream = generate(cfg)
    stream = apply_occlusion(stream, gt, OcclusionConfig(target_rate=0.15, duration_range=(1, 10), seed=seed + 1))
    return perturb(stream, NoiseConfig(center_jitter_sigma=1.0, motion_noise_sigma=0.5), seed=seed + 2)


def test_outputs_are_deterministic():
    a = track_sequence(_noisy_stream(5))
    b = track_sequence(_noisy_stream(5))
    assert a == b
    assert repr(a) == repr(b)


def test_ids_within_a_frame_are_distinct():
    for out in track_sequence(_noisy_stream(6)):
        ids = [e.id for e in out.entries]
        assert len(ids) == len(set(ids))


def test_id_conservation():
    # every output id comes from the live set, the stranded buffer, or is fresh
    tracker = Tracker()
    for fi in _noisy_stream(7):
        known = {t.id for t in tracker.tracks} | {e.id for e in tracker.stranded}
        high_water = tracker.next_id
        out = tracker.step(fi)
        fresh = sorted(e.id for e in out.entries if e.id not in known)
        assert all(i >= high_water for i in fresh)
        assert fresh == list(range(high_water, high_water + len(fresh)))
        live_ids = {t.id for t in tracker.tracks} | {e.id for e in tracker.stranded}
        assert len(live_ids) == len(tracker.tracks) + len(tracker.stranded)


def test_statuses_partition_the_output():
    for out in track_sequence(_noisy_stream(8)):
        assert all(e.status in ("active", "reactivated", "new") for e in out.entries)
