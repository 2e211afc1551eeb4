"""Command line interface: track, eval, sim, occlude and sweep subcommands."""

import argparse
import sys

from .core import MODE_BIDIRECTIONAL, MODE_SINGLE, TrackerConfig
from .formats import (
    attach_motion,
    durations_from_config,
    noise_from_config,
    parse_config_file,
    parse_mot,
    parse_motion_sidecar,
    scenario_from_config,
    write_detections,
    write_gt,
    write_report_json,
    write_results,
)
from .metrics import evaluate
from .simulator import OcclusionConfig, apply_occlusion, generate, perturb
from .sweep import format_sweep_report, run_sweep
from .tracker import track_sequence


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bitrack", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_track = sub.add_parser("track", help="run the tracker over a detection file")
    p_track.add_argument("--dets", required=True, help="MOT detection file (id column -1)")
    p_track.add_argument("--motion", help="motion sidecar: frame,det_index,bvx,bvy,fvx,fvy")
    p_track.add_argument("--out", required=True, help="MOT result file to write")
    p_track.add_argument("--conf-thresh", type=float, default=0.4)
    p_track.add_argument("--life", type=int, default=20, help="stranded life value")
    p_track.add_argument("--mode", choices=["bidir", "single"], default="bidir")

    p_eval = sub.add_parser("eval", help="evaluate a result file against ground truth")
    p_eval.add_argument("--gt", required=True)
    p_eval.add_argument("--res", required=True)
    p_eval.add_argument("--iou", type=float, default=0.5)
    p_eval.add_argument("--json", help="also write the report as JSON")

    p_sim = sub.add_parser("sim", help="generate a synthetic scenario")
    p_sim.add_argument("--config", required=True, help="flat key=value scenario file")
    p_sim.add_argument("--out-gt", required=True)
    p_sim.add_argument("--out-dets", required=True)
    p_sim.add_argument("--out-motion")
    p_sim.add_argument("--seed", type=int, required=True)

    p_occ = sub.add_parser("occlude", help="mask detections to simulate occlusions")
    p_occ.add_argument("--dets", required=True)
    p_occ.add_argument("--gt", required=True)
    p_occ.add_argument("--rate", type=float, required=True)
    p_occ.add_argument("--seed", type=int, required=True)
    p_occ.add_argument("--out", required=True)
    p_occ.add_argument("--dur-min", type=int, default=1)
    p_occ.add_argument("--dur-max", type=int, default=30)
    p_occ.add_argument("--motion", help="sidecar to re-index alongside the masked stream")
    p_occ.add_argument("--out-motion", help="where to write the re-indexed sidecar")

    p_sweep = sub.add_parser("sweep", help="occlusion-rate sweep comparing both modes")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--rates", required=True, help='comma list, e.g. "0,0.05,0.10"')
    p_sweep.add_argument("--seeds", required=True, help='comma list or range, e.g. "1..10"')
    p_sweep.add_argument("--report", required=True, help="report table to write")
    p_sweep.add_argument("--conf-thresh", type=float, default=0.4)
    p_sweep.add_argument("--life", type=int, default=20)
    p_sweep.add_argument("--iou", type=float, default=0.5)
    return parser


def _parse_rates(text: str) -> list[float]:
    try:
        rates = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"invalid rates list {text!r}") from None
    if not rates or any(not 0.0 <= r <= 1.0 for r in rates):
        raise ValueError(f"rates must be in [0, 1], got {text!r}")
    return rates


def _parse_seeds(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _mode_name(flag: str) -> str:
    return MODE_BIDIRECTIONAL if flag == "bidir" else MODE_SINGLE


def _cmd_track(args) -> int:
    stream = parse_mot(args.dets, as_detections=True)
    if args.motion:
        stream = attach_motion(stream, parse_motion_sidecar(args.motion))
    config = TrackerConfig(conf_threshold=args.conf_thresh, life_max=args.life, mode=_mode_name(args.mode))
    outputs = track_sequence(stream, config)
    write_results(outputs, args.out)
    return 0


def _cmd_eval(args) -> int:
    gt = parse_mot(args.gt, as_detections=False)
    res = parse_mot(args.res, as_detections=False)
    report = evaluate(gt, res, iou_threshold=args.iou)
    for key, value in sorted(report.to_dict().items()):
        if isinstance(value, float):
            print(f"{key}: {value:.6f}")
        else:
            print(f"{key}: {value}")
    if args.json:
        write_report_json(report, args.json)
    return 0


def _cmd_sim(args) -> int:
    values = parse_config_file(args.config)
    scenario = scenario_from_config(values, seed=args.seed)
    noise = noise_from_config(values)
    gt, stream = generate(scenario)
    stream = perturb(stream, noise, seed=args.seed + 1)
    write_gt(gt, args.out_gt)
    write_detections(stream, args.out_dets, motion_path=args.out_motion)
    return 0


def _cmd_occlude(args) -> int:
    stream = parse_mot(args.dets, as_detections=True)
    if args.motion:
        stream = attach_motion(stream, parse_motion_sidecar(args.motion))
    gt = parse_mot(args.gt, as_detections=False)
    cfg = OcclusionConfig(target_rate=args.rate, duration_range=(args.dur_min, args.dur_max), seed=args.seed)
    masked = apply_occlusion(stream, gt, cfg)
    write_detections(masked, args.out, motion_path=args.out_motion)
    return 0


def _cmd_sweep(args) -> int:
    values = parse_config_file(args.config)
    scenario = scenario_from_config(values)
    noise = noise_from_config(values)
    durations = durations_from_config(values)
    rates = _parse_rates(args.rates)
    seeds = _parse_seeds(args.seeds)
    config = TrackerConfig(conf_threshold=args.conf_thresh, life_max=args.life)
    rows = run_sweep(scenario, noise, rates, seeds, durations, config, iou_threshold=args.iou)
    text = format_sweep_report(rows)
    with open(args.report, "w") as fh:
        fh.write(text)
    print(text, end="")
    return 0


_COMMANDS = {
    "track": _cmd_track,
    "eval": _cmd_eval,
    "sim": _cmd_sim,
    "occlude": _cmd_occlude,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"bitrack {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
