"""Command-line interface binding the engine's workflows together.

Commands:

* ``evaluate``:  per-subgroup rates, disparity gaps, and the
  disagreement index at one decision threshold.
* ``sweep``:     disagreement/sensitivity/zone table over a threshold
  grid plus the normalised stability scalar.
* ``score``:     assurance score, escalation level, and stateless
  readiness state for each row of a signals file.
* ``lifecycle``: governed state trace over a signals file.
* ``classify``:  readiness state for a single assurance score.

Exit codes: 0 success, 1 validation error (including usage), 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import Sequence

from .assurance import DeploymentState, classify_drc, compute_das, compute_ges
from .config import load_config
from .disagreement import compute_fdi, panel_from_gaps
from .errors import EngineError
from .evaluation import (
    GAP_METRICS,
    compute_confusion,
    compute_gaps,
    compute_rates,
    macro_mean,
    subgroup_sizes,
)
from .io import parse_predictions, parse_signals
from .lifecycle import (
    DEFAULT_INITIAL_STATE,
    build_assessments,
    emit_trace,
    format_real,
    replay,
)
from .stability import sensitivity, sweep, tsz_scalar, worst_zone

FORMATS = ("csv", "json")


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit 1, not argparse's 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _cell(value: float | None) -> str:
    return "" if value is None else format_real(value)


def _round4(value: float | None) -> float | None:
    return None if value is None else float(format_real(value))


def _write(text: str) -> None:
    sys.stdout.write(text)


def _emit_json(payload: object) -> None:
    _write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _parse_range(raw: str) -> tuple[float, float, float]:
    parts = raw.split(":")
    if len(parts) != 3:
        raise EngineError(f"--range must look like MIN:MAX:STEP, got {raw!r}")
    try:
        t_min, t_max, step = (float(p) for p in parts)
    except ValueError:
        raise EngineError(f"--range must contain numbers, got {raw!r}")
    return t_min, t_max, step


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    samples = parse_predictions(args.predictions)
    confusion = compute_confusion(samples, args.threshold)
    rates = {group: compute_rates(c) for group, c in confusion.items()}
    gaps = compute_gaps(rates, subgroup_sizes(confusion), config.min_support)
    panel_config = config.panel_config()
    tolerances = (
        panel_config.resolved_tolerances()
        if panel_config.mode == "verdict"
        else panel_config.tolerances
    )
    panel = panel_from_gaps(gaps, panel_config.metrics, tolerances)
    fdi = compute_fdi(panel, panel_config.mode)

    groups = sorted(confusion)
    if args.format == "json":
        _emit_json(
            {
                "threshold": args.threshold,
                "subgroups": {
                    g: {
                        "n": confusion[g].total,
                        "tp": confusion[g].tp,
                        "fp": confusion[g].fp,
                        "tn": confusion[g].tn,
                        "fn": confusion[g].fn,
                        "fpr": _round4(rates[g].fpr),
                        "fnr": _round4(rates[g].fnr),
                        "tpr": _round4(rates[g].tpr),
                        "selection_rate": _round4(rates[g].selection_rate),
                    }
                    for g in groups
                },
                "macro_means": {
                    "fpr": _round4(macro_mean(rates, "fpr")),
                    "fnr": _round4(macro_mean(rates, "fnr")),
                },
                "gaps": {m: _round4(gaps.value(m)) for m in GAP_METRICS},
                "excluded_subgroups": [list(e) for e in gaps.excluded_subgroups],
                "fdi": _round4(fdi.value),
                "fdi_mode": fdi.mode,
            }
        )
        return 0

    _write("subgroup,n,tp,fp,tn,fn,fpr,fnr,tpr,selection_rate\n")
    for g in groups:
        c = confusion[g]
        r = rates[g]
        _write(
            f"{g},{c.total},{c.tp},{c.fp},{c.tn},{c.fn},"
            f"{_cell(r.fpr)},{_cell(r.fnr)},{_cell(r.tpr)},{_cell(r.selection_rate)}\n"
        )
    _write("\nmetric,value\n")
    _write(f"macro_mean_fpr,{_cell(macro_mean(rates, 'fpr'))}\n")
    _write(f"macro_mean_fnr,{_cell(macro_mean(rates, 'fnr'))}\n")
    for metric in GAP_METRICS:
        _write(f"{metric},{format_real(gaps.value(metric))}\n")
    _write(f"fdi,{format_real(fdi.value)}\n")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    samples = parse_predictions(args.predictions)
    if args.range is not None:
        t_min, t_max, step = _parse_range(args.range)
    else:
        t_min, t_max, step = config.sweep_t_min, config.sweep_t_max, config.sweep_step
    profile = sweep(samples, t_min, t_max, step, config.panel_config())
    sens = sensitivity(profile, config.zones)
    scalar = tsz_scalar(sens, config.aggregation, config.s_ref)
    harshest = worst_zone(sens)

    if args.format == "json":
        _emit_json(
            {
                "points": [
                    {
                        "threshold": _round4(point.threshold),
                        "fdi": _round4(fdi),
                        "sensitivity": _round4(point.s),
                        "zone": point.zone.value,
                    }
                    for point, (_, fdi) in zip(sens.points, profile.points)
                ],
                "tsz_scalar": _round4(scalar.value),
                "aggregation": scalar.aggregation,
                "s_ref": scalar.s_ref,
                "worst_zone": harshest.value,
            }
        )
        return 0

    _write("threshold,fdi,sensitivity,zone\n")
    for point, (_, fdi) in zip(sens.points, profile.points):
        _write(
            f"{format_real(point.threshold)},{format_real(fdi)},"
            f"{format_real(point.s)},{point.zone.value}\n"
        )
    _write("\nmetric,value\n")
    _write(f"tsz_scalar,{format_real(scalar.value)}\n")
    _write(f"aggregation,{scalar.aggregation}\n")
    _write(f"s_ref,{format_real(scalar.s_ref)}\n")
    _write(f"worst_zone,{harshest.value}\n")
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    rows = parse_signals(args.signals)
    scored = []
    for snapshot_id, signals in rows:
        das = compute_das(signals, config.weights)
        scored.append(
            {
                "snapshot_id": snapshot_id,
                "fdi": signals.fdi,
                "delta_fpr": signals.delta_fpr,
                "delta_fnr": signals.delta_fnr,
                "tsz": signals.tsz,
                "das": das,
                "ges": compute_ges(signals, config.ges_thresholds).value,
                "drc": classify_drc(das, config.bands).value,
            }
        )

    if args.format == "json":
        _emit_json(
            [
                {
                    **row,
                    **{
                        k: _round4(row[k])
                        for k in ("fdi", "delta_fpr", "delta_fnr", "tsz", "das")
                    },
                }
                for row in scored
            ]
        )
        return 0

    _write("snapshot_id,fdi,delta_fpr,delta_fnr,tsz,das,ges,drc\n")
    for row in scored:
        _write(
            f"{row['snapshot_id']},{format_real(row['fdi'])},"
            f"{format_real(row['delta_fpr'])},{format_real(row['delta_fnr'])},"
            f"{format_real(row['tsz'])},{format_real(row['das'])},"
            f"{row['ges']},{row['drc']}\n"
        )
    return 0


def cmd_lifecycle(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    rows = parse_signals(args.signals)
    assessments = build_assessments(
        rows,
        weights=config.weights,
        bands=config.bands,
        ges_thresholds=config.ges_thresholds,
    )
    rules = config.rules_config()
    if args.gating is not None:
        rules = replace(rules, recovery_gating=args.gating == "on")
    initial = DeploymentState(args.initial)
    trace = replay(assessments, initial, rules)
    sys.stdout.buffer.write(emit_trace(trace, args.format))
    sys.stdout.buffer.flush()
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    state = classify_drc(args.das, config.bands)
    _write(state.value + "\n")
    return 0


def _add_common(parser: argparse.ArgumentParser, formats: bool = True) -> None:
    parser.add_argument("--config", help="path to a JSON config file", default=None)
    if formats:
        parser.add_argument(
            "--format", choices=FORMATS, default="csv", help="output format"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="deployassure", description=__doc__.split("\n")[0])
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser(
        "evaluate", help="rates, gaps, and disagreement at one threshold"
    )
    p.add_argument("--predictions", required=True, help="predictions file (csv/jsonl)")
    p.add_argument("--threshold", required=True, type=float)
    _add_common(p)
    p.set_defaults(handler=cmd_evaluate)

    p = subparsers.add_parser("sweep", help="disagreement profile over thresholds")
    p.add_argument("--predictions", required=True, help="predictions file (csv/jsonl)")
    p.add_argument("--range", default=None, metavar="MIN:MAX:STEP")
    _add_common(p)
    p.set_defaults(handler=cmd_sweep)

    p = subparsers.add_parser(
        "score", help="assurance score and readiness per signals row"
    )
    p.add_argument("--signals", required=True, help="signals file (csv/jsonl)")
    _add_common(p)
    p.set_defaults(handler=cmd_score)

    p = subparsers.add_parser("lifecycle", help="governed state trace over signals")
    p.add_argument("--signals", required=True, help="signals file (csv/jsonl)")
    p.add_argument(
        "--initial",
        default=DEFAULT_INITIAL_STATE.value,
        choices=[s.value for s in DeploymentState],
        help="starting governance state",
    )
    p.add_argument(
        "--gating",
        choices=("on", "off"),
        default=None,
        help="override recovery gating (default: config value)",
    )
    _add_common(p)
    p.set_defaults(handler=cmd_lifecycle)

    p = subparsers.add_parser("classify", help="readiness state for one score")
    p.add_argument("--das", required=True, type=float)
    _add_common(p, formats=False)
    p.set_defaults(handler=cmd_classify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
