"""Command line interface.

Subcommands:
  table     print every closed-form value for one shape and probability
  curves    CSV sweeps of the normalized formulas over r or p
  verify    build and decode the constructions across shapes and seeds
  simulate  schedule and spot-decode a sampled window of slots

Exit codes: 0 on success, 1 when a verification or simulation check fails,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Dict, List, Optional, Sequence

from .builders import (
    build_block_ia_precoder,
    build_refined_ia_precoder,
    build_single_topology_code,
    build_z_pair_code,
    build_zf_code,
)
from .channel import Dimensions, TOPOLOGIES, sample_channels
from .decode import verify_decodability
from .formulas import (
    baseline_normalized,
    dof_profile,
    lower_bound,
    normalized_dof,
    upper_bound_a,
    upper_bound_b,
)
from .sim import run_simulation

_SERIES: Dict[str, Callable[[float, float], float]] = {
    "dof": normalized_dof,
    "ub1": upper_bound_a,
    "ub2": upper_bound_b,
    "lb": lower_bound,
    "baseline": baseline_normalized,
}

_CONSTRUCTIONS = ("z12", "z34", "zf", "ia_block", "ia_refined")


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _add_shape_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--m", type=int, required=True, help="antennas at each transmitter")
    sub.add_argument("--n", type=int, required=True, help="antennas at each receiver")


def _parse_shapes(text: str) -> List[Dimensions]:
    shapes = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            m, n = part.split("x")
            shapes.append(Dimensions(int(m), int(n)))
        except (ValueError, TypeError) as exc:
            raise argparse.ArgumentTypeError(f"bad shape {part!r}: {exc}")
    if not shapes:
        raise argparse.ArgumentTypeError("no shapes given")
    return shapes


def _cmd_table(args: argparse.Namespace) -> int:
    profile = dof_profile(args.m, args.n, args.p)
    if args.json:
        print(json.dumps(profile.to_dict(), indent=2, sort_keys=True))
        return 0
    print(f"shape {args.m}x{args.n}  r {_fmt(profile.r)}  p {_fmt(profile.p)}  regime {profile.regime}")
    rows = [
        ("normalized dof", _fmt(profile.dof) if profile.dof is not None else "open (bounds only)"),
        ("upper bound 1", _fmt(profile.ub1)),
        ("upper bound 2", _fmt(profile.ub2)),
        ("lower bound", _fmt(profile.lb)),
        ("single-slot baseline", _fmt(profile.baseline)),
        ("composite achievable", _fmt(profile.composite)),
        ("rate pair bound", _fmt(profile.pair_bound)),
        ("three rate bound", _fmt(profile.triple_bound)),
    ]
    width = max(len(k) for k, _ in rows)
    for key, value in rows:
        print(f"  {key:<{width}}  {value}")
    return 0


def _cmd_curves(args: argparse.Namespace) -> int:
    series = [s.strip() for s in args.series.split(",") if s.strip()]
    for name in series:
        if name not in _SERIES:
            raise SystemExit(f"unknown series {name!r}; choose from {sorted(_SERIES)}")
    step = args.step
    if not 0 < step <= 0.5:
        raise SystemExit("step must lie in (0, 0.5]")
    count = int(round(1.0 / step))
    if args.sweep == "r":
        xs = [round(k * step, 12) for k in range(1, count + 1)]
        fixed_p = args.fixed
        if not 0 <= fixed_p <= 1:
            raise SystemExit("fixed p must lie in [0, 1]")
        points = [(x, x, fixed_p) for x in xs if x <= 1.0]
    else:
        xs = [round(k * step, 12) for k in range(0, count + 1)]
        fixed_r = args.fixed
        if not 0 < fixed_r <= 1:
            raise SystemExit("fixed r must lie in (0, 1]")
        points = [(x, fixed_r, x) for x in xs if x <= 1.0]
    lines = ["x,series,value"]
    for x, r, p in points:
        for name in series:
            try:
                value = _SERIES[name](r, p)
            except ValueError:
                continue  # series undefined here (open regime)
            lines.append(f"{_fmt(x)},{name},{_fmt(value)}")
    print("\n".join(lines))
    return 0


def _build_construction(label: str, dims: Dimensions):
    if label == "z12":
        return build_z_pair_code(dims, "z12")
    if label == "z34":
        return build_z_pair_code(dims, "z34")
    if label == "zf":
        return build_zf_code(dims)
    if label == "ia_block":
        return build_block_ia_precoder(dims)
    if label == "ia_refined":
        return build_refined_ia_precoder(dims)
    if label.startswith("single:"):
        return build_single_topology_code(label.split(":", 1)[1], dims)
    raise ValueError(f"unknown construction {label!r}")


def _cmd_verify(args: argparse.Namespace) -> int:
    labels = [c.strip() for c in args.constructions.split(",") if c.strip()]
    expanded: List[str] = []
    for label in labels:
        if label == "singles":
            expanded.extend(f"single:{t}" for t in sorted(TOPOLOGIES))
        else:
            expanded.append(label)
    records = []
    failed = False
    for dims in args.shapes:
        for label in expanded:
            try:
                scheme = _build_construction(label, dims)
            except ValueError as exc:
                records.append(
                    {
                        "construction": label,
                        "shape": f"{dims.m}x{dims.n}",
                        "status": "skip",
                        "reason": str(exc),
                    }
                )
                continue
            for seed in range(args.seeds):
                channels = sample_channels(dims, seed)
                res = verify_decodability(channels, scheme, trials=args.trials, seed=seed)
                rec = {
                    "construction": label,
                    "shape": f"{dims.m}x{dims.n}",
                    "seed": seed,
                    "status": "ok" if res.ok else "fail",
                    "dof": res.achieved_dof,
                    "max_rel_error": res.max_rel_error,
                }
                if res.error:
                    rec["error"] = res.error
                records.append(rec)
                if not res.ok:
                    failed = True
    if args.json:
        print(json.dumps(records, indent=2, sort_keys=True))
    else:
        for rec in records:
            if rec["status"] == "skip":
                print(f"skip {rec['construction']:16s} {rec['shape']:6s} {rec['reason']}")
            else:
                line = (
                    f"{rec['status']:4s} {rec['construction']:16s} {rec['shape']:6s} "
                    f"seed={rec['seed']} dof={rec['dof']} err={rec['max_rel_error']:.2e}"
                )
                if "error" in rec:
                    line += f"  ({rec['error']})"
                print(line)
        checked = sum(1 for r in records if r["status"] != "skip")
        skipped = len(records) - checked
        print(f"{checked} checks, {skipped} skipped, {'FAIL' if failed else 'all ok'}")
    return 1 if failed else 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    if args.slots <= 0:
        raise SystemExit("--slots must be positive")
    if not 0 <= args.p <= 1:
        raise SystemExit("--p must lie in [0, 1]")
    dims = Dimensions(args.m, args.n)
    try:
        result = run_simulation(
            dims,
            args.p,
            args.slots,
            args.seed,
            decode_fraction=args.decode_fraction,
        )
    except RuntimeError as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(result.to_json())
        return 0
    ref = result.analytic_reference
    emp = result.empirical_dof_per_slot
    rel = abs(emp - ref) / ref if ref else 0.0
    print(f"shape {args.m}x{args.n}  p {_fmt(args.p)}  slots {args.slots}  seed {args.seed}")
    print(f"  decoded symbols      {result.decoded_symbols}")
    print(f"  empirical dof/slot   {_fmt(emp)}")
    print(f"  analytic reference   {_fmt(ref)}")
    print(f"  relative difference  {_fmt(rel)}")
    print(f"  full decodes run     {result.decodes_run}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="burstyx",
        description="Constructions, bounds and simulations for the bursty two-pair MIMO cross channel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="closed-form values for one operating point")
    _add_shape_args(t)
    t.add_argument("--p", type=float, required=True, help="link-on probability")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=_cmd_table)

    c = sub.add_parser("curves", help="CSV sweep of the normalized formulas")
    c.add_argument("--sweep", choices=("r", "p"), required=True)
    c.add_argument("--fixed", type=float, required=True, help="the non-swept coordinate")
    c.add_argument("--step", type=float, default=0.01)
    c.add_argument("--series", default="dof,ub1,ub2,lb,baseline")
    c.set_defaults(func=_cmd_curves)

    v = sub.add_parser("verify", help="decode random messages through the constructions")
    v.add_argument(
        "--shapes",
        type=_parse_shapes,
        default=_parse_shapes("4x3,3x4,3x2,2x3,3x3,4x2"),
        help="comma-separated MxN list",
    )
    v.add_argument(
        "--constructions",
        default="z12,z34,zf,ia_block,ia_refined,singles",
        help=f"comma-separated from {_CONSTRUCTIONS + ('singles', 'single:<topology>')}",
    )
    v.add_argument("--seeds", type=int, default=3, help="channel draws per case")
    v.add_argument("--trials", type=int, default=2, help="message draws per channel")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("simulate", help="schedule and spot-decode a sampled window")
    _add_shape_args(s)
    s.add_argument("--p", type=float, required=True, help="link-on probability")
    s.add_argument("--slots", type=int, required=True, help="window length")
    s.add_argument("--seed", type=int, required=True, help="base random seed")
    s.add_argument("--decode-fraction", type=float, default=0.01)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=_cmd_simulate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        raise
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
