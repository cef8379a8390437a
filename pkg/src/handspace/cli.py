"""Command-line interface.

Subcommands: case, all, converge, compare, export. Angles accept either
plain radians or pi fractions like "pi/60".
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import report as rpt
from .cases import write_case_catalog
from .kinematics import HandParams
from .report import ReferenceTable, compare, export_report
from .voxelize import read_csv, write_ply


def parse_angle(text: str) -> float:
    text = text.strip().lower().replace(" ", "")
    if text.startswith("pi/"):
        return math.pi / float(text[3:])
    if text == "pi":
        return math.pi
    return float(text)


def _load_params(path: str | None) -> HandParams | None:
    return HandParams.from_file(path) if path else None


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--delta", type=float, default=rpt.DEFAULT_DELTA,
                        help="voxel edge length (default 0.05)")
    parser.add_argument("--step", type=parse_angle, default=rpt.DEFAULT_STEP,
                        help='joint sampling step, e.g. "pi/60" (default)')
    parser.add_argument("--params", help="hand parameter JSON file")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--format", default="json",
                        help="comma list of json,csv,ply (default json)")


def _formats(text: str) -> tuple[str, ...]:
    formats = tuple(f for f in text.split(",") if f)
    for f in formats:
        if f not in ("json", "csv", "ply"):
            raise SystemExit(f"unknown format {f!r}")
    return formats


def _print_case_summary(r) -> None:
    print(f"case {r.case.id} (total DoF {r.case.total_dof}) "
          f"delta={r.delta} step={r.step:.6f}  [{r.duration_s:.1f}s]")
    for name, d in r.digits.items():
        print(f"  {name:7s} volume={d.volume:.6f} voxels={len(d.voxels)} "
              f"samples={d.samples}")
    for name, p in r.pairs.items():
        print(f"  thumb-{name:7s} overlap={p.volume:.6f} "
              f"voxels={len(p.result.keys)} pct_of_finger={p.pct_of_finger:.2f}%")


def cmd_case(args) -> int:
    r = rpt.run_case(args.case_id, args.delta, args.step, _load_params(args.params),
                     threads=args.threads)
    _print_case_summary(r)
    written = export_report(r, args.out, _formats(args.format))
    for p in written:
        print(f"wrote {p}")
    return 0


def cmd_all(args) -> int:
    reports = rpt.run_all(args.delta, args.step, _load_params(args.params),
                          threads=args.threads)
    for r in reports.values():
        _print_case_summary(r)
        for p in export_report(r, args.out, _formats(args.format)):
            print(f"wrote {p}")
    return 0


def cmd_converge(args) -> int:
    deltas = [float(v) for v in args.deltas.split(",")]
    steps = [parse_angle(v) for v in args.steps.split(",")]
    digits = tuple(args.digits.split(","))
    res = rpt.convergence_study(deltas, steps, digits, params=_load_params(args.params))
    for digit, per_delta in res["volumes"].items():
        for d, by_step in per_delta.items():
            row = "  ".join(f"step={s:.6f}: {v:.4f}" for s, v in sorted(
                by_step.items(), reverse=True))
            flag = res["converged_step"][digit][d]
            note = f"(converged at step {flag:.6f})" if flag else "(not converged)"
            print(f"{digit:7s} delta={d}: {row}  {note}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "volumes": {dg: {str(d): {f"{s:.12f}": v for s, v in by_step.items()}
                         for d, by_step in per.items()}
                    for dg, per in res["volumes"].items()},
    }
    path = out / "convergence.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")
    return 0


def cmd_compare(args) -> int:
    ref = ReferenceTable.bundled()
    r = rpt.run_case(args.case_id, args.delta, args.step, _load_params(args.params),
                     threads=args.threads)
    rows = compare(r, ref)
    failed = 0
    for row in rows:
        mark = "pass" if row.ok else "FAIL"
        print(f"{mark}  {row.key:38s} expected={row.expected:.6f} "
              f"actual={row.actual:.6f} err={row.rel_err_pct:.2f}%")
        failed += 0 if row.ok else 1
    print(f"{len(rows) - failed}/{len(rows)} within tolerance")
    return 1 if failed else 0


def cmd_export(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.what == "catalog":
        path = out / "cases.json"
        write_case_catalog(path)
    elif args.what == "params":
        path = out / "hand_params.json"
        path.write_text(json.dumps(HandParams().to_dict(), indent=2, sort_keys=True) + "\n")
    elif args.what == "cloud":
        if not args.from_csv:
            raise SystemExit("export cloud requires --from-csv")
        vset = read_csv(args.from_csv, args.delta)
        path = out / (Path(args.from_csv).stem + ".ply")
        write_ply(vset, path)
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(f"unknown export target {args.what!r}")
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="handspace",
        description="Voxel workspace and thumb-opposability analysis of a "
                    "five-finger hand with palm degrees of freedom",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_case = sub.add_parser("case", help="run one case")
    p_case.add_argument("case_id", type=int)
    _common(p_case)
    p_case.set_defaults(func=cmd_case)

    p_all = sub.add_parser("all", help="run all seven cases")
    _common(p_all)
    p_all.set_defaults(func=cmd_all)

    p_conv = sub.add_parser("converge", help="voxel/resolution study")
    _common(p_conv)
    p_conv.add_argument("--deltas", default="0.05,0.025")
    p_conv.add_argument("--steps", default="pi/18,pi/36,pi/60,pi/90")
    p_conv.add_argument("--digits", default="thumb,index,little")
    p_conv.set_defaults(func=cmd_converge)

    p_cmp = sub.add_parser("compare", help="diff one case against reference values")
    p_cmp.add_argument("case_id", type=int)
    _common(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)

    p_exp = sub.add_parser("export", help="emit configs or convert voxel files")
    p_exp.add_argument("what", choices=("catalog", "params", "cloud"))
    p_exp.add_argument("--from-csv", help="voxel CSV to convert (cloud)")
    _common(p_exp)
    p_exp.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
