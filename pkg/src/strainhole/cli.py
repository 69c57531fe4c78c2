"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 physics-domain error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from . import __version__
from .config import apply_overrides, parse_config
from .errors import ConfigError, NumericalError, PhysicsDomainError
from .report import bloch_trace, coupling_results, parse_methods, render_hole, run_paper_example, sweep

EXIT_CONFIG, EXIT_PHYSICS, EXIT_NUMERICAL = 2, 3, 4


def bundled_config_text() -> str:
    return resources.files("strainhole").joinpath("data/paper_example.cfg").read_text(encoding="utf-8")


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False, ensure_ascii=False) + "\n"


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows([[repr(v) if isinstance(v, float) else v for v in row] for row in rows])
    return buf.getvalue()


def _emit(args, filename: str, text: str):
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / filename).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _load(args):
    text = Path(args.config).read_text(encoding="utf-8") if args.config else bundled_config_text()
    return apply_overrides(parse_config(text), args.set)


def _header():
    return {"generated_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "package_version": __version__}


def cmd_paper_example(args):
    cfg = _load(args)
    body = run_paper_example(cfg)
    _emit(args, "report.json", dump_json({"header": _header(), "body": body}))
    if args.out:
        rows = [[r["quantity"], r["computed"], r["quoted"], r["quoted_over_computed"]]
                for r in body["reference_comparison"]]
        _emit(args, "comparison.csv", dump_csv(["quantity", "computed", "quoted", "quoted_over_computed"], rows))
        _emit(args, "hole_profile.csv", dump_csv(*render_hole(cfg, 0.0)))
    for w in body["warnings"]:
        print(f"warning: {w}", file=sys.stderr)


def cmd_coupling(args):
    cfg = _load(args)
    results = coupling_results(cfg, parse_methods(args.method))
    if args.format == "json":
        _emit(args, "coupling.json", dump_json(results))
    else:
        header = ["method", "V_J", "dVdX0_J_per_m", "X_disp_m", "X_eval_m", "carrier_phase_rad"]
        rows = [[r[h] for h in header] for r in results.values()]
        _emit(args, "coupling.csv", dump_csv(header, rows))


def cmd_hole(args):
    cfg = _load(args)
    _emit(args, "hole_profile.csv", dump_csv(*render_hole(cfg, args.displacement, args.samples)))


def cmd_bloch(args):
    cfg = _load(args)
    header, rows, summary = bloch_trace(cfg)
    _emit(args, "bloch_trace.csv", dump_csv(header, rows))
    text = dump_json(summary)
    if args.out:
        _emit(args, "bloch_summary.json", text)
    else:
        sys.stderr.write(text)


def cmd_sweep(args):
    cfg = _load(args)
    values = [float(v) for v in args.values.split(",") if v.strip()]
    header, rows = sweep(cfg, args.param, values, parse_methods(args.method), jobs=args.jobs)
    _emit(args, "sweep.csv", dump_csv(header, rows))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario .cfg file (default: bundled worked example)")
    common.add_argument("--out", help="write output files into this directory instead of stdout")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")

    ap = argparse.ArgumentParser(prog="strainhole", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("paper-example", parents=[common], help="full report for a scenario")
    p.set_defaults(func=cmd_paper_example)

    p = sub.add_parser("coupling", parents=[common], help="interaction energy and displacement")
    p.add_argument("--method", choices=["numeric", "closed", "lowt", "all"], default="all")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_coupling)

    p = sub.add_parser("hole", parents=[common], help="hole-edge profile across the thickness")
    p.add_argument("--displacement", type=float, default=0.0, help="tip displacement X in m")
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--format", choices=["csv"], default="csv")
    p.set_defaults(func=cmd_hole)

    p = sub.add_parser("bloch", parents=[common], help="coherence trace under mechanical modulation")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.set_defaults(func=cmd_bloch)

    p = sub.add_parser("sweep", parents=[common], help="vary one config key")
    p.add_argument("--param", required=True, help="config key, e.g. burn.bias_gradient_t_per_m")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--method", choices=["numeric", "closed", "lowt", "all"], default="all")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["csv"], default="csv")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PhysicsDomainError as exc:
        print(f"physics error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except NumericalError as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
