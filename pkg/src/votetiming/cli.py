"""Command-line front end.

Exit codes: 0 on success, 1 on bad input or an unwritable output path, 2 when
``solve`` finds no characterised equilibrium or ``verify`` rejects the profile.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import closed_form as cf
from .equilibrium import verify_wpbe
from .game import PROFILE_FIELDS, GameParams, InvalidParams, StrategyProfile
from .rational import as_rational, format_decimal, format_rational
from .regimes import (
    SweepSpec,
    late_bloomer_figure,
    late_bloomer_summary,
    q1_zero_figure,
    solve_all,
    sweep,
)
from .simulate import compare_with_enumeration, simulate_counts

EXIT_OK, EXIT_INPUT, EXIT_NONE = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    output: Path | None
    fmt: str
    precision: int
    seed: int | None
    args: argparse.Namespace


# --- writers --------------------------------------------------------------------


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_csv(columns: list[str], rows: list[dict], precision: int, rational=None) -> str:
    """Header plus rows. Every rational column gets a ``<name>_decimal`` companion.

    Rational columns are detected from the rows unless named in ``rational``,
    which keeps the header stable for empty tables.
    """
    if rational is None:
        rational = [c for c in columns if any(isinstance(r.get(c), Fraction) for r in rows)]
    header = []
    for c in columns:
        header.append(c)
        if c in rational:
            header.append(f"{c}_decimal")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        out = []
        for c in columns:
            v = r.get(c)
            if c in rational:
                out += ["", ""] if v is None else [format_rational(v), format_decimal(v, precision)]
            elif v is None:
                out.append("")
            elif isinstance(v, bool):
                out.append("true" if v else "false")
            else:
                out.append(v)
        w.writerow(out)
    return buf.getvalue()


def _emit(config: RunConfig, text: str, path: Path | None = None):
    path = path or config.output
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from None


# --- subcommands ----------------------------------------------------------------


def _params(args) -> GameParams:
    try:
        return GameParams(args.cost, args.q1, args.q2)
    except InvalidParams as exc:
        raise InputError(str(exc)) from None


def _profile(args) -> StrategyProfile:
    try:
        return StrategyProfile(*(getattr(args, k) for k in PROFILE_FIELDS))
    except InvalidParams as exc:
        raise InputError(str(exc)) from None


def _param_dict(params: GameParams) -> dict:
    return {"cost": params.cost, "q1": params.q1, "q2": params.q2}


def run_solve(config: RunConfig) -> int:
    params = _params(config.args)
    solved = solve_all(params)
    entries = []
    for s in solved:
        entries.append({
            "labels": sorted(label.value for label in s.labels),
            "profile": {k: getattr(s.profile, k) for k in PROFILE_FIELDS},
            "indifferent": sorted(s.indifferent),
            "coupled": sorted(s.coupled),
            "verdict": verify_wpbe(s.profile, params).verdict.value,
            "u_diff": cf.u_diff(params, s.profile),
        })
    if config.fmt == "json":
        text = render_json({"params": _param_dict(params), "equilibria": entries})
    else:
        cols = ["cost", "q1", "q2", "labels", *PROFILE_FIELDS, "indifferent", "coupled", "verdict", "u_diff"]
        rows = [{**_param_dict(params), **e["profile"], "labels": "|".join(e["labels"]),
                 "indifferent": ",".join(e["indifferent"]), "coupled": ",".join(e["coupled"]),
                 "verdict": e["verdict"], "u_diff": e["u_diff"]} for e in entries]
        text = render_csv(cols, rows, config.precision)
    _emit(config, text)
    if not entries:
        print("no characterised equilibrium at these parameters", file=sys.stderr)
        return EXIT_NONE
    return EXIT_OK


def _set_rows(report) -> list[dict]:
    rows = []
    for kind, checks in (("bayes", report.per_set), ("diagnostic", report.off_path)):
        for row in checks:
            d = row.to_dict()
            rows.append({
                "kind": kind, "info_set": d["info_set"], "tally": d["tally"], "on_path": row.on_path,
                "basis": row.basis, "reach": row.reach, "conditional_reach": row.conditional_reach,
                "vote": next((v for a, v in row.action_values.items() if a.value == "vote"), None),
                "other": next((v for a, v in row.action_values.items() if a.value != "vote"), None),
                "prescribed": row.prescribed, "best": row.best, "gain": row.gain,
            })
    return rows


def run_verify(config: RunConfig, profile: StrategyProfile | None = None) -> int:
    params = _params(config.args)
    profile = profile or _profile(config.args)
    report = verify_wpbe(profile, params, config.args.check_off_path)
    if config.fmt == "json":
        text = render_json({
            "params": _param_dict(params),
            "profile": {k: getattr(profile, k) for k in PROFILE_FIELDS},
            **report.to_dict(),
        })
    else:
        cols = ["kind", "info_set", "tally", "on_path", "basis", "reach", "conditional_reach",
                "vote", "other", "prescribed", "best", "gain"]
        text = render_csv(cols, _set_rows(report), config.precision)
    _emit(config, text)
    print(f"verdict: {report.verdict.value}", file=sys.stderr)
    return EXIT_OK if report.is_valid else EXIT_NONE


def run_sweep(config: RunConfig) -> int:
    a = config.args
    try:
        spec = SweepSpec(
            a.grid_step,
            cost_range=(a.cost_min, a.cost_max),
            q1_range=(a.q1_min, a.q1_max),
            q2_range=(a.q2_min, a.q2_max),
            workers=a.workers,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    table = sweep(spec)
    if config.fmt == "json":
        text = render_json({"columns": table.columns, "rows": table.rows})
    else:
        rational = [c for c in table.columns if c in ("cost", "q1", "q2") or c.startswith("lb_") and c.endswith("_u_diff")]
        text = render_csv(table.columns, table.rows, config.precision, rational)
    _emit(config, text)
    return EXIT_OK


def run_simulate(config: RunConfig) -> int:
    params = _params(config.args)
    profile = _profile(config.args)
    n = config.args.playouts
    if n <= 0:
        raise InputError("--playouts must be positive")
    seed = config.seed if config.seed is not None else 0
    counts = simulate_counts(profile, params, n, seed)
    rows = [{
        "code": t.code, "path": t.label, "count": t.count, "frequency": Fraction(t.count, n),
        "exact": t.exact, "z": round(t.z, 4) if t.sigma else None,
    } for t in compare_with_enumeration(profile, params, counts)]
    if config.fmt == "json":
        text = render_json({"params": _param_dict(params), "playouts": n, "seed": seed, "paths": rows})
    else:
        text = render_csv(["code", "path", "count", "frequency", "exact", "z"], rows, config.precision)
    _emit(config, text)
    return EXIT_OK


def _summary_cell(value, precision: int) -> str:
    if isinstance(value, dict):
        return json.dumps(_jsonable(value), sort_keys=True)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float):
        return f"{value:.{precision}f}"
    return str(value)


def run_export_figure(config: RunConfig) -> int:
    a = config.args
    try:
        step = as_rational(a.grid_step)
        if not 0 < step <= 1:
            raise ValueError("grid step must lie in (0, 1]")
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if a.preset == "fig-qozero":
        table = q1_zero_figure(step)
        counts: dict[str, int] = {}
        for r in table.rows:
            counts[r["labels"]] = counts.get(r["labels"], 0) + 1
        summary = {"grid_step": step, "points": len(table.rows), "points_per_label": counts}
    else:
        table = late_bloomer_figure(step)
        summary = {**late_bloomer_summary(step), "points": len(table.rows)}
    if config.fmt == "json":
        _emit(config, render_json({"preset": a.preset, "summary": summary,
                                   "columns": table.columns, "rows": table.rows}))
        return EXIT_OK
    _emit(config, render_csv(table.columns, table.rows, config.precision))
    side = [{"key": k, "value": _summary_cell(v, config.precision)} for k, v in sorted(summary.items())]
    side_text = render_csv(["key", "value"], side, config.precision)
    if config.output is None:
        sys.stderr.write(side_text)
    else:
        _emit(config, side_text, config.output.with_name(config.output.name + ".summary.csv"))
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def _add_common(p, *, seed=False):
    p.add_argument("--output", type=Path, help="write here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="json", dest="fmt")
    p.add_argument("--precision", type=int, default=6, help="decimal places in display columns")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def _add_params(p):
    p.add_argument("--cost", type=_rational, required=True)
    p.add_argument("--q1", type=_rational, required=True)
    p.add_argument("--q2", type=_rational, required=True)


def _add_profile(p):
    p.add_argument("--p1", type=_rational, required=True)
    p.add_argument("--p2-00", dest="p2_00", type=_rational, required=True)
    p.add_argument("--p2-10", dest="p2_10", type=_rational, required=True)
    p.add_argument("--p2-01", dest="p2_01", type=_rational, required=True)
    p.add_argument("--p2-11", dest="p2_11", type=_rational, default=Fraction(1))
    p.add_argument("--p2-02", dest="p2_02", type=_rational, default=Fraction(0))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="votetiming", description="Exact equilibrium tools for the two-turn voting timing game.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="list the characterised equilibria at one parameter point")
    _add_params(p)
    _add_common(p)

    p = sub.add_parser("verify", help="check a profile against the equilibrium conditions")
    _add_params(p)
    _add_profile(p)
    p.add_argument("--check-off-path", action="store_true",
                   help="also score unreached sets (reported separately, never changes the verdict)")
    _add_common(p)

    p = sub.add_parser("sweep", help="evaluate a (cost, q1, q2) grid")
    p.add_argument("--grid-step", type=_rational, required=True)
    for name in ("cost", "q1", "q2"):
        p.add_argument(f"--{name}-min", type=_rational, default=Fraction(0))
        p.add_argument(f"--{name}-max", type=_rational, default=Fraction(1))
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("simulate", help="Monte Carlo playouts compared with exact path probabilities")
    _add_params(p)
    _add_profile(p)
    p.add_argument("--playouts", type=int, default=100_000)
    _add_common(p, seed=True)

    p = sub.add_parser("export-figure", help="plot-ready grids for the two regime maps")
    p.add_argument("preset", choices=("fig-qozero", "fig-latebird"))
    p.add_argument("--grid-step", type=_rational, default=Fraction(1, 100))
    _add_common(p)
    return parser


_DISPATCH = {
    "solve": run_solve,
    "verify": run_verify,
    "sweep": run_sweep,
    "simulate": run_simulate,
    "export-figure": run_export_figure,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = RunConfig(args.subcommand, args.output, args.fmt, args.precision,
                           getattr(args, "seed", None), args)
        return _DISPATCH[args.subcommand](config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
