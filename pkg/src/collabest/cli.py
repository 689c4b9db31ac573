"""Command-line experiment runner.

Subcommands: ``analyze``, ``simulate``, ``ramanujan``, ``tradeoff``, ``budget``.

Each run writes one table, as CSV (default) or as a structured JSON
document ``{config, seed, columns, rows, summary, generated_at}``.  CSV
files carry the same metadata in leading ``#`` comment lines.  The full
resolved configuration is embedded in every output, so re-running with it
reproduces the file exactly apart from the ``generated_at`` line.

Configuration precedence: command-line flags, then ``--config`` file
(JSON), then built-in defaults.

Exit status: 0 on success, 2 for configuration errors, 3 when a
computation fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import CollabError
from .matrices import StochasticMatrix, build_h_alpha, build_named, diagnostics
from .ramanujan import generate_comm_matrix, sample_ramanujan
from .simulator import (
    DelaySchedule,
    SourceDistribution,
    loglog_slope,
    run_asynchronous,
    run_synchronous,
)
from .spectral import (
    stationary_distribution,
    sym_eigenvalues,
    tau_bounds,
    tau_closed_form,
    tau_exact_curve,
    tau_limit,
)
from .tradeoff import budget_analysis, penalized_sweep, recommend, select_d_star

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3

MATRIX_ALIASES = {
    "identity": "identity",
    "a0": "full",
    "full": "full",
    "a1": "tridiag_a1",
    "a2": "tridiag_a2",
    "a3": "star_a3",
    "star": "star_a3",
}
MATRIX_CHOICES = sorted(MATRIX_ALIASES) + ["h-alpha", "ramanujan"]

COMMON_DEFAULTS = {"seed": 0, "out": None, "format": "csv", "trials": 1, "threads": 1}

DEFAULTS = {
    "analyze": {"matrix": "a1", "n": 10, "alpha": 2.0, "d": 3, "t": "1,10,100,1000",
                "exact": True, "max_attempts": 100},
    "simulate": {"matrix": "a2", "n": "5", "alpha": 2.0, "d": 3, "dist": "uniform01",
                 "t_max": 1000, "t_grid": None, "b_max": 0, "delays": "random",
                 "max_attempts": 100, "chunk": 1024},
    "ramanujan": {"n": 16, "d": 3, "max_attempts": 100},
    "tradeoff": {"n": 200, "d_min": 3, "d_max": None, "betas": "0.5,1,2,4", "repeats": 1,
                 "max_attempts": 100},
    "budget": {"total": 100_000_000, "threshold": 0.99, "n_min": 100, "n_max": 2000,
               "n_step": 10, "n_grid": None, "d_max": 64, "max_attempts": 100},
}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _parse_list(text, kind) -> list:
    items = text if isinstance(text, (list, tuple)) else str(text).split(",")
    try:
        return [kind(x) for x in items if str(x).strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse {text!r} as a list of {kind.__name__}") from exc


def _int_list(text) -> list[int]:
    return _parse_list(text, int)


def _float_list(text) -> list[float]:
    return _parse_list(text, float)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, help="master seed (unsigned integer)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "structured"))
    common.add_argument("--trials", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--config", dest="config_file", help="JSON file with default values")

    parser = _Parser(prog="collabest", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def matrix_args(p):
        p.add_argument("--matrix", help=f"one of {', '.join(MATRIX_CHOICES)}")
        p.add_argument("--alpha", type=float, help="parameter of h-alpha")
        p.add_argument("--d", type=int, help="degree for --matrix ramanujan")
        p.add_argument("--max-attempts", dest="max_attempts", type=int)

    p = sub.add_parser("analyze", parents=[common], argument_default=argparse.SUPPRESS,
                       help="diagnostics, spectrum and performance ratio of one matrix")
    matrix_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("--t", help="comma-separated times")
    p.add_argument("--no-exact", dest="exact", action="store_false",
                   help="skip the matrix-power evaluation of tau")

    p = sub.add_parser("simulate", parents=[common], argument_default=argparse.SUPPRESS,
                       help="Monte Carlo traces of the estimation recursion")
    matrix_args(p)
    p.add_argument("--n", help="agent count, or comma-separated list")
    p.add_argument("--dist", choices=("uniform01", "gaussian", "bernoulli"))
    p.add_argument("--t-max", dest="t_max", type=int)
    p.add_argument("--t-grid", dest="t_grid", help="comma-separated recording times")
    p.add_argument("--b-max", dest="b_max", type=int, help="delay bound; > 0 selects the asynchronous model")
    p.add_argument("--delays", choices=("random", "constant", "zero"))
    p.add_argument("--chunk", type=int, help="trials per random stream")

    p = sub.add_parser("ramanujan", parents=[common], argument_default=argparse.SUPPRESS,
                       help="sample one irreducible aperiodic Ramanujan graph")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--max-attempts", dest="max_attempts", type=int)

    p = sub.add_parser("tradeoff", parents=[common], argument_default=argparse.SUPPRESS,
                       help="penalised S(A_d) + beta*d sweep")
    p.add_argument("--n", type=int)
    p.add_argument("--d-min", dest="d_min", type=int)
    p.add_argument("--d-max", dest="d_max", type=int)
    p.add_argument("--betas")
    p.add_argument("--repeats", type=int)
    p.add_argument("--max-attempts", dest="max_attempts", type=int)

    p = sub.add_parser("budget", parents=[common], argument_default=argparse.SUPPRESS,
                       help="cheapest (n, d) reaching a target ratio for a fixed data budget")
    p.add_argument("--total", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--n-min", dest="n_min", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--n-step", dest="n_step", type=int)
    p.add_argument("--n-grid", dest="n_grid", help="explicit comma-separated n values")
    p.add_argument("--d-max", dest="d_max", type=int)
    p.add_argument("--max-attempts", dest="max_attempts", type=int)
    return parser


def resolve_config(argv) -> dict:
    """Parse ``argv`` and merge flags over the config file over defaults."""
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    cfg = {"command": command, **COMMON_DEFAULTS, **DEFAULTS[command]}
    path = ns.pop("config_file", None)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                from_file = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        if not isinstance(from_file, dict):
            raise ConfigError("config file must hold a JSON object")
        from_file.pop("command", None)
        unknown = set(from_file) - set(cfg)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(from_file)
    cfg.update(ns)
    if cfg["seed"] is None or int(cfg["seed"]) < 0:
        raise ConfigError("--seed must be an unsigned integer")
    return cfg


def make_matrix(name: str, n: int, cfg: dict, seed) -> StochasticMatrix:
    if name in MATRIX_ALIASES:
        return build_named(MATRIX_ALIASES[name], n)
    if name == "h-alpha":
        return build_h_alpha(float(cfg["alpha"]))
    if name == "ramanujan":
        return generate_comm_matrix(n, int(cfg["d"]), seed, int(cfg["max_attempts"]))
    raise ConfigError(f"unknown matrix {name!r}; expected one of {MATRIX_CHOICES}")


def _spectrum_or_none(a: StochasticMatrix):
    try:
        return sym_eigenvalues(a)
    except CollabError:
        return None


def _tau_limit_or_nan(a: StochasticMatrix) -> float:
    try:
        return tau_limit(a)
    except CollabError:
        return math.nan


def cmd_analyze(cfg: dict):
    name = cfg["matrix"]
    a = make_matrix(name, int(cfg["n"]), cfg, cfg["seed"])
    ts = _int_list(cfg["t"])
    diag = diagnostics(a)
    spec = _spectrum_or_none(a)
    exact = tau_exact_curve(a, ts) if cfg["exact"] else np.full(len(ts), math.nan)
    columns = ["t", "tau_exact", "tau_closed_form", "lower_bound", "upper_bound"]
    rows = []
    for t, te in zip(ts, exact):
        if spec is not None:
            lo, hi = tau_bounds(spec, t)
            rows.append([t, te, tau_closed_form(spec, t), lo, hi])
        else:
            rows.append([t, te, math.nan, math.nan, math.nan])
    summary = {
        "n": a.n,
        "irreducible": diag.irreducible,
        "period": diag.period,
        "bistochastic": diag.bistochastic,
        "symmetric": diag.symmetric,
        "complexity_index": diag.complexity_index,
        "tau_limit": _tau_limit_or_nan(a),
    }
    if diag.irreducible and diag.aperiodic:
        summary["stationary_distribution"] = stationary_distribution(a).mu.tolist()
    if spec is not None:
        summary.update(
            s_coefficient=spec.s_coefficient,
            gamma_max=spec.gamma_max,
            eigenvalues=spec.eigenvalues.tolist(),
        )
    return columns, rows, summary


def _delay_schedule(a, cfg, seed) -> DelaySchedule:
    b_max, kind = int(cfg["b_max"]), cfg["delays"]
    if kind == "zero":
        return DelaySchedule(b_max, np.zeros((a.n, a.n), dtype=np.int64))
    if kind == "constant":
        return DelaySchedule.constant(a, b_max)
    return DelaySchedule.random(a, b_max, np.random.SeedSequence(seed, spawn_key=(1,)))


def cmd_simulate(cfg: dict):
    names = [s.strip() for s in str(cfg["matrix"]).split(",")]
    ns = _int_list(cfg["n"])
    dist = SourceDistribution.from_name(cfg["dist"])
    t_grid = _int_list(cfg["t_grid"]) if cfg["t_grid"] else None
    seed = int(cfg["seed"])
    b_max = int(cfg["b_max"])
    runs = []
    for name in names:
        for n in ns:
            a = make_matrix(name, n, cfg, np.random.SeedSequence(seed, spawn_key=(2, n)))
            kw = dict(t_max=int(cfg["t_max"]), trials=int(cfg["trials"]), seed=seed,
                      t_grid=t_grid, chunk=int(cfg["chunk"]), workers=int(cfg["threads"]))
            if b_max > 0:
                trace = run_asynchronous(a, dist, _delay_schedule(a, cfg, seed), **kw)
            else:
                trace = run_synchronous(a, dist, **kw)
            spec = _spectrum_or_none(a)
            closed = [tau_closed_form(spec, int(t)) if spec else math.nan for t in trace.t_grid]
            runs.append((name, a.n, trace, closed))

    summary = {"asynchronous": b_max > 0}
    if len(runs) == 1:
        name, n, trace, closed = runs[0]
        cols = trace.columns()
        cols["tau_closed_form"] = np.asarray(closed)
        columns = list(cols)
        rows = [list(r) for r in zip(*(np.asarray(v).tolist() for v in cols.values()))]
        t_hi = int(trace.t_grid[-1])
        if b_max > 0 and t_hi >= 10:
            summary["loglog_slope_last_decade"] = _safe_slope(trace, t_hi / 10, t_hi)
    else:
        columns = ["matrix", "n", "t", "empirical_tau", "tau_stderr", "network_mse",
                   "tau_closed_form"]
        rows = []
        for name, n, trace, closed in runs:
            for k, t in enumerate(trace.t_grid):
                rows.append([name, n, int(t), trace.empirical_tau[k], trace.tau_stderr[k],
                             trace.network_mse[k], closed[k]])
    return columns, rows, summary


def _safe_slope(trace, lo, hi):
    try:
        return loglog_slope(trace.t_grid, trace.network_mse, lo, hi)
    except CollabError:
        return math.nan


def cmd_ramanujan(cfg: dict):
    sample = sample_ramanujan(int(cfg["n"]), int(cfg["d"]), int(cfg["seed"]),
                              int(cfg["max_attempts"]))
    columns = ["u", "v"]
    rows = [list(e) for e in sample.graph.edge_list()]
    summary = {
        "is_ramanujan": sample.verdict.is_ramanujan,
        "mu2": sample.verdict.mu2,
        "muN": sample.verdict.muN,
        "threshold": sample.verdict.threshold,
        "s_coefficient": sample.spectrum.s_coefficient,
        "gamma_max": sample.spectrum.gamma_max,
        "attempts": sample.attempts,
        "adjacency_eigenvalues": sample.verdict.eigenvalues.tolist(),
    }
    return columns, rows, summary


def cmd_tradeoff(cfg: dict):
    n = int(cfg["n"])
    d_hi = int(cfg["d_max"]) if cfg["d_max"] is not None else n - 1
    records = penalized_sweep(
        n, range(int(cfg["d_min"]), d_hi + 1), _float_list(cfg["betas"]), int(cfg["seed"]),
        int(cfg["repeats"]), int(cfg["max_attempts"]), int(cfg["threads"]),
    )
    columns = ["n", "d", "beta", "s_coeff", "c_index", "penalized", "repeat", "status"]
    rows = [[getattr(r, c) for c in columns] for r in records]
    summary = {"d_star": {str(b): d for b, d in select_d_star(records).items()}}
    return columns, rows, summary


def cmd_budget(cfg: dict):
    if cfg["n_grid"]:
        grid = _int_list(cfg["n_grid"])
    else:
        grid = list(range(int(cfg["n_min"]), int(cfg["n_max"]) + 1, int(cfg["n_step"])))
    records = budget_analysis(int(cfg["total"]), grid, float(cfg["threshold"]), int(cfg["seed"]),
                              int(cfg["d_max"]), int(cfg["max_attempts"]), int(cfg["threads"]))
    best = recommend(records)
    columns = ["n", "t_per_node", "d_star", "cost_ratio", "tau", "status"]
    rows = [[getattr(r, c) for c in columns] for r in records]
    summary = {"minimum": None if best is None else {"n": best.n, "d_star": best.d_star,
                                                     "cost_ratio": best.cost_ratio}}
    return columns, rows, summary


COMMANDS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "ramanujan": cmd_ramanujan,
    "tradeoff": cmd_tradeoff,
    "budget": cmd_budget,
}


def fmt_number(x):
    """12 significant digits; NaN/None become empty in CSV and null in JSON."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return None if not math.isfinite(x) else float(f"{float(x):.12g}")
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return fmt_number(obj)


def _csv_cell(x) -> str:
    x = fmt_number(x)
    if x is None:
        return "nan"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def render(cfg, columns, rows, summary, fmt, timestamp) -> str:
    config = {k: v for k, v in cfg.items() if k != "out"}
    if fmt == "structured":
        doc = {
            "config": _jsonable(config),
            "seed": cfg["seed"],
            "columns": columns,
            "rows": _jsonable(rows),
            "summary": _jsonable(summary),
            "generated_at": timestamp,
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# config: {json.dumps(_jsonable(config), sort_keys=True)}\n")
    buf.write(f"# seed: {cfg['seed']}\n")
    buf.write(f"# summary: {json.dumps(_jsonable(summary), sort_keys=True)}\n")
    buf.write(f"# generated_at: {timestamp}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(x) for x in row])
    return buf.getvalue()


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
        if cfg["format"] not in ("csv", "structured"):
            raise ConfigError(f"unknown format {cfg['format']!r}")
        columns, rows, summary = COMMANDS[cfg["command"]](cfg)
    except ConfigError as exc:
        print(f"collabest: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CollabError, ValueError) as exc:
        print(f"collabest: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    text = render(cfg, columns, rows, summary, cfg["format"],
                  datetime.now(timezone.utc).isoformat(timespec="seconds"))
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
