"""Command-line front end.

Every subcommand reads the shared JSON config schema (``--config``), applies
its convenience flags on top, validates the whole thing, runs one experiment
and writes ``<experiment>.csv`` / ``<experiment>.json`` into the output
directory.  Exit codes: 0 success, 2 configuration error, 3 numerical
degeneracy.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import EXPERIMENTS, RunConfig, load_config, parse_config
from .errors import ConfigError, DegeneracyError, DomainError, PreconditionError
from .kernel import kernel_at
from .measure import Interval, dominates
from .quadrature import composite_scheme
from .recurrence import nevai_diagnostic, regularity_diagnostic, stieltjes
from .reference import sinc_generator_derivative
from .universality import (
    ConvergenceReport,
    ScalingConfig,
    christoffel_sweep,
    correlation_sweep,
    localization_check,
    localization_decay,
    lp_error,
    tau,
    tau_sweep,
    universality_error,
)

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE = 0, 2, 3


@dataclass
class Table:
    """Rows destined for one CSV file plus the JSON metadata that goes with it."""

    name: str
    header: list
    rows: list
    metadata: dict = field(default_factory=dict)
    summary: str = ""
    extra: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"columns": self.header, "rows": [list(r) for r in self.rows],
               "metadata": self.metadata}
        doc.update(self.extra)
        return json.dumps(doc, indent=2, sort_keys=True)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _from_report(name, report: ConvergenceReport, cfg: RunConfig, primary: str) -> Table:
    meta = dict(report.metadata, config=cfg.to_dict())
    ns, vals = report.series(primary)
    rate = report.rate(primary)
    summary = f"{name}: final {primary}={vals[-1]:.6g} at n={ns[-1]}"
    summary += f", empirical rate={rate:.3f}" if rate is not None else ", empirical rate=n/a"
    extra = {"rate_estimates": [{"error_name": n, "rate": r} for n, r in report.rate_estimates]}
    return Table(name, ["n", "error_name", "value"], list(report.rows), meta, summary, extra)


def _scheme(cfg, m):
    return composite_scheme(m, cfg.segments, cfg.points_per_segment)


def _table(cfg, m, N):
    return stieltjes(m, N, _scheme(cfg, m))


def _scaling(cfg):
    p = cfg.params
    return ScalingConfig.build(cfg.measure, Interval(*p["interval"]), p["n_schedule"],
                               x_points=p["x_points"], A=float(p["A"]), ab_points=p["ab_points"],
                               scaling_mode=p.get("scaling_mode", "kernel"),
                               x_grid=p.get("x_grid"))


def run_recurrence(cfg):
    p = cfg.params
    t = _table(cfg, cfg.measure, p["N"])
    roots = regularity_diagnostic(t)
    rows = [(n, a, b, float(g), float(1.0 / g)) for (n, a, b), g in zip(t.rows(), roots)]
    a_gap, b_gap = nevai_diagnostic(t, p["tail_start"])
    meta = {"config": cfg.to_dict(), "gamma0": t.gamma0,
            "nevai": {"tail_start": p["tail_start"], "sup_a_gap": a_gap, "sup_b_gap": b_gap}}
    summary = (f"recurrence: N={p['N']}, gamma_N^(1/N)={roots[-1]:.6g}, "
               f"sup|a_n-1/2|={a_gap:.3g}, sup|b_n|={b_gap:.3g} for n>={p['tail_start']}")
    return Table("recurrence", ["n", "a_n", "b_n", "gamma_root", "gamma_root_inv"],
                 rows, meta, summary)


def run_kernel(cfg):
    n = cfg.params["n"]
    t = _table(cfg, cfg.measure, n)
    rows = []
    for x, y in cfg.params["points"]:
        kv = kernel_at(t, n, x, y, cfg.measure)
        rows.append((n, kv.x, kv.y, kv.K, kv.K_tilde, kv.cd_residual))
    worst = max((r[5] for r in rows if r[5] is not None), default=None)
    summary = f"kernel: n={n}, {len(rows)} point(s), max cd_residual=" + (
        f"{worst:.3g}" if worst is not None else "n/a")
    return Table("kernel", ["n", "x", "y", "K", "K_tilde", "cd_residual"], rows,
                 {"config": cfg.to_dict()}, summary)


def run_christoffel(cfg):
    p = cfg.params
    t = _table(cfg, cfg.measure, max(p["n_schedule"]))
    rep = christoffel_sweep(cfg.measure, Interval(*p["interval"]), p["n_schedule"], t,
                            p["x_points"], float(p["A"]), p["ab_points"])
    return _from_report("christoffel", rep, cfg, "limit_error")


def run_universality(cfg):
    sc = _scaling(cfg)
    t = _table(cfg, cfg.measure, max(sc.n_schedule))
    return _from_report("universality", universality_error(sc, t), cfg, "sup_error")


def run_lp(cfg):
    sc = _scaling(cfg)
    t = _table(cfg, cfg.measure, max(sc.n_schedule))
    rep = lp_error(sc, t, float(cfg.params["p"]), cfg.params["variant"])
    return _from_report("lp", rep, cfg, "max_over_ab")


def run_localize(cfg):
    p = cfg.params
    m1, m2 = cfg.measure, cfg.comparison
    N = max(list(p["n_schedule"]) + list(p["check_degrees"]))
    t1, t2 = _table(cfg, m1, N), _table(cfg, m2, N)
    J = Interval(*p["interval"])
    report = ConvergenceReport(metadata={"driver": "localize"})
    ran = []
    grid = np.linspace(-0.999, 0.999, 4001)
    if dominates(m1, m2, grid)[0]:
        g = np.linspace(*p["check_range"], p["check_points"])
        for n in p["check_degrees"]:
            lhs, rhs = localization_check(m1, m2, t1, t2, n, g[:, None], g[None, :])
            report.add(n, "min_slack", np.min(rhs - lhs))
        ran.append("inequality")
    try:
        decay = localization_decay(m1, m2, t1, t2, J, float(p["A"]), p["n_schedule"],
                                   p["x_points"], p["ab_points"])
    except PreconditionError:
        if not ran:
            raise PreconditionError(
                "localize: the measures neither satisfy mu <= mu* nor agree on the interval")
    else:
        report.rows += decay.rows
        ran.append("decay")
    report.metadata["checks"] = ran
    primary = "sup_diff_over_n" if "decay" in ran else "min_slack"
    return _from_report("localize", report, cfg, primary)


def run_tau(cfg):
    rmax = cfg.params["rmax"]
    rows = [(r, s, tau(r, s), sinc_generator_derivative(r, s))
            for r in range(rmax + 1) for s in range(rmax + 1 - r)]
    meta = {"config": cfg.to_dict()}
    summary = f"tau: {len(rows)} coefficients for r+s<={rmax}"
    lim = cfg.params["limit"]
    extra = {}
    if lim is not None:
        t = _table(cfg, cfg.measure, max(lim["n_schedule"]))
        rep = tau_sweep(cfg.measure, lim["n_schedule"], lim["x"], lim["r"], lim["s"], t)
        extra["limit_rows"] = [{"n": n, "error_name": nm, "value": v} for n, nm, v in rep.rows]
        summary += f"; limit error at n={rep.rows[-1][0]}: {rep.rows[-1][2]:.6g}"
    return Table("tau", ["r", "s", "tau", "generator"], rows, meta, summary, extra)


def run_correlate(cfg):
    p = cfg.params
    t = _table(cfg, cfg.measure, max(p["n_schedule"]))
    rep = correlation_sweep(cfg.measure, p["n_schedule"], float(p["x"]), p["xis"], t)
    return _from_report("correlate", rep, cfg, "det_error")


RUNNERS = {
    "recurrence": run_recurrence,
    "kernel": run_kernel,
    "christoffel": run_christoffel,
    "universality": run_universality,
    "localize": run_localize,
    "lp": run_lp,
    "tau": run_tau,
    "correlate": run_correlate,
}


def execute(cfg: RunConfig) -> Table:
    return RUNNERS[cfg.experiment](cfg)


def write_outputs(table: Table, out_dir, formats) -> list:
    """Write the table; on any failure remove whatever was already written."""
    out = Path(out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for fmt in formats:
            path = out / f"{table.name}.{fmt}"
            path.write_text(table.to_csv() if fmt == "csv" else table.to_json())
            written.append(path)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


# ---------------------------------------------------------------------------
# argument handling


def _measure_flags(p):
    g = p.add_argument_group("measure")
    g.add_argument("--family", help="weight family (legendre, chebyshev1, jacobi, constant, piecewise)")
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--c", type=float, help="constant weight value")
    g.add_argument("--breakpoints", type=float, nargs="+")
    g.add_argument("--values", type=float, nargs="+")
    g.add_argument("--point-mass", type=float, nargs=2, action="append", metavar=("X", "MASS"))
    g.add_argument("--comparison", help="comparison measure as an inline JSON object")


def _grid_flags(p, schedule=True):
    p.add_argument("--interval", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("-A", type=float, dest="A")
    p.add_argument("--x-points", type=int)
    p.add_argument("--ab-points", type=int)
    if schedule:
        p.add_argument("--n-schedule", type=int, nargs="+")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orthokernel", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=("csv", "json", "both"))
    common.add_argument("--segments", type=int)
    common.add_argument("--points-per-segment", type=int)

    sub.add_parser("run", parents=[common], help="run the experiment named in --config")
    p = sub.add_parser("recurrence", parents=[common], help="dump recurrence coefficients")
    _measure_flags(p)
    p.add_argument("-N", type=int, dest="N")
    p.add_argument("--tail-start", type=int)
    p = sub.add_parser("kernel", parents=[common], help="K_n, normalized K_n and CD residual")
    _measure_flags(p)
    p.add_argument("-n", type=int, dest="n")
    p.add_argument("--x", type=float, action="append")
    p.add_argument("--y", type=float, action="append")
    for name, helptext in (("christoffel", "Christoffel asymptotics sweep"),
                           ("universality", "bulk universality sweep"),
                           ("localize", "localization inequality and decay"),
                           ("lp", "L_p universality integrals")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _measure_flags(p)
        _grid_flags(p)
        if name == "universality":
            p.add_argument("--scaling-mode", choices=("kernel", "arcsine"))
        if name == "lp":
            p.add_argument("-p", type=float, dest="p")
            p.add_argument("--variant", choices=("normalized", "unnormalized", "arcsine"))
    p = sub.add_parser("tau", parents=[common], help="tau_{r,s} table and derivative-kernel limits")
    _measure_flags(p)
    p.add_argument("--rmax", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--x", type=float)
    p.add_argument("--n-schedule", type=int, nargs="+")
    p = sub.add_parser("correlate", parents=[common], help="correlation determinant limits")
    _measure_flags(p)
    p.add_argument("--x", type=float)
    p.add_argument("--xis", type=float, nargs="+")
    p.add_argument("--n-schedule", type=int, nargs="+")
    return parser


def _measure_from_flags(args, base):
    fam = getattr(args, "family", None)
    m = dict(base) if base else {"family": "legendre", "params": {}}
    if fam:
        params = {}
        for key in ("alpha", "beta", "c"):
            if getattr(args, key, None) is not None:
                params[key] = getattr(args, key)
        if args.breakpoints is not None:
            params["breakpoints"] = args.breakpoints
        if args.values is not None:
            params["values"] = args.values
        m = {"family": fam, "params": params, "point_masses": m.get("point_masses", [])}
    if getattr(args, "point_mass", None):
        m["point_masses"] = list(m.get("point_masses") or []) + [list(pm) for pm in args.point_mass]
    return m


def config_from_args(args) -> dict:
    doc = load_config(args.config) if args.config else {}
    if args.command == "run":
        if not args.config:
            raise ConfigError("run needs --config")
    else:
        doc["experiment"] = args.command
        doc["measure"] = _measure_from_flags(args, doc.get("measure"))
        if getattr(args, "comparison", None):
            try:
                doc["comparison"] = json.loads(args.comparison)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"--comparison is not valid JSON: {exc}") from None
    params = dict(doc.get("params") or {})
    simple = {"N": "N", "tail_start": "tail_start", "n": "n", "A": "A", "x_points": "x_points",
              "ab_points": "ab_points", "n_schedule": "n_schedule", "scaling_mode": "scaling_mode",
              "p": "p", "variant": "variant", "rmax": "rmax", "xis": "xis"}
    for attr, key in simple.items():
        if getattr(args, attr, None) is not None:
            params[key] = getattr(args, attr)
    if getattr(args, "interval", None) is not None:
        params["interval"] = list(args.interval)
    if args.command == "kernel" and (args.x or args.y):
        xs, ys = args.x or [0.0], args.y or [0.0]
        if len(ys) == 1:
            ys = ys * len(xs)
        if len(xs) == 1:
            xs = xs * len(ys)
        if len(xs) != len(ys):
            raise ConfigError("--x and --y must be given the same number of times")
        params["points"] = [list(q) for q in zip(xs, ys)]
    if args.command == "correlate" and args.x is not None:
        params["x"] = args.x
    if args.command == "tau" and any(getattr(args, k) is not None for k in ("r", "s", "x")):
        lim = dict(params.get("limit") or {})
        for key in ("r", "s", "x"):
            if getattr(args, key) is not None:
                lim[key] = getattr(args, key)
        if args.n_schedule is not None:
            lim["n_schedule"] = args.n_schedule
            params.pop("n_schedule", None)
        params["limit"] = lim
    elif args.command == "tau":
        params.pop("n_schedule", None)
    if params:
        doc["params"] = params
    quad = dict(doc.get("quadrature") or {})
    if args.segments is not None:
        quad["segments"] = args.segments
    if args.points_per_segment is not None:
        quad["points_per_segment"] = args.points_per_segment
    if quad:
        doc["quadrature"] = quad
    out = dict(doc.get("output") or {})
    if args.out is not None:
        out["dir"] = args.out
    if args.format is not None:
        out["formats"] = ["csv", "json"] if args.format == "both" else [args.format]
    if out:
        doc["output"] = out
    return doc


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(config_from_args(args))
        table = execute(cfg)
        if cfg.out_dir is not None:
            write_outputs(table, cfg.out_dir, cfg.formats)
            print(table.summary)
        elif cfg.experiment in ("recurrence", "kernel", "tau"):
            sys.stdout.write(table.to_csv())
        else:
            print(table.summary)
    except (ConfigError, DomainError, PreconditionError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegeneracyError as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
