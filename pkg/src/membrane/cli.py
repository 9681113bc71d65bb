"""Command-line entry point: validate | solve | trace | verify | sweep | report.

Configuration is INI text with sections [datum], [solver], [verify],
[sweep]; run output is a directory of versioned CSVs plus a key=value
report.  Identical config yields byte-identical output.  Exit codes:
0 success / all checks pass, 1 check failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import configparser
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .core import CharCurve, CharFamily, BlowupReport, InitialDatum, RunStatus, UVState
from .initdata import (DEFAULT_FAMILY, check_assumptions, load_table,
                       make_family)
from .solver import Solution, SolverParams, monitor_invariants, run, _f_clamped
from .tracer import collision_time, trace, tstar_bound
from .verify import run_property_suite

SCHEMA_COMMENT = "# schema_version=1"
SNAPSHOT_HEADER = ("t,r,u,v,dv_plus,dv_minus,Rt_plus,Rt_minus,F,"
                   "delta_reconstructed")
CURVE_HEADER = "family,foot,t,r"


class UsageError(Exception):
    """Input/config problems; mapped to exit code 2."""


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------

CONFIG_KEYS = {
    "datum": {
        "kind": "family | table (default family)",
        "table": "path to a two-column (r, u_bar) text table (kind=table)",
        "r1": "left radius (family; default %(r1)s)" % DEFAULT_FAMILY,
        "r2": "right radius (family; default %(r2)s)" % DEFAULT_FAMILY,
        "v0": "initial v level (default %(v0)s)" % DEFAULT_FAMILY,
        "drop": "height of the steep drop (family; default %(drop)s)" % DEFAULT_FAMILY,
        "width": "half-width of the drop (family; default %(width)s)" % DEFAULT_FAMILY,
        "level": "u_bar value at r1 before the background slope (default %(level)s)" % DEFAULT_FAMILY,
        "beta": "A2 coefficient beta >= 1 (default 1)",
        "eta1": "left C0 foot (table data; family sets it automatically)",
        "eta2": "right C0 foot (table data; family sets it automatically)",
    },
    "solver": {
        "grid_n": "grid points (default 1024)",
        "cfl": "CFL number (default 0.4)",
        "v_max_stop": "stop when max v reaches this (default 1e3)",
        "delta_min_stop": "stop when delta <= this * (1+F)^2 (default 1e-6)",
        "t_max": "time horizon (default 10)",
        "snapshot_stride": "record every k-th step (default 1)",
        "alpha": "invariant-region alpha >= 1 (default 1)",
        "limiter": "minmod | none (default minmod)",
    },
    "verify": {
        "alpha": "alpha for the invariant checks (default 1)",
        "stride_t": "snapshot subsample stride (default 4)",
        "stride_r": "grid subsample stride (default 4)",
        "full": "true disables subsampling (default false)",
    },
    "sweep": {
        "drop": "comma list of drop values",
        "width": "comma list of width values",
        "v0": "comma list of v0 values",
    },
}


def config_reference() -> str:
    lines = ["configuration keys (INI sections):"]
    for section, keys in CONFIG_KEYS.items():
        lines.append(f"[{section}]")
        for key, doc in keys.items():
            lines.append(f"  {key} = ...  {doc}")
    return "\n".join(lines)


def _read_config(path) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e}")
    except configparser.Error as e:
        raise UsageError(f"malformed config {path}: {e}")
    for section in cp.sections():
        if section not in CONFIG_KEYS:
            raise UsageError(f"unknown config section [{section}]")
        for key in cp[section]:
            if key not in CONFIG_KEYS[section]:
                raise UsageError(f"unknown config key '{key}' in [{section}]")
    return cp


def datum_from_config(cp: configparser.ConfigParser) -> InitialDatum:
    sec = cp["datum"] if cp.has_section("datum") else {}
    kind = sec.get("kind", "family")
    if kind == "family":
        kwargs = dict(DEFAULT_FAMILY)
        for key in ("r1", "r2", "v0", "drop", "width", "level"):
            if key in sec:
                kwargs[key] = float(sec[key])
        beta = float(sec.get("beta", "1.0"))
        return make_family(beta=beta, **kwargs)
    if kind == "table":
        if "table" not in sec:
            raise UsageError("missing config key 'table' in [datum]")
        try:
            prof = load_table(sec["table"])
        except Exception as e:
            raise UsageError(f"cannot load table {sec['table']!r}: {e}")
        for key in ("r1", "r2", "v0", "eta1", "eta2"):
            if key not in sec:
                raise UsageError(f"missing config key '{key}' in [datum]")
        return InitialDatum(r1=float(sec["r1"]), r2=float(sec["r2"]),
                            v0=float(sec["v0"]), u_bar=prof,
                            beta=float(sec.get("beta", "1.0")),
                            eta1=float(sec["eta1"]), eta2=float(sec["eta2"]))
    raise UsageError(f"unknown datum kind {kind!r}")


def params_from_config(cp: configparser.ConfigParser) -> SolverParams:
    sec = cp["solver"] if cp.has_section("solver") else {}
    try:
        return SolverParams(
            cfl=float(sec.get("cfl", "0.4")),
            grid_n=int(sec.get("grid_n", "1024")),
            v_max_stop=float(sec.get("v_max_stop", "1e3")),
            delta_min_stop=float(sec.get("delta_min_stop", "1e-6")),
            t_max=float(sec.get("t_max", "10.0")),
            snapshot_stride=int(sec.get("snapshot_stride", "1")),
            alpha=float(sec.get("alpha", "1.0")),
            limiter=sec.get("limiter", "minmod"),
        )
    except ValueError as e:
        raise UsageError(f"bad [solver] config: {e}")


# ---------------------------------------------------------------------------
# CSV I/O
# ---------------------------------------------------------------------------

def write_snapshots_csv(path, sol: Solution, alpha: float) -> None:
    with open(path, "w") as fh:
        fh.write(SCHEMA_COMMENT + "\n")
        fh.write(SNAPSHOT_HEADER + "\n")
        for s in sol.snapshots:
            mon = monitor_invariants(s, alpha)
            f = _f_clamped(s.u_field, s.v_field)
            delta = (1.0 + f) ** 2 / s.v_field ** 2
            for i in range(s.n):
                fh.write(",".join(_fmt(x) for x in (
                    s.time, s.grid[i], s.u_field[i], s.v_field[i],
                    mon["dv_plus"][i], mon["dv_minus"][i],
                    mon["rt_plus"][i], mon["rt_minus"][i],
                    f[i], delta[i])) + "\n")


def write_curves_csv(path, curves: List[CharCurve]) -> None:
    with open(path, "w") as fh:
        fh.write(SCHEMA_COMMENT + "\n")
        fh.write(CURVE_HEADER + "\n")
        for c in curves:
            for t, r in zip(c.t, c.r):
                fh.write(f"{c.family.value},{_fmt(c.foot)},{_fmt(t)},{_fmt(r)}\n")


def _check_schema(path, first: str, header: str, expected: str) -> None:
    if first.strip() != SCHEMA_COMMENT.strip("# ").strip() and \
            first.strip() != SCHEMA_COMMENT:
        raise UsageError(f"{path}: missing '{SCHEMA_COMMENT}' comment line")
    if header.strip() != expected:
        raise UsageError(f"{path}: unexpected header {header.strip()!r}")


def read_snapshots_csv(path) -> List[UVState]:
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}")
    if len(lines) < 3:
        raise UsageError(f"{path}: empty snapshots file")
    _check_schema(path, lines[0], lines[1], SNAPSHOT_HEADER)
    cols = len(SNAPSHOT_HEADER.split(","))
    rows = []
    for ln, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != cols:
            raise UsageError(f"{path}: corrupt row at line {ln} "
                             f"({len(parts)} fields, expected {cols})")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise UsageError(f"{path}: corrupt row at line {ln} (non-numeric field)")
    data = np.array(rows)
    snapshots = []
    # rows are grouped by snapshot time, in time order
    change = np.where(np.diff(data[:, 0]) != 0.0)[0] + 1
    for block in np.split(data, change):
        t = float(block[0, 0])
        r = block[:, 1]
        snapshots.append(UVState(time=t, grid=r, u_field=block[:, 2],
                                 v_field=block[:, 3],
                                 left_boundary=float(r[0]),
                                 right_boundary=float(r[-1])))
    return snapshots


def read_curves_csv(path) -> Dict[Tuple[str, float], CharCurve]:
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}")
    if len(lines) < 2:
        raise UsageError(f"{path}: empty curves file")
    _check_schema(path, lines[0], lines[1], CURVE_HEADER)
    buckets: Dict[Tuple[str, float], List[Tuple[float, float]]] = {}
    for ln, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise UsageError(f"{path}: corrupt row at line {ln}")
        try:
            fam, foot, t, r = parts[0], float(parts[1]), float(parts[2]), float(parts[3])
        except ValueError:
            raise UsageError(f"{path}: corrupt row at line {ln} (non-numeric field)")
        buckets.setdefault((fam, foot), []).append((t, r))
    out = {}
    for (fam, foot), pts in buckets.items():
        pts.sort()
        out[(fam, foot)] = CharCurve(CharFamily(fam), foot,
                                     np.array([p[0] for p in pts]),
                                     np.array([p[1] for p in pts]))
    return out


def write_report_txt(path, sol: Solution) -> None:
    with open(path, "w") as fh:
        fh.write(SCHEMA_COMMENT + "\n")
        for key, val in sol.report.to_dict().items():
            fh.write(f"{key} = {val}\n")


# ---------------------------------------------------------------------------
# Run directory round trip
# ---------------------------------------------------------------------------

def save_run(out_dir, sol: Solution, cp: configparser.ConfigParser,
             alpha: float) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_snapshots_csv(out / "snapshots.csv", sol, alpha)
    curves = [sol.boundary_plus, sol.boundary_minus]
    if sol.c0_eta1 is not None:
        curves += [sol.c0_eta1, sol.c0_eta2]
    write_curves_csv(out / "curves.csv", curves)
    write_report_txt(out / "report.txt", sol)
    with open(out / "run_config.ini", "w") as fh:
        cp.write(fh)


def load_run(run_dir) -> Solution:
    """Rebuild a Solution from a run directory.

    The mass series (and hence the conservation drift) is recomputed from
    the stored fields against the datum's exact initial mass, so tampered
    field data cannot pass verification on the strength of a stale report.
    """
    run_dir = Path(run_dir)
    snap_path = run_dir / "snapshots.csv"
    if not snap_path.exists():
        raise UsageError(f"{run_dir}: no snapshots.csv")
    cp = _read_config(run_dir / "run_config.ini")
    d = datum_from_config(cp)
    params = params_from_config(cp)
    snapshots = read_snapshots_csv(snap_path)
    curves = read_curves_csv(run_dir / "curves.csv")
    bp = curves.get(("plus", d.r1))
    bm = curves.get(("minus", d.r2))
    c01 = curves.get(("zero", d.eta1))
    c02 = curves.get(("zero", d.eta2))
    if bp is None or bm is None:
        raise UsageError(f"{run_dir}: curves.csv lacks the boundary curves")

    # recomputed conservation series between the C0 curves
    from .solver import _mass_between
    m0 = 0.5 * d.v0 * (d.eta2 ** 2 - d.eta1 ** 2)
    mass_t, mass_m, drift = [], [], 0.0
    if c01 is not None and c02 is not None:
        for j, s in enumerate(snapshots):
            a = float(c01.position(s.time))
            b = float(c02.position(s.time))
            m = _mass_between(s.grid, s.v_field, min(a, b), max(a, b))
            mass_t.append(s.time)
            mass_m.append(m)
            # the initial snapshot anchors the check even when v0 > 100,
            # otherwise scaled-up field data would dodge the regime guard
            if j == 0 or float(s.v_field.max()) <= 100.0:
                drift = max(drift, abs(m - m0) / m0)

    val = check_assumptions(d)
    last = snapshots[-1]
    f_last = _f_clamped(last.u_field, last.v_field)
    vmaxes = [float(s.v_field.max()) for s in snapshots]
    k_max = int(np.argmax(vmaxes))
    s_max = snapshots[k_max]
    blew = vmaxes[k_max] >= params.v_max_stop
    report = BlowupReport(
        t_blow_observed=s_max.time if blew else None,
        t_blow_uncertainty=None,
        t_star_bound=val.t_star_bound if val.t_star_bound else float("nan"),
        v_max=vmaxes[k_max],
        v_max_location=float(s_max.grid[int(np.argmax(s_max.v_field))]),
        delta_min_reconstructed=float(np.min((1.0 + f_last) ** 2 / last.v_field ** 2)),
        mass_drift_rel=drift,
        invariant_violations=0,
        run_status=RunStatus.BLEW_UP if blew else RunStatus.MAX_TIME_REACHED,
    )
    return Solution(snapshots=snapshots, boundary_plus=bp, boundary_minus=bm,
                    c0_eta1=c01, c0_eta2=c02, report=report, datum=d,
                    params=params, mass_times=np.array(mass_t),
                    mass_values=np.array(mass_m))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    cp = _read_config(args.config)
    try:
        d = datum_from_config(cp)
    except ValueError as e:
        # family constructor rejects A-failing parameters with the reason
        _say(args, f"datum rejected: {e}")
        return 1
    rep = check_assumptions(d)
    _say(args, "assumption checks:")
    for key, val in rep.to_dict().items():
        _say(args, f"  {key} = {val}")
    if rep.t_star_bound is not None:
        _say(args, f"t_star_bound = {rep.t_star_bound!r}")
    return 0 if rep.all_ok else 1


def cmd_solve(args) -> int:
    cp = _read_config(args.config)
    d = datum_from_config(cp)
    params = params_from_config(cp)
    sol = run(d, params, force=args.force)
    out = _out_dir(args)
    save_run(out, sol, cp, params.alpha)
    _say(args, f"run written to {out}")
    for key, val in sol.report.to_dict().items():
        _say(args, f"  {key} = {val}")
    return 0


def cmd_trace(args) -> int:
    sol = load_run(args.run_dir)
    try:
        curve = trace(args.family, args.foot, sol)
    except ValueError as e:
        raise UsageError(str(e))
    out = Path(args.run_dir) / "traces.csv"
    existing: List[CharCurve] = []
    if out.exists():
        existing = list(read_curves_csv(out).values())
    write_curves_csv(out, existing + [curve])
    _say(args, f"traced {curve.t.size} points; appended to {out}")
    if args.family == "zero":
        ct = collision_time(sol, sol.datum.eta1, sol.datum.eta2)
        _say(args, f"collision_time(eta1, eta2) = {ct!r}")
    return 0


def cmd_verify(args) -> int:
    sol = load_run(args.run_dir)
    fine = load_run(args.fine_dir) if args.fine_dir else None
    cp = _read_config(Path(args.run_dir) / "run_config.ini")
    sec = cp["verify"] if cp.has_section("verify") else {}
    rep = run_property_suite(
        sol,
        alpha=float(sec.get("alpha", "1.0")),
        fine=fine,
        stride_t=int(sec.get("stride_t", "4")),
        stride_r=int(sec.get("stride_r", "4")),
        full=sec.get("full", "false").lower() in ("1", "true", "yes"),
    )
    _say(args, rep.to_text())
    return 0 if rep.all_pass else 1


def _sweep_one(task):
    """One sweep cell: returns a result row (runs in a worker process)."""
    fam_kwargs, solver_kwargs = task
    try:
        d = make_family(**fam_kwargs)
    except ValueError as e:
        return dict(params=fam_kwargs, ok=False, reason=str(e))
    sol = run(d, SolverParams(**solver_kwargs))
    ts = tstar_bound(d)
    tb = sol.report.t_blow_observed
    return dict(params=fam_kwargs, ok=True, t_blow=tb, t_star=ts,
                ratio=(tb / ts if tb is not None else None),
                status=sol.report.run_status.value)


def cmd_sweep(args) -> int:
    cp = _read_config(args.config)
    if not cp.has_section("sweep"):
        raise UsageError("missing config section [sweep]")
    sec = cp["sweep"]
    axes = {}
    for key in ("drop", "width", "v0"):
        if key in sec:
            axes[key] = [float(x) for x in sec[key].split(",")]
    if not axes:
        raise UsageError("[sweep] needs at least one of drop, width, v0")
    base = dict(DEFAULT_FAMILY)
    if cp.has_section("datum"):
        for key in ("r1", "r2", "v0", "drop", "width", "level"):
            if key in cp["datum"]:
                base[key] = float(cp["datum"][key])
    params = params_from_config(cp)
    solver_kwargs = dict(cfl=params.cfl, grid_n=params.grid_n,
                         v_max_stop=params.v_max_stop,
                         delta_min_stop=params.delta_min_stop,
                         t_max=params.t_max,
                         snapshot_stride=params.snapshot_stride,
                         alpha=params.alpha, limiter=params.limiter)
    keys = sorted(axes)
    grids = [axes[k] for k in keys]
    tasks = []
    for combo in np.stack(np.meshgrid(*grids, indexing="ij"), -1).reshape(-1, len(keys)):
        fam = dict(base)
        fam.update({k: float(c) for k, c in zip(keys, combo)})
        tasks.append((fam, solver_kwargs))
    tasks.sort(key=lambda t: tuple(t[0][k] for k in keys))

    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as ex:
            results = list(ex.map(_sweep_one, tasks))
    else:
        results = [_sweep_one(t) for t in tasks]

    header = keys + ["checks", "t_blow", "t_star", "ratio"]
    _say(args, "  ".join(f"{h:>12}" for h in header))
    for res in results:
        cells = [f"{res['params'][k]:>12g}" for k in keys]
        if not res["ok"]:
            cells += [f"{'fail':>12}", f"{'n/a':>12}", f"{'n/a':>12}", f"{'n/a':>12}"]
        else:
            tb = res["t_blow"]
            cells += [f"{'pass':>12}",
                      f"{tb:>12.6g}" if tb is not None else f"{'none':>12}",
                      f"{res['t_star']:>12.6g}",
                      f"{res['ratio']:>12.6g}" if res["ratio"] is not None else f"{'n/a':>12}"]
        _say(args, "  ".join(cells))
    return 0


def cmd_report(args) -> int:
    if args.config_reference:
        print(config_reference())
        return 0
    if not args.run_dir:
        raise UsageError("report needs a run directory (or --config-reference)")
    path = Path(args.run_dir) / "report.txt"
    if not path.exists():
        raise UsageError(f"{args.run_dir}: no report.txt")
    print(path.read_text().rstrip())
    return 0


# ---------------------------------------------------------------------------
# Plumbing
# ---------------------------------------------------------------------------

def _say(args, text: str) -> None:
    if not getattr(args, "quiet", False):
        print(text)


def _out_dir(args) -> str:
    env = os.environ.get("MEMBRANE_OUT")
    if env:
        return env
    return args.out or "."


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="membrane",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=None, help="output directory "
                    "(MEMBRANE_OUT overrides)")
    ap.add_argument("--quiet", action="store_true")
    ap.add_argument("--threads", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check A1-A3 on a configured datum")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="run the solver, write the run directory")
    p.add_argument("config")
    p.add_argument("--force", action="store_true",
                   help="run even if the datum fails the assumptions")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("trace", help="trace one characteristic through a run")
    p.add_argument("run_dir")
    p.add_argument("--family", choices=["plus", "minus", "zero"], required=True)
    p.add_argument("--foot", type=float, required=True)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", help="verify a run directory")
    p.add_argument("run_dir")
    p.add_argument("fine_dir", nargs="?", default=None,
                   help="optional doubled-resolution run for refinement ratios")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="parameter sweep over the family")
    p.add_argument("config")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="print a run's report")
    p.add_argument("run_dir", nargs="?", default=None)
    p.add_argument("--config-reference", action="store_true",
                   help="print the documented configuration keys")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
