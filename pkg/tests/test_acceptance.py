"""Acceptance gate: one test (one pass/fail line under -v) per criterion.

Each criterion is checked at its stated tolerance against the shared
default-family runs; failures carry the measured numbers in the assert
message.
"""
import time

import numpy as np
import pytest

from membrane.charcalc import coefficients, states_from_fields
from membrane.cli import main
from membrane.core import InitialDatum, Profile
from membrane.solver import SolverParams, monitor_invariants, run
from membrane.transform import (discriminant, f_partials, f_value, s_to_uv,
                                sample_spairs, sample_valid_region)
from membrane.verify import _median_residuals, run_property_suite


def _line(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_acceptance_01_transform_exactness():
    t0 = time.perf_counter()
    pairs = sample_spairs(10_000, s_max=3.0, seed=0, min_gap=1e-3)
    worst_f = 0.0
    worst_q = 0.0
    for s in pairs:
        p = s_to_uv(s)
        f = f_value(p.u, p.v)
        target = min(s.s1 * s.s1, s.s2 * s.s2)
        worst_f = max(worst_f, abs(f - target) / target)
        q = p.v * p.v * (1.0 - p.u * p.u) - 1.0
        quartic = f * f - q * f + (p.u * p.v) ** 2
        worst_q = max(worst_q, abs(quartic) / (p.v * p.v))
    elapsed = time.perf_counter() - t0
    _line("acceptance-1 transform exactness",
          worst_f <= 1e-9 and worst_q <= 1e-9 and elapsed < 1.0,
          f"max rel err(F)={worst_f:.3g} max quartic/v^2={worst_q:.3g} "
          f"runtime={elapsed:.2f}s")


def test_acceptance_02_derivative_correctness():
    t0 = time.perf_counter()
    pts = sample_valid_region(1000, seed=7)
    h = 1e-6
    worst_fd = 0.0
    sign_bad = 0
    n_sign = 0
    for p in pts:
        if discriminant(p.u, p.v) > 0.1:
            fu, fv = f_partials(p.u, p.v)
            fdu = (f_value(p.u + h, p.v) - f_value(p.u - h, p.v)) / (2 * h)
            fdv = (f_value(p.u, p.v + h) - f_value(p.u, p.v - h)) / (2 * h)
            worst_fd = max(worst_fd,
                           abs(fu - fdu) / max(1.0, abs(fdu)),
                           abs(fv - fdv) / max(1.0, abs(fdv)))
        if p.u > 1e-6:
            n_sign += 1
            fu, _ = f_partials(p.u, p.v)
            if not fu < 0.0:
                sign_bad += 1
    elapsed = time.perf_counter() - t0
    _line("acceptance-2 derivative correctness",
          worst_fd <= 1e-5 and sign_bad == 0 and elapsed < 1.0,
          f"max rel FD mismatch={worst_fd:.3g} (tol 1e-5), "
          f"dF/du < 0 violated at {sign_bad}/{n_sign} points, "
          f"runtime={elapsed:.2f}s")


def test_acceptance_03_coefficient_signs():
    t0 = time.perf_counter()
    pts = sample_valid_region(1000, seed=7)
    mins = {k: np.inf for k in ("at12", "at22", "at13", "at23", "a13")}
    eq_worst = 0.0
    for p in pts:
        if p.u - 1.0 / p.v <= 1e-6:
            continue
        for alpha in (1.0, 1.5, 2.0, 5.0):
            c = coefficients(p, alpha)
            for k in mins:
                mins[k] = min(mins[k], getattr(c, k))
            eq_worst = max(eq_worst, abs(c.a13 - c.a23))
    elapsed = time.perf_counter() - t0
    ok = all(v > 0.0 for v in mins.values()) and eq_worst == 0.0 and elapsed < 1.0
    _line("acceptance-3 coefficient sign suite", ok,
          "mins " + " ".join(f"{k}={v:.3g}" for k, v in mins.items())
          + f" |a13-a23|={eq_worst:.3g} runtime={elapsed:.2f}s")


def test_acceptance_04_blowup_reproduction(sol1024, sol2048, run_times):
    rep = sol1024.report
    t1, t2 = rep.t_blow_observed, sol2048.report.t_blow_observed
    stable = abs(t1 - t2) / t2
    # v_max >= 1e3 is exactly delta <= 1e-6 (1 + F)^2 via delta = (1+F)^2/v^2
    ok = (rep.v_max >= 1e3
          and t1 is not None and t1 < rep.t_star_bound
          and stable <= 0.02
          and run_times[1024] < 60.0)
    _line("acceptance-4 blow-up reproduction", ok,
          f"v_max={rep.v_max:.4g} t_blow={t1:.5f} < t*={rep.t_star_bound:.5f}, "
          f"n=1024 vs 2048 shift={100 * stable:.2f}% (tol 2%), "
          f"runtime={run_times[1024]:.1f}s")


def test_acceptance_05_invariant_region(sol1024, datum):
    u1 = float(datum.u_bar(datum.r1))
    u2 = float(datum.u_bar(datum.r2))
    from membrane.solver import _f_clamped
    rt_margin = np.inf
    u_excess = 0.0
    for s in sol1024.snapshots:
        mon = monitor_invariants(s, 1.0, u_lower=u2, u_upper=u1)
        tol = 1e-4 * np.maximum(1.0, _f_clamped(s.u_field, s.v_field) / s.grid)
        rt_margin = min(rt_margin,
                        float(np.min(mon["rt_plus"] + tol)),
                        float(np.min(mon["rt_minus"] + tol)))
        u_excess = max(u_excess, mon["u_max"] - u1, u2 - mon["u_min"])
    _line("acceptance-5 invariant region",
          rt_margin >= 0.0 and u_excess <= 1e-6,
          f"min(Rt+tol)={rt_margin:.3g}, u excursion={u_excess:.3g} (tol 1e-6), "
          f"monitored points={sum(s.n for s in sol1024.snapshots)}")


def test_acceptance_06_conservation(sol1024):
    drift = sol1024.report.mass_drift_rel
    vmaxes = [float(s.v_field.max()) for s in sol1024.snapshots]
    regime = sum(1 for v in vmaxes if v <= 100.0)
    _line("acceptance-6 conservation", drift <= 1e-3 and regime > 0,
          f"relative drift={drift:.3g} (tol 1e-3) over {regime} snapshots "
          f"with max v <= 100")


def test_acceptance_07_residual_refinement(sol1024, sol2048):
    com_c, dec_c = _median_residuals(sol1024.snapshots, 4, 4)
    com_f, dec_f = _median_residuals(sol2048.snapshots, 4, 4)
    ratio_com = com_c / com_f
    ratio_dec = dec_c / dec_f
    # manufactured non-solution fields at comparable resolution
    r = np.linspace(1.0, 1.4, 1025)
    times = np.linspace(0.0, 0.02, 41)
    control = states_from_fields(lambda r, t: 0.2 + 0.1 * r,
                                 lambda r, t: 2.0 + 2.0 * t + 3.0 * r,
                                 r, times)
    com_n, dec_n = _median_residuals(control, 4, 4)
    ok = (ratio_com >= 1.7 and ratio_dec >= 1.7
          and com_n / com_c >= 1e2 and dec_n / dec_c >= 1e2)
    _line("acceptance-7 residual refinement and control", ok,
          f"refinement ratios com={ratio_com:.2f} dec={ratio_dec:.2f} "
          f"(tol 1.7); control/solution com={com_n / com_c:.3g} "
          f"dec={dec_n / dec_c:.3g} (tol 1e2)")


def test_acceptance_08_funnel_and_speed_bounds(sol1024):
    rep = run_property_suite(sol1024, alpha=1.0)
    by_name = {c.name: c for c in rep.checks}
    names = ("funnel_inequality", "speed_bound_plus", "speed_bound_minus",
             "lambda_minus_monotone_on_plus", "lambda_plus_monotone_on_minus",
             "c0_speed_sandwich", "nesting")
    bad = [n for n in names if not by_name[n].passed]
    _line("acceptance-8 funnel and speed bounds", not bad,
          "all curve inequalities hold" if not bad else f"failing: {bad}")


def test_acceptance_09_negative_controls(tmp_path, capsys):
    # constant u_bar rejected by the validate command with A2 named
    r = np.linspace(1.0, 2.0, 64)
    table = tmp_path / "const.txt"
    np.savetxt(table, np.column_stack([r, np.full_like(r, 0.3)]), header="r u")
    cfg = tmp_path / "const.ini"
    cfg.write_text(f"[datum]\nkind = table\ntable = {table}\nr1 = 1.0\n"
                   "r2 = 2.0\nv0 = 10.0\neta1 = 1.3\neta2 = 1.6\n")
    validate_rc = main(["validate", str(cfg)])
    validate_out = capsys.readouterr().out

    # forced run on A2-violating data develops invariant violations
    prof = Profile(lambda x: 0.2 + 0.1 * (np.asarray(x, dtype=float) - 1.0),
                   lambda x: 0.1 + 0.0 * np.asarray(x))
    d = InitialDatum(r1=1.0, r2=2.0, v0=10.0, u_bar=prof, eta1=1.3, eta2=1.6)
    forced = run(d, SolverParams(grid_n=128, t_max=0.05, snapshot_stride=4),
                 force=True)

    # tampered snapshots fail the verify command
    fam_cfg = tmp_path / "fam.ini"
    fam_cfg.write_text("[datum]\nkind = family\n[solver]\ngrid_n = 256\n"
                       "snapshot_stride = 4\n")
    run_dir = tmp_path / "run"
    assert main(["--quiet", "--out", str(run_dir), "solve", str(fam_cfg)]) == 0
    lines = (run_dir / "snapshots.csv").read_text().splitlines()
    out = lines[:2]
    for line in lines[2:]:
        parts = line.split(",")
        parts[3] = repr(float(parts[3]) * 2.0)
        out.append(",".join(parts))
    (run_dir / "snapshots.csv").write_text("\n".join(out) + "\n")
    tamper_rc = main(["--quiet", "verify", str(run_dir)])

    ok = (validate_rc == 1 and "A2" in validate_out
          and forced.report.invariant_violations > 0
          and tamper_rc == 1)
    _line("acceptance-9 negative controls", ok,
          f"validate rc={validate_rc} (A2 named: {'A2' in validate_out}), "
          f"forced-run violations={forced.report.invariant_violations}, "
          f"tampered verify rc={tamper_rc}")
