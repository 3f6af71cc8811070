#!/usr/bin/env python3
"""Integrate the reference clock trajectories (special-relativistic cruise,
held clock in a weak field, constant-force hyperbolic motion) and print
their constraint, conservation and rate diagnostics."""
import argparse
from pathlib import Path

from clocklab import (
    clock_at_rest,
    flat_metric,
    geodesic_lorentz_residual,
    integrate,
    moving_clock,
    proper_time_residual,
    uniform_lapse_metric,
)
from clocklab.csvio import emit_csv
from clocklab.dynamics import conservation_drift, constraint_drift


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="out", type=Path)
    ap.add_argument("--dt", default=1e-3, type=float)
    ap.add_argument("--t-end", default=10.0, type=float)
    args = ap.parse_args()

    cases = {
        "cruise_v06": (flat_metric(), 0.0, moving_clock(1.0, (0.75, 0.0, 0.0)), False),
        "held_weak_field": (uniform_lapse_metric(0.05), 0.0,
                            clock_at_rest(1.0, x=(2.0, 0.0, 0.0)), True),
        "constant_force": (flat_metric(a0_slope=0.02), 0.5, clock_at_rest(1.0), False),
    }
    for name, (metric, charge, pt0, hold) in cases.items():
        traj = integrate(pt0, metric, charge, args.t_end, args.dt, hold_x=hold)
        phi1, phi2 = constraint_drift(traj)
        h_drift, m_drift = conservation_drift(traj, metric, charge)
        ptr = proper_time_residual(traj, metric)
        geo = float("nan") if hold else geodesic_lorentz_residual(traj, metric, charge)
        rows = [[traj.times[i], traj.tau[i], *traj.x[i], *traj.p[i]]
                for i in range(0, len(traj), 10)]
        path = args.out_dir / f"{name}.csv"
        emit_csv(rows, ["t", "tau", "x1", "x2", "x3", "p1", "p2", "p3"], path)
        print(f"{name}: tau({args.t_end}) = {traj.tau[-1]:.9f}  "
              f"phi = {max(phi1, phi2):.1e}  dH/H = {h_drift:.1e}  dM/M = {m_drift:.1e}  "
              f"rate residual = {ptr:.1e}  motion residual = {geo:.1e}  -> {path}")


if __name__ == "__main__":
    main()
