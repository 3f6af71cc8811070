#!/usr/bin/env python3
"""Sweep the reading accuracy of both weighing procedures and tabulate the
mass/proper-time latitudes; the product column stays pinned at one."""
import argparse
from pathlib import Path

from clocklab import BoxExperiment, EFieldExperiment, SI_UNITS, box_uncertainties, efield_uncertainties
from clocklab.csvio import emit_csv

import numpy as np


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="out", type=Path)
    ap.add_argument("--points", default=25, type=int)
    args = ap.parse_args()

    dqs = np.logspace(-9, -3, args.points)
    rows = []
    for dq in dqs:
        rep = box_uncertainties(BoxExperiment(delta_q=dq, t=1.0, g=9.81), SI_UNITS)
        rows.append([dq, rep.delta_p, rep.delta_m, rep.delta_tau, rep.product_ratio])
    box_path = args.out_dir / "box_weighing.csv"
    emit_csv(rows, ["delta_q", "delta_p", "delta_m", "delta_tau", "product_ratio"], box_path)

    rows = []
    for dq in dqs:
        rep = efield_uncertainties(EFieldExperiment(delta_q=dq, t=1.0, v=1e3), SI_UNITS)
        rows.append([dq, rep.delta_p, rep.delta_m, rep.delta_tau, rep.product_ratio])
    ef_path = args.out_dir / "efield_weighing.csv"
    emit_csv(rows, ["delta_q", "delta_p", "delta_m", "delta_tau", "product_ratio"], ef_path)

    print(f"wrote {box_path} and {ef_path} ({args.points} rows each)")


if __name__ == "__main__":
    main()
