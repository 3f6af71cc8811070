"""Scenario execution: dispatch a validated config to the physics modules,
write CSV rows, and self-check the run against the module tolerances.

Check names are stable identifiers for the invariants they verify:
``product_ratio`` (weighing cancellation), ``dirac_table`` (canonical
bracket table), trajectory constraint/conservation/rate checks,
``commutator``, ``uncertainty_floor``, ``variance_law``/``mean_linearity``
(exact reading statistics), and ``sw_bound``/``sw_bound_floor``/
``sw_saturation`` (clock-bound checks).

Sweep members run in parallel (capped by the CLOCKLAB_THREADS environment
variable) and are merged in input order, so outputs are deterministic.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .brackets import dirac_table, expected_dirac_table, random_points
from .config import ScenarioConfig
from .csvio import emit_csv
from .dynamics import (
    ExtendedPhaseSpacePoint,
    conservation_drift,
    constraint_drift,
    integrate,
    proper_time_residual,
    total_hamiltonian,
)
from .gedanken import BoxExperiment, EFieldExperiment, box_uncertainties, efield_uncertainties
from .metric import StaticMetric
from .moments import salecker_wigner_check, tau_moments_simulated, uncertainty_product, variance_law_predict
from .operators import commutator_residual, dilation_multiplier
from .search import optimize_clock_width
from .states import GaussianClockSpec, gaussian_state
from .units import NATURAL_UNITS, SI_UNITS, UnitContext, UnitSystem, convert_units

TOLERANCES = {
    "product_ratio": 1e-12,
    "dirac_table": 1e-6,
    "constraint_drift": 1e-9,
    "h_conservation": 1e-9,
    "m_conservation": 1e-9,
    "proper_time_residual": 1e-8,
    "tau_final": 1e-9,
    "variance_law": 1e-7,
    "mean_linearity": 1e-8,
    "uncertainty_floor": 1e-6,
    "commutator": 1e-8,
    "sw_bound": 0.0,
    "sw_bound_floor": 1e-3,
    "sw_saturation": 0.05,
}

PEAKED_SHARPNESS = 0.05

_CONVERTIBLE = ("mass", "time", "energy", "length", "momentum", "speed", "acceleration")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float


@dataclass(frozen=True)
class RunReport:
    scenario: ScenarioConfig
    rows_written: int
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _check(name: str, measured: float) -> CheckResult:
    tol = TOLERANCES[name]
    return CheckResult(name=name, passed=bool(measured <= tol), measured=float(measured),
                       tolerance=tol)


def _worker_count(n_members: int) -> int:
    env = os.environ.get("CLOCKLAB_THREADS")
    cap = int(env) if env else min(4, os.cpu_count() or 1)
    return max(1, min(cap, n_members))


def _to_natural(params: dict[str, Any], dims: dict[str, str], units: UnitSystem) -> dict[str, Any]:
    if units is not UnitSystem.SI:
        return dict(params)
    out = {}
    for key, value in params.items():
        dim = dims.get(key, "dimensionless")
        if dim in _CONVERTIBLE:
            if isinstance(value, tuple):
                value = tuple(convert_units(v, dim, SI_UNITS, NATURAL_UNITS) for v in value)
            else:
                value = convert_units(value, dim, SI_UNITS, NATURAL_UNITS)
        out[key] = value
    return out


def _row_to_si(row: list, col_dims: list[str]) -> list:
    out = []
    for value, dim in zip(row, col_dims):
        if isinstance(value, float) and dim:
            base, _, power = dim.partition("^")
            factor = convert_units(1.0, base, NATURAL_UNITS, SI_UNITS)
            value = value * factor ** (int(power) if power else 1)
        out.append(value)
    return out


def _param_dims(kind: str) -> dict[str, str]:
    from .config import SCHEMAS
    return {spec.key: spec.dimension for spec in SCHEMAS[kind]}


# --- gedanken -------------------------------------------------------------

_BOX_HEADER = ["delta_q", "t", "g", "delta_p", "delta_m", "delta_tau",
               "product_ratio", "product_ratio_half_hbar"]
_EFIELD_HEADER = ["delta_q", "t", "v", "delta_p", "delta_m", "delta_tau",
                  "product_ratio", "product_ratio_half_hbar"]


def _run_gedanken_box(params: dict[str, Any], seed: int, ctx: UnitContext):
    exp = BoxExperiment(delta_q=params["box.dq"], t=params["box.t"], g=params["box.g"],
                        spring_k=params.get("box.spring_k"),
                        spring_l=params.get("box.spring_l"))
    rep = box_uncertainties(exp, ctx)
    row = [exp.delta_q, exp.t, exp.g, rep.delta_p, rep.delta_m, rep.delta_tau,
           rep.product_ratio, rep.product_ratio_half_hbar]
    checks = [_check("product_ratio", abs(rep.product_ratio - 1.0))]
    return _BOX_HEADER, [row], checks


def _run_gedanken_efield(params: dict[str, Any], seed: int, ctx: UnitContext):
    exp = EFieldExperiment(delta_q=params["efield.dq"], t=params["efield.t"],
                           v=params["efield.v"],
                           e_field=params.get("efield.e_field"),
                           charge=params.get("efield.charge"))
    rep = efield_uncertainties(exp, ctx)
    row = [exp.delta_q, exp.t, exp.v, rep.delta_p, rep.delta_m, rep.delta_tau,
           rep.product_ratio, rep.product_ratio_half_hbar]
    checks = [_check("product_ratio", abs(rep.product_ratio - 1.0))]
    return _EFIELD_HEADER, [row], checks


# --- classical ------------------------------------------------------------

_TRAJ_COLS = [("t", "time"), ("tau", "time"), ("p_tau", "energy"), ("M", "energy"),
              ("p_M", "time"), ("x1", "length"), ("x2", "length"), ("x3", "length"),
              ("p1", "momentum"), ("p2", "momentum"), ("p3", "momentum"),
              ("phi1", "energy"), ("phi2", "time"), ("H", "energy")]


def _build_metric(name: str, lapse_g: float, a0_slope: float) -> StaticMetric:
    slope = lapse_g  # natural units: c = 1
    kwargs = dict(
        grad_g_spatial=lambda x: np.zeros((3, 3, 3)),
        grad_a_spatial=lambda x: np.zeros((3, 3)),
    )
    if name == "uniform_lapse":
        kwargs["f"] = lambda x: 1.0 + slope * x[0]
        kwargs["grad_f"] = lambda x: np.array([slope, 0.0, 0.0])
    else:
        kwargs["grad_f"] = lambda x: np.zeros(3)
    if a0_slope != 0.0:
        kwargs["a0"] = lambda x: a0_slope * x[0]
        kwargs["grad_a0"] = lambda x: np.array([a0_slope, 0.0, 0.0])
    else:
        kwargs["grad_a0"] = lambda x: np.zeros(3)
    return StaticMetric(**kwargs)


def _run_classical_trajectory(params: dict[str, Any], seed: int, ctx: UnitContext):
    metric = _build_metric(params["classical.metric"], params["classical.lapse_g"],
                           params["classical.a0_slope"])
    charge = params["classical.charge"]
    m = params["classical.m"]
    pt0 = ExtendedPhaseSpacePoint(
        tau=params["classical.tau0"], p_tau=m, M=m, p_M=0.0,
        x=[params["classical.x1"], params["classical.x2"], params["classical.x3"]],
        p=[params["classical.p1"], params["classical.p2"], params["classical.p3"]],
    )
    hold = params["classical.hold"] != 0.0
    traj = integrate(pt0, metric, charge, params["classical.t_end"],
                     params["classical.dt"], hold_x=hold)
    rows = []
    for i in range(len(traj)):
        z = traj.states[i]
        h = total_hamiltonian(traj.point(i), metric, charge)
        rows.append([traj.times[i], z[0], z[1], z[2], z[3], z[4], z[5], z[6],
                     z[7], z[8], z[9], z[2] - z[1], z[3], h])
    phi1_max, phi2_max = constraint_drift(traj)
    h_drift, m_drift = conservation_drift(traj, metric, charge)
    checks = [
        _check("constraint_drift", max(phi1_max, phi2_max)),
        _check("h_conservation", h_drift),
        _check("m_conservation", m_drift),
        _check("proper_time_residual", proper_time_residual(traj, metric)),
    ]
    if params["classical.metric"] == "flat" and charge == 0.0 and not hold:
        p_vec = np.array([params["classical.p1"], params["classical.p2"],
                          params["classical.p3"]])
        h0 = math.sqrt(m * m + float(p_vec @ p_vec))
        expected_tau = params["classical.tau0"] + params["classical.t_end"] * m / h0
        checks.append(_check("tau_final", abs(traj.tau[-1] - expected_tau)))
    header = [name for name, _ in _TRAJ_COLS]
    return header, rows, checks


def _run_classical_brackets(params: dict[str, Any], seed: int, ctx: UnitContext):
    points = random_points(seed, params["brackets.points"], params["brackets.scale"])
    expected = expected_dirac_table()
    rows = []
    worst = 0.0
    for i, pt in enumerate(points):
        table = dirac_table(pt, params["brackets.h_step"])
        for (a, b), value in table.items():
            err = abs(value - expected[(a, b)])
            worst = max(worst, err)
            rows.append([i, f"{a}|{b}", value, expected[(a, b)], err])
    checks = [_check("dirac_table", worst)]
    return ["point", "pair", "value", "expected", "error"], rows, checks


# --- quantum ----------------------------------------------------------------

_MOMENT_COLS = [("t", "time"), ("mean_tau", "time"), ("var_tau_sim", "time^2"),
                ("var_tau_law", "time^2"), ("quad", ""), ("lin", "time"),
                ("const", "time^2"), ("bound", "time^2"), ("satisfied", ""),
                ("sharpness", "")]


def _spec_from(params: dict[str, Any]) -> GaussianClockSpec:
    return GaussianClockSpec(
        e0=params["quantum.e0"], sigma_e=params["quantum.sigma_e"],
        tau0=params.get("quantum.tau0", 0.0), p0=params["quantum.p0"],
        sigma_p=params["quantum.sigma_p"], x0=params.get("quantum.x0", 0.0))


def _moment_row(state, t: float):
    sim = tau_moments_simulated(state, t)
    law = variance_law_predict(state)
    if t > 0.0:
        bc = salecker_wigner_check(state, t)
        bound, satisfied, sharp = bc.rhs, bc.satisfied, bc.sharpness
    else:
        from .moments import energy_sharpness
        _, sharp = energy_sharpness(state)
        bound, satisfied = 0.0, True
    return ([sim.t, sim.mean_tau, sim.var_tau, law.predict(t), law.quad, law.lin,
             law.const, bound, satisfied, sharp], sim, law)


def _write_snapshot(state, path: str) -> None:
    from .states import probability_marginals
    e_nodes, e_density, p_nodes, p_density = probability_marginals(state)
    rows = [["E", float(x), float(d)] for x, d in zip(e_nodes, e_density)]
    rows += [["p", float(x), float(d)] for x, d in zip(p_nodes, p_density)]
    emit_csv(rows, ["axis", "coordinate", "density"], path)


def _run_quantum_moments(params: dict[str, Any], seed: int, ctx: UnitContext):
    spec = _spec_from(params)
    times = params["quantum.times"]
    state = gaussian_state(spec, t_max=max(abs(t) for t in times),
                           n_e=params["grid.e.n"], n_p=params["grid.p.n"])
    if params.get("quantum.snapshot"):
        _write_snapshot(state, params["quantum.snapshot"])
    d_mean = float((dilation_multiplier(state) * np.abs(state.values) ** 2).sum()
                   * state.cell_measure())
    mean0 = tau_moments_simulated(state, 0.0).mean_tau
    rows = []
    law_dev = 0.0
    lin_dev = 0.0
    for t in times:
        row, sim, law = _moment_row(state, t)
        rows.append(row)
        law_dev = max(law_dev, abs(sim.var_tau - law.predict(t)) / max(law.predict(t), 1e-300))
        expected_mean = mean0 + d_mean * t
        lin_dev = max(lin_dev, abs(sim.mean_tau - expected_mean) / max(abs(expected_mean), 1.0))
    up = uncertainty_product(state)
    checks = [
        _check("variance_law", law_dev),
        _check("mean_linearity", lin_dev),
        _check("uncertainty_floor", up.lower - up.product),
        _check("commutator", commutator_residual(state)),
    ]
    return [name for name, _ in _MOMENT_COLS], rows, checks


def _run_quantum_bound(params: dict[str, Any], seed: int, ctx: UnitContext):
    spec = _spec_from(params)
    t = params["quantum.t"]
    state = gaussian_state(spec, t_max=t, n_e=params["grid.e.n"], n_p=params["grid.p.n"])
    row, _, _ = _moment_row(state, t)
    bc = salecker_wigner_check(state, t)
    up = uncertainty_product(state)
    checks = [
        _check("sw_bound", (-bc.margin) if bc.sharpness <= PEAKED_SHARPNESS else 0.0),
        _check("uncertainty_floor", up.lower - up.product),
    ]
    return [name for name, _ in _MOMENT_COLS], [row], checks


def _run_quantum_optimize(params: dict[str, Any], seed: int, ctx: UnitContext):
    lo = params["optimize.sigma_lo"]
    hi = params["optimize.sigma_hi"]
    bounds = (lo, hi) if lo > 0.0 and hi > lo else None
    result = optimize_clock_width(
        e0=params["quantum.e0"], p0=params["quantum.p0"],
        sigma_p=params["quantum.sigma_p"], t=params["quantum.t"],
        sigma_bounds=bounds, n_e=params["grid.e.n"], n_p=params["grid.p.n"])
    rows = [[i, sigma, var] for i, (sigma, var) in enumerate(result.trace)]
    checks = [
        _check("sw_bound_floor", result.bound - result.min_var),
        _check("sw_saturation", result.min_var / result.bound - 1.0),
    ]
    return ["eval", "sigma_e", "var_tau"], rows, checks


_RUNNERS: dict[str, Callable] = {
    "GEDANKEN_BOX": _run_gedanken_box,
    "GEDANKEN_EFIELD": _run_gedanken_efield,
    "CLASSICAL_TRAJECTORY": _run_classical_trajectory,
    "CLASSICAL_BRACKETS": _run_classical_brackets,
    "QUANTUM_MOMENTS": _run_quantum_moments,
    "QUANTUM_BOUND_SWEEP": _run_quantum_bound,
    "QUANTUM_OPTIMIZE": _run_quantum_optimize,
}

_OUTPUT_DIMS: dict[str, list[str]] = {
    "CLASSICAL_TRAJECTORY": [dim for _, dim in _TRAJ_COLS],
    "QUANTUM_MOMENTS": [dim for _, dim in _MOMENT_COLS],
    "QUANTUM_BOUND_SWEEP": [dim for _, dim in _MOMENT_COLS],
    "QUANTUM_OPTIMIZE": ["", "energy", "time^2"],
}


def _merge_checks(all_checks: list[list[CheckResult]]) -> list[CheckResult]:
    merged: dict[str, CheckResult] = {}
    for checks in all_checks:
        for c in checks:
            prev = merged.get(c.name)
            if prev is None or c.measured > prev.measured:
                merged[c.name] = c
    return list(merged.values())


def run(config: ScenarioConfig) -> RunReport:
    """Execute a scenario: write the CSV (and a JSON run report next to it),
    returning the per-invariant check results."""
    runner = _RUNNERS[config.kind]
    ctx = SI_UNITS if config.units is UnitSystem.SI else NATURAL_UNITS
    dims = _param_dims(config.kind)
    natural_params = (_to_natural(config.params, dims, config.units)
                      if config.kind.startswith(("CLASSICAL", "QUANTUM"))
                      else dict(config.params))

    if config.sweep is None:
        header, rows, checks = runner(natural_params, config.seed, ctx)
    else:
        sweep_dim = dims.get(config.sweep.param, "dimensionless")
        values = config.sweep.values
        if (config.units is UnitSystem.SI and sweep_dim in _CONVERTIBLE
                and config.kind.startswith(("CLASSICAL", "QUANTUM"))):
            values = tuple(convert_units(v, sweep_dim, SI_UNITS, NATURAL_UNITS)
                           for v in values)

        def member(value: float):
            member_params = dict(natural_params)
            member_params[config.sweep.param] = value
            return runner(member_params, config.seed, ctx)

        with ThreadPoolExecutor(max_workers=_worker_count(len(values))) as pool:
            results = list(pool.map(member, values))
        header = ["sweep_value"] + results[0][0]
        rows = []
        for value, (_, member_rows, _) in zip(config.sweep.values, results):
            for row in member_rows:
                rows.append([value] + row)
        checks = _merge_checks([r[2] for r in results])

    col_dims = _OUTPUT_DIMS.get(config.kind)
    if config.units is UnitSystem.SI and col_dims is not None:
        dims_row = ([""] if config.sweep is not None else []) + col_dims
        rows = [_row_to_si(row, dims_row) for row in rows]

    count = emit_csv(rows, header, config.output)
    report = RunReport(scenario=config, rows_written=count, checks=tuple(checks))
    _write_json_report(report)
    return report


def _write_json_report(report: RunReport) -> None:
    payload = {
        "scenario": report.scenario.echo(),
        "rows_written": report.rows_written,
        "checks": [{"name": c.name, "passed": c.passed, "measured": c.measured,
                    "tolerance": c.tolerance} for c in report.checks],
        "all_passed": report.all_passed,
    }
    path = Path(report.scenario.output).with_suffix(".report.json")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
