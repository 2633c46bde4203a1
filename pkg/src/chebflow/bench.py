"""Simulation driver and experiment studies.

``run_simulation`` advances one configuration (problem x integrator x
coupling x pressure policy) and reports final fields, errors against the
exact solution when one exists, and the step/stage counters.  The study
functions reproduce the benchmark protocols: temporal/spatial convergence
with a fine numerical reference, stability sweeps (largest stable step for
fixed stage counts, smallest stable stage count for fixed steps), tolerance
sweeps for work-precision data, Reynolds-number sweeps, and the comparison
of cavity centerline profiles against user-supplied reference data.

All outputs are plain text: field dumps in the grid module's format and CSV
files whose numbers carry 17 significant digits (re-parsing reproduces them
exactly).  Runs are fully deterministic; the only non-reproducible column
is wall time.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np

from .coupling import (CouplingState, FlowSystem, Stepper, ap1_pressure,
                       ap2_pressure, ap2w_coefficients, ap2w_pressure, dae_step,
                       pm1_second_order_pressure, pm1_step, pm1v_step, pm3_step)
from .grid import (CellField, GridSpec, VelocityField, inf_norm, sample_pressure,
                   sample_velocity, write_field)
from .integrators import (IntegrationDiverged, StepController, propose_dt,
                          select_stages)
from .poisson import PoissonSolver
from .problems import ProblemSpec, make_problem
from .spatial import spectral_radius_estimate

INTEGRATORS = ("rkc", "rock2", "pirock", "rk4")
COUPLINGS = ("pm1", "pm1v", "pm3", "dae")
PRESSURES = ("p1", "p2", "ap1", "ap2", "ap2w")


@dataclass
class RunConfig:
    """One simulation configuration.  Fully deterministic given its fields."""

    problem: str = "forced"
    re: float = 100.0
    nx: int = 64
    t_end: float = 1.0
    dt: Optional[float] = None          # fixed step, or initial step if adaptive
    adaptive: bool = False
    atol: float = 1e-6
    rtol: float = 1e-6
    integrator: str = "rock2"
    coupling: str = "dae"
    pressure: str = "p1"
    cp: int = 0                         # 0: recover pressure at t_end only; 1: every step
    stages: Optional[int] = None        # fixed stage count (otherwise selected per step)
    advection: bool = True
    eps: float = 0.15                   # RKC damping parameter
    out: Optional[str] = None
    rock2_table: Optional[str] = None
    dct_algorithm: str = "naive"
    compensated: bool = False           # Kahan accumulation (RK4 reference runs)

    def validate(self) -> "RunConfig":
        if self.integrator not in INTEGRATORS:
            raise ValueError(f"unknown integrator {self.integrator!r}")
        if self.coupling not in COUPLINGS:
            raise ValueError(f"unknown coupling {self.coupling!r}")
        if self.pressure not in PRESSURES:
            raise ValueError(f"unknown pressure mode {self.pressure!r}")
        if self.cp not in (0, 1):
            raise ValueError("cp must be 0 or 1")
        if not self.adaptive and self.dt is None:
            raise ValueError("fixed-step runs need dt")
        if self.adaptive and self.integrator == "rkc" and self.coupling != "pm1":
            raise ValueError("adaptive RKC is only valid with PM1 "
                             "(the error estimate is invalid with projected stages)")
        if self.integrator == "pirock" and self.coupling != "pm1":
            raise ValueError("PIROCK is only implemented with PM1")
        if self.integrator == "pirock" and self.adaptive:
            raise ValueError("PIROCK runs fixed-step only")
        if self.integrator == "rk4" and self.adaptive:
            raise ValueError("RK4 has no embedded error estimate")
        if self.pressure == "ap2" and self.integrator != "rkc":
            raise ValueError("AP2 needs second-order internal stages (RKC only)")
        if self.pressure == "ap2w" and self.integrator != "rock2":
            raise ValueError("AP2W is the ROCK2 workaround (use AP2 with RKC)")
        if self.pressure in ("ap1", "ap2", "ap2w") and self.coupling != "dae":
            raise ValueError(f"{self.pressure} requires the DAE coupling")
        if self.pressure == "p2" and self.coupling == "dae":
            raise ValueError("p2 is the projection-method pressure; use ap1/ap2(w) with dae")
        return self


@dataclass
class RunReport:
    config: RunConfig
    spec: GridSpec
    u: np.ndarray
    v: np.ndarray
    p: np.ndarray
    pressures: dict
    t_final: float
    steps_attempted: int = 0
    steps_accepted: int = 0
    steps_rejected: int = 0
    total_stages: int = 0
    last_stages: int = 0
    wall_time: float = 0.0
    unstable: bool = False
    blow_up_time: Optional[float] = None
    err_u: Optional[float] = None
    err_p: Optional[float] = None
    divergence_history: List[float] = field(default_factory=list)

    @property
    def avg_stages(self) -> float:
        n = max(self.steps_attempted, 1)
        return self.total_stages / n


def _min_stages_for(cfg: RunConfig) -> Optional[int]:
    if cfg.integrator == "rkc" and cfg.pressure == "ap2":
        return 3       # reconstruction needs distinct U_s, U_{s+1} beyond U_1, U_2
    return None


def _recover_pressure(cfg: RunConfig, state: CouplingState, system: FlowSystem,
                      stepper: Stepper, dt: float) -> CellField:
    if cfg.pressure == "p1":
        return state.p
    if cfg.pressure == "p2":
        return pm1_second_order_pressure(state, system)
    if cfg.pressure == "ap1":
        return ap1_pressure(state, system)
    if cfg.pressure == "ap2":
        s = stepper.s
        return ap2_pressure(state.phi_log, [1, s, s + 1], dt)
    if cfg.pressure == "ap2w":
        coeffs = ap2w_coefficients(stepper.tableau, (2, 3, 4))
        return ap2w_pressure(state.phi_log, coeffs, dt)
    raise ValueError(cfg.pressure)


def run_simulation(cfg: RunConfig, problem: Optional[ProblemSpec] = None,
                   track_divergence: bool = False) -> RunReport:
    """Advance one configuration to t_end and report fields and counters."""
    cfg.validate()
    prob = problem if problem is not None else make_problem(cfg.problem, cfg.re, cfg.advection)
    spec = GridSpec(cfg.nx, nu=1.0 / cfg.re)
    system = FlowSystem(spec, prob.boundary, prob.forcing, prob.advection,
                        poisson=PoissonSolver(cfg.nx, cfg.dct_algorithm),
                        forcing_factory=prob.forcing_factory)
    rho = spectral_radius_estimate(spec)

    u0 = sample_velocity(spec, prob.initial_velocity(0.0), 0.0)
    if prob.exact_pressure is not None:
        p0 = sample_pressure(spec, prob.exact_pressure, 0.0).zero_mean()
    else:
        p0 = CellField.zeros(cfg.nx)
    state = CouplingState(u0, p0, 0.0)

    ctrl = StepController(atol=cfg.atol, rtol=cfg.rtol) if cfg.adaptive else None
    err_norm = ctrl.norm if ctrl is not None else None
    dt = cfg.dt if cfg.dt is not None else 1e-3
    steppers: dict = {}
    report = RunReport(config=cfg, spec=spec, u=u0.u, v=u0.v, p=p0.values,
                       pressures={}, t_final=0.0)

    def stepper_for(s: int) -> Stepper:
        if s not in steppers:
            steppers[s] = Stepper(cfg.integrator, s, cfg.eps, cfg.rock2_table)
        return steppers[s]

    def advance(state, stepper, dt_step):
        if cfg.coupling == "pm1":
            return pm1_step(state, system, stepper, dt_step, err_norm)
        if cfg.coupling == "pm3":
            return pm3_step(state, system, stepper, dt_step, err_norm)
        if cfg.coupling == "pm1v":
            return pm1v_step(state, system, stepper, dt_step, err_norm)
        return dae_step(state, system, stepper, dt_step, err_norm)

    t0 = time.perf_counter()
    eps_t = 1e-12 * max(cfg.t_end, 1.0)
    stepper = None
    kahan_c = None
    last_dt_step = None
    try:
        while state.t < cfg.t_end - eps_t:
            dt_step = min(dt, cfg.t_end - state.t)
            if cfg.integrator == "rk4":
                stepper = stepper_for(4)
                s_used = 4
            else:
                s_used = cfg.stages or select_stages(
                    dt_step, rho, cfg.integrator, _min_stages_for(cfg), cfg.rock2_table)
                stepper = stepper_for(s_used)
            new_state, err = advance(state, stepper, dt_step)
            report.steps_attempted += 1
            report.total_stages += s_used
            if ctrl is not None and err is not None:
                dt_new, accept = propose_dt(ctrl, err, dt_step)
                ctrl.record(err, dt_step)
                if not accept:
                    report.steps_rejected += 1
                    dt = min(dt_new, cfg.t_end - state.t)
                    continue
                dt = dt_new
            report.steps_accepted += 1
            report.last_stages = s_used
            last_dt_step = dt_step
            if cfg.compensated and cfg.integrator == "rk4":
                # Kahan accumulation of the per-step velocity increments
                inc_u = new_state.u.u - state.u.u
                inc_v = new_state.u.v - state.u.v
                if kahan_c is None:
                    kahan_c = (np.zeros_like(inc_u), np.zeros_like(inc_v))
                for base, inc, c in ((state.u.u, inc_u, kahan_c[0]),
                                     (state.u.v, inc_v, kahan_c[1])):
                    yy = inc - c
                    tt = base + yy
                    c[:] = (tt - base) - yy
                    base[:] = tt
                new_state.u = state.u
            state = new_state
            if track_divergence:
                div = system.divergence_of(state.u.flatten(), state.t)
                norm_u = max(inf_norm(state.u), 0.0)
                report.divergence_history.append(inf_norm(div) / (1.0 + norm_u))
            if cfg.cp == 1 and cfg.pressure != "p1":
                state.p = _recover_pressure(cfg, state, system, stepper, dt_step)
    except IntegrationDiverged:
        report.unstable = True
        report.blow_up_time = state.t
    else:
        if not np.all(np.isfinite(state.u.u)) or not np.all(np.isfinite(state.u.v)):
            report.unstable = True
            report.blow_up_time = state.t
        elif cfg.cp == 0 and cfg.pressure != "p1" and last_dt_step is not None:
            report.pressures["p1"] = state.p.values.copy()
            state.p = _recover_pressure(cfg, state, system, stepper, last_dt_step)
    report.wall_time = time.perf_counter() - t0
    report.t_final = state.t
    report.u, report.v, report.p = state.u.u, state.u.v, state.p.values
    report.pressures[cfg.pressure] = state.p.values
    report.pressures.setdefault("p1", state.p.values)
    if not report.unstable and prob.exact_velocity is not None:
        exact = sample_velocity(spec, prob.exact_velocity, state.t)
        report.err_u = inf_norm(state.u - exact)
        if prob.exact_pressure is not None:
            pex = sample_pressure(spec, prob.exact_pressure, state.t).zero_mean()
            report.err_p = inf_norm(CellField(state.p.values - pex.values).zero_mean())
    if cfg.out:
        write_outputs(report)
    return report


def write_outputs(report: RunReport) -> None:
    os.makedirs(report.config.out, exist_ok=True)
    spec, t = report.spec, report.t_final
    write_field(os.path.join(report.config.out, "u.txt"), "u", spec, t, report.u)
    write_field(os.path.join(report.config.out, "v.txt"), "v", spec, t, report.v)
    write_field(os.path.join(report.config.out, "p.txt"), "p", spec, t, report.p)
    cfg = report.config
    lines = {
        "problem": cfg.problem, "re": cfg.re, "nx": cfg.nx, "t_end": cfg.t_end,
        "integrator": cfg.integrator, "coupling": cfg.coupling,
        "pressure": cfg.pressure, "cp": cfg.cp, "adaptive": int(cfg.adaptive),
        "t_final": report.t_final,
        "steps_attempted": report.steps_attempted,
        "steps_accepted": report.steps_accepted,
        "steps_rejected": report.steps_rejected,
        "total_stages": report.total_stages,
        "avg_stages": report.avg_stages,
        "last_stages": report.last_stages,
        "unstable": int(report.unstable),
        "wall_time": report.wall_time,
    }
    if report.err_u is not None:
        lines["err_u"] = report.err_u
    if report.err_p is not None:
        lines["err_p"] = report.err_p
    with open(os.path.join(cfg.out, "summary.txt"), "w") as fh:
        for k, v in lines.items():
            fh.write(f"{k}={fmt(v)}\n" if isinstance(v, float) else f"{k}={v}\n")


def fmt(x) -> str:
    return f"{x:.17g}" if isinstance(x, float) else str(x)


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(float(x)) if isinstance(x, (int, float, np.floating))
                              else str(x) for x in row) + "\n")


# ---------------------------------------------------------------------------
# convergence studies
# ---------------------------------------------------------------------------

def restrict_to_coarse(fine: np.ndarray, kind: str) -> np.ndarray:
    """One factor-2 restriction onto the coincident coarse positions.

    Staggered points of nested grids never coincide in the staggered
    coordinate, so the restriction pairs the exact match in the nesting
    coordinate with the symmetric two-point average centered exactly on the
    coarse position (four points for cell centers).
    """
    if kind == "u":
        return 0.5 * (fine[1::2, 0::2] + fine[1::2, 1::2])
    if kind == "v":
        return 0.5 * (fine[0::2, 1::2] + fine[1::2, 1::2])
    if kind == "p":
        return 0.25 * (fine[0::2, 0::2] + fine[1::2, 0::2]
                       + fine[0::2, 1::2] + fine[1::2, 1::2])
    raise ValueError(kind)


def restrict_field(fine: np.ndarray, kind: str, factor: int) -> np.ndarray:
    out = fine
    while factor > 1:
        out = restrict_to_coarse(out, kind)
        factor //= 2
    return out


def _slope_rows(xs, errs):
    """Per-row convergence slope against the previous row (NaN first/degenerate)."""
    slopes = [float("nan")]
    for i in range(1, len(xs)):
        if errs[i] > 0 and errs[i - 1] > 0 and xs[i] != xs[i - 1]:
            slopes.append(float(np.log(errs[i - 1] / errs[i]) / np.log(xs[i - 1] / xs[i])))
        else:
            slopes.append(float("nan"))
    return slopes


def fit_slope(xs, errs) -> float:
    """Least-squares slope of log(err) vs log(x), ignoring zero errors."""
    xs = np.asarray(xs, dtype=float)
    errs = np.asarray(errs, dtype=float)
    keep = errs > 0
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(xs[keep]), np.log(errs[keep]), 1)[0])


def _best_pressure_cfg(cfg: RunConfig) -> RunConfig:
    """Reference runs carry the second-order pressure of their family."""
    if cfg.coupling == "dae":
        return replace(cfg, pressure="ap1")
    return replace(cfg, pressure="p2")


def convergence_study(cfg: RunConfig, axis: str = "time",
                      dts: Optional[Sequence[float]] = None, ref_dt: Optional[float] = None,
                      Ns: Optional[Sequence[int]] = None, ref_N: Optional[int] = None,
                      out: Optional[str] = None):
    """Temporal or spatial convergence against a fine numerical reference.

    Time axis: fixed grid, reference at the smallest step; rows are
    (dt, err_u, slope_u, err_p, slope_p).  Space axis: fixed step, reference
    on the finest (nested) grid restricted to each coarse one; rows are
    (dx, err_u, slope_u, err_p, slope_p).
    """
    cfg = replace(cfg, out=None)
    prob = make_problem(cfg.problem, cfg.re, cfg.advection)
    if axis == "time":
        dts = list(dts) if dts is not None else [2.0**-m for m in range(4, 11)]
        ref_dt = ref_dt if ref_dt is not None else 2.0**-12
        ref = run_simulation(replace(_best_pressure_cfg(cfg), dt=ref_dt,
                                     adaptive=False), problem=prob)
        rows = []
        for dt in sorted(dts, reverse=True):
            rep = run_simulation(replace(cfg, dt=dt, adaptive=False), problem=prob)
            if rep.unstable:
                rows.append((dt, float("nan"), float("nan"), float("nan")))
                continue
            err_u = max(np.max(np.abs(rep.u - ref.u)), np.max(np.abs(rep.v - ref.v)))
            dp = rep.p - ref.p
            err_p = np.max(np.abs(dp - dp.mean()))
            # the first-order pressure chain keeps its initialization offset,
            # so it is compared like-for-like against the reference's own p1
            dp1 = rep.pressures["p1"] - ref.pressures["p1"]
            err_p1 = np.max(np.abs(dp1 - dp1.mean()))
            rows.append((dt, float(err_u), float(err_p), float(err_p1)))
        xs = [r[0] for r in rows]
        eu = [r[1] for r in rows]
        ep = [r[2] for r in rows]
        ep1 = [r[3] for r in rows]
    elif axis == "space":
        Ns = list(Ns) if Ns is not None else [16, 32, 64]
        ref_N = ref_N if ref_N is not None else 128
        dt = cfg.dt if cfg.dt is not None else 2.0**-12
        for N in Ns:
            if ref_N % N != 0 or (ref_N // N) & (ref_N // N - 1):
                raise ValueError(f"grid N={N} is not nested in the reference N={ref_N}")
        ref = run_simulation(replace(_best_pressure_cfg(cfg), nx=ref_N, dt=dt,
                                     adaptive=False), problem=prob)
        rows = []
        for N in sorted(Ns):
            rep = run_simulation(replace(cfg, nx=N, dt=dt, adaptive=False), problem=prob)
            r = ref_N // N
            err_u = max(np.max(np.abs(rep.u - restrict_field(ref.u, "u", r))),
                        np.max(np.abs(rep.v - restrict_field(ref.v, "v", r))))
            p_ref = restrict_field(ref.p, "p", r)
            dp = rep.p - p_ref
            err_p = np.max(np.abs(dp - dp.mean()))
            dp1 = rep.pressures["p1"] - p_ref
            err_p1 = np.max(np.abs(dp1 - dp1.mean()))
            rows.append((1.0 / N, float(err_u), float(err_p), float(err_p1)))
        rows.sort(key=lambda r: -r[0])
        xs = [r[0] for r in rows]
        eu = [r[1] for r in rows]
        ep = [r[2] for r in rows]
        ep1 = [r[3] for r in rows]
    else:
        raise ValueError("axis must be 'time' or 'space'")
    su = _slope_rows(xs, eu)
    sp = _slope_rows(xs, ep)
    sp1 = _slope_rows(xs, ep1)
    table = [tuple(v) for v in zip(xs, eu, su, ep, sp, ep1, sp1)]
    if out:
        write_csv(out, ("h", "err_u", "slope_u", "err_p", "slope_p",
                        "err_p1", "slope_p1"), table)
    return table


# ---------------------------------------------------------------------------
# stability sweeps
# ---------------------------------------------------------------------------

def _stable_run(cfg: RunConfig, prob: ProblemSpec, dt: float, s: int) -> bool:
    with np.errstate(over="ignore", invalid="ignore"):
        rep = run_simulation(replace(cfg, dt=dt, adaptive=False, stages=s, out=None),
                             problem=prob)
    if rep.unstable:
        return False
    u0 = sample_velocity(rep.spec, prob.initial_velocity(0.0), 0.0)
    norm0 = max(inf_norm(u0), 1e-30)
    return max(np.max(np.abs(rep.u)), np.max(np.abs(rep.v))) <= 10.0 * norm0


def max_stable_dt(cfg: RunConfig, s: int, rel_tol: float = 0.02,
                  problem: Optional[ProblemSpec] = None) -> float:
    """Bisect the largest stable step for a fixed stage count."""
    cfg.validate()
    prob = problem if problem is not None else make_problem(cfg.problem, cfg.re, cfg.advection)
    spec = GridSpec(cfg.nx, nu=1.0 / cfg.re)
    rho = spectral_radius_estimate(spec)
    growth = 0.653 if cfg.integrator == "rkc" else 0.811
    theory = growth * s * s / rho
    lo, hi = 0.5 * theory, 1.5 * theory
    while not _stable_run(cfg, prob, lo, s):
        lo *= 0.5
        if lo < 1e-6 * theory:
            raise RuntimeError("no stable step found")
    while _stable_run(cfg, prob, hi, s):
        hi *= 1.5
        if hi > 16 * theory:
            break
    while (hi - lo) > rel_tol * lo:
        mid = 0.5 * (lo + hi)
        if _stable_run(cfg, prob, mid, s):
            lo = mid
        else:
            hi = mid
    return lo


def min_stable_stages(cfg: RunConfig, dt: float,
                      problem: Optional[ProblemSpec] = None) -> int:
    """Smallest tabulated stage count that runs stably at the given step."""
    cfg.validate()
    prob = problem if problem is not None else make_problem(cfg.problem, cfg.re, cfg.advection)
    from .integrators import STAGE_CAP, rock2_degrees
    if cfg.integrator == "rkc":
        candidates = range(2, STAGE_CAP + 1)
    else:
        candidates = rock2_degrees(cfg.rock2_table)
    for s in candidates:
        if _stable_run(cfg, prob, dt, s):
            return s
    raise RuntimeError("no stable stage count within the cap")


def stability_sweep(cfg: RunConfig, mode: str, values: Sequence, dt: float = 1e-2,
                    out: Optional[str] = None):
    """Sweep rows for the two stability experiments.

    ``max_dt_given_s``: values are stage counts; rows (s, measured, theory).
    ``min_s_given_dt``: values are Reynolds numbers; rows (Re, s_measured,
    s_theory); run without advection (the sweep isolates the Re effect).
    """
    rows = []
    if mode == "max_dt_given_s":
        spec = GridSpec(cfg.nx, nu=1.0 / cfg.re)
        rho = spectral_radius_estimate(spec)
        growth = 0.653 if cfg.integrator == "rkc" else 0.811
        for s in values:
            measured = max_stable_dt(cfg, int(s))
            rows.append((int(s), measured, growth * s * s / rho))
    elif mode == "min_s_given_dt":
        growth = 0.653 if cfg.integrator == "rkc" else 0.811
        for re_val in values:
            cfg_re = replace(cfg, re=float(re_val), advection=False)
            spec = GridSpec(cfg.nx, nu=1.0 / float(re_val))
            rho = spectral_radius_estimate(spec)
            s_meas = min_stable_stages(cfg_re, dt)
            rows.append((float(re_val), s_meas, float(np.sqrt(dt * rho / growth))))
    else:
        raise ValueError("mode must be 'max_dt_given_s' or 'min_s_given_dt'")
    if out:
        key = "s" if mode == "max_dt_given_s" else "re"
        write_csv(out, (key, "measured", "theory"), rows)
    return rows


# ---------------------------------------------------------------------------
# efficiency and Reynolds sweeps
# ---------------------------------------------------------------------------

def efficiency_study(method_cfgs: Sequence[RunConfig], tolerances: Sequence[float],
                     ref_dt: float = 1e-5, out: Optional[str] = None,
                     reference: Optional[RunReport] = None):
    """Work-precision rows: per method and tolerance, error vs wall time.

    The reference is an RK4 + DAE run at a small fixed step with compensated
    accumulation; errors are measured against it in the infinity norm.
    """
    if not method_cfgs:
        return []
    base = method_cfgs[0]
    if reference is None:
        ref_cfg = RunConfig(problem=base.problem, re=base.re, nx=base.nx,
                            t_end=base.t_end, dt=ref_dt, integrator="rk4",
                            coupling="dae", pressure="ap1", advection=base.advection,
                            compensated=True)
        reference = run_simulation(ref_cfg)
    rows = []
    for cfg in method_cfgs:
        cfg.validate()
        label = f"{cfg.integrator}+{cfg.coupling}+{cfg.pressure}+cp{cfg.cp}"
        for tol in tolerances:
            rep = run_simulation(replace(cfg, adaptive=True, atol=tol, rtol=tol, out=None))
            if rep.unstable:
                rows.append((label, tol, float("nan"), float("nan"),
                             rep.wall_time, rep.steps_accepted, rep.total_stages))
                continue
            err_u = max(np.max(np.abs(rep.u - reference.u)),
                        np.max(np.abs(rep.v - reference.v)))
            dp = rep.p - reference.p
            err_p = np.max(np.abs(dp - dp.mean()))
            rows.append((label, tol, float(err_u), float(err_p), rep.wall_time,
                         rep.steps_accepted, rep.total_stages))
    rows.sort(key=lambda r: (r[0], -r[1]))
    if out:
        write_csv(out, ("method", "tol", "err_u", "err_p", "wall_time",
                        "steps", "total_stages"), rows)
    return rows


def reynolds_sweep(cfg: RunConfig, re_values: Sequence[float],
                   out: Optional[str] = None):
    """Adaptive runs over Reynolds numbers, advection neglected.

    Rows: (Re, err_u, wall_time, avg_stages, total_stages, steps, rejected).
    """
    rows = []
    for re_val in re_values:
        rep = run_simulation(replace(cfg, re=float(re_val), advection=False,
                                     adaptive=True, out=None))
        rows.append((float(re_val),
                     rep.err_u if rep.err_u is not None else float("nan"),
                     rep.wall_time, rep.avg_stages, rep.total_stages,
                     rep.steps_accepted, rep.steps_rejected))
    rows.sort(key=lambda r: r[0])
    if out:
        write_csv(out, ("re", "err_u", "wall_time", "avg_stages", "total_stages",
                        "steps", "rejected"), rows)
    return rows


# ---------------------------------------------------------------------------
# cavity centerline comparison
# ---------------------------------------------------------------------------

def centerline_profiles(report: RunReport, bc_velocity=None):
    """u on the vertical and v on the horizontal centerline, wall values included."""
    N = report.spec.N
    if N % 2:
        raise ValueError("centerline extraction needs even N")
    dx = report.spec.dx
    yk = np.concatenate([[0.0], (np.arange(1, N + 1) - 0.5) * dx, [1.0]])
    u_line = report.u[N // 2 - 1, :]
    if bc_velocity is None:
        u0 = u1 = 0.0
        v0 = v1 = 0.0
    else:
        u0 = float(np.asarray(bc_velocity(report.t_final, 0.5, 0.0)[0]))
        u1 = float(np.asarray(bc_velocity(report.t_final, 0.5, 1.0)[0]))
        v0 = float(np.asarray(bc_velocity(report.t_final, 0.0, 0.5)[1]))
        v1 = float(np.asarray(bc_velocity(report.t_final, 1.0, 0.5)[1]))
    u_prof = np.concatenate([[u0], u_line, [u1]])
    xk = yk
    v_line = report.v[:, N // 2 - 1]
    v_prof = np.concatenate([[v0], v_line, [v1]])
    return (yk, u_prof), (xk, v_prof)


def ghia_compare(report: RunReport, reference_csv: str, bc_velocity=None):
    """RMS/max deviation of centerline profiles from reference data.

    The reference file is a CSV with header ``profile,coord,value``; rows
    with profile ``u`` give u(0.5, y) at coord = y, rows with ``v`` give
    v(x, 0.5) at coord = x.  A missing file is skipped with a notice.
    """
    if not os.path.exists(reference_csv):
        print(f"ghia_compare: reference file {reference_csv!r} not found; skipped")
        return None
    ref = {"u": [], "v": []}
    with open(reference_csv) as fh:
        header = fh.readline()
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) != 3 or not parts[0]:
                continue
            ref[parts[0]].append((float(parts[1]), float(parts[2])))
    (yk, u_prof), (xk, v_prof) = centerline_profiles(report, bc_velocity)
    out = {}
    for name, (coords, prof) in (("u", (yk, u_prof)), ("v", (xk, v_prof))):
        data = sorted(ref[name])
        if not data:
            continue
        cs = np.array([c for c, _ in data])
        vals = np.array([v for _, v in data])
        interp = np.interp(cs, coords, prof)
        dev = interp - vals
        out[name] = {"rms": float(np.sqrt(np.mean(dev**2))),
                     "max": float(np.max(np.abs(dev)))}
    return out
