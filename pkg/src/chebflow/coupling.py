"""Incompressibility couplings for the stabilized integrators.

Two families are implemented.

Projection methods advance the momentum equation with the pressure frozen
at p_n and restore incompressibility with Poisson solves:

- PM1  projects once per step (and updates p via (2/dt) phi);
- PM1V projects every internal stage, advancing the recursion with the
  projected stages;
- PM3  is PM1 with exact wall-normal derivative data replacing the
  Dirichlet tangential wall values in the one-sided diffusion stencil
  (a test-only device for quantifying the virtual-velocity boundary layer).

The differential-algebraic step treats the semi-discrete system as an
index-2 DAE: the momentum right-hand side carries no pressure at all, every
stage U*_i is projected through the pressure-like variable phi_i solving
``lap phi_i = div(U*_i, t_i) / (c_i dt)``, and the recursion is advanced
with the unprojected buffers (the realization equivalent to the Butcher
form of the method).  Accurate pressures are recovered afterwards: AP1 by
one extra Poisson solve of the hidden constraint, AP2 by differentiating a
Lagrange interpolant of the pressure primitive through the phi_i (needs
second-order internal stages, i.e. RKC), AP2W by first combining three
first-order phi_i into a second-order average (for ROCK2's order-one
stages).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Tuple

import numpy as np

from .grid import BoundaryData, CellField, GridSpec, VelocityField
from .integrators import (Rock2Tableau, RkcTableau, StageHook, pirock_step,
                          rk4_step, rkc_step, rkc_tableau, rock2_step,
                          rock2_tableau)
from .poisson import PoissonSolver
from .spatial import MomentumRhsConfig, divergence, gradient_to_faces, momentum_rhs

_DEGENERATE_NODE_TOL = 1e-12


class Stepper:
    """One integrator method bound to a stage count."""

    def __init__(self, method: str, s: int, eps: float = 0.15,
                 table_path: Optional[str] = None):
        self.method = method
        if method == "rkc":
            self.tableau = rkc_tableau(s, eps)
            self.s = s
        elif method in ("rock2", "pirock"):
            self.tableau = rock2_tableau(s, table_path)
            self.s = s
        elif method == "rk4":
            self.tableau = None
            self.s = 4
        else:
            raise ValueError(f"unknown integrator {method!r}")

    def nodes(self) -> np.ndarray:
        if self.method == "rk4":
            return np.array([0.0, 0.5, 0.5, 1.0, 1.0])
        return self.tableau.nodes()

    def advance(self, f, y, t, dt, hook=None, err_norm=None):
        if self.method == "rkc":
            return rkc_step(f, y, t, dt, self.tableau, hook, err_norm)
        if self.method == "rock2":
            return rock2_step(f, y, t, dt, self.tableau, hook, err_norm)
        if self.method == "rk4":
            return rk4_step(f, y, t, dt, hook), None
        raise ValueError("pirock advances through advance_split")

    def advance_split(self, f_diffusion, f_advection, y, t, dt):
        if self.method != "pirock":
            raise ValueError("advance_split is only for pirock")
        return pirock_step(f_diffusion, f_advection, y, t, dt, self.tableau)


@dataclass
class FlowSystem:
    """Grid, boundary data, forcing and the shared Poisson solver."""

    spec: GridSpec
    bc: BoundaryData
    forcing: Optional[Callable] = None
    advection: bool = True
    poisson: Optional[PoissonSolver] = None
    dct_algorithm: str = "hybrid"
    forcing_factory: Optional[Callable] = None

    def __post_init__(self):
        if self.poisson is None:
            self.poisson = PoissonSolver(self.spec.N, self.dct_algorithm)
        self._forcing_eval = None
        if self.forcing_factory is not None and self.forcing is not None:
            xu, yu = self.spec.u_points()
            xv, yv = self.spec.v_points()
            self._forcing_eval = self.forcing_factory(xu, yu, xv, yv)

    def rhs_config(self, include_pressure: bool, pm3: bool = False,
                   advection: Optional[bool] = None, diffusion: bool = True,
                   forcing: bool = True) -> MomentumRhsConfig:
        return MomentumRhsConfig(
            include_pressure=include_pressure,
            include_advection=self.advection if advection is None else advection,
            forcing=self.forcing if forcing else None,
            pm3_derivative=self.bc.tangential_normal_derivative if pm3 else None,
            include_diffusion=diffusion,
        )

    def rhs_flat(self, cfg: MomentumRhsConfig, p: Optional[CellField] = None):
        """Momentum RHS as a callable on flattened state vectors."""
        N = self.spec.N
        cached = self._forcing_eval if cfg.forcing is not None else None
        if cached is not None:
            cfg = replace(cfg, forcing=None)

        def f(t, w):
            vel = VelocityField.from_flat(w, N)
            r = momentum_rhs(vel, p, self.bc, self.spec, t, cfg)
            if cached is not None:
                f1, f2 = cached(t)
                r.u += f1
                r.v += f2
            return r.flatten()

        return f

    def divergence_of(self, w: np.ndarray, t: float) -> CellField:
        return divergence(VelocityField.from_flat(w, self.spec.N), self.bc, self.spec, t)


@dataclass
class CouplingState:
    """Velocity/pressure pair plus the per-step log of stage potentials."""

    u: VelocityField
    p: CellField
    t: float
    phi_log: List[Tuple[int, float, CellField]] = field(default_factory=list)

    def copy(self) -> "CouplingState":
        return CouplingState(self.u.copy(), self.p.copy(), self.t, list(self.phi_log))


# ---------------------------------------------------------------------------
# projection methods
# ---------------------------------------------------------------------------

def _project_once(system: FlowSystem, w_star: np.ndarray, t: float):
    """Solve lap phi = div(u*) and subtract grad(phi); returns (w, phi)."""
    div = system.divergence_of(w_star, t)
    phi = system.poisson.solve(div)
    w = w_star - gradient_to_faces(phi, system.spec).flatten()
    return w, phi


def pm1_step(state: CouplingState, system: FlowSystem, stepper: Stepper,
             dt: float, err_norm=None, pm3: bool = False):
    """One projection step: integrate with frozen pressure, project, update p.

    Returns (new_state, err); err is the pre-projection estimate when an
    error norm is supplied (the projection itself is error-free for the
    divergence-free part).
    """
    if pm3 and system.bc.tangential_normal_derivative is None:
        raise ValueError("PM3 requires exact boundary derivatives")
    cfg = system.rhs_config(include_pressure=True, pm3=pm3)
    p_n = state.p
    w0 = state.u.flatten()
    t = state.t
    if stepper.method == "pirock":
        # diffusion operator carries the frozen pressure gradient; advection
        # operator carries the nonlinear term and the forcing
        f_d = system.rhs_flat(system.rhs_config(True, pm3=pm3, advection=False,
                                                forcing=False), p_n)
        f_a = system.rhs_flat(system.rhs_config(False, diffusion=False))
        w_star = stepper.advance_split(f_d, f_a, w0, t, dt)
        err = None
    else:
        f = system.rhs_flat(cfg, p_n)
        w_star, err = stepper.advance(f, w0, t, dt, hook=None, err_norm=err_norm)
    w_new, phi1 = _project_once(system, w_star, t + dt)
    p_new = CellField(p_n.values + (2.0 / dt) * phi1.values).zero_mean()
    new = CouplingState(VelocityField.from_flat(w_new, system.spec.N), p_new, t + dt)
    return new, err


def pm3_step(state: CouplingState, system: FlowSystem, stepper: Stepper,
             dt: float, err_norm=None):
    """PM1 with the exact-derivative tangential boundary treatment."""
    return pm1_step(state, system, stepper, dt, err_norm=err_norm, pm3=True)


def _stage_hook(system: FlowSystem, mode: str, dt: float, log: list):
    """Build the stage hook for PM1V (state) or the DAE step (dual buffer)."""

    def project_state(i, ci, ti, w_star):
        w, phi = _project_once(system, w_star, ti)
        log.append((i, ci, phi))
        return w, phi

    def project_scaled(i, ci, ti, w_star):
        if ci <= _DEGENERATE_NODE_TOL:
            raise ValueError(f"degenerate node c_{i} = {ci}")
        div = system.divergence_of(w_star, ti)
        phi = system.poisson.solve(CellField(div.values / (ci * dt)))
        w = w_star - ci * dt * gradient_to_faces(phi, system.spec).flatten()
        log.append((i, ci, phi))
        return w, phi

    if mode == "project_state":
        return StageHook(mode, project_state)
    return StageHook(mode, project_scaled)


def pm1v_step(state: CouplingState, system: FlowSystem, stepper: Stepper,
              dt: float, err_norm=None):
    """Per-stage-projection variant of PM1 (recursion on projected stages)."""
    log: list = []
    hook = _stage_hook(system, "project_state", dt, log)
    f = system.rhs_flat(system.rhs_config(include_pressure=True), state.p)
    w_new, err = stepper.advance(f, state.u.flatten(), state.t, dt, hook, err_norm)
    phi_last = log[-1][2]
    p_new = CellField(state.p.values + (2.0 / dt) * phi_last.values).zero_mean()
    new = CouplingState(VelocityField.from_flat(w_new, system.spec.N), p_new,
                        state.t + dt, phi_log=log)
    return new, err


def dae_step(state: CouplingState, system: FlowSystem, stepper: Stepper,
             dt: float, err_norm=None):
    """Index-2 DAE step: pressure-free RHS, every stage projected, dual buffers.

    The stage potentials (c_i, phi_i) are logged for the pressure
    recoveries; the state pressure is set to the first-order phi_{s+1}.
    """
    log: list = []
    hook = _stage_hook(system, "project_dual_buffer", dt, log)
    f = system.rhs_flat(system.rhs_config(include_pressure=False))
    w_new, err = stepper.advance(f, state.u.flatten(), state.t, dt, hook, err_norm)
    p_new = log[-1][2].zero_mean()
    new = CouplingState(VelocityField.from_flat(w_new, system.spec.N), p_new,
                        state.t + dt, phi_log=log)
    return new, err


# ---------------------------------------------------------------------------
# pressure recoveries
# ---------------------------------------------------------------------------

def pm1_second_order_pressure(state: CouplingState, system: FlowSystem) -> CellField:
    """Second projection on the acceleration: p + phi2 with lap phi2 = div F."""
    cfg = system.rhs_config(include_pressure=True)
    F = momentum_rhs(state.u, state.p, system.bc, system.spec, state.t, cfg)
    rate_bc = (system.bc.as_rate() if system.bc.velocity_dt is not None
               else BoundaryData(velocity=lambda t, x, y: (np.zeros_like(x), np.zeros_like(y))))
    rhs = divergence(F, rate_bc, system.spec, state.t)
    phi2 = system.poisson.solve(rhs)
    return CellField(state.p.values + phi2.values).zero_mean()


def ap1_pressure(state: CouplingState, system: FlowSystem) -> CellField:
    """Solve the hidden constraint lap p = div F(u, t) - r1'(t) for the pressure."""
    if system.bc.velocity_dt is None:
        raise ValueError("AP1 requires boundary time derivative")
    cfg = system.rhs_config(include_pressure=False)
    F = momentum_rhs(state.u, None, system.bc, system.spec, state.t, cfg)
    rhs = divergence(F, system.bc.as_rate(), system.spec, state.t)
    return system.poisson.solve(rhs).zero_mean()


def _lagrange_derivative_at_last(times: np.ndarray) -> np.ndarray:
    """d/dt of each Lagrange basis polynomial, evaluated at the last node."""
    m = len(times)
    tm = times[-1]
    out = np.empty(m)
    for j in range(m):
        others = np.delete(times, j)
        if j == m - 1:
            out[j] = np.sum(1.0 / (tm - others))
        else:
            mask = others != tm
            num = np.prod(tm - others[mask])
            out[j] = num / np.prod(times[j] - others)
    return out


def reconstruct_pressure(entries, dt: float) -> CellField:
    """Pressure point value from running averages phi_i.

    ``entries`` is a list of (c_i, phi_i or None) pairs sorted by node; the
    first entry is the step start (c = 0, average zero) and the last must be
    the step end (c = 1).  Returns the derivative of the interpolant of the
    pressure primitive, evaluated at the step end, with zero-mean gauge.
    """
    cs = np.array([c for c, _ in entries], dtype=float)
    if len(cs) < 3:
        raise ValueError("pressure reconstruction needs at least 3 nodes")
    if np.unique(cs).size != cs.size:
        raise ValueError("pressure reconstruction nodes must be distinct")
    if abs(cs[0]) > 1e-14 or abs(cs[-1] - 1.0) > 1e-10:
        raise ValueError("reconstruction nodes must bracket the step (c=0 and c=1)")
    dl = _lagrange_derivative_at_last(cs * dt)
    N = entries[-1][1].N
    acc = np.zeros((N, N))
    for (c, phi), w in zip(entries[1:], dl[1:]):
        acc += (c * dt) * w * phi.values
    return CellField(acc).zero_mean()


def ap2_pressure(phi_log, stage_indices, dt: float) -> CellField:
    """Lagrange reconstruction through selected stage potentials (RKC).

    ``stage_indices`` selects stages by their U-index; index 1 denotes the
    step start (zero average).  The last selected stage must be the final
    one (node 1).  Stage potentials must be second-order accurate averages,
    which requires second-order internal stages and s >= 3.
    """
    by_index = {i: (c, phi) for i, c, phi in phi_log}
    entries = []
    for k in stage_indices:
        if k == 1:
            entries.append((0.0, None))
        elif k in by_index:
            entries.append(by_index[k])
        else:
            raise ValueError(f"stage {k} not present in the potential log")
    entries.sort(key=lambda e: e[0])
    if entries[0][0] != 0.0:
        raise ValueError("reconstruction must include the step start")
    return reconstruct_pressure(entries, dt)


@dataclass(frozen=True)
class Ap2wCoefficients:
    """Combination weights turning three first-order averages into a
    second-order one (for methods with order-one internal stages)."""

    stages: Tuple[int, int, int]
    c: Tuple[float, float, float]
    e: Tuple[float, float, float]
    alpha: float
    beta: float
    gamma: float


def ap2w_coefficients(tableau: Rock2Tableau, stages=(2, 3, 4)) -> Ap2wCoefficients:
    """Weights annihilating both the O(dt) node offset and the shared
    leading error term of the stage averages."""
    from .integrators import butcher_tableau

    A, b, c = butcher_tableau(tableau)
    i, j, k = stages

    def e_of(m):
        cm = c[m - 1]
        if cm <= _DEGENERATE_NODE_TOL:
            raise ValueError(f"degenerate node c_{m} = {cm}")
        return 0.5 * cm - float(A[m - 1, :] @ c[:-1]) / cm

    ci, cj, ck = c[i - 1], c[j - 1], c[k - 1]
    if min(abs(ci - cj), abs(ck - cj), abs(ci - ck)) < 1e-12:
        raise ValueError("AP2W stages must have distinct nodes")
    ei, ej, ek = e_of(i), e_of(j), e_of(k)
    alpha = ej / (cj - ci)
    beta = ei / (ci - cj) - ek / (ck - cj)
    gamma = ej / (ck - cj)
    if abs(alpha + beta + gamma) < 1e-10:
        raise ValueError(
            f"AP2W combination degenerates (alpha+beta+gamma = {alpha + beta + gamma:.3e}); "
            "the internal stages are already second order")
    return Ap2wCoefficients(stages=(i, j, k), c=(ci, cj, ck), e=(ei, ej, ek),
                            alpha=alpha, beta=beta, gamma=gamma)


def ap2w_pressure(phi_log, coeffs: Ap2wCoefficients, dt: float) -> CellField:
    """AP2 reconstruction seeded with the combined second-order average."""
    by_index = {i: (c, phi) for i, c, phi in phi_log}
    i, j, k = coeffs.stages
    phi_i, phi_j, phi_k = (by_index[m][1] for m in (i, j, k))
    s_total = coeffs.alpha + coeffs.beta + coeffs.gamma
    bar = CellField((coeffs.alpha * phi_i.values + coeffs.beta * phi_j.values
                     + coeffs.gamma * phi_k.values) / s_total)
    last_index = max(by_index)
    c_last, phi_last = by_index[last_index]
    entries = [(0.0, None), (coeffs.c[1], bar), (c_last, phi_last)]
    return reconstruct_pressure(entries, dt)
