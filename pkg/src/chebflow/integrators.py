"""Stabilized explicit Runge-Kutta steppers and step-size control.

RKC realizes the shifted/damped Chebyshev stability polynomial
``R_s(z) = a_s + b_s T_s(w0 + w1 z)`` through a three-term stage recursion;
ROCK2 realizes ``w(z) P_{s-2}(z)`` through a tabulated recursion plus a
two-stage finishing procedure.  PIROCK couples the ROCK2 diffusion
propagation with an explicit advection treatment (the reaction branch and
its implicit stages are not implemented; only the fixed-step l = 2 variant
is, for which the diffusion part coincides with ROCK2).

Every stage of RKC/ROCK2/RK4 can be routed through a :class:`StageHook`,
which is how the incompressibility couplings project stages.  Two projected
modes exist:

- ``project_state``: the recursion is advanced with the projected stages
  (the per-stage projection variant of the projection method);
- ``project_dual_buffer``: the recursion is advanced with the *unprojected*
  stages while the right-hand side is evaluated at the projected ones (the
  realization consistent with the index-2 DAE formulation).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grid import weighted_rms_norm

STAGE_CAP = 200
RKC_GROWTH = 0.653
ROCK2_GROWTH = 0.811

HOOK_MODES = ("none", "project_state", "project_dual_buffer")


class IntegrationDiverged(RuntimeError):
    """Raised when a stage turns non-finite; carries the stage index."""

    def __init__(self, stage: int):
        super().__init__(f"diverged at stage {stage}")
        self.stage = stage


@dataclass
class StageHook:
    """Per-stage processing for the incompressibility couplings.

    ``callback(i, c_i, t_i, y_star) -> (y_processed, phi_i)`` receives the
    stage index i (stages are numbered U_1..U_{s+1}; U_1 is never passed),
    the node c_i, the stage time t_i and the unprocessed stage vector.
    """

    mode: str = "none"
    callback: Optional[Callable] = None

    def __post_init__(self):
        if self.mode not in HOOK_MODES:
            raise ValueError(f"unknown hook mode {self.mode!r}")


def _apply_hook(hook, i, ci, ti, y_star):
    if hook is None or hook.callback is None:
        return y_star
    y_proc, _phi = hook.callback(i, ci, ti, y_star)
    return y_proc


def _check_finite(y, stage):
    if not np.all(np.isfinite(y)):
        raise IntegrationDiverged(stage)


# ---------------------------------------------------------------------------
# RKC
# ---------------------------------------------------------------------------

def _chebyshev_at(s: int, x: float):
    """T_j(x), T_j'(x), T_j''(x) for j = 0..s by the differentiated recursions."""
    T = np.zeros(s + 1)
    Tp = np.zeros(s + 1)
    Tpp = np.zeros(s + 1)
    T[0] = 1.0
    if s >= 1:
        T[1], Tp[1] = x, 1.0
    for j in range(1, s):
        T[j + 1] = 2 * x * T[j] - T[j - 1]
        Tp[j + 1] = 2 * T[j] + 2 * x * Tp[j] - Tp[j - 1]
        Tpp[j + 1] = 4 * Tp[j] + 2 * x * Tpp[j] - Tpp[j - 1]
    return T, Tp, Tpp


@dataclass(frozen=True)
class RkcTableau:
    """RKC recursion coefficients for ``s`` stages and damping parameter eps.

    Arrays are indexed by the recursion index j (entries below the first
    valid j are unused).  ``c`` holds the nodes of the stages g_0..g_s
    computed by running the recursion on y' = 1; the final node is 1.
    """

    s: int
    eps: float
    w0: float
    w1: float
    a: np.ndarray
    b: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    kappa: np.ndarray
    kappa1: float
    c: np.ndarray

    @property
    def damping(self) -> float:
        return float(self.a[self.s] + self.b[self.s])

    def nodes(self) -> np.ndarray:
        """Nodes of the DAE stages U_1..U_{s+1} (U_i = g_{i-1})."""
        return self.c.copy()


def rkc_tableau(s: int, eps: float = 0.15) -> RkcTableau:
    if s < 2:
        raise ValueError("RKC needs at least 2 stages")
    if s > STAGE_CAP:
        raise ValueError(f"stage count {s} exceeds the cap {STAGE_CAP}")
    if eps <= 0:
        raise ValueError("damping parameter must be positive")
    w0 = 1.0 + eps / s**2
    T, Tp, Tpp = _chebyshev_at(s, w0)
    w1 = Tp[s] / Tpp[s]
    b = np.zeros(s + 1)
    b[2:] = Tpp[2:] / Tp[2:] ** 2
    b[0] = b[1] = b[2]
    a = 1.0 - b * T
    mu = np.zeros(s + 1)
    nu = np.zeros(s + 1)
    kappa = np.zeros(s + 1)
    j = np.arange(2, s + 1)
    mu[2:] = 2 * b[j] * w0 / b[j - 1]
    nu[2:] = -b[j] / b[j - 2]
    kappa[2:] = 2 * b[j] * w1 / b[j - 1]
    kappa1 = b[1] * w1
    c = np.zeros(s + 1)
    c[1] = kappa1
    for jj in range(2, s + 1):
        c[jj] = mu[jj] * c[jj - 1] + nu[jj] * c[jj - 2] + kappa[jj] * (1.0 - a[jj - 1])
    return RkcTableau(s=s, eps=eps, w0=w0, w1=w1, a=a, b=b, mu=mu, nu=nu,
                      kappa=kappa, kappa1=kappa1, c=c)


def rkc_step(f, y, t, dt, tableau: RkcTableau, hook: Optional[StageHook] = None,
             err_norm=None):
    """One RKC step; returns (y_next, err) with err None unless requested.

    The local-error estimate (based on an approximation of y''' that assumes
    a plain ODE) is only valid without per-stage projection, so requesting
    it with a projected hook mode is refused.
    """
    mode = hook.mode if hook is not None else "none"
    if err_norm is not None and mode != "none":
        raise ValueError("RKC error estimate is invalid when stages are projected")
    tab = tableau
    s, c = tab.s, tab.c
    y = np.asarray(y, dtype=float)
    f0 = f(t, y)
    dual = mode == "project_dual_buffer"

    g_star = y + tab.kappa1 * dt * f0
    _check_finite(g_star, 2)
    g_proc = _apply_hook(hook, 2, c[1], t + c[1] * dt, g_star)
    prev2_s = prev2_p = y
    prev_s, prev_p = (g_star, g_proc) if dual else (g_proc, g_proc)
    for j in range(2, s + 1):
        fj = f(t + c[j - 1] * dt, prev_p)
        g_star = (y + tab.mu[j] * (prev_s - y) + tab.nu[j] * (prev2_s - y)
                  + tab.kappa[j] * dt * (fj - tab.a[j - 1] * f0))
        _check_finite(g_star, j + 1)
        g_proc = _apply_hook(hook, j + 1, c[j], t + c[j] * dt, g_star)
        prev2_s, prev2_p = prev_s, prev_p
        prev_s, prev_p = (g_star, g_proc) if dual else (g_proc, g_proc)
    y1 = prev_p
    err = None
    if err_norm is not None:
        d = (12.0 * (y - y1) + 6.0 * dt * (f0 + f(t + dt, y1))) / 15.0
        err = err_norm(d, y)
    return y1, err


# ---------------------------------------------------------------------------
# ROCK2 (vendored coefficient table)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rock2Tableau:
    """ROCK2 recursion coefficients for one tabulated stage count.

    ``mu[j]``, ``nu[j]``, ``kappa[j]`` drive the three-term recursion
    (j = 1..s-2 for the method itself; entries up to j = s extend the same
    orthogonal family and are used by the PIROCK coupling stages).
    ``sigma``/``tau`` are the finishing coefficients; the assembled weights
    are b_{s-1} = 2 sigma - tau/sigma and b_s = tau/sigma.
    """

    s: int
    eta: float
    l: float
    lstar: float
    sigma: float
    tau: float
    mu: np.ndarray
    nu: np.ndarray
    kappa: np.ndarray
    c_ext: np.ndarray = field(repr=False)   # nodes of g_0..g_s under the plain recursion

    def nodes(self) -> np.ndarray:
        """Nodes of the DAE stages U_1..U_{s+1} (method stages, not c_ext)."""
        s = self.s
        n = np.zeros(s + 1)
        n[:s - 1] = self.c_ext[:s - 1]                 # g_0..g_{s-2}
        n[s - 1] = self.c_ext[s - 2] + self.sigma      # g_{s-1}
        n[s] = self.c_ext[s - 2] + 2 * self.sigma      # y1
        return n


def _parse_rock2_table(path):
    records = {}
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    i = 0
    while i < len(lines):
        head = lines[i].split()
        if head[0] != "s":
            raise ValueError(f"corrupt ROCK2 table near: {lines[i][:60]}")
        kv = dict(zip(head[0::2], head[1::2]))
        s = int(kv["s"])
        mu = np.array([float(x) for x in lines[i + 1].split()[1:]])
        nu = np.array([float(x) for x in lines[i + 2].split()[1:]])
        ka = np.array([float(x) for x in lines[i + 3].split()[1:]])
        if len(mu) != s or len(nu) != s - 1 or len(ka) != s - 1:
            raise ValueError(f"corrupt ROCK2 record for s={s}")
        records[s] = dict(eta=float(kv["eta"]), l=float(kv["l"]),
                          lstar=float(kv["lstar"]), sigma=float(kv["sigma"]),
                          tau=float(kv["tau"]), mu=mu, nu=nu, kappa=ka)
        i += 4
    return records


_ROCK2_CACHE = {}


def rock2_table_path(path: Optional[str] = None) -> str:
    if path:
        return path
    env = os.environ.get("CHEBFLOW_ROCK2_TABLE")
    if env:
        return env
    return os.path.join(os.path.dirname(__file__), "data", "rock2_coeffs.txt")


def rock2_degrees(path: Optional[str] = None):
    """Sorted stage counts available in the coefficient table."""
    p = rock2_table_path(path)
    if p not in _ROCK2_CACHE:
        _ROCK2_CACHE[p] = _parse_rock2_table(p)
    return sorted(_ROCK2_CACHE[p])


def rock2_tableau(s: int, path: Optional[str] = None) -> Rock2Tableau:
    p = rock2_table_path(path)
    if p not in _ROCK2_CACHE:
        _ROCK2_CACHE[p] = _parse_rock2_table(p)
    records = _ROCK2_CACHE[p]
    if s not in records:
        degrees = sorted(records)
        below = max((d for d in degrees if d < s), default=None)
        above = min((d for d in degrees if d > s), default=None)
        near = ", ".join(str(d) for d in (below, above) if d is not None)
        raise ValueError(f"ROCK2 degree s={s} not in table; nearest available: {near}")
    rec = records[s]
    mu = np.zeros(s + 1)
    nu = np.zeros(s + 1)
    ka = np.zeros(s + 1)
    mu[1:] = rec["mu"]
    nu[2:] = rec["nu"]
    ka[2:] = rec["kappa"]
    c_ext = np.zeros(s + 1)
    c_ext[1] = mu[1]
    for j in range(2, s + 1):
        c_ext[j] = mu[j] - nu[j] * c_ext[j - 1] - ka[j] * c_ext[j - 2]
    tab = Rock2Tableau(s=s, eta=rec["eta"], l=rec["l"], lstar=rec["lstar"],
                       sigma=rec["sigma"], tau=rec["tau"], mu=mu, nu=nu,
                       kappa=ka, c_ext=c_ext)
    A, b, c = butcher_tableau(tab)
    if abs(b.sum() - 1.0) > 1e-10 or abs((b * c[:-1]).sum() - 0.5) > 1e-10:
        raise ValueError(f"ROCK2 table record s={s} violates the order conditions")
    return tab


def rock2_step(f, y, t, dt, tableau: Rock2Tableau, hook: Optional[StageHook] = None,
               err_norm=None):
    """One ROCK2 step; the embedded error estimate is valid in every mode."""
    tab = tableau
    s = tab.s
    mode = hook.mode if hook is not None else "none"
    dual = mode == "project_dual_buffer"
    y = np.asarray(y, dtype=float)
    nodes = tab.nodes()

    prev2_s = prev2_p = y
    g_star = y + tab.mu[1] * dt * f(t, y)
    _check_finite(g_star, 2)
    g_proc = _apply_hook(hook, 2, nodes[1], t + nodes[1] * dt, g_star)
    prev_s, prev_p = (g_star, g_proc) if dual else (g_proc, g_proc)
    for j in range(2, s - 1):
        fj = f(t + nodes[j - 1] * dt, prev_p)
        g_star = tab.mu[j] * dt * fj - tab.nu[j] * prev_s - tab.kappa[j] * prev2_s
        _check_finite(g_star, j + 1)
        g_proc = _apply_hook(hook, j + 1, nodes[j], t + nodes[j] * dt, g_star)
        prev2_s, prev2_p = prev_s, prev_p
        prev_s, prev_p = (g_star, g_proc) if dual else (g_proc, g_proc)

    # finishing: g_{s-1}, then y1 assembled from g*_s and the correction
    f_sm2 = f(t + nodes[s - 2] * dt, prev_p)
    g_star = prev_s + tab.sigma * dt * f_sm2
    _check_finite(g_star, s)
    g_proc = _apply_hook(hook, s, nodes[s - 1], t + nodes[s - 1] * dt, g_star)
    last_s, last_p = (g_star, g_proc) if dual else (g_proc, g_proc)

    f_sm1 = f(t + nodes[s - 1] * dt, last_p)
    err_vec = tab.sigma * (1.0 - tab.tau / tab.sigma**2) * dt * (f_sm1 - f_sm2)
    g_star = last_s + tab.sigma * dt * f_sm1 - err_vec
    _check_finite(g_star, s + 1)
    y1 = _apply_hook(hook, s + 1, nodes[s], t + nodes[s] * dt, g_star)
    err = err_norm(err_vec, y) if err_norm is not None else None
    return y1, err


# ---------------------------------------------------------------------------
# PIROCK (fixed step, l = 2, no reaction terms)
# ---------------------------------------------------------------------------

def pirock_step(f_diffusion, f_advection, y, t, dt, tableau: Rock2Tableau):
    """One PIROCK step for y' = F_D(y) + F_A(y), reaction-free, l = 2.

    The diffusion propagation is exactly ROCK2; two extra recursion stages
    provide the base point for the advection coupling, whose weights and the
    beta = 1 - 2 P_s'(0) factor make the combination second order.  Time
    dependence is handled by carrying t as an extra state component advanced
    by the diffusion quadrature, which reproduces the ROCK2 stage times
    exactly when the advection term vanishes.
    """
    tab = tableau
    s = tab.s
    y = np.asarray(y, dtype=float)
    n = y.size

    def FD(k):
        out = np.empty(n + 1)
        out[:n] = f_diffusion(k[n], k[:n])
        out[n] = 1.0
        return out

    def FA(k):
        out = np.empty(n + 1)
        out[:n] = f_advection(k[n], k[:n])
        out[n] = 0.0
        return out

    k0 = np.append(y, t)
    k_prev2 = k0
    k_prev = k0 + tab.mu[1] * dt * FD(k0)
    _check_finite(k_prev, 2)
    k_sm2 = fd_sm2 = None
    if s == 3:
        k_sm2 = k_prev               # K_{s-2} = K_1
    for j in range(2, s + 1):
        fd_prev = FD(k_prev)
        if j == s - 1:
            k_sm2, fd_sm2 = k_prev, fd_prev   # reuse FD(K_{s-2})
        k_new = tab.mu[j] * dt * fd_prev - tab.nu[j] * k_prev - tab.kappa[j] * k_prev2
        _check_finite(k_new, j + 1)
        k_prev2, k_prev = k_prev, k_new
    K = k_prev                       # K_{s-2+l} with l = 2
    fd_K = FD(K)
    if fd_sm2 is None:
        fd_sm2 = FD(k_sm2)
    ks_m1 = k_sm2 + tab.sigma * dt * fd_sm2
    fd_sm1 = FD(ks_m1)
    ks_star = ks_m1 + tab.sigma * dt * fd_sm1

    gamma = 1.0 - math.sqrt(2.0) / 2.0
    beta = 1.0 - 2.0 * tab.c_ext[s]          # 1 - 2 P_s'(0)
    fa_K = FA(K)
    k_s3 = K + (1.0 - 2.0 * gamma) * dt * fa_K
    k_s4 = K + (dt / 3.0) * fa_K
    k_s5 = K + (2.0 / 3.0) * beta * dt * fd_K + (2.0 / 3.0) * dt * FA(k_s4)

    y1 = (ks_star
          - tab.sigma * (1.0 - tab.tau / tab.sigma**2) * dt * (fd_sm1 - fd_sm2)
          + 0.25 * dt * fa_K
          + 0.75 * dt * FA(k_s5)
          + dt / (2.0 - 4.0 * gamma) * (FD(k_s3) - fd_K))
    _check_finite(y1, s + 6)
    return y1[:n]


# ---------------------------------------------------------------------------
# RK4 reference
# ---------------------------------------------------------------------------

_RK4_A = ((), (0.5,), (0.0, 0.5), (0.0, 0.0, 1.0))
_RK4_B = (1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0)
_RK4_C = (0.0, 0.5, 0.5, 1.0)


def rk4_step(f, y, t, dt, hook: Optional[StageHook] = None):
    """Classical RK4 step; a hook is applied in dual-buffer (DAE) semantics."""
    y = np.asarray(y, dtype=float)
    if hook is None or hook.callback is None:
        k1 = f(t, y)
        k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = f(t + dt, y + dt * k3)
        y1 = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _check_finite(y1, 5)
        return y1
    fs = []
    for i, row in enumerate(_RK4_A):
        y_star = y + dt * sum(a * fk for a, fk in zip(row, fs) if a)
        if i == 0:
            y_proc = y
        else:
            _check_finite(y_star, i + 1)
            y_proc = _apply_hook(hook, i + 1, _RK4_C[i], t + _RK4_C[i] * dt, y_star)
        fs.append(f(t + _RK4_C[i] * dt, y_proc))
    y_star = y + dt * sum(b * fk for b, fk in zip(_RK4_B, fs))
    _check_finite(y_star, 5)
    return _apply_hook(hook, 5, 1.0, t + dt, y_star)


# ---------------------------------------------------------------------------
# Butcher reconstruction and nodes
# ---------------------------------------------------------------------------

def butcher_tableau(tableau):
    """Assemble (A, b, c) from the stage recursion.

    ``A`` has one row per stage U_1..U_{s+1} (the last row is b, the
    quadrature weights); ``c`` are the row sums.  Columns correspond to
    F(U_1)..F(U_s).
    """
    if isinstance(tableau, RkcTableau):
        s = tableau.s
        A = np.zeros((s + 1, s))
        A[1, 0] = tableau.kappa1
        for j in range(2, s + 1):
            A[j] = tableau.mu[j] * A[j - 1] + tableau.nu[j] * A[j - 2]
            A[j, j - 1] += tableau.kappa[j]
            A[j, 0] -= tableau.kappa[j] * tableau.a[j - 1]
    elif isinstance(tableau, Rock2Tableau):
        s = tableau.s
        A = np.zeros((s + 1, s))
        A[1, 0] = tableau.mu[1]
        for j in range(2, s - 1):
            A[j] = -tableau.nu[j] * A[j - 1] - tableau.kappa[j] * A[j - 2]
            A[j, j - 1] += tableau.mu[j]
        A[s - 1] = A[s - 2]
        A[s - 1, s - 2] += tableau.sigma
        A[s] = A[s - 2]
        A[s, s - 2] += 2 * tableau.sigma - tableau.tau / tableau.sigma
        A[s, s - 1] += tableau.tau / tableau.sigma
    else:
        raise TypeError("unsupported tableau type")
    b = A[-1].copy()
    c = A.sum(axis=1)
    return A, b, c


def nodes_c(method: str, s: int, eps: float = 0.15):
    """Stage nodes c_1..c_{s+1} (including the final node 1)."""
    if method == "rkc":
        return rkc_tableau(s, eps).nodes()
    if method in ("rock2", "pirock"):
        return rock2_tableau(s).nodes()
    if method == "rk4":
        return np.array([0.0, 0.5, 0.5, 1.0, 1.0])
    raise ValueError(f"unknown method {method!r}")


def stability_poly_eval(method: str, s: int, z, eps: float = 0.15):
    """Amplification factor R(z) of one step on y' = lambda y (z = lambda dt)."""
    z = np.asarray(z, dtype=float)
    y0 = np.ones_like(z)
    f = lambda t, y: z * y
    if method == "rkc":
        y1, _ = rkc_step(f, y0, 0.0, 1.0, rkc_tableau(s, eps))
    elif method == "rock2":
        y1, _ = rock2_step(f, y0, 0.0, 1.0, rock2_tableau(s))
    elif method == "pirock":
        y1 = pirock_step(lambda t, y: z * y, lambda t, y: 0.0 * y, y0, 0.0, 1.0,
                         rock2_tableau(s))
    elif method == "rk4":
        y1 = rk4_step(f, y0, 0.0, 1.0)
    else:
        raise ValueError(f"unknown method {method!r}")
    return y1


# ---------------------------------------------------------------------------
# Step-size control and stage selection
# ---------------------------------------------------------------------------

@dataclass
class StepController:
    """Adaptive step state: tolerances plus the previous accepted step/error.

    The controller works in the tolerance-scaled norm (a step is acceptable
    when the weighted error is <= 1), with the standard memory factor
    (err_prev/err_new)^(1/(p+1)) * (dt_cur/dt_prev) on top of the memoryless
    proposal, a safety factor, and growth clamps.
    """

    atol: float
    rtol: float
    safety: float = 0.8
    fac_min: float = 0.1
    fac_max: float = 10.0
    order_hat: int = 1
    err_prev: Optional[float] = None
    dt_prev: Optional[float] = None

    def norm(self, err_vec, y) -> float:
        return weighted_rms_norm(err_vec, y, self.atol, self.rtol)

    def record(self, err_new: float, dt_cur: float) -> None:
        """Store the last attempt; rejected attempts count too, otherwise a
        stale dt ratio can lock the proposal into a rejection loop."""
        self.err_prev = max(err_new, 1e-14)
        self.dt_prev = dt_cur


def propose_dt(ctrl: StepController, err_new: float, dt_cur: float):
    """New step size and accept/reject flag from the weighted error.

    A rejected step never proposes growth (otherwise the memory factor fed
    by a previous catastrophic error can lock the controller into a cycle
    of alternating over- and undershoots).
    """
    if err_new < 0:
        raise ValueError("error must be non-negative")
    accept = err_new <= 1.0
    p = 1.0 / (ctrl.order_hat + 1.0)
    if err_new < 1e-12:
        fac = ctrl.fac_max
    else:
        fac = ctrl.safety * (1.0 / err_new) ** p
        if ctrl.err_prev is not None and ctrl.dt_prev:
            fac *= (ctrl.err_prev / err_new) ** p * (dt_cur / ctrl.dt_prev)
    fac = min(max(fac, ctrl.fac_min), ctrl.fac_max)
    if not accept:
        fac = min(fac, 1.0)
    return fac * dt_cur, accept


def select_stages(dt: float, rho: float, method: str, min_stages: Optional[int] = None,
                  table_path: Optional[str] = None) -> int:
    """Smallest stage count whose stability interval covers dt * rho.

    Uses the growth laws 0.653 s^2 (RKC) and 0.811 s^2 (ROCK2/PIROCK); for
    ROCK2 the result is rounded up to the nearest tabulated degree.
    """
    if dt <= 0 or rho <= 0:
        raise ValueError("dt and rho must be positive")
    if method == "rkc":
        growth, smin = RKC_GROWTH, 2
    elif method in ("rock2", "pirock"):
        growth, smin = ROCK2_GROWTH, 3
    else:
        raise ValueError(f"unknown method {method!r}")
    if min_stages is not None:
        smin = max(smin, min_stages)
    need = math.sqrt(dt * rho / growth)
    s = max(smin, math.ceil(need - 1e-9))
    if method == "rkc":
        if s > STAGE_CAP:
            raise ValueError(f"required stage count {s} exceeds the cap {STAGE_CAP}")
        return s
    for d in rock2_degrees(table_path):
        if d >= s:
            return d
    raise ValueError(f"required stage count {s} exceeds the tabulated ROCK2 degrees")
