"""Finite-difference operators on the MAC grid.

Interior stencils are the standard second-order centered ones.  In the
direction normal to a nearby wall the stored unknowns sit half a spacing
from the boundary, so one-sided schemes are used there:

    f'(x)  ~ [ f(x+h) + 3 f(x) - 4 f(x-h/2) ] / (3 h)
    f''(x) ~ [ 16 f(x-h/2) - 25 f(x) + 10 f(x+h) - f(x+2h) ] / (5 h^2)

with ``f(x-h/2)`` the Dirichlet wall value.  Both are second order (exact
for quadratics resp. cubics).  The transverse velocity needed by the
advection terms is the arithmetic mean of the four surrounding faces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import BoundaryData, CellField, GridSpec, VelocityField


@dataclass
class MomentumRhsConfig:
    """Term selection for the momentum right-hand side.

    ``pm3_derivative`` activates the PM3 boundary fix: the tangential wall
    value used inside the one-sided second-derivative stencil is replaced by
    the ghost value ``interior - (dx/2) * (exact wall-normal derivative)``,
    the one-sided imposition of the exact Neumann data over the actual
    wall-to-unknown distance dx/2.
    """

    include_pressure: bool = True
    include_advection: bool = True
    forcing: Optional[Callable] = None
    pm3_derivative: Optional[Callable] = None
    include_diffusion: bool = True


def _wall_coordinates(spec: GridSpec):
    half = (np.arange(1, spec.N + 1) - 0.5) * spec.dx   # face-centered positions
    node = np.arange(1, spec.N) * spec.dx               # interior node positions
    return half, node


def wall_velocities(bc: BoundaryData, spec: GridSpec, t: float):
    """Sample every boundary value the stencils need, at time t.

    Returns a dict with u on the four walls (normal on x-walls, tangential
    on y-walls) and v likewise.
    """
    half, node = _wall_coordinates(spec)
    zeros_h, ones_h = np.zeros_like(half), np.ones_like(half)
    zeros_n, ones_n = np.zeros_like(node), np.ones_like(node)
    u_w, v_w = bc.velocity(t, zeros_h, half)            # x = 0, y at u rows
    u_e, v_e = bc.velocity(t, ones_h, half)             # x = 1
    u_s, v_s = bc.velocity(t, half, zeros_h)            # y = 0, x at v cols
    u_n, v_n = bc.velocity(t, half, ones_h)             # y = 1
    u_s_n, _ = bc.velocity(t, node, zeros_n)            # y = 0 at u x-positions
    u_n_n, _ = bc.velocity(t, node, ones_n)
    _, v_w_n = bc.velocity(t, zeros_n, node)            # x = 0 at v y-positions
    _, v_e_n = bc.velocity(t, ones_n, node)
    br = np.broadcast_to
    return {
        "u_left": br(u_w, half.shape).astype(float),
        "u_right": br(u_e, half.shape).astype(float),
        "v_bottom": br(v_s, half.shape).astype(float),
        "v_top": br(v_n, half.shape).astype(float),
        "u_bottom": br(u_s_n, node.shape).astype(float),
        "u_top": br(u_n_n, node.shape).astype(float),
        "v_left": br(v_w_n, node.shape).astype(float),
        "v_right": br(v_e_n, node.shape).astype(float),
    }


def _u_extended_x(u, walls):
    return np.vstack([walls["u_left"][None, :], u, walls["u_right"][None, :]])


def _v_extended_y(v, walls):
    return np.hstack([walls["v_bottom"][:, None], v, walls["v_top"][:, None]])


def divergence(vel: VelocityField, bc: BoundaryData, spec: GridSpec, t: float) -> CellField:
    """Cell-centered discrete divergence, boundary faces from ``bc`` at time t."""
    walls = wall_velocities(bc, spec, t)
    uf = _u_extended_x(vel.u, walls)
    vf = _v_extended_y(vel.v, walls)
    div = (uf[1:, :] - uf[:-1, :] + vf[:, 1:] - vf[:, :-1]) / spec.dx
    return CellField(div)


def gradient_to_faces(phi: CellField, spec: GridSpec) -> VelocityField:
    """Gradient of a cell field on the interior faces; boundary faces get none."""
    g = phi.values
    gu = (g[1:, :] - g[:-1, :]) / spec.dx
    gv = (g[:, 1:] - g[:, :-1]) / spec.dx
    return VelocityField(gu, gv)


def momentum_rhs(vel: VelocityField, p: Optional[CellField], bc: BoundaryData,
                 spec: GridSpec, t: float, cfg: MomentumRhsConfig) -> VelocityField:
    """Momentum right-hand side -(u.grad)u - grad p + nu lap u + forcing.

    Each term is included according to ``cfg``; the pressure gradient needs
    ``p``.  Boundary values are evaluated at time t.
    """
    if cfg.include_pressure and p is None:
        raise ValueError("pressure required")
    N, dx, nu = spec.N, spec.dx, spec.nu
    u, v = vel.u, vel.v
    walls = wall_velocities(bc, spec, t)
    uf = _u_extended_x(u, walls)          # (N+1, N)
    vf = _v_extended_y(v, walls)          # (N, N+1)

    half, node = _wall_coordinates(spec)

    # -- u equation ----------------------------------------------------------
    if cfg.include_diffusion:
        lap_u = (uf[2:, :] - 2.0 * u + uf[:-2, :]) / dx**2
        d2y = np.empty_like(u)
        d2y[:, 1:-1] = (u[:, 2:] - 2.0 * u[:, 1:-1] + u[:, :-2]) / dx**2
        uw_s, uw_n = walls["u_bottom"], walls["u_top"]
        if cfg.pm3_derivative is not None:
            g_s = np.asarray(cfg.pm3_derivative(t, node, np.zeros_like(node)), dtype=float)
            g_n = np.asarray(cfg.pm3_derivative(t, node, np.ones_like(node)), dtype=float)
            uw_s = u[:, 0] - 0.5 * dx * g_s
            uw_n = u[:, -1] + 0.5 * dx * g_n
        d2y[:, 0] = (16.0 * uw_s - 25.0 * u[:, 0] + 10.0 * u[:, 1] - u[:, 2]) / (5.0 * dx**2)
        d2y[:, -1] = (16.0 * uw_n - 25.0 * u[:, -1] + 10.0 * u[:, -2] - u[:, -3]) / (5.0 * dx**2)
        rhs_u = nu * (lap_u + d2y)
    else:
        rhs_u = np.zeros_like(u)

    if cfg.include_advection:
        dudx = (uf[2:, :] - uf[:-2, :]) / (2.0 * dx)
        dudy = np.empty_like(u)
        dudy[:, 1:-1] = (u[:, 2:] - u[:, :-2]) / (2.0 * dx)
        dudy[:, 0] = (u[:, 1] + 3.0 * u[:, 0] - 4.0 * walls["u_bottom"]) / (3.0 * dx)
        dudy[:, -1] = -(u[:, -2] + 3.0 * u[:, -1] - 4.0 * walls["u_top"]) / (3.0 * dx)
        vbar = 0.25 * (vf[:-1, :-1] + vf[1:, :-1] + vf[:-1, 1:] + vf[1:, 1:])
        rhs_u -= u * dudx + vbar * dudy

    if cfg.include_pressure:
        rhs_u -= (p.values[1:, :] - p.values[:-1, :]) / dx

    # -- v equation ----------------------------------------------------------
    if cfg.include_diffusion:
        lap_v = (vf[:, 2:] - 2.0 * v + vf[:, :-2]) / dx**2
        d2x = np.empty_like(v)
        d2x[1:-1, :] = (v[2:, :] - 2.0 * v[1:-1, :] + v[:-2, :]) / dx**2
        vw_w, vw_e = walls["v_left"], walls["v_right"]
        if cfg.pm3_derivative is not None:
            g_w = np.asarray(cfg.pm3_derivative(t, np.zeros_like(node), node), dtype=float)
            g_e = np.asarray(cfg.pm3_derivative(t, np.ones_like(node), node), dtype=float)
            vw_w = v[0, :] - 0.5 * dx * g_w
            vw_e = v[-1, :] + 0.5 * dx * g_e
        d2x[0, :] = (16.0 * vw_w - 25.0 * v[0, :] + 10.0 * v[1, :] - v[2, :]) / (5.0 * dx**2)
        d2x[-1, :] = (16.0 * vw_e - 25.0 * v[-1, :] + 10.0 * v[-2, :] - v[-3, :]) / (5.0 * dx**2)
        rhs_v = nu * (lap_v + d2x)
    else:
        rhs_v = np.zeros_like(v)

    if cfg.include_advection:
        dvdy = (vf[:, 2:] - vf[:, :-2]) / (2.0 * dx)
        dvdx = np.empty_like(v)
        dvdx[1:-1, :] = (v[2:, :] - v[:-2, :]) / (2.0 * dx)
        dvdx[0, :] = (v[1, :] + 3.0 * v[0, :] - 4.0 * walls["v_left"]) / (3.0 * dx)
        dvdx[-1, :] = -(v[-2, :] + 3.0 * v[-1, :] - 4.0 * walls["v_right"]) / (3.0 * dx)
        ubar = 0.25 * (uf[:-1, :-1] + uf[:-1, 1:] + uf[1:, :-1] + uf[1:, 1:])
        rhs_v -= ubar * dvdx + v * dvdy

    if cfg.include_pressure:
        rhs_v -= (p.values[:, 1:] - p.values[:, :-1]) / dx

    if cfg.forcing is not None:
        xu, yu = spec.u_points()
        xv, yv = spec.v_points()
        rhs_u = rhs_u + np.asarray(cfg.forcing(t, xu, yu)[0], dtype=float)
        rhs_v = rhs_v + np.asarray(cfg.forcing(t, xv, yv)[1], dtype=float)

    return VelocityField(rhs_u, rhs_v)


def spectral_radius_estimate(spec: GridSpec) -> float:
    """Gershgorin row-sum bound for the discrete diffusion operator.

    The largest rows combine the one-sided second-derivative stencil normal
    to a wall (|16|+|25|+|10|+|1| = 52/5 after the 1/5 factor) with the
    centered one in the other direction.
    """
    interior = 8.0
    wall = 52.0 / 5.0 + 4.0
    return spec.nu * max(interior, wall) / spec.dx**2
