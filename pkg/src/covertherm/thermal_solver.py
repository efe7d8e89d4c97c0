"""Screened heat diffusion on the cover surface.

    dT/dt = a * lap(T) - k * (T - T_ambient)

on a regular grid with the 5-point Laplacian. Contact cells are Dirichlet at
``contact_temp``. Outside the grid the temperature is either held at ambient
or reflected (zero flux), chosen per axis with :class:`Boundary`.

Internally everything is carried as the excess temperature u = T - T_ambient,
which keeps ambient at exactly zero and the update weights non-negative.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .body_model import KELVIN_OFFSET, GridSpec
from .cover_drape import Mask
from .errors import GridMismatch, NoConvergence, NonFiniteValue, UnstableTimestep, ValidationError

log = logging.getLogger(__name__)

AMBIENT = "ambient"
INSULATED = "insulated"


@dataclass(frozen=True)
class ThermalParams:
    diffusivity_a: float = 1e-7
    loss_rate_k: float = 1e-5
    ambient_temp: float = 20.0 + KELVIN_OFFSET
    contact_temp: float = 28.0 + KELVIN_OFFSET

    def __post_init__(self):
        if not self.diffusivity_a > 0:
            raise ValidationError(f"diffusivity must be positive, got {self.diffusivity_a}")
        if not self.loss_rate_k >= 0:
            raise ValidationError(f"loss rate must be non-negative, got {self.loss_rate_k}")
        if not self.ambient_temp < self.contact_temp:
            raise ValidationError(
                f"ambient ({self.ambient_temp} K) must be colder than contact ({self.contact_temp} K)"
            )

    @property
    def delta(self) -> float:
        return self.contact_temp - self.ambient_temp


@dataclass(frozen=True)
class Boundary:
    """Treatment of the grid edge along each axis: held at ambient, or insulated."""

    x: str = AMBIENT
    y: str = AMBIENT

    def __post_init__(self):
        for v in (self.x, self.y):
            if v not in (AMBIENT, INSULATED):
                raise ValidationError(f"boundary must be {AMBIENT!r} or {INSULATED!r}, got {v!r}")


DEFAULT_BOUNDARY = Boundary()


@dataclass(frozen=True)
class SolveInfo:
    iterations: int
    residual: float
    tolerance: float


@dataclass(frozen=True, eq=False)
class ThermalField:
    grid: GridSpec
    temps: np.ndarray
    time: float
    dirichlet: Mask
    solve_info: SolveInfo | None = None

    def __post_init__(self):
        temps = np.array(self.temps, dtype=float)
        if temps.shape != self.grid.shape:
            raise GridMismatch(f"temperature grid {temps.shape} does not match {self.grid.shape}")
        if self.dirichlet.grid != self.grid:
            raise GridMismatch("dirichlet mask is on a different grid")
        temps.flags.writeable = False
        object.__setattr__(self, "temps", temps)

    def with_sources(self, sources: Mask, params: ThermalParams) -> "ThermalField":
        """Swap the contact set, e.g. after a pose change; prior heat stays in place."""
        if sources.grid != self.grid:
            raise GridMismatch("new sources are on a different grid")
        temps = np.where(sources.values, params.contact_temp, self.temps)
        return replace(self, temps=temps, dirichlet=sources, solve_info=None)


def _ghost_pad(u: np.ndarray, boundary: Boundary) -> np.ndarray:
    # axis 0 is y (rows), axis 1 is x (cols)
    out = np.pad(u, ((0, 0), (1, 1)), mode="constant" if boundary.x == AMBIENT else "edge")
    return np.pad(out, ((1, 1), (0, 0)), mode="constant" if boundary.y == AMBIENT else "edge")


def _neighbor_sum(u: np.ndarray, boundary: Boundary) -> np.ndarray:
    g = _ghost_pad(u, boundary)
    return g[:-2, 1:-1] + g[2:, 1:-1] + g[1:-1, :-2] + g[1:-1, 2:]


def _laplacian_cells(u: np.ndarray, boundary: Boundary) -> np.ndarray:
    """Sum of neighbour differences (lap * h^2), with ghost cells."""
    return _neighbor_sum(u, boundary) - 4.0 * u


def max_stable_dt(grid: GridSpec, params: ThermalParams) -> float:
    h2 = grid.spacing**2
    return h2 / (4.0 * params.diffusivity_a) / (1.0 + params.loss_rate_k * h2 / (4.0 * params.diffusivity_a))


def init_field(grid: GridSpec, sources: Mask, params: ThermalParams) -> ThermalField:
    if sources.grid != grid:
        raise GridMismatch("source mask is on a different grid")
    temps = np.where(sources.values, params.contact_temp, params.ambient_temp)
    return ThermalField(grid, temps, 0.0, sources)


def _to_field(u, field_like: ThermalField, params: ThermalParams, time, info=None) -> ThermalField:
    temps = params.ambient_temp + u
    temps[field_like.dirichlet.values] = params.contact_temp
    return ThermalField(field_like.grid, temps, time, field_like.dirichlet, info)


def step_transient(
    field: ThermalField,
    params: ThermalParams,
    dt: float,
    n_steps: int,
    boundary: Boundary = DEFAULT_BOUNDARY,
) -> ThermalField:
    """Explicit Euler steps; ``dt`` must satisfy the positivity bound of :func:`max_stable_dt`."""
    if not dt > 0 or n_steps < 0:
        raise ValidationError(f"need dt > 0 and n_steps >= 0, got dt={dt}, n_steps={n_steps}")
    bound = max_stable_dt(field.grid, params)
    if dt > bound:
        raise UnstableTimestep(f"dt={dt:.6g} s exceeds the stability bound {bound:.6g} s")

    h2 = field.grid.spacing**2
    w_nbr = dt * params.diffusivity_a / h2
    w_self = 1.0 - 4.0 * w_nbr - dt * params.loss_rate_k
    src = field.dirichlet.values
    du = params.delta

    u = field.temps - params.ambient_temp
    u[src] = du
    for _ in range(int(n_steps)):
        u = w_self * u + w_nbr * _neighbor_sum(u, boundary)
        u[src] = du
    if not np.all(np.isfinite(u)):
        raise NonFiniteValue("transient solve produced non-finite temperatures")
    return _to_field(u, field, params, field.time + n_steps * dt)


def _residual_excess(u, free, params: ThermalParams, h: float, boundary: Boundary) -> np.ndarray:
    r = params.diffusivity_a / (h * h) * _laplacian_cells(u, boundary) - params.loss_rate_k * u
    return np.where(free, r, 0.0)


def residual(
    field: ThermalField, sources: Mask, params: ThermalParams, boundary: Boundary = DEFAULT_BOUNDARY
) -> float:
    """Max-norm of a*lap(T) - k*(T - T_ambient) over the non-Dirichlet cells."""
    if sources.grid != field.grid:
        raise GridMismatch("source mask is on a different grid")
    u = field.temps - params.ambient_temp
    r = _residual_excess(u, ~sources.values, params, field.grid.spacing, boundary)
    return float(np.max(np.abs(r))) if r.size else 0.0


def steady_tolerance(grid: GridSpec, params: ThermalParams, rtol: float = 1e-8) -> float:
    return rtol * params.delta * params.diffusivity_a / grid.spacing**2


def solve_steady(
    grid: GridSpec,
    sources: Mask,
    params: ThermalParams,
    boundary: Boundary = DEFAULT_BOUNDARY,
    rtol: float = 1e-8,
    max_iter: int = 10**6,
) -> ThermalField:
    """Steady state by conjugate gradients on the discrete screened Laplacian.

    The system is scaled by h^2/a, giving the SPD operator -lap + (k h^2/a) I
    on the free cells. Stops once the unscaled residual max-norm is below
    ``rtol * (contact - ambient) * a / h^2``.
    """
    if sources.grid != grid:
        raise GridMismatch("source mask is on a different grid")
    tol = steady_tolerance(grid, params, rtol)
    h = grid.spacing
    scale = params.diffusivity_a / (h * h)
    shift = params.loss_rate_k / scale
    src = sources.values
    free = ~src
    du = params.delta

    def apply(p):
        out = shift * p - _laplacian_cells(p, boundary)
        out[src] = 0.0
        return out

    u = np.zeros(grid.shape)
    u[src] = du
    template = ThermalField(grid, np.full(grid.shape, params.ambient_temp), math.inf, sources)

    def true_residual(u):
        return _residual_excess(u, free, params, h, boundary) / scale

    r = true_residual(u)
    iters = 0
    rmax = float(np.max(np.abs(r)))
    p = r.copy()
    rr = float(np.vdot(r, r))
    while rmax * scale >= tol:
        if iters >= max_iter:
            raise NoConvergence(
                f"steady solve did not converge in {max_iter} iterations (residual {rmax * scale:.3e}, tol {tol:.3e})"
            )
        Ap = apply(p)
        pAp = float(np.vdot(p, Ap))
        if not pAp > 0:
            raise NoConvergence("steady operator is singular on this mask and boundary")
        alpha = rr / pAp
        u += alpha * p
        iters += 1
        if iters % 200 == 0:
            r = true_residual(u)
        else:
            r -= alpha * Ap
        rr_new = float(np.vdot(r, r))
        rmax = float(np.max(np.abs(r)))
        if rmax * scale < tol:
            # confirm against the true residual before stopping
            r = true_residual(u)
            rmax = float(np.max(np.abs(r)))
            rr_new = float(np.vdot(r, r))
        p = r + (rr_new / rr) * p if rr > 0 else r.copy()
        rr = rr_new

    if not np.all(np.isfinite(u)):
        raise NonFiniteValue("steady solve produced non-finite temperatures")
    # the exact solution lies in [0, du]; projecting onto it only removes solver noise
    np.clip(u, 0.0, du, out=u)
    field = _to_field(u, template, params, math.inf)
    res = residual(field, sources, params, boundary)
    log.debug("steady solve: %d iterations, residual %.3e (tol %.3e)", iters, res, tol)
    return replace(field, solve_info=SolveInfo(iters, res, tol))
