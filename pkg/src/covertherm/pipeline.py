"""Body -> cover -> heat -> image, end to end."""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dc_field

from .body_model import GridSpec, HeightField, WorldState, body_heightfield
from .cover_drape import CoverParams, CoverSurface, Mask, contact_mask, drape
from .errors import ValidationError
from .radiometry import DEPTH, LWIR, LWIR_BAND, SENSOR_SHAPE, Band, Image, render_depth, render_lwir
from .thermal_solver import (
    DEFAULT_BOUNDARY,
    Boundary,
    ThermalField,
    ThermalParams,
    init_field,
    max_stable_dt,
    solve_steady,
    step_transient,
)

STEADY = "steady"
TRANSIENT = "transient"


@dataclass(frozen=True)
class RenderSettings:
    band: Band = LWIR_BAND
    # None means: use the thermal ambient / contact temperatures
    t_min: float | None = None
    t_max: float | None = None
    camera_height: float = 2.0
    lwir_shape: tuple[int, int] | None = SENSOR_SHAPE
    depth_shape: tuple[int, int] | None = None

    def bounds(self, thermal: ThermalParams) -> tuple[float, float]:
        lo = thermal.ambient_temp if self.t_min is None else self.t_min
        hi = thermal.contact_temp if self.t_max is None else self.t_max
        return lo, hi


@dataclass(frozen=True)
class SolverSettings:
    mode: str = STEADY
    dt: float | None = None  # None means the largest stable step
    steps: int = 0
    boundary: Boundary = DEFAULT_BOUNDARY

    def __post_init__(self):
        if self.mode not in (STEADY, TRANSIENT):
            raise ValidationError(f"thermal mode must be {STEADY!r} or {TRANSIENT!r}, got {self.mode!r}")


@dataclass(frozen=True, eq=False)
class Simulation:
    body: HeightField
    cover: CoverSurface
    contact: Mask
    field: ThermalField | None = None
    images: dict[str, Image] = dc_field(default_factory=dict)


def solve_thermal(grid: GridSpec, sources: Mask, thermal: ThermalParams, solver: SolverSettings) -> ThermalField:
    if solver.mode == STEADY:
        return solve_steady(grid, sources, thermal, solver.boundary)
    dt = solver.dt if solver.dt is not None else max_stable_dt(grid, thermal)
    return step_transient(init_field(grid, sources, thermal), thermal, dt, solver.steps, solver.boundary)


def simulate(
    world: WorldState,
    grid: GridSpec,
    cover: CoverParams,
    thermal: ThermalParams,
    render: RenderSettings = RenderSettings(),
    solver: SolverSettings = SolverSettings(),
    modalities=(LWIR, DEPTH),
) -> Simulation:
    body = body_heightfield(world, grid)
    surface = drape(body, cover)
    contact = contact_mask(body, surface)
    images = {}
    field = None
    if LWIR in modalities:
        field = solve_thermal(grid, contact, thermal, solver)
        t_min, t_max = render.bounds(thermal)
        images[LWIR] = render_lwir(field, render.band, t_min, t_max, render.lwir_shape)
    if DEPTH in modalities:
        images[DEPTH] = render_depth(surface, render.camera_height, render.depth_shape)
    return Simulation(body, surface, contact, field, images)
