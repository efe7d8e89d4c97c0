"""Does a covered body's image depend on its pose?

Two worlds that share every appearance parameter but differ in limb pose are
pushed through the same pipeline; if the rendered images differ, the modality
carries pose information through the cover.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .body_model import GridSpec, WorldState
from .cover_drape import CoverParams
from .errors import GridMismatch, MismatchedAppearance, ValidationError
from .pipeline import RenderSettings, SolverSettings, simulate
from .radiometry import DEPTH, LWIR, MODALITIES
from .thermal_solver import ThermalParams

CONDITIONED = "conditioned"
UNCONDITIONED = "unconditioned"
INCONCLUSIVE = "inconclusive"

DEPTH_QUANTUM = 1e-3  # metres
DEFAULT_EPS = {LWIR: 0.0, DEPTH: 0.0}
DEFAULT_DELTA = {LWIR: 1.0, DEPTH: DEPTH_QUANTUM}


@dataclass(frozen=True)
class SensitivityReport:
    modality: str
    max_abs_diff: float
    mean_abs_diff: float
    changed_pixel_fraction: float

    def to_dict(self) -> dict:
        return asdict(self)


def appearance_key(world: WorldState):
    return (world.bed_height, tuple(sorted((l.id, l.appearance) for l in world.limbs)))


def image_difference(a: np.ndarray, b: np.ndarray, modality: str) -> SensitivityReport:
    if a.shape != b.shape:
        raise GridMismatch(f"images differ in shape: {a.shape} vs {b.shape}")
    diff = np.abs(a.astype(float) - b.astype(float))
    return SensitivityReport(
        modality=modality,
        max_abs_diff=float(diff.max()),
        mean_abs_diff=float(diff.mean()),
        changed_pixel_fraction=float(np.count_nonzero(diff) / diff.size),
    )


def sensitivity(
    world_a: WorldState,
    world_b: WorldState,
    cover: CoverParams,
    thermal: ThermalParams,
    modality: str,
    grid: GridSpec,
    render: RenderSettings = RenderSettings(),
    solver: SolverSettings = SolverSettings(),
) -> SensitivityReport:
    if modality not in MODALITIES:
        raise ValidationError(f"unknown modality {modality!r}")
    if appearance_key(world_a) != appearance_key(world_b):
        raise MismatchedAppearance("worlds must share limb ids, radii, surface temperatures and bed height")
    img_a = simulate(world_a, grid, cover, thermal, render, solver, (modality,)).images[modality]
    img_b = simulate(world_b, grid, cover, thermal, render, solver, (modality,)).images[modality]
    return image_difference(img_a.values, img_b.values, modality)


def verdict(report: SensitivityReport, eps: float, delta: float) -> str:
    if report.max_abs_diff >= delta:
        return CONDITIONED
    if report.max_abs_diff <= eps:
        return UNCONDITIONED
    return INCONCLUSIVE


def _per_modality(value, default):
    if value is None:
        return dict(default)
    if isinstance(value, dict):
        return {**default, **value}
    return {m: float(value) for m in MODALITIES}


def lemma1_check(scenario, eps=None, delta=None, modalities=MODALITIES) -> dict[str, dict]:
    """Verdict per modality for the scenario's two poses.

    ``scenario`` needs ``world``, ``world_b``, ``grid``, ``cover``, ``thermal``,
    ``render`` and ``solver`` attributes. ``eps``/``delta`` may be scalars or
    per-modality dicts; a diff >= delta is conditioned, <= eps unconditioned.
    """
    eps = _per_modality(eps, DEFAULT_EPS)
    delta = _per_modality(delta, DEFAULT_DELTA)
    for m in modalities:
        if not eps[m] < delta[m]:
            raise ValidationError(f"{m}: need eps < delta, got {eps[m]} and {delta[m]}")
    out = {}
    for m in modalities:
        rep = sensitivity(
            scenario.world,
            scenario.world_b,
            scenario.cover,
            scenario.thermal,
            m,
            scenario.grid,
            scenario.render,
            scenario.solver,
        )
        out[m] = {**rep.to_dict(), "verdict": verdict(rep, eps[m], delta[m])}
    return out
