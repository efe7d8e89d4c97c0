"""Scenario documents: parsing, validation and the built-in scenes."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from . import schemas
from .body_model import KELVIN_OFFSET, GridSpec, WorldState, world_from_dict
from .cover_drape import CoverParams
from .errors import ConfigParseError, ParseError, ValidationError
from .io import load_json
from .pipeline import RenderSettings, SolverSettings
from .radiometry import Band
from .thermal_solver import Boundary, ThermalParams


@dataclass(frozen=True)
class Scenario:
    name: str
    grid: GridSpec
    world: WorldState
    cover: CoverParams
    thermal: ThermalParams
    solver: SolverSettings
    render: RenderSettings
    world_b: WorldState | None = None
    seed: int = 0
    outputs: str | None = None
    lemma_eps: dict = field(default_factory=dict)
    lemma_delta: dict = field(default_factory=dict)
    doc: dict = field(default_factory=dict, compare=False, repr=False)


def validate_document(doc, schema=schemas.SCENARIO, what="scenario") -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigParseError(f"{what} does not match its schema at {where}: {exc.message}") from None


def scenario_from_dict(doc, name: str | None = None) -> Scenario:
    validate_document(doc)
    th = doc.get("thermal", {})
    rd = doc.get("render", {})
    cover = CoverParams.from_dict(doc.get("cover", {}))
    defaults = ThermalParams()
    thermal = ThermalParams(
        diffusivity_a=float(th.get("diffusivity_a", defaults.diffusivity_a)),
        loss_rate_k=float(th.get("loss_rate_k", defaults.loss_rate_k)),
        ambient_temp=float(th.get("ambient_c", 20.0)) + KELVIN_OFFSET,
        contact_temp=float(th.get("contact_c", 28.0)) + KELVIN_OFFSET,
    )
    solver = SolverSettings(
        mode=th.get("mode", "steady"),
        dt=th.get("dt_s"),
        steps=int(th.get("steps", 0)),
        boundary=Boundary(**th.get("boundary", {})),
    )
    band_um = rd.get("band_um", [8.0, 15.0])

    def _temp(key):
        v = rd.get(key)
        return None if v is None else float(v) + KELVIN_OFFSET

    def _shape(key, default):
        v = rd.get(key, default)
        return None if v is None else tuple(v)

    render = RenderSettings(
        band=Band(band_um[0] * 1e-6, band_um[1] * 1e-6),
        t_min=_temp("t_min_c"),
        t_max=_temp("t_max_c"),
        camera_height=float(rd.get("camera_height_m", 2.0)),
        lwir_shape=_shape("lwir_shape", [120, 160]),
        depth_shape=_shape("depth_shape", None),
    )
    lemma = doc.get("lemma", {})
    return Scenario(
        name=doc.get("name", name or "scenario"),
        grid=GridSpec.from_dict(doc["grid"]),
        world=world_from_dict(doc["world"]),
        world_b=world_from_dict(doc["world_b"]) if "world_b" in doc else None,
        cover=cover,
        thermal=thermal,
        solver=solver,
        render=render,
        seed=int(doc.get("seed", 0)),
        outputs=doc.get("outputs"),
        lemma_eps=dict(lemma.get("eps", {})),
        lemma_delta=dict(lemma.get("delta", {})),
        doc=copy.deepcopy(doc),
    )


def load_scenario(ref) -> Scenario:
    """``ref`` is a path to a scenario JSON file or the name of a built-in scenario."""
    path = Path(ref)
    if not path.exists() and str(ref) in BUILTINS:
        return scenario_from_dict(builtin_document(str(ref)), str(ref))
    if not path.exists():
        raise ConfigParseError(f"no scenario file or built-in named {ref!r}")
    try:
        doc = load_json(path)
    except ParseError as exc:
        raise ConfigParseError(str(exc)) from None
    if not isinstance(doc, dict):
        raise ConfigParseError(f"{path}: scenario must be a JSON object")
    try:
        return scenario_from_dict(doc, path.stem)
    except ConfigParseError:
        raise
    except (KeyError, TypeError) as exc:
        raise ConfigParseError(f"{path}: {exc!r}") from None


# -- built-in scenes ---------------------------------------------------------

SKIN_COVERED_C = 28.0


def _limb(i, a, b, r, name=None):
    d = {"id": i, "a": list(a), "b": list(b), "radius": r, "surface_temp_c": SKIN_COVERED_C}
    if name:
        d["name"] = name
    return d


def _rel(i, j, p):
    return {"limb_i": i, "limb_j": j, "point": list(p)}


_SMALL_GRID = {"origin": [-0.4, -0.3], "spacing": 0.005, "width": 160, "height": 120}


def _single_cylinder() -> dict:
    return {
        "name": "single_cylinder",
        "description": "One 50 mm limb resting on the bed under a conforming 2 mm layer.",
        "grid": dict(_SMALL_GRID),
        "world": {"bed_height": 0.0, "limbs": [_limb(1, (-0.2, 0.0, 0.025), (0.2, 0.0, 0.025), 0.025, "limb")]},
        "cover": {"thickness_m": 0.002, "tautness_radius_m": 0.0, "contact_gap_max_m": 0.005},
        "thermal": {"mode": "steady"},
        "render": {"camera_height_m": 2.0},
    }


def _span_frame(limbs: list, relations: list):
    """Two 50 mm parallel limbs, 0.10 m apart surface to surface, joined at one end."""
    r, z = 0.025, 0.025
    limbs += [
        _limb(1, (-0.3, -0.075, z), (0.3, -0.075, z), r, "L1"),
        _limb(2, (-0.3, 0.075, z), (0.3, 0.075, z), r, "L2"),
        _limb(3, (-0.3, -0.075, z), (-0.3, 0.0, z), r, "bridge_right"),
        _limb(4, (-0.3, 0.0, z), (-0.3, 0.075, z), r, "bridge_left"),
    ]
    relations += [
        _rel(1, 3, (-0.3, -0.075, z)),
        _rel(2, 4, (-0.3, 0.075, z)),
        _rel(3, 4, (-0.3, 0.0, z)),
    ]


def _two_limb_span() -> dict:
    limbs, rels = [], []
    _span_frame(limbs, rels)
    return {
        "name": "two_limb_span",
        "description": "A taut cover stretched across two parallel limbs.",
        "grid": dict(_SMALL_GRID),
        "world": {"bed_height": 0.0, "limbs": limbs, "relations": rels},
        "cover": {"thickness_m": 0.002, "tautness_radius_m": 0.2, "contact_gap_max_m": 0.005},
        "thermal": {"mode": "steady"},
        "render": {"camera_height_m": 2.0},
    }


def l3_world(y3: float) -> dict:
    """World document of the L3 scene with the sunken limb centred at lateral offset ``y3``."""
    limbs, rels = [], []
    _span_frame(limbs, rels)
    r3 = 0.023
    limbs += [
        # thin link on the bed tying L3 to the frame; it sits far below the taut cover
        _limb(5, (-0.3, 0.0, 0.015), (-0.1, y3, 0.015), 0.01, "link"),
        _limb(6, (-0.1, y3, r3), (0.1, y3, r3), r3, "L3"),
    ]
    rels += [_rel(4, 5, (-0.3, 0.0, 0.02)), _rel(5, 6, (-0.1, y3, 0.018))]
    return {"bed_height": 0.0, "limbs": limbs, "relations": rels}


def _l3_ambiguity() -> dict:
    return {
        "name": "l3_ambiguity",
        "description": (
            "A 46 mm limb L3 lying between two 50 mm limbs under a taut cover, at two lateral "
            "positions (+/-0.02 m). The cover touches L3 but stays flat over it."
        ),
        "grid": dict(_SMALL_GRID),
        "world": l3_world(0.02),
        "world_b": l3_world(-0.02),
        "cover": {"thickness_m": 0.002, "tautness_radius_m": 0.2, "contact_gap_max_m": 0.005},
        "thermal": {"mode": "steady"},
        "render": {"camera_height_m": 2.0},
        "lemma": {"eps": {"lwir": 0.0, "depth": 0.0}, "delta": {"lwir": 1.0, "depth": 0.001}},
    }


def _supine_world() -> dict:
    def side(s, base):
        # s = -1 for the right side (negative y), +1 for the left
        clav, uarm, farm, pelv, thigh, shin = base, base + 1, base + 2, base + 3, base + 4, base + 5
        shoulder = (0.60, 0.19 * s)
        elbow = (0.32, 0.24 * s)
        wrist = (0.06, 0.26 * s)
        hip = (0.10, 0.10 * s)
        knee = (-0.32, 0.11 * s)
        ankle = (-0.74, 0.11 * s)
        limbs = [
            _limb(clav, (0.62, 0.0, 0.06), (*shoulder, 0.06), 0.06),
            _limb(uarm, (*shoulder, 0.045), (*elbow, 0.045), 0.045),
            _limb(farm, (*elbow, 0.035), (*wrist, 0.035), 0.035),
            _limb(pelv, (0.12, 0.0, 0.08), (*hip, 0.08), 0.08),
            _limb(thigh, (*hip, 0.075), (*knee, 0.075), 0.075),
            _limb(shin, (*knee, 0.05), (*ankle, 0.05), 0.05),
        ]
        rels = [
            _rel(2, clav, (0.62, 0.0, 0.08)),
            _rel(clav, uarm, (*shoulder, 0.05)),
            _rel(uarm, farm, (*elbow, 0.04)),
            _rel(2, pelv, (0.12, 0.0, 0.10)),
            _rel(pelv, thigh, (*hip, 0.078)),
            _rel(thigh, shin, (*knee, 0.06)),
        ]
        return limbs, rels

    limbs = [
        _limb(1, (0.74, 0.0, 0.08), (0.86, 0.0, 0.08), 0.08, "head"),
        _limb(2, (0.62, 0.0, 0.13), (0.12, 0.0, 0.13), 0.13, "torso"),
    ]
    rels = [_rel(1, 2, (0.68, 0.0, 0.11))]
    for s, base in ((-1, 3), (1, 9)):
        l, r = side(s, base)
        limbs += l
        rels += r
    # relation indices: 0 neck; right side 1..6, left side 7..12 in the order
    # torso-clavicle, shoulder, elbow, torso-pelvis, hip, knee
    skeleton = {
        "neck": {"relation": 0},
        "head_top": {"limb": 1, "end": "b"},
        "right_shoulder": {"relation": 2},
        "right_elbow": {"relation": 3},
        "right_wrist": {"limb": 5, "end": "b"},
        "right_hip": {"relation": 5},
        "right_knee": {"relation": 6},
        "right_ankle": {"limb": 8, "end": "b"},
        "left_shoulder": {"relation": 8},
        "left_elbow": {"relation": 9},
        "left_wrist": {"limb": 11, "end": "b"},
        "left_hip": {"relation": 11},
        "left_knee": {"relation": 12},
        "left_ankle": {"limb": 14, "end": "b"},
    }
    return {"bed_height": 0.0, "limbs": limbs, "relations": rels, "skeleton": skeleton}


def _supine_template() -> dict:
    return {
        "name": "supine_template",
        "description": "A 14-limb supine body under a 3 mm blanket on a 2.0 x 1.5 m bed area.",
        "grid": {"origin": [-1.0, -0.75], "spacing": 0.0125, "width": 160, "height": 120},
        "world": _supine_world(),
        "cover": {"thickness_m": 0.003, "tautness_radius_m": 0.08, "contact_gap_max_m": 0.005},
        "thermal": {"mode": "steady"},
        "render": {"camera_height_m": 2.0},
    }


BUILTINS = {
    "single_cylinder": _single_cylinder,
    "l3_ambiguity": _l3_ambiguity,
    "two_limb_span": _two_limb_span,
    "supine_template": _supine_template,
}


def builtin_document(name: str) -> dict:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ConfigParseError(f"unknown built-in scenario {name!r}; choose from {sorted(BUILTINS)}") from None


def builtin(name: str) -> Scenario:
    return scenario_from_dict(builtin_document(name), name)


def require_pair(scenario: Scenario) -> None:
    if scenario.world_b is None:
        raise ValidationError(f"scenario {scenario.name!r} has no world_b to compare against")
