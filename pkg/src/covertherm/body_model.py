"""Articulated cylinder-limb bodies and their top-down rasterization.

A body is a connected set of capsules (cylinders with hemispherical caps).
The camera looks straight down, so the body is reduced to a heightfield:
for each grid cell, the highest body surface point above it.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    DanglingRelation,
    DisconnectedBody,
    DuplicateId,
    GridTooSmall,
    InvalidGeometry,
    MissingJoint,
    ParseError,
    ValidationError,
)
from .joints import LSP_JOINTS, JointSet

KELVIN_OFFSET = 273.15
SURFACE_TEMP_RANGE = (173.0, 373.0)


@dataclass(frozen=True)
class GridSpec:
    """Regular grid of cell centres; cell (row i, col j) sits at origin + (j, i) * spacing."""

    origin: tuple[float, float]
    spacing: float
    width: int
    height: int

    def __post_init__(self):
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))
        if not self.spacing > 0:
            raise ValidationError(f"grid spacing must be positive, got {self.spacing}")
        if int(self.width) < 2 or int(self.height) < 2:
            raise ValidationError(f"grid must be at least 2x2, got {self.width}x{self.height}")
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    def xs(self) -> np.ndarray:
        return self.origin[0] + np.arange(self.width) * self.spacing

    def ys(self) -> np.ndarray:
        return self.origin[1] + np.arange(self.height) * self.spacing

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xs(), self.ys())

    def world_to_pixel(self, xy) -> np.ndarray:
        xy = np.asarray(xy, dtype=float)
        return (xy - np.asarray(self.origin)) / self.spacing

    def pixel_to_world(self, px) -> np.ndarray:
        px = np.asarray(px, dtype=float)
        return np.asarray(self.origin) + px * self.spacing

    def to_dict(self) -> dict:
        return {"origin": list(self.origin), "spacing": self.spacing, "width": self.width, "height": self.height}

    @classmethod
    def from_dict(cls, doc) -> "GridSpec":
        return cls(tuple(doc["origin"]), float(doc["spacing"]), int(doc["width"]), int(doc["height"]))


@dataclass(frozen=True)
class Limb:
    id: int
    endpoint_a: tuple[float, float, float]
    endpoint_b: tuple[float, float, float]
    radius: float
    surface_temp: float  # kelvin

    def __post_init__(self):
        a = tuple(float(v) for v in self.endpoint_a)
        b = tuple(float(v) for v in self.endpoint_b)
        if len(a) != 3 or len(b) != 3:
            raise InvalidGeometry(f"limb {self.id}: endpoints must be 3-vectors")
        object.__setattr__(self, "endpoint_a", a)
        object.__setattr__(self, "endpoint_b", b)
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InvalidGeometry(f"limb {self.id}: non-finite endpoint")
        if not self.radius > 0:
            raise InvalidGeometry(f"limb {self.id}: radius must be positive, got {self.radius}")
        if a == b:
            raise InvalidGeometry(f"limb {self.id}: coincident endpoints")
        lo, hi = SURFACE_TEMP_RANGE
        if not lo <= self.surface_temp <= hi:
            raise InvalidGeometry(f"limb {self.id}: surface_temp {self.surface_temp} K outside [{lo}, {hi}]")

    @property
    def appearance(self) -> tuple[float, float]:
        return (self.radius, self.surface_temp)

    def translated(self, dx: float, dy: float, dz: float = 0.0) -> "Limb":
        off = np.array([dx, dy, dz])
        return replace(
            self,
            endpoint_a=tuple(np.asarray(self.endpoint_a) + off),
            endpoint_b=tuple(np.asarray(self.endpoint_b) + off),
        )


@dataclass(frozen=True)
class JointRelation:
    limb_i: int
    limb_j: int
    shared_point: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "shared_point", tuple(float(v) for v in self.shared_point))


@dataclass(frozen=True)
class WorldState:
    """Validated articulated body. Build with :func:`build_world`."""

    limbs: tuple[Limb, ...]
    relations: tuple[JointRelation, ...]
    bed_height: float
    skeleton_map: Mapping[str, dict] = field(default_factory=dict)

    def limb(self, limb_id: int) -> Limb:
        for limb in self.limbs:
            if limb.id == limb_id:
                return limb
        raise KeyError(limb_id)

    def joint_point(self, name: str) -> np.ndarray:
        try:
            ref = self.skeleton_map[name]
        except KeyError:
            raise MissingJoint(f"skeleton map has no entry for {name!r}") from None
        return _resolve_ref(ref, self.limbs, self.relations)

    def translated(self, dx: float, dy: float) -> "WorldState":
        limbs = tuple(l.translated(dx, dy) for l in self.limbs)
        rels = tuple(
            replace(r, shared_point=tuple(np.asarray(r.shared_point) + [dx, dy, 0.0])) for r in self.relations
        )
        return build_world(limbs, rels, self.bed_height, self.skeleton_map)


@dataclass(frozen=True, eq=False)
class HeightField:
    grid: GridSpec
    values: np.ndarray
    bed_height: float = 0.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValidationError(f"heightfield shape {values.shape} does not match grid {self.grid.shape}")
        if np.any(values < self.bed_height):
            raise ValidationError("heightfield values below bed height")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def footprint(self) -> np.ndarray:
        return self.values > self.bed_height


def _resolve_ref(ref, limbs, relations) -> np.ndarray:
    if "limb" in ref:
        limb = next((l for l in limbs if l.id == ref["limb"]), None)
        if limb is None:
            raise DanglingRelation(f"skeleton references unknown limb {ref['limb']}")
        end = ref.get("end", "a")
        if end not in ("a", "b"):
            raise ValidationError(f"limb end must be 'a' or 'b', got {end!r}")
        return np.array(limb.endpoint_a if end == "a" else limb.endpoint_b)
    if "relation" in ref:
        idx = ref["relation"]
        if not 0 <= idx < len(relations):
            raise DanglingRelation(f"skeleton references unknown relation {idx}")
        return np.array(relations[idx].shared_point)
    raise ValidationError(f"skeleton entry must reference a limb or a relation: {ref!r}")


def build_world(limbs, relations=(), bed_height: float = 0.0, skeleton_map=None) -> WorldState:
    limbs = tuple(limbs)
    relations = tuple(relations)
    skeleton_map = dict(skeleton_map or {})
    if not limbs:
        raise InvalidGeometry("a world needs at least one limb")
    by_id = {}
    for limb in limbs:
        if limb.id in by_id:
            raise DuplicateId(f"duplicate limb id {limb.id}")
        by_id[limb.id] = limb

    for rel in relations:
        for lid in (rel.limb_i, rel.limb_j):
            if lid not in by_id:
                raise DanglingRelation(f"relation references unknown limb {lid}")
        p = np.array(rel.shared_point)
        for lid in (rel.limb_i, rel.limb_j):
            limb = by_id[lid]
            d = min(np.linalg.norm(p - limb.endpoint_a), np.linalg.norm(p - limb.endpoint_b))
            if d > limb.radius:
                raise InvalidGeometry(
                    f"relation point {rel.shared_point} is {d:.4g} m from limb {lid}'s nearest endpoint"
                )

    # union-find over the relation graph
    parent = {lid: lid for lid in by_id}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for rel in relations:
        parent[find(rel.limb_i)] = find(rel.limb_j)
    if len({find(lid) for lid in by_id}) != 1:
        raise DisconnectedBody("relation graph does not connect all limbs")

    unknown = set(skeleton_map) - set(LSP_JOINTS)
    if unknown:
        raise ValidationError(f"unknown skeleton joint names: {sorted(unknown)}")
    for ref in skeleton_map.values():
        _resolve_ref(ref, limbs, relations)

    return WorldState(limbs, relations, float(bed_height), skeleton_map)


def capsule_top(limb: Limb, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Height of the capsule's upper surface above each (X, Y); -inf where it casts no cover.

    The capsule is the union of balls centred on the axis segment, so the top is
    max over t of z(t) + sqrt(r^2 - |xy(t) - P|^2). That objective is concave in t
    and its stationary point has a closed form; clipping it to the feasible
    interval gives the maximiser.
    """
    a = np.asarray(limb.endpoint_a)
    d = np.asarray(limb.endpoint_b) - a
    r = limb.radius
    q0x = a[0] - X
    q0y = a[1] - Y
    s = d[0] ** 2 + d[1] ** 2
    out = np.full(X.shape, -np.inf)

    if s < 1e-30:
        rho2 = q0x**2 + q0y**2
        hit = rho2 <= r * r
        out[hit] = max(a[2], a[2] + d[2]) + np.sqrt(r * r - rho2[hit])
        return out

    w = q0x * d[0] + q0y * d[1]
    perp2 = np.maximum(q0x**2 + q0y**2 - w * w / s, 0.0)
    R2 = r * r - perp2
    hit = R2 >= 0
    R = np.sqrt(np.where(hit, R2, 0.0))
    rs = R * np.sqrt(s)
    lo = np.maximum((-rs - w) / s, 0.0)
    hi = np.minimum((rs - w) / s, 1.0)
    hit &= lo <= hi

    u_star = d[2] * R / np.sqrt(1.0 + d[2] ** 2 / s)
    t = np.clip((u_star - w) / s, lo, hi)
    qx = q0x + t * d[0]
    qy = q0y + t * d[1]
    z = a[2] + t * d[2] + np.sqrt(np.maximum(r * r - qx * qx - qy * qy, 0.0))
    out[hit] = z[hit]
    return out


def body_extent(world: WorldState) -> tuple[float, float, float, float]:
    """(xmin, xmax, ymin, ymax) of the body's top-down silhouette."""
    pts = np.array([p for l in world.limbs for p in (l.endpoint_a, l.endpoint_b)])
    radii = np.repeat([l.radius for l in world.limbs], 2)
    return (
        float(np.min(pts[:, 0] - radii)),
        float(np.max(pts[:, 0] + radii)),
        float(np.min(pts[:, 1] - radii)),
        float(np.max(pts[:, 1] + radii)),
    )


def body_heightfield(world: WorldState, grid: GridSpec) -> HeightField:
    xmin, xmax, ymin, ymax = body_extent(world)
    xs, ys = grid.xs(), grid.ys()
    half = 0.5 * grid.spacing
    if xmin < xs[0] - half or xmax > xs[-1] + half or ymin < ys[0] - half or ymax > ys[-1] + half:
        raise GridTooSmall(
            f"body extent x[{xmin:.4g}, {xmax:.4g}] y[{ymin:.4g}, {ymax:.4g}] exceeds grid "
            f"x[{xs[0]:.4g}, {xs[-1]:.4g}] y[{ys[0]:.4g}, {ys[-1]:.4g}]"
        )
    X, Y = np.meshgrid(xs, ys)
    values = np.full(grid.shape, world.bed_height)
    for limb in world.limbs:
        np.maximum(values, capsule_top(limb, X, Y), out=values)
    return HeightField(grid, values, world.bed_height)


def pose_joints_2d(world: WorldState, grid: GridSpec) -> JointSet:
    missing = [n for n in LSP_JOINTS if n not in world.skeleton_map]
    if missing:
        raise MissingJoint(f"skeleton map is missing {missing}")
    pts = np.array([world.joint_point(n)[:2] for n in LSP_JOINTS])
    return JointSet.all_visible(grid.world_to_pixel(pts))


# JSON document form


def world_from_dict(doc) -> WorldState:
    try:
        limbs = [
            Limb(
                id=int(l["id"]),
                endpoint_a=tuple(l["a"]),
                endpoint_b=tuple(l["b"]),
                radius=float(l["radius"]),
                surface_temp=float(l.get("surface_temp_c", 28.0)) + KELVIN_OFFSET,
            )
            for l in doc["limbs"]
        ]
        relations = [
            JointRelation(int(r["limb_i"]), int(r["limb_j"]), tuple(r["point"])) for r in doc.get("relations", [])
        ]
        bed = float(doc.get("bed_height", 0.0))
        skeleton = dict(doc.get("skeleton", {}))
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed world document: {exc!r}") from None
    return build_world(limbs, relations, bed, skeleton)


def world_to_dict(world: WorldState) -> dict:
    return {
        "bed_height": world.bed_height,
        "limbs": [
            {
                "id": l.id,
                "a": list(l.endpoint_a),
                "b": list(l.endpoint_b),
                "radius": l.radius,
                "surface_temp_c": round(l.surface_temp - KELVIN_OFFSET, 12),
            }
            for l in world.limbs
        ],
        "relations": [{"limb_i": r.limb_i, "limb_j": r.limb_j, "point": list(r.shared_point)} for r in world.relations],
        "skeleton": dict(world.skeleton_map),
    }
