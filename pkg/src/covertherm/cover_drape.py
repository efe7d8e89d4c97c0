"""Cover draping as grayscale morphological closing of the body heightfield.

A near-circular octagon of radius ``tautness_radius`` acts as the cover's stiffness: valleys
narrower than the disk are bridged at the height of their rims, wider ones
are followed. Radius 0 gives a fully conforming cover.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .body_model import GridSpec, HeightField
from .errors import GridMismatch, ValidationError

# Float slack when comparing (top - thickness) against the body it was built from.
_GAP_TOL = 1e-12


@dataclass(frozen=True)
class CoverParams:
    thickness: float = 0.002
    tautness_radius: float = 0.0
    contact_gap_max: float = 0.005

    def __post_init__(self):
        if not self.thickness > 0:
            raise ValidationError(f"cover thickness must be positive, got {self.thickness}")
        if not self.tautness_radius >= 0:
            raise ValidationError(f"tautness_radius must be non-negative, got {self.tautness_radius}")
        if not self.contact_gap_max >= 0:
            raise ValidationError(f"contact_gap_max must be non-negative, got {self.contact_gap_max}")

    def to_dict(self) -> dict:
        return {
            "thickness_m": self.thickness,
            "tautness_radius_m": self.tautness_radius,
            "contact_gap_max_m": self.contact_gap_max,
        }

    @classmethod
    def from_dict(cls, doc) -> "CoverParams":
        return cls(
            thickness=float(doc.get("thickness_m", 0.002)),
            tautness_radius=float(doc.get("tautness_radius_m", 0.0)),
            contact_gap_max=float(doc.get("contact_gap_max_m", 0.005)),
        )


@dataclass(frozen=True, eq=False)
class Mask:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=bool)
        if values.shape != self.grid.shape:
            raise GridMismatch(f"mask shape {values.shape} does not match grid {self.grid.shape}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def empty(cls, grid: GridSpec) -> "Mask":
        return cls(grid, np.zeros(grid.shape, dtype=bool))

    def __or__(self, other: "Mask") -> "Mask":
        if other.grid != self.grid:
            raise GridMismatch("cannot combine masks on different grids")
        return Mask(self.grid, self.values | other.values)

    def count(self) -> int:
        return int(self.values.sum())


@dataclass(frozen=True, eq=False)
class CoverSurface:
    grid: GridSpec
    top_height: np.ndarray
    params: CoverParams
    bed_height: float = 0.0

    def __post_init__(self):
        top = np.array(self.top_height, dtype=float)
        if top.shape != self.grid.shape:
            raise GridMismatch(f"cover shape {top.shape} does not match grid {self.grid.shape}")
        top.flags.writeable = False
        object.__setattr__(self, "top_height", top)

    @property
    def thickness(self) -> float:
        return self.params.thickness


def octagon_halfwidths(radius_cells: float) -> tuple[int, int]:
    """(axis, diagonal) segment half-lengths of the disk of ``radius_cells``.

    The structuring element is the Minkowski sum of a square of half-width
    ``a`` and a diamond built from ``d`` diagonal steps each way: an octagon.
    It grows one step at a time along a fixed schedule, each step picked to
    keep the shape closest to round, and a radius takes the longest prefix
    whose axial and diagonal extents both stay within it. Every larger
    element is therefore a smaller one dilated by something, which is what
    makes closing monotone in the radius; Euclidean pixel disks lack that.
    """
    a = d = 0
    while True:
        options = []
        for na, nd in ((a + 1, d), (a, d + 1)):
            if nd > 0 and na == 0:
                continue  # a diamond alone only covers one parity of cells
            axial, diag = na + 2 * nd, np.sqrt(2.0) * (na + nd)
            options.append((max(axial, diag), abs(axial - diag), na, nd))
        size, _, na, nd = min(options)
        if size > radius_cells + 1e-9:
            return a, d
        a, d = na, nd


def _extent(halfwidths: tuple[int, int]) -> int:
    a, d = halfwidths
    return a + 2 * d


def _diag_pass(values: np.ndarray, n: int, sign: int, op, fill: float) -> np.ndarray:
    h, w = values.shape
    out = values
    for _ in range(n):
        p = np.pad(out, 1, mode="constant", constant_values=fill)
        out = op(op(out, p[0:h, 1 - sign : 1 - sign + w]), p[2 : h + 2, 1 + sign : 1 + sign + w])
    return out


def _octagon_filter(values: np.ndarray, halfwidths: tuple[int, int], op, fill: float) -> np.ndarray:
    a, d = halfwidths
    one_d = ndimage.maximum_filter1d if op is np.maximum else ndimage.minimum_filter1d
    out = np.asarray(values, dtype=float)
    if a:
        out = one_d(out, size=2 * a + 1, axis=1, mode="constant", cval=fill)
        out = one_d(out, size=2 * a + 1, axis=0, mode="constant", cval=fill)
    out = _diag_pass(out, d, 1, op, fill)
    out = _diag_pass(out, d, -1, op, fill)
    return out if out is not values else out.copy()


def disk_footprint(radius_cells: float) -> np.ndarray:
    """Boolean footprint of the structuring element, centred in a (2N+1)^2 array."""
    hw = octagon_halfwidths(radius_cells)
    n = _extent(hw)
    seed = np.zeros((2 * n + 1, 2 * n + 1))
    seed[n, n] = 1.0
    return _octagon_filter(seed, hw, np.maximum, 0.0) > 0


def dilate(values: np.ndarray, radius_cells: float, fill: float) -> np.ndarray:
    return _octagon_filter(values, octagon_halfwidths(radius_cells), np.maximum, fill)


def erode(values: np.ndarray, radius_cells: float, fill: float) -> np.ndarray:
    return _octagon_filter(values, octagon_halfwidths(radius_cells), np.minimum, fill)


def closing(values: np.ndarray, radius_cells: float, fill: float) -> np.ndarray:
    """Flat grayscale closing; the plane outside the array is taken to be ``fill``.

    Padding by twice the element's extent makes the dilation exact over every
    cell the erosion reads, so the result equals the closing of the infinitely
    extended function restricted to the grid.
    """
    values = np.asarray(values, dtype=float)
    hw = octagon_halfwidths(radius_cells)
    n = _extent(hw)
    if n == 0:
        return values.copy()
    pad = 2 * n
    padded = np.pad(values, pad, mode="constant", constant_values=fill)
    dil = _octagon_filter(padded, hw, np.maximum, fill)
    ero = _octagon_filter(dil, hw, np.minimum, np.inf)
    return ero[pad:-pad, pad:-pad]


def drape(body_hf: HeightField, params: CoverParams) -> CoverSurface:
    # 0.2 / 0.005 must give 40 cells, not 39.999...
    radius_cells = round(params.tautness_radius / body_hf.grid.spacing, 9)
    support = closing(body_hf.values, radius_cells, body_hf.bed_height)
    return CoverSurface(body_hf.grid, support + params.thickness, params, body_hf.bed_height)


def contact_mask(body_hf: HeightField, cover: CoverSurface) -> Mask:
    """Cells where the cover's underside is within ``contact_gap_max`` of the body."""
    if cover.grid != body_hf.grid:
        raise GridMismatch("cover and body heightfield are on different grids")
    gap = (cover.top_height - cover.thickness) - body_hf.values
    hit = (gap <= cover.params.contact_gap_max + _GAP_TOL) & body_hf.footprint()
    return Mask(body_hf.grid, hit)
