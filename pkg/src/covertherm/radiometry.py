"""Planck band radiance, LWIR intensity rendering and depth rendering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cover_drape import CoverSurface
from .errors import CameraBelowScene, DegenerateNormalization, NonPositiveTemperature, ValidationError
from .thermal_solver import ThermalField

LWIR = "lwir"
DEPTH = "depth"
MODALITIES = (LWIR, DEPTH)

# FLIR Lepton-class sensor, rows x cols
SENSOR_SHAPE = (120, 160)


@dataclass(frozen=True)
class RadiometricConstants:
    planck_h: float = 6.62607015e-34
    light_c: float = 299792458.0
    boltzmann_kB: float = 1.380649e-23


CODATA = RadiometricConstants()


@dataclass(frozen=True)
class Band:
    lambda_lo: float = 8e-6
    lambda_hi: float = 15e-6

    def __post_init__(self):
        # lo == hi is allowed: a zero-width band integrates to zero
        if not 0 < self.lambda_lo <= self.lambda_hi:
            raise ValidationError(f"band needs 0 < lambda_lo <= lambda_hi, got {self.lambda_lo}, {self.lambda_hi}")


LWIR_BAND = Band()


@dataclass(frozen=True, eq=False)
class Image:
    values: np.ndarray
    modality: str

    def __post_init__(self):
        values = np.array(self.values)
        if values.ndim != 2 or values.size == 0:
            raise ValidationError(f"image must be a non-empty 2-D array, got shape {values.shape}")
        if self.modality not in MODALITIES:
            raise ValidationError(f"unknown modality {self.modality!r}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def spectral_radiance(lam, T, const: RadiometricConstants = CODATA):
    """B(lambda, T) in W m^-2 sr^-1 m^-1."""
    lam = np.asarray(lam, dtype=float)
    T = np.asarray(T, dtype=float)
    h, c, kB = const.planck_h, const.light_c, const.boltzmann_kB
    return 2.0 * h * c * c / lam**5 / np.expm1(h * c / (lam * kB * T))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _gauss_panels(T: np.ndarray, lo: float, hi: float, n_panels: int, const) -> np.ndarray:
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    lam = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return spectral_radiance(lam[None, :], T[:, None], const) @ w


def band_radiance(T, band: Band = LWIR_BAND, rel_tol: float = 1e-8, const: RadiometricConstants = CODATA):
    """Integrated blackbody radiance over ``band`` (W m^-2 sr^-1).

    Composite 8-point Gauss-Legendre; the panel count doubles until two
    successive estimates agree to ``rel_tol`` for every temperature.
    """
    if not 0 < rel_tol <= 1e-3:
        raise ValidationError(f"rel_tol must be in (0, 1e-3], got {rel_tol}")
    scalar = np.ndim(T) == 0
    T = np.atleast_1d(np.asarray(T, dtype=float))
    if np.any(~(T > 0)):
        raise NonPositiveTemperature("temperatures must be positive (kelvin)")
    if band.lambda_lo == band.lambda_hi:
        out = np.zeros(T.shape)
        return float(out[0]) if scalar else out

    flat = T.ravel()
    n = 1
    prev = _gauss_panels(flat, band.lambda_lo, band.lambda_hi, n, const)
    while True:
        n *= 2
        cur = _gauss_panels(flat, band.lambda_lo, band.lambda_hi, n, const)
        if np.all(np.abs(cur - prev) <= rel_tol * np.abs(cur)):
            break
        if n > 4096:
            raise ValidationError("band quadrature failed to reach the requested tolerance")
        prev = cur
    out = cur.reshape(T.shape)
    return float(out[0]) if scalar else out


def resample_nearest(values: np.ndarray, shape) -> np.ndarray:
    values = np.asarray(values)
    if shape is None or tuple(shape) == values.shape:
        return values
    rows = np.minimum(((np.arange(shape[0]) + 0.5) * values.shape[0] / shape[0]).astype(int), values.shape[0] - 1)
    cols = np.minimum(((np.arange(shape[1]) + 0.5) * values.shape[1] / shape[1]).astype(int), values.shape[1] - 1)
    return values[np.ix_(rows, cols)]


def render_lwir(
    field: ThermalField,
    band: Band = LWIR_BAND,
    t_min: float | None = None,
    t_max: float | None = None,
    shape=SENSOR_SHAPE,
    rel_tol: float = 1e-8,
) -> Image:
    """8-bit image, linear in band radiance between ``t_min`` and ``t_max``.

    Bounds default to the field's own min and max; pass the ambient and contact
    temperatures to get a scale that is comparable across scenes.
    """
    if t_min is None:
        t_min = float(field.temps.min())
    if t_max is None:
        t_max = float(field.temps.max())
    if not t_min < t_max:
        raise DegenerateNormalization(f"need t_min < t_max, got {t_min}, {t_max}")
    temps = resample_nearest(field.temps, shape)
    lo, hi = band_radiance(np.array([t_min, t_max]), band, rel_tol)
    L = band_radiance(temps, band, rel_tol)
    scaled = 255.0 * (L - lo) / (hi - lo)
    pixels = np.clip(np.round(scaled), 0, 255).astype(np.uint8)
    return Image(pixels, LWIR)


def render_depth(cover: CoverSurface, camera_height: float, shape=None) -> Image:
    """Orthographic range from a camera looking straight down, in metres."""
    top = float(cover.top_height.max())
    if not camera_height > top:
        raise CameraBelowScene(f"camera at {camera_height} m is not above the cover top {top:.4g} m")
    depth = camera_height - resample_nearest(cover.top_height, shape)
    return Image(depth, DEPTH)
