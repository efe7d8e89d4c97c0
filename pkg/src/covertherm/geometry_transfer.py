"""Planar homography estimation and cross-modality label transfer.

Two ceiling cameras mounted side by side see the bed plane through a
homography. Labels drawn in one modality are mapped into the other with it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegenerateConfiguration, ParseError, PointAtInfinity, TooFewCorrespondences, ValidationError
from .joints import JointSet

_W_MIN = 1e-12
_DET_MIN = 1e-12
# relative singular-value floor below which the DLT system is rank-deficient
_RANK_RTOL = 1e-10


@dataclass(frozen=True)
class Correspondence:
    src: tuple[float, float]
    dst: tuple[float, float]

    def __post_init__(self):
        src = tuple(float(v) for v in self.src)
        dst = tuple(float(v) for v in self.dst)
        if len(src) != 2 or len(dst) != 2 or not np.all(np.isfinite(src + dst)):
            raise ValidationError(f"correspondence needs finite 2-D points, got {self.src} -> {self.dst}")
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)


@dataclass(frozen=True, eq=False)
class Homography:
    """3x3 projective map, stored with unit Frobenius norm and its largest-|.| entry positive."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float).reshape(3, 3)
        if not np.all(np.isfinite(m)):
            raise ValidationError("homography has non-finite entries")
        norm = np.linalg.norm(m)
        if norm == 0:
            raise DegenerateConfiguration("zero homography")
        m = m / norm
        if m.flat[np.argmax(np.abs(m))] < 0:
            m = -m
        if abs(np.linalg.det(m)) <= _DET_MIN:
            raise DegenerateConfiguration("homography is singular")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "Homography":
        return cls(np.eye(3))

    def inverse(self) -> "Homography":
        return Homography(np.linalg.inv(self.matrix))

    def __matmul__(self, other: "Homography") -> "Homography":
        return Homography(self.matrix @ other.matrix)

    def to_dict(self) -> dict:
        return {"matrix": [float(v) for v in self.matrix.ravel()]}

    @classmethod
    def from_dict(cls, doc) -> "Homography":
        try:
            values = [float(v) for v in doc["matrix"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed homography: {exc!r}") from None
        if len(values) != 9:
            raise ParseError("homography needs 9 numbers, row-major")
        return cls(np.array(values).reshape(3, 3))


def _normalizer(pts: np.ndarray) -> np.ndarray:
    """Similarity taking ``pts`` to zero mean and sqrt(2) RMS distance from the origin."""
    mean = pts.mean(axis=0)
    rms = np.sqrt(np.mean(np.sum((pts - mean) ** 2, axis=1)))
    if rms == 0:
        raise DegenerateConfiguration("all points coincide")
    s = np.sqrt(2.0) / rms
    return np.array([[s, 0.0, -s * mean[0]], [0.0, s, -s * mean[1]], [0.0, 0.0, 1.0]])


def _apply(m: np.ndarray, pts: np.ndarray) -> np.ndarray:
    return pts @ m[:2, :2].T + m[:2, 2]


def _has_collinear_triple(pts: np.ndarray) -> bool:
    scale = np.max(np.ptp(pts, axis=0)) ** 2
    for i, j, k in combinations(range(len(pts)), 3):
        u, v = pts[j] - pts[i], pts[k] - pts[i]
        if abs(u[0] * v[1] - u[1] * v[0]) <= 1e-9 * scale:
            return True
    return False


def estimate_homography(correspondences) -> Homography:
    """Normalized direct linear transform.

    Exact for four correspondences in general position; algebraic least
    squares in normalized coordinates for more.
    """
    corr = list(correspondences)
    if len(corr) < 4:
        raise TooFewCorrespondences(f"need at least 4 correspondences, got {len(corr)}")
    src = np.array([c.src for c in corr])
    dst = np.array([c.dst for c in corr])
    if len(corr) == 4 and (_has_collinear_triple(src) or _has_collinear_triple(dst)):
        raise DegenerateConfiguration("three of the four points are collinear")

    Ts, Td = _normalizer(src), _normalizer(dst)
    s, d = _apply(Ts, src), _apply(Td, dst)
    n = len(corr)
    A = np.zeros((2 * n, 9))
    x, y, u, v = s[:, 0], s[:, 1], d[:, 0], d[:, 1]
    A[0::2, 0:3] = np.column_stack([-x, -y, -np.ones(n)])
    A[0::2, 6:9] = np.column_stack([u * x, u * y, u])
    A[1::2, 3:6] = np.column_stack([-x, -y, -np.ones(n)])
    A[1::2, 6:9] = np.column_stack([v * x, v * y, v])

    _, sv, vt = np.linalg.svd(A)
    if sv[7] <= _RANK_RTOL * sv[0]:
        raise DegenerateConfiguration("correspondences do not determine a unique homography")
    Hn = vt[-1].reshape(3, 3)
    return Homography(np.linalg.inv(Td) @ Hn @ Ts)


def map_points(H: Homography, points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if not np.all(np.isfinite(pts)):
        raise ValidationError("points must be finite")
    hom = np.column_stack([pts, np.ones(len(pts))]) @ H.matrix.T
    w = hom[:, 2]
    if np.any(np.abs(w) <= _W_MIN):
        raise PointAtInfinity("a point maps onto the line at infinity")
    out = hom[:, :2] / w[:, None]
    return out[0] if single else out


def transfer_labels(H: Homography, joints: JointSet) -> JointSet:
    """Map visible joints through ``H``; invisible ones are copied as they are."""
    points = np.array(joints.points)
    vis = joints.visible
    if vis.any():
        points[vis] = map_points(H, points[vis])
    return JointSet(points, vis)


def correspondences_from_dict(doc) -> list[Correspondence]:
    try:
        return [Correspondence(tuple(c["src"]), tuple(c["dst"])) for c in doc["correspondences"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed correspondences: {exc!r}") from None


def correspondences_to_dict(corr) -> dict:
    return {"correspondences": [{"src": list(c.src), "dst": list(c.dst)} for c in corr]}
