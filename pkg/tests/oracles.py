"""Independent reference implementations used by several test modules."""

from fractions import Fraction

import numpy as np

from covertherm.geometry_transfer import Correspondence, Homography
from covertherm.joints import N_JOINTS, JointSet


def random_homography(rng) -> np.ndarray:
    """A mild camera-to-camera map on a 160x120 image: rotation, scale, shift, a little perspective."""
    ang = rng.uniform(-0.3, 0.3)
    s = rng.uniform(0.8, 1.25)
    A = s * np.array([[np.cos(ang), -np.sin(ang)], [np.sin(ang), np.cos(ang)]])
    A = A + rng.uniform(-0.1, 0.1, (2, 2))
    t = rng.uniform(-20, 20, 2)
    p = rng.uniform(-4e-4, 4e-4, 2)
    return np.array([[A[0, 0], A[0, 1], t[0]], [A[1, 0], A[1, 1], t[1]], [p[0], p[1], 1.0]])


def random_quad(rng, min_area=400.0) -> np.ndarray:
    """Four pixel positions with every triangle of area >= ``min_area`` px^2."""
    while True:
        pts = rng.uniform([0, 0], [160, 120], (4, 2))
        def area(i, j, k):
            u, v = pts[j] - pts[i], pts[k] - pts[i]
            return 0.5 * abs(u[0] * v[1] - u[1] * v[0])

        areas = [
            area(i, j, k)
            for i, j, k in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
        ]
        if min(areas) >= min_area:
            return pts


def apply_h(m, pts):
    """Projective map, written out coordinate by coordinate."""
    out = []
    for x, y in np.atleast_2d(pts):
        w = m[2, 0] * x + m[2, 1] * y + m[2, 2]
        out.append(((m[0, 0] * x + m[0, 1] * y + m[0, 2]) / w, (m[1, 0] * x + m[1, 1] * y + m[1, 2]) / w))
    return np.array(out)


def correspondences(src, dst):
    return [Correspondence(tuple(s), tuple(d)) for s, d in zip(src, dst)]


def canonical(m) -> np.ndarray:
    return Homography(m).matrix


def brute_pck(preds, gts, tau):
    """Per-joint PCK with plain loops: (rates list with None for never-visible, mean over the rest)."""
    hits = [0] * N_JOINTS
    seen = [0] * N_JOINTS
    for p, g in zip(preds, gts):
        ls, rh = g.points[9], g.points[2]
        torso = ((ls[0] - rh[0]) ** 2 + (ls[1] - rh[1]) ** 2) ** 0.5
        for j in range(N_JOINTS):
            if not g.visible[j]:
                continue
            seen[j] += 1
            dx, dy = p.points[j][0] - g.points[j][0], p.points[j][1] - g.points[j][1]
            if (dx * dx + dy * dy) ** 0.5 <= tau * torso:
                hits[j] += 1
    rates = [h / s if s else None for h, s in zip(hits, seen)]
    valid = [r for r in rates if r is not None]
    return rates, (float(sum(Fraction(r) for r in valid)) / len(valid) if valid else None)


def random_pck_instance(rng, max_samples=20, lattice=False):
    """Random preds/gts. On the lattice, torsos are 3-4-5 multiples and offsets are integers,
    so errors land exactly on tau * torso for taus like 0.2 or 0.4."""
    n = int(rng.integers(1, max_samples + 1))
    gts, preds = [], []
    for _ in range(n):
        vis = rng.random(N_JOINTS) < 0.85
        vis[[2, 9]] = True
        if lattice:
            g = rng.integers(0, 50, (N_JOINTS, 2)).astype(float)
            k = int(rng.integers(1, 4))
            g[2] = g[9] + [3 * k, 4 * k]
            p = g + rng.integers(-3, 4, g.shape)
        else:
            g = rng.uniform(0, 100, (N_JOINTS, 2))
            # torso joints kept apart so the torso length is defined
            g[9] = rng.uniform(0, 40, 2)
            g[2] = g[9] + rng.uniform(10, 40, 2)
            p = g + rng.normal(0, rng.choice([0.5, 3.0, 10.0, 30.0]), g.shape)
        gts.append(JointSet(g, vis))
        preds.append(JointSet(p, np.ones(N_JOINTS, bool)))
    return preds, gts
