"""Probability of Correct Keypoint (PCK) over 14-joint LSP skeletons."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTorso, LengthMismatch, MissingTorsoJoint, ValidationError
from .joints import JOINT_INDEX, LSP_JOINTS, JointSet

# Swap these to change the torso convention.
TORSO_JOINTS = ("left_shoulder", "right_hip")

DEFAULT_TAUS = tuple(round(0.05 * i, 2) for i in range(1, 11))


@dataclass(frozen=True)
class PckReport:
    tau: float
    threshold_px: tuple[float, ...]
    per_joint_rate: tuple[float, ...]  # NaN for a joint that is never visible in the ground truth
    mean_rate: float
    n_samples: int

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "n_samples": self.n_samples,
            "threshold_px": list(self.threshold_px),
            "per_joint_rate": {n: (None if np.isnan(r) else r) for n, r in zip(LSP_JOINTS, self.per_joint_rate)},
            "mean_rate": self.mean_rate,
        }


def torso_length(gt: JointSet) -> float:
    a, b = (JOINT_INDEX[n] for n in TORSO_JOINTS)
    if not (gt.visible[a] and gt.visible[b]):
        raise MissingTorsoJoint(f"torso needs visible {TORSO_JOINTS[0]} and {TORSO_JOINTS[1]}")
    return float(np.hypot(*(gt.points[a] - gt.points[b])))


def pck(preds, gts, tau: float) -> PckReport:
    """A joint is correct when its error is at most ``tau`` times that sample's torso length.

    Joints invisible in the ground truth are left out of both counts.
    """
    preds, gts = list(preds), list(gts)
    if len(preds) != len(gts):
        raise LengthMismatch(f"{len(preds)} predictions for {len(gts)} ground-truth samples")
    if not preds:
        raise LengthMismatch("no samples to score")
    if not tau > 0:
        raise ValidationError(f"tau must be positive, got {tau}")

    torso = np.array([torso_length(g) for g in gts])
    if np.any(torso == 0):
        raise DegenerateTorso(f"zero torso length in sample(s) {np.flatnonzero(torso == 0).tolist()}")
    P = np.stack([p.points for p in preds])
    G = np.stack([g.points for g in gts])
    vis = np.stack([g.visible for g in gts])
    thresholds = tau * torso
    err = np.linalg.norm(np.where(vis[..., None], P - G, 0.0), axis=2)
    correct = (err <= thresholds[:, None]) & vis

    n_vis = vis.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        rates = np.where(n_vis > 0, correct.sum(axis=0) / n_vis, np.nan)
    evaluated = n_vis > 0
    # correctly rounded, so the mean does not depend on summation order
    mean = math.fsum(rates[evaluated]) / int(evaluated.sum()) if evaluated.any() else float("nan")
    return PckReport(
        tau=float(tau),
        threshold_px=tuple(float(t) for t in thresholds),
        per_joint_rate=tuple(float(r) for r in rates),
        mean_rate=mean,
        n_samples=len(gts),
    )


def pck_sweep(preds, gts, taus=DEFAULT_TAUS) -> list[PckReport]:
    return [pck(preds, gts, t) for t in taus]


def format_table(reports) -> str:
    """Per-joint rows, one column per tau, mean footer."""
    taus = [f"{r.tau:g}" for r in reports]
    width = max(len(n) for n in LSP_JOINTS + ("mean",))
    header = "joint".ljust(width) + "".join(f"{t:>9}" for t in taus)
    lines = [header, "-" * len(header)]

    def cell(v):
        return f"{'n/a':>9}" if np.isnan(v) else f"{100 * v:9.2f}"

    for j, name in enumerate(LSP_JOINTS):
        lines.append(name.ljust(width) + "".join(cell(r.per_joint_rate[j]) for r in reports))
    lines.append("-" * len(header))
    lines.append("mean".ljust(width) + "".join(cell(r.mean_rate) for r in reports))
    return "\n".join(lines) + "\n"
