"""14-joint LSP skeleton labels and their JSON form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError

LSP_JOINTS = (
    "right_ankle",
    "right_knee",
    "right_hip",
    "left_hip",
    "left_knee",
    "left_ankle",
    "right_wrist",
    "right_elbow",
    "right_shoulder",
    "left_shoulder",
    "left_elbow",
    "left_wrist",
    "neck",
    "head_top",
)
N_JOINTS = len(LSP_JOINTS)
JOINT_INDEX = {name: i for i, name in enumerate(LSP_JOINTS)}


@dataclass(frozen=True, eq=False)
class JointSet:
    """Pixel coordinates of the 14 LSP joints, in LSP order.

    ``points`` has shape (14, 2) holding (x, y); ``visible`` has shape (14,).
    """

    points: np.ndarray
    visible: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        visible = np.array(self.visible, dtype=bool)
        if points.shape != (N_JOINTS, 2) or visible.shape != (N_JOINTS,):
            raise ValidationError(
                f"JointSet needs {N_JOINTS} joints, got points {points.shape}, visible {visible.shape}"
            )
        if not np.all(np.isfinite(points[visible])):
            raise ValidationError("visible joints must have finite coordinates")
        points.flags.writeable = False
        visible.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "visible", visible)

    @classmethod
    def all_visible(cls, points) -> "JointSet":
        return cls(points, np.ones(N_JOINTS, dtype=bool))

    def __getitem__(self, name: str) -> np.ndarray:
        return self.points[JOINT_INDEX[name]]

    def __eq__(self, other):
        if not isinstance(other, JointSet):
            return NotImplemented
        return bool(np.array_equal(self.points, other.points) and np.array_equal(self.visible, other.visible))

    def to_dict(self) -> dict:
        return {
            "joints": [
                {"name": name, "x": float(x), "y": float(y), "visible": bool(v)}
                for name, (x, y), v in zip(LSP_JOINTS, self.points, self.visible)
            ]
        }

    @classmethod
    def from_dict(cls, doc) -> "JointSet":
        try:
            entries = doc["joints"]
            by_name = {e["name"]: e for e in entries}
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed joint set: {exc!r}") from None
        if len(entries) != N_JOINTS or set(by_name) != set(LSP_JOINTS):
            raise ParseError(f"joint set must name exactly the {N_JOINTS} LSP joints")
        try:
            points = [[float(by_name[n]["x"]), float(by_name[n]["y"])] for n in LSP_JOINTS]
            visible = [bool(by_name[n].get("visible", True)) for n in LSP_JOINTS]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed joint entry: {exc!r}") from None
        return cls(points, visible)


def joint_sets_from_json(doc) -> list[JointSet]:
    """Accept a single joint-set document or a list of them (one per sample)."""
    if isinstance(doc, dict) and "samples" in doc:
        doc = doc["samples"]
    if isinstance(doc, dict):
        doc = [doc]
    if not isinstance(doc, list) or not doc:
        raise ParseError("expected a non-empty list of joint sets")
    return [JointSet.from_dict(d) for d in doc]
