"""Uncovered, one cover, two covers: how much of a pose change each modality still sees.

The three conditions are plain scenario variants of the cover block:
  uncovered   thickness 0.1 mm, tautness 0      (the skin itself is imaged)
  one cover   thickness 2 mm,   tautness 0.08 m
  two covers  thickness 5 mm,   tautness 0.20 m (stiffer, thicker stack)

    python3 scripts/cover_conditions.py
"""

import argparse
import copy


from covertherm.body_model import world_from_dict
from covertherm.radiometry import DEPTH, LWIR
from covertherm.recognizability import sensitivity
from covertherm.scenario import builtin_document, scenario_from_dict

CONDITIONS = {
    "uncovered": {"thickness_m": 0.0001, "tautness_radius_m": 0.0, "contact_gap_max_m": 0.0005},
    "one_cover": {"thickness_m": 0.002, "tautness_radius_m": 0.08, "contact_gap_max_m": 0.005},
    "two_covers": {"thickness_m": 0.005, "tautness_radius_m": 0.2, "contact_gap_max_m": 0.005},
}


def bend_right_forearm(world_doc, dy):
    """Move the right wrist sideways by ``dy`` metres; every appearance parameter stays as it was."""
    doc = copy.deepcopy(world_doc)
    forearm = next(l for l in doc["limbs"] if l["id"] == 5)
    forearm["b"][1] += dy
    return doc


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dy", type=float, default=0.06, help="wrist displacement in metres")
    args = ap.parse_args()

    base = builtin_document("supine_template")
    print(f"{'condition':>11} {'modality':>8} {'max diff':>10} {'mean diff':>10} {'changed':>8}")
    for name, cover in CONDITIONS.items():
        doc = copy.deepcopy(base)
        doc["cover"] = cover
        sc = scenario_from_dict(doc, name)
        moved = world_from_dict(bend_right_forearm(base["world"], args.dy))
        for m in (DEPTH, LWIR):
            rep = sensitivity(sc.world, moved, sc.cover, sc.thermal, m, sc.grid, sc.render, sc.solver)
            unit = "m" if m == DEPTH else ""
            print(
                f"{name:>11} {m:>8} {rep.max_abs_diff:9.4g}{unit:1} {rep.mean_abs_diff:10.3g} "
                f"{rep.changed_pixel_fraction:8.4f}"
            )


if __name__ == "__main__":
    main()
