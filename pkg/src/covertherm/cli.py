"""Command-line front end.

    covertherm simulate <config> [--out DIR] [--modality lwir|depth|both] [--format csv|pgm|both]
    covertherm lemma <config> [--out DIR]
    covertherm eval <preds> <gts> [--tau 0.05,0.1,...] [--out DIR]
    covertherm scenario list | show <name>

``<config>`` is a scenario JSON path or a built-in scenario name.
Exit codes: 0 ok, 2 unreadable input, 3 invalid input, 4 solver failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, schemas
from .body_model import pose_joints_2d, world_to_dict
from .errors import CoverThermError, ParseError, ValidationError
from .io import dump_json, load_json, normalize_preview, write_csv, write_pgm
from .joints import LSP_JOINTS, joint_sets_from_json
from .pipeline import simulate
from .pose_eval import DEFAULT_TAUS, format_table, pck_sweep
from .radiometry import DEPTH, LWIR
from .recognizability import lemma1_check
from .scenario import BUILTINS, builtin_document, load_scenario, require_pair, validate_document

log = logging.getLogger("covertherm")


def _modalities(arg: str) -> tuple[str, ...]:
    return (LWIR, DEPTH) if arg == "both" else (arg,)


def _out_dir(args, scenario=None) -> Path:
    if args.out:
        out = Path(args.out)
    elif scenario is not None and scenario.outputs:
        out = Path(scenario.outputs)
    else:
        out = Path("out") / (scenario.name if scenario is not None else "eval")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ValidationError(f"cannot create output directory {out}: {exc.strerror}") from None
    return out


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_world(sim, scenario, world, out: Path, fmt: str) -> list[Path]:
    written = []

    def csv(name, values):
        if fmt in ("csv", "both"):
            p = out / name
            write_csv(p, values)
            written.append(p)

    def pgm(name, pixels):
        if fmt in ("pgm", "both"):
            p = out / name
            write_pgm(p, pixels)
            written.append(p)

    thermal = scenario.thermal
    csv("body_heightfield.csv", sim.body.values)
    csv("cover.csv", sim.cover.top_height)
    csv("contact_mask.csv", sim.contact.values)
    if sim.field is not None:
        csv("thermal_field.csv", sim.field.temps)
        pgm("thermal_preview.pgm", normalize_preview(sim.field.temps, thermal.ambient_temp, thermal.contact_temp))
    if LWIR in sim.images:
        p = out / "lwir.pgm"
        write_pgm(p, sim.images[LWIR].values)
        written.append(p)
    if DEPTH in sim.images:
        depth = sim.images[DEPTH].values
        csv("depth.csv", depth)
        pgm("depth_preview.pgm", normalize_preview(depth, invert=True))
    if set(world.skeleton_map) == set(LSP_JOINTS):
        p = out / "joints_gt.json"
        dump_json(p, pose_joints_2d(world, scenario.grid).to_dict())
        written.append(p)
    return written


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.config)
    out = _out_dir(args, scenario)
    mods = _modalities(args.modality)
    worlds = [("world", scenario.world, out)]
    if scenario.world_b is not None:
        worlds.append(("world_b", scenario.world_b, out / "world_b"))

    runs = {}
    for key, world, wdir in worlds:
        wdir.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        sim = simulate(world, scenario.grid, scenario.cover, scenario.thermal, scenario.render, scenario.solver, mods)
        elapsed = time.perf_counter() - t0
        files = _write_world(sim, scenario, world, wdir, args.format)
        info = sim.field.solve_info if sim.field is not None else None
        runs[key] = {
            "world": world_to_dict(world),
            "contact_cells": sim.contact.count(),
            "thermal_time_s": None if sim.field is None or not np.isfinite(sim.field.time) else sim.field.time,
            "solver": None if info is None else {"iterations": info.iterations, "residual": info.residual, "tolerance": info.tolerance},
            "artifacts": {str(p.relative_to(out)): _sha256(p) for p in files},
            "timings_s": {"pipeline": elapsed},
        }
        log.info("%s: %d contact cells, %d files in %s", key, sim.contact.count(), len(files), wdir)

    manifest = {
        "tool": "covertherm",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scenario": scenario.doc,
        "seed": scenario.seed,
        "modalities": list(mods),
        "format": args.format,
        "runs": runs,
    }
    dump_json(out / "manifest.json", manifest)
    print(json.dumps({"status": "ok", "out": str(out), "runs": list(runs)}))
    return 0


def cmd_lemma(args) -> int:
    scenario = load_scenario(args.config)
    require_pair(scenario)
    out = _out_dir(args, scenario)
    result = lemma1_check(scenario, scenario.lemma_eps or None, scenario.lemma_delta or None)
    report = {"scenario": scenario.name, "reports": [{"modality": m, **r} for m, r in result.items()]}
    dump_json(out / "lemma_report.json", report)
    print(json.dumps(report, sort_keys=True))
    return 0


def _parse_taus(text: str) -> tuple[float, ...]:
    try:
        taus = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ParseError(f"--tau must be a comma-separated list of numbers, got {text!r}") from None
    if not taus:
        raise ParseError("--tau list is empty")
    return taus


def _load_joint_file(path) -> list:
    doc = load_json(path)
    try:
        validate_document(doc, schemas.JOINT_SETS, what=str(path))
    except CoverThermError as exc:
        raise ParseError(str(exc)) from None
    return joint_sets_from_json(doc)


def cmd_eval(args) -> int:
    taus = _parse_taus(args.tau)
    preds = _load_joint_file(args.preds)
    gts = _load_joint_file(args.gts)
    reports = pck_sweep(preds, gts, taus)
    out = _out_dir(args)
    dump_json(out / "pck_report.json", {"reports": [r.to_dict() for r in reports]})
    table = format_table(reports)
    (out / "pck_table.txt").write_text(table)
    with open(out / "pck_curve.csv", "w") as f:
        f.write("tau,mean_rate\n")
        for r in reports:
            f.write(f"{r.tau:.17g},{r.mean_rate:.17g}\n")
    sys.stdout.write(table)
    return 0


def cmd_scenario(args) -> int:
    if args.action == "list":
        for name in BUILTINS:
            doc = builtin_document(name)
            print(f"{name:18s} {doc.get('description', '')}")
        return 0
    if not args.name:
        raise ParseError("scenario show needs a name")
    print(json.dumps(builtin_document(args.name), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covertherm", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="render a scenario")
    p.add_argument("config")
    p.add_argument("--out")
    p.add_argument("--modality", choices=["lwir", "depth", "both"], default="both")
    p.add_argument("--format", choices=["csv", "pgm", "both"], default="both")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("lemma", help="compare the scenario's two poses per modality")
    p.add_argument("config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("eval", help="score predicted joints with PCK")
    p.add_argument("preds")
    p.add_argument("gts")
    p.add_argument("--tau", default=",".join(f"{t:g}" for t in DEFAULT_TAUS))
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scenario", help="list or print the built-in scenarios")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except CoverThermError as exc:
        sys.stderr.write(json.dumps(exc.to_dict()) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
