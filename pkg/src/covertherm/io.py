"""CSV grids, binary PGM images and JSON documents."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError


def write_csv(path, values, fmt="%.17g") -> None:
    """Row-major grid; 17 significant digits round-trip float64 exactly."""
    values = np.asarray(values)
    if values.dtype == bool:
        values = values.astype(np.uint8)
        fmt = "%d"
    np.savetxt(path, values, fmt=fmt, delimiter=",")


def read_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


def write_pgm(path, pixels) -> None:
    pixels = np.asarray(pixels)
    if pixels.dtype != np.uint8:
        raise ValueError("PGM writer expects uint8 pixels")
    h, w = pixels.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(np.ascontiguousarray(pixels).tobytes())


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            pos = data.index(b"\n", pos)
            continue
        start = pos
        while not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    if tokens[0] != b"P5" or int(tokens[3]) != 255:
        raise ValueError("only 8-bit binary PGM is supported")
    w, h = int(tokens[1]), int(tokens[2])
    return np.frombuffer(data[pos + 1 : pos + 1 + w * h], dtype=np.uint8).reshape(h, w)


def normalize_preview(values, lo=None, hi=None, invert=False) -> np.ndarray:
    """Linear map of ``values`` onto 0..255; a constant input maps to 0."""
    values = np.asarray(values, dtype=float)
    lo = float(values.min()) if lo is None else lo
    hi = float(values.max()) if hi is None else hi
    if hi <= lo:
        out = np.zeros(values.shape)
    else:
        out = np.clip((values - lo) / (hi - lo), 0.0, 1.0)
    if invert and hi > lo:
        out = 1.0 - out
    return np.round(255.0 * out).astype(np.uint8)


def load_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def dump_json(path, doc) -> None:
    with open(path, "w") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")
