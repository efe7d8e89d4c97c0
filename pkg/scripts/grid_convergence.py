"""Steady screened diffusion on a long strip against the exponential closed form.

    python3 scripts/grid_convergence.py --spacings 0.008,0.004,0.002,0.001
"""

import argparse
import time

import numpy as np

from covertherm.body_model import GridSpec
from covertherm.cover_drape import Mask
from covertherm.thermal_solver import INSULATED, Boundary, ThermalParams, solve_steady


def strip(h, length, params):
    grid = GridSpec((0.0, 0.0), h, int(round(length / h)), 2)
    src = np.zeros(grid.shape, dtype=bool)
    src[:, 0] = True
    field = solve_steady(grid, Mask(grid, src), params, Boundary(y=INSULATED), rtol=1e-13)
    return grid.xs(), field.temps[0], field.solve_info


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--spacings", default="0.008,0.004,0.002,0.001")
    ap.add_argument("--length", type=float, default=1.5)
    ap.add_argument("--k-over-a", type=float, default=100.0, help="screening k/a in m^-2")
    args = ap.parse_args()

    params = ThermalParams(diffusivity_a=1e-7, loss_rate_k=1e-7 * args.k_over_a)
    m = np.sqrt(params.loss_rate_k / params.diffusivity_a)
    coarse = None
    prev = None
    print(f"{'h (m)':>8} {'cells':>6} {'iters':>6} {'max |err| (K)':>14} {'max rel err':>12} {'order':>6} {'T(0.1)':>9} {'s':>6}")
    for h in (float(v) for v in args.spacings.split(",")):
        t0 = time.perf_counter()
        x, T, info = strip(h, args.length, params)
        dt = time.perf_counter() - t0
        exact = params.ambient_temp + params.delta * np.exp(-m * x)
        if coarse is None:
            coarse = x
        keep = np.isin(np.round(x / coarse[1], 6), np.round(coarse / coarse[1], 6))
        err = np.max(np.abs(T[keep] - exact[keep]))
        rel = np.max(np.abs(T - exact) / exact)
        order = "" if prev is None else f"{np.log2(prev[0] / err) / np.log2(prev[1] / h):6.3f}"
        j = int(round(0.1 / h))
        print(f"{h:8.4f} {len(x):6d} {info.iterations:6d} {err:14.3e} {rel:12.3e} {order:>6} {T[j]:9.4f} {dt:6.2f}")
        prev = (err, h)


if __name__ == "__main__":
    main()
