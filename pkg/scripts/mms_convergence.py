"""Manufactured-solution convergence study for the strip solver.

Example: python scripts/mms_convergence.py --eps 1e-3 --base 256x32 --levels 4
"""
import argparse

import numpy as np

from hyperwedge.bvp import mms_convergence
from hyperwedge.cli import _grid
from hyperwedge.config import RunConfig
from hyperwedge.gamma import solve_gamma_ode


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--base", type=_grid, default=(256, 32))
    p.add_argument("--levels", type=int, default=4)
    args = p.parse_args()
    cfg = RunConfig().validate()
    fc, W = cfg.flow_constants(), cfg.profile()
    eta_l, eta_r = cfg.etas()
    gamma = solve_gamma_ode(W, args.eps, fc)
    grids, errs, orders = mms_convergence(W, args.eps, gamma, fc, eta_l, eta_r,
                                          base=args.base, levels=args.levels)
    print(f"{'grid':>12}  {'rel max err':>12}  {'order':>6}")
    for i, (g, e) in enumerate(zip(grids, errs)):
        o = f"{orders[i - 1]:6.3f}" if i else ""
        print(f"{g[0]:>6}x{g[1]:<5}  {e:12.4e}  {o}")
    print(f"mean order {np.mean(orders):.3f}")


if __name__ == "__main__":
    main()
