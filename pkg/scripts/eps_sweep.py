"""Flux sweep: sup residual, fitted order, perturbation ratios and physical-map checks.

Example: python scripts/eps_sweep.py --out out/sweep --eps 1e-2 --eps 3e-3 --eps 1e-3 --eps 3e-4
"""
import argparse
import json
from pathlib import Path

from hyperwedge.config import RunConfig, load_config
from hyperwedge.pipeline import run_sweep


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", type=Path)
    p.add_argument("--out", type=Path, default=Path("out/sweep"))
    p.add_argument("--eps", type=float, action="append")
    p.add_argument("--workers", type=int)
    args = p.parse_args()
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.eps:
        cfg.eps_list = args.eps
    if args.workers:
        cfg.workers = args.workers
    cfg.output_dir = str(args.out)
    cfg.validate()
    reports, slope, summary = run_sweep(cfg, args.out)
    print(f"{'eps':>10}  {'sup R':>12}")
    for r in summary["table"]:
        print(f"{r['eps']:10.3e}  {r['sup_residual']:12.4e}")
    print(f"fitted slope {slope:.3f}")
    print(json.dumps(summary["checks"], indent=1))


if __name__ == "__main__":
    main()
