"""Command-line interface.

Subcommands: ``verify-identities``, ``profile``, ``gamma``, ``solve``,
``residuals``, ``sweep``, ``geometry`` and ``pipeline``.  Exit codes: 0 ok,
1 verification failure, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig, load_config
from .errors import (BadSlope, BlendNotConvex, ConfigError, HyperwedgeError,
                     InsufficientData, NumericFailure, VerificationFailure)

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
log = logging.getLogger("hyperwedge")


def _grid(text):
    m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError("grid must look like NKxNS, e.g. 256x32")
    return int(m.group(1)), int(m.group(2))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON or YAML run configuration")
    common.add_argument("--out", type=Path, help="output directory (created if missing)")
    common.add_argument("--eps", type=float, action="append",
                        help="incoming mass flux; repeat for several values")
    common.add_argument("--grid", type=_grid, help="BVP grid NKxNS")
    common.add_argument("-v", "--verbose", action="store_true")
    p = argparse.ArgumentParser(prog="hyperwedge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-identities", parents=[common],
                   help="run the exact identity suite")
    sub.add_parser("profile", parents=[common], help="sample and validate the wall profile")
    g = sub.add_parser("gamma", parents=[common], help="construct the approximate wall image")
    g.add_argument("--check-quadrature", action="store_true",
                   help="also compare with the nested-quadrature formula")
    sub.add_parser("solve", parents=[common], help="solve the strip problem")
    sub.add_parser("residuals", parents=[common], help="solve and report boundary residuals")
    sub.add_parser("sweep", parents=[common], help="eps sweep with order fit")
    sub.add_parser("geometry", parents=[common], help="physical wall and shock curves")
    sub.add_parser("pipeline", parents=[common], help="everything, end to end")
    return p


def resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.eps:
        cfg.eps_list = [float(e) for e in args.eps]
    if args.grid:
        cfg.grid.nk, cfg.grid.ns = args.grid
    if args.out:
        cfg.output_dir = str(args.out)
    return cfg.validate()


def cmd_verify_identities(cfg: RunConfig) -> int:
    from .pipeline import write_json
    from .symbolic import run_identity_suite
    rep = run_identity_suite()
    d = rep.as_dict()
    d.pop("runtime")
    write_json(Path(cfg.output_dir) / "identities.json", d)
    for item in rep.items:
        print(f"[{'PASS' if item.passed else 'FAIL'}] {item.index:2d} {item.name} {item.detail}")
    print(f"runtime {rep.runtime:.2f} s")
    if not rep.passed:
        raise VerificationFailure("identity suite failed")
    return EXIT_OK


def cmd_profile(cfg: RunConfig) -> int:
    from .pipeline import write_csv, write_json
    from .wall import validate
    W = cfg.profile()
    out = Path(cfg.output_dir)
    k = np.linspace(W.flat, W.sharp, 2001)[:-1]
    B, B1, B2, B3 = W.derivs(k, 3)
    write_csv(out / "profile.csv", ["k", "B", "B1", "B2", "B3"], np.column_stack([k, B, B1, B2, B3]))
    rep = validate(W)
    write_json(out / "profile.json", {"validation": rep.__dict__, "config": cfg.to_dict()})
    print(f"profile written; validation {'ok' if rep.passed else 'FAILED'}")
    if not rep.passed:
        raise VerificationFailure("wall profile validation failed")
    return EXIT_OK


def cmd_gamma(cfg: RunConfig, check_quadrature=False) -> int:
    from .gamma import check_gamma_lower_bound, gamma_quadrature, solve_gamma_ode
    from .pipeline import eps_tag, write_csv, write_json
    fc, W = cfg.flow_constants(), cfg.profile()
    for eps in cfg.eps_list:
        c = solve_gamma_ode(W, eps, fc)
        out = Path(cfg.output_dir) / eps_tag(eps)
        write_csv(out / "gamma.csv", ["k", "gamma", "gamma_prime", "gamma_over_eps"],
                  np.column_stack([c.knots, c.values, c.slopes, c.values / eps]))
        info = {"eps": eps, "lower_bound_ratio": check_gamma_lower_bound(c),
                "config": cfg.to_dict()}
        if check_quadrature:
            ks = np.linspace(W.flat, W.sharp - W.delta / 2, 9)
            gap = max(abs(c.value(x) - gamma_quadrature(W, eps, fc, x)) for x in ks)
            info["quadrature_gap_over_eps"] = float(gap / eps)
        write_json(out / "gamma.json", info)
        print(f"eps={eps:.3e}  lower-bound ratio {info['lower_bound_ratio']:.6f}")
    return EXIT_OK


def _solve_each(cfg):
    from .pipeline import solve_eps
    for eps in cfg.eps_list:
        yield solve_eps(cfg, eps)


def cmd_solve(cfg: RunConfig) -> int:
    from .pipeline import eps_tag, write_csv, write_json
    for res in _solve_each(cfg):
        F, g = res.solution, res.solution.dom.geom
        out = Path(cfg.output_dir) / eps_tag(res.eps)
        write_csv(out / "solution.csv", ["k", "sigma", "u", "v", "y"],
                  np.column_stack([g.k.ravel(), g.sigma.ravel(), g.u.ravel(), g.v.ravel(),
                                   F.y.ravel()]))
        write_json(out / "solution.json", {"eps": res.eps, "grid": list(res.grids[-1]),
                                           "solver_residual": F.residual_norm,
                                           "config": cfg.to_dict()})
        print(f"eps={res.eps:.3e} solved on {res.grids[-1]}")
    return EXIT_OK


def cmd_residuals(cfg: RunConfig) -> int:
    from .pipeline import eps_tag, write_csv, write_json
    for res in _solve_each(cfg):
        out = Path(cfg.output_dir) / eps_tag(res.eps)
        write_csv(out / "residual.csv", ["k", "residual", "residual_uv"],
                  res.residual.profile_rows())
        write_json(out / "residual.json", res.residual.as_dict() | {"config": cfg.to_dict()})
        print(f"eps={res.eps:.3e}  sup R = {res.residual.sup_residual:.6e}")
    return EXIT_OK


def cmd_geometry(cfg: RunConfig) -> int:
    from .physical import export_geometry, integrate_x, jacobian_check
    from .pipeline import eps_tag
    for res in _solve_each(cfg):
        P = integrate_x(res.solution)
        geo = export_geometry(P, Path(cfg.output_dir) / eps_tag(res.eps))
        jac = jacobian_check(P)
        print(f"eps={res.eps:.3e}  slip {geo.slip_sup:.3e}  Jacobian single-signed {jac.passed}")
        if not jac.passed:
            raise VerificationFailure("Jacobian changes sign")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    from .pipeline import run_sweep
    if len(set(cfg.eps_list)) < 3:
        raise InsufficientData("sweep needs at least three eps values")
    reports, slope, summary = run_sweep(cfg)
    print(f"{'eps':>10}  {'sup R':>12}")
    for r in summary["table"]:
        print(f"{r['eps']:10.3e}  {r['sup_residual']:12.6e}")
    print(f"fitted slope {slope:.4f}")
    print(f"perturbation {summary['perturbation']}")
    return EXIT_OK


def cmd_pipeline(cfg: RunConfig) -> int:
    from .pipeline import run_sweep
    cmd_verify_identities(cfg)
    cmd_profile(cfg)
    reports, slope, summary = run_sweep(cfg)
    failed = [c["name"] for r in reports for c in r["checks"] if not c["pass"]]
    failed += [c["name"] for c in summary["checks"] if not c["pass"]]
    for r in summary["table"]:
        print(f"eps={r['eps']:.3e}  sup R = {r['sup_residual']:.6e}")
    if np.isfinite(slope):
        print(f"fitted slope {slope:.4f}")
    if failed:
        print("failed checks: " + ", ".join(sorted(set(failed))))
        raise VerificationFailure("pipeline checks failed")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        Path(cfg.output_dir).mkdir(parents=True, exist_ok=True)
        cmd = args.command
        if cmd == "verify-identities":
            return cmd_verify_identities(cfg)
        if cmd == "profile":
            return cmd_profile(cfg)
        if cmd == "gamma":
            return cmd_gamma(cfg, args.check_quadrature)
        if cmd == "solve":
            return cmd_solve(cfg)
        if cmd == "residuals":
            return cmd_residuals(cfg)
        if cmd == "sweep":
            return cmd_sweep(cfg)
        if cmd == "geometry":
            return cmd_geometry(cfg)
        return cmd_pipeline(cfg)
    except (ConfigError, InsufficientData, BlendNotConvex, BadSlope) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (NumericFailure, HyperwedgeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
