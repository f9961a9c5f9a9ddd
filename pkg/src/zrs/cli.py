"""Command-line front end: load configurations, run checks, emit CSV/JSON.

Exit codes: 0 ok, 1 usage error, 2 admissibility failure, 3 numerical
failure.  Outputs are deterministic for a fixed config and seed.
"""

import argparse
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import resolvent as rsv
from . import scattering as sc
from .errors import (
    FitUnstable,
    NonPositiveGram,
    SingularMatrix,
    TailNotContractive,
    ZrsError,
)
from .krein import build_q, build_weighted, gamma_direct, gram_matrix
from .scatterers import check_admissibility, from_config, tail_bound
from .spherical import default_order, make_grid

SWEEP_CSV_HEADER = "lambda,defect_reduced,gamma_norm,gamma_cond,mu,increment"
NSWEEP_CSV_HEADER = "n_low,n_high,gamma_diff"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    p = _Parser(prog="zrs", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("validate", "smatrix", "sweep", "resolvent"):
        q = sub.add_parser(name)
        q.add_argument("--config", required=True, help="scatterer/run JSON file")
        q.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="spectral parameter (for validate: window top b)")
        q.add_argument("--interval", nargs=2, type=float, default=None,
                       metavar=("A", "B"))
        q.add_argument("--n", type=int, default=None, help="truncation")
        q.add_argument("--n0", type=int, default=None, help="Schur split")
        q.add_argument("--grid-order", type=int, default=None)
        q.add_argument("--grid-points", type=int, default=None,
                       help="lambda samples for sweeps")
        q.add_argument("--seed", type=int, default=None)
        q.add_argument("--out", default=None, help="output path (default stdout)")
        q.add_argument("--n-sweep", default=None,
                       help="comma list of truncations for convergence mode")
    return p


def _load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _setting(args, cfg, key, attr, default=None):
    val = getattr(args, attr, None)
    if val is not None:
        return val
    return cfg.get(key, default)


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_validate(args, cfg, s):
    b = _setting(args, cfg, "b", "lam", 25.0)
    n0 = _setting(args, cfg, "n0", "n0")
    report = check_admissibility(s.prefix(args.n) if args.n else s, b, n0=n0)
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return 0 if report.passed else 2


def _sample_dirs(grid, count=8):
    idx = np.linspace(0, grid.size - 1, count).astype(int)
    return grid.nodes[idx]


def _cmd_smatrix(args, cfg, s):
    lam = _setting(args, cfg, "lambda", "lam")
    if lam is None:
        raise UsageError("smatrix needs --lambda")
    sub = s.prefix(args.n) if args.n else s
    tb = None
    if args.n0 is not None:
        tb = tail_bound(sub, args.n0, lam)
    try:
        rep = sc.smatrix(lam, sub, split=args.n0, tail_bound=tb)
    except (SingularMatrix, TailNotContractive) as exc:
        exc.args = (f"lambda={lam:g}: {exc}",)
        raise
    order = _setting(args, cfg, "grid_order", "grid_order",
                     default_order(lam, sub))
    grid = make_grid("gauss-legendre-product", order)
    seed = _setting(args, cfg, "seed", "seed", 0)
    d_red = sc.unitarity_defect_reduced(lam, sub)
    d_quad = sc.unitarity_defect_quadrature(rep, grid, seed=seed)
    dirs = _sample_dirs(grid)
    lines = [f"# lambda={lam:.17g} defect_reduced={d_red:.17g} "
             f"defect_quadrature={d_quad:.17g} gamma_cond={rep.gamma_cond:.17g}\n"]
    buf = io.StringIO()
    sc.write_kernel_csv(rep, dirs, dirs, buf)
    lines.append(buf.getvalue())
    _emit("".join(lines), args.out)
    return 0


def _sweep_row(lam, sub):
    q = build_q(lam, sub)
    qt, j = build_weighted(sub, q)
    gamma = gamma_direct(qt, j)
    return (
        gamma,
        sc.unitarity_defect_reduced(lam, sub),
        float(np.linalg.norm(gamma, 2)),
        float(np.linalg.cond(gamma)),
        gram_matrix(lam, sub).mu,
    )


def _cmd_sweep(args, cfg, s):
    sub = s.prefix(args.n) if args.n else s
    nsweep = _setting(args, cfg, "n_sweep", "n_sweep")
    if nsweep:
        lam = _setting(args, cfg, "lambda", "lam")
        if lam is None:
            raise UsageError("N-sweep mode needs --lambda")
        ns = [int(v) for v in str(nsweep).split(",") if v.strip()]
        if len(ns) < 2:
            raise UsageError("N-sweep needs at least two truncations")
        lines = [NSWEEP_CSV_HEADER + "\n"]
        gammas = {}
        for nv in ns:
            q = build_q(lam, s.prefix(nv))
            qt, j = build_weighted(s.prefix(nv), q)
            gammas[nv] = gamma_direct(qt, j)
        for lo, hi in zip(ns[:-1], ns[1:]):
            common = min(lo, hi)
            diff = float(np.linalg.norm(gammas[hi][:common, :common]
                                        - gammas[lo][:common, :common], 2))
            lines.append(f"{lo},{hi},{diff:.17g}\n")
        _emit("".join(lines), args.out)
        return 0

    interval = _setting(args, cfg, "interval", "interval")
    if interval is None:
        raise UsageError("sweep needs --interval A B")
    a, b = float(interval[0]), float(interval[1])
    if not 0 < a < b:
        raise UsageError("interval must satisfy 0 < a < b")
    points = int(_setting(args, cfg, "grid_points", "grid_points", 32))
    lams = np.linspace(a, b, points)
    with ThreadPoolExecutor(max_workers=4) as ex:
        rows = list(ex.map(lambda lam: _sweep_row(lam, sub), lams))
    lines = [SWEEP_CSV_HEADER + "\n"]
    prev_gamma = None
    for lam, (gamma, d_red, gnorm, gcond, mu) in zip(lams, rows):
        inc = (float(np.linalg.norm(gamma - prev_gamma, 2))
               if prev_gamma is not None else float("nan"))
        prev_gamma = gamma
        lines.append(f"{lam:.17g},{d_red:.17g},{gnorm:.17g},"
                     f"{gcond:.17g},{mu:.17g},{inc:.17g}\n")
    _emit("".join(lines), args.out)
    return 0


def _cmd_resolvent(args, cfg, s):
    sub = s.prefix(args.n) if args.n else s
    z = complex(*cfg.get("z", [0.0, 1.0]))
    z1 = complex(*cfg.get("z1", [1.0, 1.0]))
    z2 = complex(*cfg.get("z2", [-2.0, 0.5]))
    source = cfg.get("source")
    tol = {"hilbert": 1e-10, "symmetry": 1e-12, "boundary": 1e-5}
    tol.update(cfg.get("tolerances", {}))
    hil = rsv.hilbert_identity_residual(z1, z2, sub)
    sym = rsv.symmetry_residual(z, sub)
    bnd = rsv.boundary_condition_residual(z, sub, source=source)
    ok = (hil < tol["hilbert"] and sym < tol["symmetry"]
          and bool(np.all(bnd < tol["boundary"])))
    payload = {
        "z": [z.real, z.imag],
        "z1": [z1.real, z1.imag],
        "z2": [z2.real, z2.imag],
        "hilbert_residual": hil,
        "symmetry_residual": sym,
        "boundary_residuals": bnd.tolist(),
        "tolerances": tol,
        "pass": ok,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0 if ok else 3


_COMMANDS = {
    "validate": _cmd_validate,
    "smatrix": _cmd_smatrix,
    "sweep": _cmd_sweep,
    "resolvent": _cmd_resolvent,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _load_config(args.config)
        s = from_config(cfg)
        return _COMMANDS[args.command](args, cfg, s)
    except UsageError as exc:
        print(f"zrs: usage error: {exc}", file=sys.stderr)
        return 1
    except (SingularMatrix, TailNotContractive, NonPositiveGram,
            FitUnstable) as exc:
        print(f"zrs: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ZrsError as exc:
        # remaining domain errors are configuration problems
        print(f"zrs: {exc}", file=sys.stderr)
        return 1


def run():
    raise SystemExit(main())
