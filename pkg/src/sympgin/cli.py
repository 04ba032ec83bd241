"""Command-line surface emitting figure and verification data as CSV/JSON.

Subcommands
-----------
density      one-point density R_N along a cross-section, with the limiting
             density, the sqrt(N)-scaled difference and the correction term
figure2      R_N over an N-list per point, with the least-squares limit and
             correction extraction
kernel       finite-N transformed kernel against its limit at given (z, w)
check        verification battery (CD identities, skew-orthogonality,
             Pfaffian oracle, cocycle invariance) as a JSON report
sample       eigenvalue cloud and its rescaled version
pfaffian     Pfaffian of a CSV matrix of re/im pairs
extrapolate  a + b/sqrt(N) + c/N fit of (N, value) rows

Every CSV has a header row; floats are serialised with 17 significant
digits, so equal configurations produce byte-identical files.  Each output
gets a JSON manifest sidecar (config echo, library version, wall time).
Grid points can be dispatched to a process pool (SYMPGIN_WORKERS); results
are re-ordered before serialisation, so output does not depend on the
worker count.

Exit codes: 0 success, 2 validation error, 3 numerical-tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .analysis import fit_series
from .kernels import (
    KernelContext,
    Regime,
    cd_residual,
    cd_residual_transformed,
    cocycle_c_N,
    edge_point,
    kappa_tilde,
    one_point_density,
)
from .limits import (
    bulk_density,
    edge_density,
    edge_density_correction,
    kappa_bulk,
    kappa_edge,
)
from .pfaffian import _combinatorial_reference, cocycle_invariance_check, pfaffian
from .quadrature import QuadratureToleranceError
from .sampler import rescaled_cloud, sample
from .skeworth import prekernel_via_sop, verify_skew_orthogonality

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_TOLERANCE = 3


class ValidationError(ValueError):
    pass


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_csv(path: str, header: list[str], rows: list[list[float]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _write_manifest(path: str, config: dict, t0: float) -> None:
    manifest = {
        "config": config,
        "version": __version__,
        "wall_time_s": time.time() - t0,
    }
    with open(path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_range(spec: str) -> np.ndarray:
    lo, hi, n = spec.split(":")
    n = int(n)
    if n < 1:
        raise ValidationError("sample count must be >= 1")
    return np.linspace(float(lo), float(hi), n)


def _parse_line(spec: str) -> list[complex]:
    """'im=2,re=-3:3:25' -> points re + 2i; 're=-1,im=0:3:31' likewise."""
    parts = dict(item.split("=", 1) for item in spec.split(","))
    if set(parts) != {"re", "im"}:
        raise ValidationError("line spec needs exactly re=... and im=...")
    if ":" in parts["re"] and ":" in parts["im"]:
        raise ValidationError("line spec must fix one coordinate")
    if ":" in parts["re"]:
        return [complex(x, float(parts["im"])) for x in _parse_range(parts["re"])]
    return [complex(float(parts["re"]), y) for y in _parse_range(parts["im"])]


def _parse_grid(spec: str) -> list[complex]:
    """'re=-3:3:41,im=0:3:21' -> row-major grid points (im outer, re inner)."""
    parts = dict(item.split("=", 1) for item in spec.split(","))
    if set(parts) != {"re", "im"} or ":" not in parts["re"] or ":" not in parts["im"]:
        raise ValidationError("grid spec needs re=lo:hi:n and im=lo:hi:n")
    xs = _parse_range(parts["re"])
    ys = _parse_range(parts["im"])
    return [complex(x, y) for y in ys for x in xs]


def _resolve_p(args) -> float:
    if args.p is not None and args.regime is not None:
        raise ValidationError("give either --p or --regime, not both")
    if args.p is not None:
        return float(args.p)
    regime = args.regime or "bulk"
    e = edge_point(args.tau)
    table = {"origin": 0.0, "bulk": 0.0, "edge": e, "outside": 1.2 * e}
    if regime not in table:
        raise ValidationError(f"unknown regime {regime!r}")
    return table[regime]


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("SYMPGIN_WORKERS", "1")))
    except ValueError:
        return 1


def _density_point(task):
    N, tau, p, z = task
    return one_point_density(KernelContext(N=N, tau=tau, p=p), z)


def _density_values(N: int, tau: float, p: float, points: list[complex]) -> list[float]:
    tasks = [(N, tau, p, z) for z in points]
    w = _workers()
    if w > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=w) as pool:
            return list(pool.map(_density_point, tasks))
    return [_density_point(t) for t in tasks]


def _limit_columns(ctx: KernelContext, z: complex, tol: float | None = None):
    if ctx.regime is Regime.BULK:
        return bulk_density(z.imag), 0.0
    if ctx.regime is Regime.OUTSIDE:
        return 0.0, 0.0
    kw = {} if tol is None else {"tol": tol}
    return edge_density(z, **kw), edge_density_correction(ctx.tau, z)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_density(args) -> int:
    t0 = time.time()
    p = _resolve_p(args)
    if (args.line is None) == (args.grid is None):
        raise ValidationError("give exactly one of --line or --grid")
    points = _parse_line(args.line) if args.line else _parse_grid(args.grid)
    if not points:
        raise ValidationError("empty cross-section")
    ctx = KernelContext(N=args.N, tau=args.tau, p=p)
    vals = _density_values(args.N, args.tau, p, points)
    rows = []
    for z, rn in zip(points, vals):
        rlim, rhalf = _limit_columns(ctx, z, args.tol)
        rows.append([z.real, z.imag, rn, rlim,
                     math.sqrt(args.N) * (rn - rlim), rhalf])
    _write_csv(args.out, ["re_z", "im_z", "R_N", "R_limit", "sqrtN_diff", "R_half"], rows)
    _write_manifest(args.out, {"cmd": "density", "N": args.N, "tau": args.tau,
                               "p": p, "line": args.line, "grid": args.grid}, t0)
    return EXIT_OK


def cmd_figure2(args) -> int:
    t0 = time.time()
    p = _resolve_p(args)
    Ns = [int(x) for x in args.N_list.split(",")]
    if len(Ns) < 3:
        raise ValidationError("figure2 needs at least 3 N values")
    points = _parse_line(args.line)
    if not points:
        raise ValidationError("empty cross-section")
    ctx0 = KernelContext(N=Ns[0], tau=args.tau, p=p)
    per_n = {N: _density_values(N, args.tau, p, points) for N in Ns}
    header = ["re_z", "im_z", "R_limit", "R_half", "fit_a", "fit_b", "fit_c",
              "fit_residual", "fit_corr_a"]
    header += [f"RN_{N}" for N in Ns] + [f"sqrtNdiff_{N}" for N in Ns]
    rows = []
    for i, z in enumerate(points):
        rlim, rhalf = _limit_columns(ctx0, z, args.tol)
        series = [(N, per_n[N][i]) for N in Ns]
        fit = fit_series(series)
        corr = fit_series([(N, math.sqrt(N) * (v - rlim)) for N, v in series])
        row = [z.real, z.imag, rlim, rhalf, fit.a, fit.b, fit.c, fit.residual,
               corr.a]
        row += [per_n[N][i] for N in Ns]
        row += [math.sqrt(N) * (per_n[N][i] - rlim) for N in Ns]
        rows.append(row)
    _write_csv(args.out, header, rows)
    _write_manifest(args.out, {"cmd": "figure2", "N_list": Ns, "tau": args.tau,
                               "p": p, "line": args.line}, t0)
    return EXIT_OK


def cmd_kernel(args) -> int:
    t0 = time.time()
    p = _resolve_p(args)
    z, w = complex(args.z), complex(args.w)
    ctx = KernelContext(N=args.N, tau=args.tau, p=p)
    kt = kappa_tilde(ctx, z, w).to_complex()
    if ctx.regime is Regime.BULK:
        lim = kappa_bulk(z, w)
    elif ctx.regime is Regime.OUTSIDE:
        lim = 0j
    else:
        lim = kappa_edge(z, w)
    rows = [[z.real, z.imag, w.real, w.imag, kt.real, kt.imag,
             lim.real, lim.imag, abs(kt - lim)]]
    _write_csv(args.out, ["re_z", "im_z", "re_w", "im_w", "kt_re", "kt_im",
                          "limit_re", "limit_im", "abs_diff"], rows)
    _write_manifest(args.out, {"cmd": "kernel", "N": args.N, "tau": args.tau,
                               "p": p, "z": str(z), "w": str(w)}, t0)
    return EXIT_OK


def cmd_check(args) -> int:
    t0 = time.time()
    rng = np.random.default_rng(args.seed)
    checks = []

    def record(name, value, tol):
        checks.append({"name": name, "value": value, "tol": tol,
                       "pass": bool(value <= tol)})

    # Christoffel-Darboux identities on a compact grid
    worst = worst_t = 0.0
    for N in (1, 5, 40):
        for tau in (0.0, 0.3, 0.7):
            p_vals = (0.0, 1.0, edge_point(tau))
            for p in p_vals:
                ctx = KernelContext(N=N, tau=tau, p=p)
                for _ in range(4):
                    z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                    w = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                    worst = max(worst, cd_residual(ctx, z, w))
                    worst_t = max(worst_t, cd_residual_transformed(ctx, z, w))
    record("cd_identity_max_residual", worst, 1e-9)
    record("cd_transformed_max_residual", worst_t, 1e-9)

    # skew-orthogonality and the dual pre-kernel construction
    record("skew_orthogonality_max_dev", verify_skew_orthogonality(4, 0.3, 3), 1e-9)
    ctx = KernelContext(N=4, tau=0.3, p=0.0)
    from .kernels import prekernel_kappa_N
    z, w = 0.37 + 0.41j, -0.22 + 0.18j
    sop = prekernel_via_sop(4, 0.3, 0.0, z, w)
    record("sop_vs_canonical", prekernel_kappa_N(ctx, z, w).rel_diff(sop), 1e-10)

    # Pfaffian against the combinatorial expansion (order 6)
    worst = 0.0
    for _ in range(8):
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        a = a - a.T
        ref = _combinatorial_reference(a)
        worst = max(worst, abs(pfaffian(a) - ref) / max(1e-300, abs(ref)))
    record("pfaffian_vs_enumeration", worst, 1e-12)

    # cocycle invariance of the 2-point function
    ctx = KernelContext(N=20, tau=0.5, p=0.0)
    pts = [0.4 + 0.6j, -0.3 + 0.9j]
    record("cocycle_invariance", cocycle_invariance_check(ctx, pts, cocycle_c_N(ctx)),
           1e-10)

    report = {"checks": checks, "all_pass": all(c["pass"] for c in checks)}
    payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
        _write_manifest(args.out, {"cmd": "check", "seed": args.seed}, t0)
    else:
        sys.stdout.write(payload)
    return EXIT_OK if report["all_pass"] else EXIT_TOLERANCE


def cmd_sample(args) -> int:
    t0 = time.time()
    p = _resolve_p(args)
    s = sample(args.N, args.tau, args.seed)
    cloud = rescaled_cloud(s, p)
    rows = [[z.real, z.imag, r.real, r.imag]
            for z, r in zip(s.eigenvalues, cloud)]
    _write_csv(args.out, ["re", "im", "re_rescaled", "im_rescaled"], rows)
    _write_manifest(args.out, {"cmd": "sample", "N": args.N, "tau": args.tau,
                               "p": p, "seed": args.seed}, t0)
    return EXIT_OK


def cmd_pfaffian(args) -> int:
    t0 = time.time()
    try:
        raw = np.loadtxt(args.infile, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise ValidationError(f"cannot read matrix CSV: {exc}") from exc
    n, m = raw.shape
    if m != 2 * n:
        raise ValidationError(
            f"matrix CSV must have 2n columns of re/im pairs, got {n} x {m}"
        )
    a = raw[:, 0::2] + 1j * raw[:, 1::2]
    try:
        value = pfaffian(a)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    payload = {"order": n, "pf_re": value.real, "pf_im": value.imag}
    out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
        _write_manifest(args.out, {"cmd": "pfaffian", "infile": args.infile}, t0)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_extrapolate(args) -> int:
    t0 = time.time()
    try:
        raw = np.loadtxt(args.infile, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ValidationError(f"cannot read series CSV: {exc}") from exc
    if raw.shape[1] != 2:
        raise ValidationError("series CSV needs exactly the columns N,value")
    try:
        fit = fit_series([(row[0], row[1]) for row in raw])
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    payload = {"a": fit.a, "b": fit.b, "c": fit.c, "residual": fit.residual}
    out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
        _write_manifest(args.out, {"cmd": "extrapolate", "infile": args.infile}, t0)
    else:
        sys.stdout.write(out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(sp, n_default=None):
    sp.add_argument("--tau", type=float, required=True)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--regime", choices=["bulk", "edge", "outside", "origin"],
                    default=None)
    if n_default is not None:
        sp.add_argument("--N", type=int, default=n_default)
    else:
        sp.add_argument("--N", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sympgin",
                                 description="Symplectic elliptic Ginibre kernel toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("density", help="R_N along a cross-section or grid")
    _add_common(sp)
    sp.add_argument("--line", default=None,
                    help="'im=2,re=-3:3:25' or 're=-1,im=0:3:31'")
    sp.add_argument("--grid", default=None, help="'re=-3:3:41,im=0:3:21'")
    sp.add_argument("--tol", type=float, default=None,
                    help="absolute tolerance override for the limit quadratures")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("figure2", help="limit extraction over an N-list")
    sp.add_argument("--tau", type=float, required=True)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--regime", choices=["bulk", "edge", "outside", "origin"],
                    default="edge")
    sp.add_argument("--N-list", dest="N_list", default="2000,3000,4000,5000")
    sp.add_argument("--line", required=True)
    sp.add_argument("--tol", type=float, default=None,
                    help="absolute tolerance override for the limit quadratures")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_figure2)

    sp = sub.add_parser("kernel", help="kappa_tilde vs its limit at (z, w)")
    _add_common(sp)
    sp.add_argument("--z", required=True)
    sp.add_argument("--w", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("check", help="verification battery (JSON report)")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("sample", help="eigenvalue cloud CSV")
    _add_common(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("pfaffian", help="Pfaffian of a CSV matrix")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_pfaffian)

    sp = sub.add_parser("extrapolate", help="a + b/sqrt(N) + c/N fit of N,value rows")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_extrapolate)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except QuadratureToleranceError as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
