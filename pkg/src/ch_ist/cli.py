"""Command-line entry point: ``ch-ist <command> ...``.

Exit codes: 0 success, 2 domain error, 3 data validation error,
4 numerical non-convergence, 1 failed verification.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import phase
from .asymptotics import T_MIN, evaluate
from .errors import CHError, ConvergenceError, DataValidationError, DomainError
from .pde_oracle import GridSpec, evolve
from .scattering import InitialDatum, SpectralData, default_grid, scatter
from .soliton import SolitonData, invert_x, one_soliton
from .verification import SUITES, run_suite

FMT = "{:.17g}"


def parse_range(text: str) -> np.ndarray:
    """'a:b:n' -> n points from a to b inclusive."""
    try:
        a, b, n = text.split(":")
        n = int(n)
        if n < 1:
            raise ValueError
        return np.linspace(float(a), float(b), n)
    except ValueError as exc:
        raise DataValidationError(f"range must look like a:b:n, got {text!r}") from exc


def write_csv(path, header, rows):
    fh = open(path, "w", newline="") if path and path != "-" else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([FMT.format(v) if isinstance(v, float) else v for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def emit_json(obj, path=None):
    text = json.dumps(obj, indent=1)
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def thread_cap() -> int:
    raw = os.environ.get("CH_IST_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise DataValidationError("CH_IST_THREADS must be a positive integer") from exc
    if n < 1:
        raise DataValidationError("CH_IST_THREADS must be a positive integer")
    return n


# ----------------------------------------------------------------- commands


def cmd_classify(args):
    info = phase.stationary_points(args.xi)
    if args.spec:
        info = phase.with_spectrum(info, SpectralData.load(args.spec))
    emit_json(info.to_dict(), args.out)
    if args.sign_grid:
        re = parse_range(args.re)
        im = parse_range(args.im)
        rows = []
        for v in im:
            for u in re:
                z = complex(u, v)
                if abs(1 + 4 * z * z) < 1e-12:
                    continue
                rows.append([float(u), float(v), phase.sign_re_i_theta(z, args.xi)])
        write_csv(args.sign_grid, ["re_z", "im_z", "sign"], rows)


def cmd_scatter(args):
    datum = InitialDatum.from_csv(args.input, tail_tol=args.tail_tol)
    spec = scatter(datum, default_grid(args.zmax, args.nz))
    spec.save(args.out)


def cmd_soliton(args):
    data = SolitonData(args.a, args.gamma)
    rows = []
    for t in args.t:
        for x in parse_range(args.x):
            p = one_soliton(data, float(invert_x(data, x, t)), t)
            rows.append([float(x), float(t), p.q, p.y, p.alpha])
    write_csv(args.out, ["x", "t", "q", "y", "alpha"], rows)


def _asymptote_row(job):
    spec, x, t = job
    try:
        r = evaluate(spec, x, t)
        return [float(x), float(t), r.q_leading, r.correction, r.q_total, r.order_tag]
    except ConvergenceError:
        nan = float("nan")
        return [float(x), float(t), nan, nan, nan, "nonconvergent"]


ASYMPTOTE_HEADER = ["x", "t", "q_leading", "correction", "q_total", "order_tag"]


def cmd_asymptote(args):
    spec = SpectralData.load(args.spec)
    if args.t < T_MIN:
        raise DomainError(f"t must be at least {T_MIN}")
    rows = [_asymptote_row((spec, float(x), args.t)) for x in parse_range(args.x)]
    write_csv(args.out, ASYMPTOTE_HEADER, rows)


def cmd_sweep(args):
    spec = SpectralData.load(args.spec)
    if min(args.t) < T_MIN:
        raise DomainError(f"t must be at least {T_MIN}")
    jobs = [(spec, float(x), float(t)) for t in args.t for x in parse_range(args.x)]
    workers = min(thread_cap(), len(jobs)) or 1
    if workers == 1:
        rows = [_asymptote_row(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_asymptote_row, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    write_csv(args.out, ASYMPTOTE_HEADER, rows)


def cmd_evolve(args):
    datum_rows = list(csv.DictReader(open(args.input, newline="")))
    try:
        xs = np.array([float(r["x"]) for r in datum_rows])
        qs = np.array([float(r["q0"]) for r in datum_rows])
    except (KeyError, ValueError) as exc:
        raise DataValidationError(f"{args.input}: expected columns x,q0 ({exc})") from exc
    grid = GridSpec(args.L, args.N, args.dt)
    q0 = np.interp(grid.x, xs, qs, left=0.0, right=0.0)
    times = None
    if args.save_every:
        times = list(np.arange(0.0, args.t_final + 0.5 * args.save_every, args.save_every))
    traj = evolve(q0, grid, args.t_final, times=times)
    rows = []
    for t, q in zip(traj.times, traj.states):
        rows.extend([float(t), float(x), float(v)] for x, v in zip(grid.x[:: args.stride], q[:: args.stride]))
    write_csv(args.out, ["t", "x", "q"], rows)
    write_csv(args.conserved, ["t", "mass", "energy"],
              [[float(t), m, e] for t, m, e in zip(traj.times, traj.mass, traj.energy)])


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        checks, secs = run_suite(name, args.seed)
        for c in checks:
            print(f"{name}: {c.line()}")
            ok &= c.passed
        print(f"{name}: {sum(c.passed for c in checks)}/{len(checks)} passed in {secs:.1f} s")
    return 0 if ok else 1


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ch-ist", description="Camassa-Holm inverse scattering and long-time asymptotics.")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised probe sets")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a ray xi = y/t")
    c.add_argument("--xi", type=float, required=True)
    c.add_argument("--spec", help="spectral data JSON, fills rho and j0")
    c.add_argument("--out", help="JSON output path (default stdout)")
    c.add_argument("--sign-grid", help="also write a CSV of sign Re(i theta) over a grid")
    c.add_argument("--re", default="-2:2:81")
    c.add_argument("--im", default="-1:1:41")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("scatter", help="forward scattering of a CSV datum (columns x,q0)")
    c.add_argument("--input", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--zmax", type=float, default=6.0)
    c.add_argument("--nz", type=int, default=120, help="grid points on each half line")
    c.add_argument("--tail-tol", type=float, default=1e-10)
    c.set_defaults(func=cmd_scatter)

    c = sub.add_parser("soliton", help="one-soliton profile at physical x")
    c.add_argument("--a", type=float, required=True)
    c.add_argument("--gamma", type=float, default=1.0)
    c.add_argument("--t", type=float, nargs="+", required=True)
    c.add_argument("--x", required=True, help="a:b:n")
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_soliton)

    c = sub.add_parser("asymptote", help="long-time approximation on an x grid")
    c.add_argument("--spec", required=True)
    c.add_argument("--t", type=float, required=True)
    c.add_argument("--x", required=True, help="a:b:n")
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_asymptote)

    c = sub.add_parser("sweep", help="asymptote over several times, in parallel (CH_IST_THREADS caps workers)")
    c.add_argument("--spec", required=True)
    c.add_argument("--t", type=float, nargs="+", required=True)
    c.add_argument("--x", required=True, help="a:b:n")
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_sweep)

    c = sub.add_parser("evolve", help="direct pseudo-spectral evolution")
    c.add_argument("--input", required=True)
    c.add_argument("--t-final", type=float, required=True)
    c.add_argument("--L", type=float, default=100.0)
    c.add_argument("--N", type=int, default=4096)
    c.add_argument("--dt", type=float, default=0.01)
    c.add_argument("--save-every", type=float)
    c.add_argument("--stride", type=int, default=1, help="write every n-th grid point")
    c.add_argument("--out", required=True)
    c.add_argument("--conserved", required=True)
    c.set_defaults(func=cmd_evolve)

    c = sub.add_parser("verify", help="run a verification suite")
    c.add_argument("--suite", required=True, choices=list(SUITES) + ["all"])
    c.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except CHError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DataValidationError.exit_code
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
