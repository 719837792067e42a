"""Command-line front end.

Subcommands cover the whole pipeline: filter construction, frame
certification, analysis/reconstruction, phantom generation, rate
experiments, and denoising.  Every command is deterministic given its
flags and seed, floating output uses 17 significant digits, and exit
codes form a stable contract:

    0  success            3  frame not certified
    2  parameter errors   4  malformed container / config
                          5  iterative solver failure
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import filters as flt
from .systems import (
    SystemSpec, make_classical_system, make_compact_system, default_J_max,
)
from .framebounds import estimate_bounds, empirical_frame_check, FrequencyGrid, default_grid
from .transform import analyze, invert_frame, synthesize, IterativeSolverError
from .cartoon import random_cartoon_2d, rasterize_cartoon, surface_cartoon_3d
from .lab import nterm_curve, wavelet_baseline_curve, denoise, psnr
from .formats import (
    FormatError, write_f64r, read_f64r, write_csv, write_pgm,
    dump_coefficients, load_coefficients, fmt_float,
)

EXIT_OK = 0
EXIT_PARAMS = 2
EXIT_NOT_CERTIFIED = 3
EXIT_FORMAT = 4
EXIT_SOLVER = 5


def _bool_flag(value: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {value!r}")


def _threads(args) -> None:
    n = args.threads or os.environ.get("SHEARLAB_THREADS")
    if n:
        try:
            import numba

            numba.set_num_threads(max(1, int(n)))
        except Exception:
            pass
        os.environ.setdefault("OMP_NUM_THREADS", str(n))


def _system_from_args(args, extent: int | None = None) -> SystemSpec:
    c = (args.c1, args.c2)
    if args.system == "classical":
        J = args.J_max or (default_J_max(extent, "band-limited-classical") if extent else 6)
        return make_classical_system(J_max=J, c=c)
    J = args.J_max or (default_J_max(extent) if extent else 8)
    return make_compact_system(dim=args.dim, K=args.K, L=args.L, J_max=J, c=c,
                               completion=args.completion, relaxed=args.relaxed)


def _add_system_flags(p, dim_default=2):
    p.add_argument("--system", choices=["compact", "classical"], default="compact")
    p.add_argument("--dim", type=int, default=dim_default)
    p.add_argument("--K", type=int, default=15)
    p.add_argument("--L", type=int, default=10)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--c2", type=float, default=1.0)
    p.add_argument("--J-max", dest="J_max", type=int, default=0,
                   help="scale count (0 = pick from the raster size)")
    p.add_argument("--relaxed", type=_bool_flag, default=False,
                   help="accept filter parameters outside the strict range")
    p.add_argument("--completion", type=_bool_flag, default=True,
                   help="digital high-frequency completion band")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_construct(args) -> int:
    pair = flt.spectral_factorize(args.K, args.L, relaxed=args.relaxed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"filter_K{args.K}_L{args.L}"
    write_csv(out / f"{stem}_taps.csv",
              [(n, h0, h1) for n, (h0, h1) in enumerate(zip(pair.h0, pair.h1))],
              header=[f"K={args.K} L={args.L}", "columns: tap_index,h0,h1",
                      f"dc_gain={fmt_float(pair.h0.sum())}"])
    grid = np.arange(4096) / 4096.0
    write_f64r(out / f"{stem}_h0_sq.f64r",
               np.abs(pair.h0_transfer(grid)) ** 2)
    xs = np.linspace(-8.0, 8.0, 4096)
    write_f64r(out / f"{stem}_phihat.f64r", flt.scaling_spectrum(pair, xs))
    print(f"wrote {stem} taps and sampled spectra to {out}")
    return EXIT_OK


def cmd_certify(args) -> int:
    grid = None
    if args.grid_n:
        base = default_grid(_system_from_args(args), args.J_cap, args.grid_n)
        grid = FrequencyGrid(base.extent, args.grid_n)

    def one(c1, c2):
        spec = make_compact_system(dim=2, K=args.K, L=args.L,
                                   J_max=max(args.J_max, 8), c=(c1, c2),
                                   relaxed=args.relaxed) \
            if args.system == "compact" else make_classical_system(
                J_max=max(args.J_max, 4), c=(c1, c2))
        return estimate_bounds(spec, grid=grid, m_radius=args.m_radius,
                               J_cap=args.J_cap)

    if args.c_bisect:
        best = None
        for t in range(0, args.t_max + 1):
            c = 2.0 ** -t
            rep = one(c, c)
            tag = "certified" if rep.certified else "not certified"
            print(f"t={t} c={fmt_float(c)} A={fmt_float(rep.A_lower)} "
                  f"B={fmt_float(rep.B_upper)} {tag}")
            if rep.certified and best is None:
                best = (t, rep)
        if best is None:
            print("no certified sampling constant found")
            return EXIT_NOT_CERTIFIED
        t, rep = best
        print(f"largest certified c = {fmt_float(2.0 ** -t)} (t={t})")
    else:
        rep = one(args.c1, args.c2)
    if args.out:
        write_csv(args.out, rep.as_rows(), header=["frame bounds report"])
        Path(str(args.out) + ".txt").write_text(rep.to_text())
    print(rep.to_text(), end="")
    return EXIT_OK if rep.certified else EXIT_NOT_CERTIFIED


def cmd_transform(args) -> int:
    f = read_f64r(args.input)
    spec = _system_from_args(args, extent=min(f.shape))
    if spec.dim != f.ndim:
        raise flt.ParameterError(f"{f.ndim}D input with --dim {spec.dim}")
    coeffs = analyze(f, spec)
    dump_coefficients(coeffs, args.out, spec.to_config())
    print(f"wrote {len(coeffs)} coefficients to {args.out}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    coeffs, spec = load_coefficients(args.coeffs)
    y = synthesize(coeffs)
    x, history = invert_frame(y, spec, tol=args.tol, max_iter=args.max_iter)
    write_f64r(args.out, x)
    print(f"reconstructed in {len(history) - 1} iterations "
          f"(residual {fmt_float(history[-1])})")
    return EXIT_OK


def cmd_cartoon(args) -> int:
    if args.dim == 2:
        spec = random_cartoon_2d(args.nu, args.seed)
        extents = (args.size, args.size)
    else:
        spec = surface_cartoon_3d(args.nu, args.pieces, args.seed)
        extents = (args.size,) * 3
    raster, _ = rasterize_cartoon(spec, extents, supersample=args.supersample)
    write_f64r(args.out, raster.data)
    if args.pgm:
        if args.dim != 2:
            raise flt.ParameterError("PGM preview is 2D only")
        write_pgm(args.pgm, raster.data)
    print(f"wrote {args.dim}D cartoon ({args.size}^{args.dim}) to {args.out}")
    return EXIT_OK


def cmd_rate(args) -> int:
    if args.dim == 2:
        phantom = random_cartoon_2d(args.nu, args.seed)
        extents = (args.size, args.size)
        n_hi = 12
    else:
        phantom = surface_cartoon_3d(args.nu, args.pieces, args.seed)
        extents = (args.size,) * 3
        n_hi = 11
    raster, _ = rasterize_cartoon(phantom, extents,
                                  supersample=args.supersample)
    f = raster.data
    spec = _system_from_args(args, extent=args.size)
    Ns = [2 ** k for k in range(7, n_hi + 1)]
    curve = nterm_curve(f, spec, Ns, tol=args.tol)
    rows = [(n, e) for n, e in curve.as_rows()]
    header = [
        "N-term approximation curve",
        f"slope={fmt_float(curve.fitted_slope)} r2={fmt_float(curve.r_squared)}",
        f"window={curve.fit_window[0]},{curve.fit_window[1]}",
        "columns: N,squared_error",
    ]
    if args.dim == 2:
        wav = wavelet_baseline_curve(f, Ns)
        header.append(f"wavelet_slope={fmt_float(wav.fitted_slope)}")
        rows = [(n, e, w) for (n, e), w in zip(curve.as_rows(), wav.errors)]
        header[-2] = "columns: N,squared_error,wavelet_squared_error"
    write_csv(args.out, rows, header=header)
    if args.gnuplot:
        Path(args.gnuplot).write_text(
            "set logscale xy\n"
            f"plot '{args.out}' using 1:2 with linespoints title 'shearlet'"
            + (", '' using 1:3 with linespoints title 'wavelet'\n"
               if args.dim == 2 else "\n"))
    print(f"slope {fmt_float(curve.fitted_slope)} written to {args.out}")
    return EXIT_OK


def cmd_denoise(args) -> int:
    if args.input:
        clean = read_f64r(args.input)
    else:
        phantom = random_cartoon_2d(args.nu, args.seed)
        clean = rasterize_cartoon(phantom, (args.size, args.size))[0].data
    spec = _system_from_args(args, extent=min(clean.shape))
    peak = float(clean.max() - clean.min())
    sigma = peak * 10.0 ** (-args.psnr_in / 20.0)
    rng = np.random.default_rng(args.seed)
    noisy = clean + sigma * rng.standard_normal(clean.shape)
    out, p_in, p_out = denoise(noisy, spec, sigma=sigma, kappa=args.kappa,
                               tol=args.tol, reference=clean)
    write_f64r(args.out, out)
    if args.pgm:
        write_pgm(args.pgm, out)
    print(f"psnr_in={fmt_float(p_in)} psnr_out={fmt_float(p_out)} "
          f"gain={fmt_float(p_out - p_in)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shearframes",
                                 description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--threads", type=int, default=0,
                    help="worker threads (or SHEARLAB_THREADS)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a filter pair")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--relaxed", type=_bool_flag, default=False)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("certify", help="estimate frame bounds")
    _add_system_flags(p)
    p.add_argument("--J-cap", dest="J_cap", type=int, default=12)
    p.add_argument("--m-radius", type=int, default=32)
    p.add_argument("--grid-n", type=int, default=0)
    p.add_argument("--c-bisect", action="store_true",
                   help="scan c = 2^-t and report the largest certified c")
    p.add_argument("--t-max", type=int, default=6)
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("transform", help="shearlet analysis of an F64R raster")
    _add_system_flags(p)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("reconstruct", help="invert a coefficient dump")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("cartoon", help="generate a seeded phantom")
    p.add_argument("--dim", type=int, choices=(2, 3), default=2)
    p.add_argument("--nu", type=float, default=10.0)
    p.add_argument("--pieces", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--supersample", type=int, default=4)
    p.add_argument("--out", required=True)
    p.add_argument("--pgm", default="")
    p.set_defaults(func=cmd_cartoon)

    p = sub.add_parser("rate", help="N-term approximation curve")
    _add_system_flags(p)
    p.add_argument("--nu", type=float, default=10.0)
    p.add_argument("--pieces", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=512)
    p.add_argument("--supersample", type=int, default=4)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out", required=True)
    p.add_argument("--gnuplot", default="")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("denoise", help="hard-threshold denoising demo")
    _add_system_flags(p)
    p.add_argument("--input", default="")
    p.add_argument("--nu", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--psnr-in", type=float, default=20.0)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out", required=True)
    p.add_argument("--pgm", default="")
    p.set_defaults(func=cmd_denoise)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _threads(args)
    try:
        return args.func(args)
    except (flt.ParameterError, ValueError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except IterativeSolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except flt.FactorizationError as exc:
        print(f"factorization error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
