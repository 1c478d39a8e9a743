"""
Command-line front end.

Exit codes: 0 success, 2 validation error (bad flags, malformed files,
out-of-range parameters), 3 numerical failure.
"""

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import dynamics, mt, render, unwinding, wavelets
from .blaschke import FiniteBlaschke, IterateChain, iterate
from .errors import (DomainError, HardyError, InvalidInputError, NumericalFailureError,
                     RenderError, ResourceError)
from .numerics import DEFAULT_N, TorusSignal, analytic_projection, winding_number

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3
GRID_ENV = "UNWIND_GRID_N"


def grid_n(args):
    """--grid-n, else $UNWIND_GRID_N, else 4096."""
    if getattr(args, "grid_n", None) is not None:
        return args.grid_n
    env = os.environ.get(GRID_ENV)
    if env is None or env == "":
        return DEFAULT_N
    try:
        return int(env)
    except ValueError:
        raise InvalidInputError(f"{GRID_ENV}={env!r} is not an integer") from None


def read_signal(path):
    """
    CSV with header ``index,re,im`` (``im`` optional). A real signal is
    lifted to its analytic counterpart ``2 H f - mean(f)``.
    """
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InvalidInputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if header[:2] != ["index", "re"] or len(header) > 3 or (len(header) == 3 and header[2] != "im"):
        raise InvalidInputError(f"{path}: header must be 'index,re,im' or 'index,re'")
    has_im = len(header) == 3
    vals = []
    for k, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise InvalidInputError(f"{path}: line {k} has {len(row)} fields, expected {len(header)}")
        try:
            idx = int(row[0])
        except ValueError:
            raise InvalidInputError(f"{path}: line {k}: field 'index' is not an integer") from None
        if idx != len(vals):
            raise InvalidInputError(f"{path}: line {k}: field 'index' is {idx}, expected {len(vals)}")
        try:
            re = float(row[1])
        except ValueError:
            raise InvalidInputError(f"{path}: line {k}: field 're' is not a number") from None
        im = 0.0
        if has_im:
            try:
                im = float(row[2])
            except ValueError:
                raise InvalidInputError(f"{path}: line {k}: field 'im' is not a number") from None
        if not (np.isfinite(re) and np.isfinite(im)):
            raise InvalidInputError(f"{path}: line {k}: non-finite sample")
        vals.append(complex(re, im))
    s = TorusSignal(np.array(vals, dtype=complex))
    if not has_im:
        s = analytic_projection(s) * 2 - TorusSignal(np.full(s.N, s.mean()))
    return s


def resample(f, N, h2_tol=1e-8):
    """
    Trigonometric resampling of an analytic signal onto N points.

    Refuses input whose negative-frequency energy, or energy in modes the
    new grid cannot hold, exceeds ``h2_tol`` of the total.
    """
    if N < 4 or N & (N - 1):
        raise InvalidInputError(f"grid length must be a power of two >= 4, got {N}")
    neg = unwinding.negative_frequency_energy(f)
    if neg > h2_tol:
        raise InvalidInputError(f"input is not in H^2 (negative-frequency energy {neg:.2e})")
    if f.N == N:
        return f
    c = np.fft.fft(f.samples) / f.N
    keep = min(f.N, N) // 2
    tot = np.sum(np.abs(c) ** 2)
    lost = np.sum(np.abs(c[keep:f.N // 2]) ** 2)
    if tot > 0 and lost > h2_tol * tot:
        raise InvalidInputError(f"grid of {N} points drops {lost / tot:.2e} of the energy")
    out = np.zeros(N, dtype=complex)
    out[:keep] = c[:keep]
    return TorusSignal(np.fft.ifft(out) * N)


def write_signal(path, f):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "re", "im"])
    for k, v in enumerate(f.samples):
        w.writerow([k, repr(float(v.real)), repr(float(v.imag))])
    _emit(buf.getvalue(), path)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: malformed JSON ({exc})") from exc


def _read_zeros(path):
    """Zero list file: JSON list of {re, im} or {"zeros": [...]}."""
    d = _read_json(path)
    if isinstance(d, dict):
        if "zeros" not in d:
            raise InvalidInputError(f"{path}: missing field 'zeros'")
        d = d["zeros"]
    if not isinstance(d, list):
        raise InvalidInputError(f"{path}: field 'zeros' must be a list")
    out = []
    for k, e in enumerate(d):
        try:
            out.append(complex(float(e["re"]), float(e.get("im", 0.0))))
        except (KeyError, TypeError, ValueError, AttributeError):
            raise InvalidInputError(f"{path}: zeros[{k}] needs numeric 're' (and 'im')") from None
    return np.array(out, dtype=complex)


def _emit(text, path):
    """Write to ``path`` atomically, or to stdout when path is None or '-'."""
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".out-")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise InvalidInputError(f"cannot write to {path}: {exc}") from exc


def _map_from_args(args):
    if args.preset is not None:
        return render.preset_target(args.preset, args.iterate)
    if args.blaschke_file is None:
        raise InvalidInputError("give --preset or --blaschke-file")
    B = FiniteBlaschke.from_dict(_read_json(args.blaschke_file))
    if B.domain != "disk":
        raise InvalidInputError("renders need a disk product")
    return IterateChain.power(B, 1 if args.iterate is None else args.iterate)


def cmd_render(args):
    target = _map_from_args(args)
    spec = render.RenderSpec(target, (args.x_min, args.x_max), (args.y_min, args.y_max),
                             args.width, args.height, args.mode)
    render.write_ppm(spec, args.out)


def cmd_unwind(args):
    N = grid_n(args)
    F = resample(read_signal(args.input), N)
    e = unwinding.unwind(F, K=args.stages)
    _emit(unwinding.expansion_to_json(e, K=args.stages, with_zeros=args.with_zeros) + "\n",
          args.out)


def cmd_factor(args):
    N = grid_n(args)
    F = resample(read_signal(args.input), N)
    B, G = unwinding.weiss_factor(F)
    d = {
        "winding_number": winding_number(B),
        "outer_at_origin": {"re": float(G.mean().real), "im": float(G.mean().imag)},
        "zero_estimates": [{"re": float(z.real), "im": float(z.imag)}
                           for z in unwinding.stage_zeros(B)],
        "max_modulus_defect": float(np.max(np.abs(np.abs(B.samples) - 1))),
    }
    if args.blaschke_out:
        write_signal(args.blaschke_out, B)
    if args.outer_out:
        write_signal(args.outer_out, G)
    _emit(json.dumps(d, sort_keys=True) + "\n", args.out)


def cmd_mt(args):
    if args.preset == "dyadic":
        zeros = mt.dyadic_ring_zeros(args.n_max)
    elif args.zeros_file is not None:
        zeros = _read_zeros(args.zeros_file)
    else:
        raise InvalidInputError("give --preset dyadic or --zeros-file")
    basis = mt.MTBasis(zeros)
    f = read_signal(args.input)
    K = basis.count if args.count is None else args.count
    c = mt.analyze(basis, f, K)
    _emit(mt.coefficients_to_json(mt.MTBasis(zeros[:K]), c) + "\n", args.out)


def cmd_fixed_points(args):
    rep = dynamics.classify_square_example(complex(args.a_re, args.a_im))
    _emit(rep.to_json() + "\n", args.out)


def cmd_curves(args):
    if args.curve == "cardioid":
        text = dynamics.cardioid_csv(args.samples)
    else:
        if args.a_modulus is None or args.k is None:
            raise InvalidInputError("bounds needs --a-modulus and --k")
        text = dynamics.bounds_csv(args.a_modulus, args.k, args.samples)
    _emit(text, args.out)


def cmd_wavelet(args):
    basis = wavelets.DyadicWaveletBasis(n_lo=min(args.n, -1), n_hi=max(args.n, 1),
                                        J=max(abs(args.j), 3), window=args.window)
    _emit(wavelets.wavelet_csv(args.n, args.j, basis, args.window, args.samples), args.out)


def cmd_iterate(args):
    if args.blaschke_file is None:
        raise InvalidInputError("give --blaschke-file")
    B = FiniteBlaschke.from_dict(_read_json(args.blaschke_file))
    _emit(iterate(B, args.times, cap=args.cap).to_json() + "\n", args.out)


def _positive(v):
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return n


def build_parser():
    p = argparse.ArgumentParser(prog="hardyscale", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("render", help="phase or -ln|F| image of a disk map (PPM)")
    r.add_argument("--preset", choices=sorted(render.PRESETS))
    r.add_argument("--blaschke-file")
    r.add_argument("--iterate", type=_positive)
    r.add_argument("--mode", choices=["phase", "neglog"], default="phase")
    r.add_argument("--x-min", type=float, default=-np.pi)
    r.add_argument("--x-max", type=float, default=np.pi)
    r.add_argument("--y-min", type=float, default=0.0)
    r.add_argument("--y-max", type=float, default=4.0)
    r.add_argument("--width", type=int, default=512)
    r.add_argument("--height", type=int, default=256)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)

    u = sub.add_parser("unwind", help="unwinding series of a signal (JSON)")
    u.add_argument("--input", required=True)
    u.add_argument("--stages", type=_positive, default=16)
    u.add_argument("--grid-n", type=int)
    u.add_argument("--with-zeros", action="store_true")
    u.add_argument("--out")
    u.set_defaults(func=cmd_unwind)

    f = sub.add_parser("factor", help="Blaschke/outer factorization of a signal")
    f.add_argument("--input", required=True)
    f.add_argument("--grid-n", type=int)
    f.add_argument("--blaschke-out")
    f.add_argument("--outer-out")
    f.add_argument("--out")
    f.set_defaults(func=cmd_factor)

    m = sub.add_parser("mt", help="Malmquist-Takenaka coefficients (JSON)")
    m.add_argument("--input", required=True)
    m.add_argument("--zeros-file")
    m.add_argument("--preset", choices=["dyadic"])
    m.add_argument("--n-max", type=_positive, default=4)
    m.add_argument("--count", type=int)
    m.add_argument("--out")
    m.set_defaults(func=cmd_mt)

    x = sub.add_parser("fixed-points", help="fixed points of ((z+a)/(1+conj(a)z))^2 (JSON)")
    x.add_argument("--a-re", type=float, required=True)
    x.add_argument("--a-im", type=float, default=0.0)
    x.add_argument("--out")
    x.set_defaults(func=cmd_fixed_points)

    c = sub.add_parser("curves", help="cardioid or g/h bound curves (CSV)")
    c.add_argument("curve", choices=["cardioid", "bounds"])
    c.add_argument("--samples", type=int, default=256)
    c.add_argument("--a-modulus", type=float)
    c.add_argument("--k", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_curves)

    w = sub.add_parser("wavelet", help="table of a dyadic wavelet (CSV)")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--j", type=int, required=True)
    w.add_argument("--window", type=float, default=8.0)
    w.add_argument("--samples", type=_positive, default=1025)
    w.add_argument("--out")
    w.set_defaults(func=cmd_wavelet)

    t = sub.add_parser("iterate", help="explicit n-th iterate of a Blaschke product (JSON)")
    t.add_argument("--blaschke-file", required=True)
    t.add_argument("--times", type=_positive, required=True)
    t.add_argument("--cap", type=_positive, default=4096)
    t.add_argument("--out")
    t.set_defaults(func=cmd_iterate)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (NumericalFailureError, RenderError) as exc:
        print(f"hardyscale: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidInputError, DomainError, ResourceError) as exc:
        print(f"hardyscale: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except HardyError as exc:
        print(f"hardyscale: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
