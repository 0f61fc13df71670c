"""Command-line front end: ``nonlocal-fourier <command> [options]``.

Exit codes: 0 success, 1 invalid configuration or input, 2 numerical
failure (singular resolvent, non-convergence), 3 verification failure.
Every ``--out`` accepts ``-`` for standard output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import warnings

import numpy as np

from .boundary import check_conditions
from .characteristic import CharacteristicFn, delta
from .config import PRESETS, RunConfig
from .convolution import ConvolutionEngine
from .errors import ConfigurationError, NonlocalFourierError, NumericalError
from .expansion import (SequenceElement, fourier_transform, partial_sums, project, project_contour,
                        riesz_diagnostics, safe_radius, weighted_remainder_norm)
from .function_space import _emit, read_csv, write_csv
from .resolvent import apply_resolvent
from .spectrum import Eigenvalue, counting_deviation, find_spectrum, strip_diagnostic
from .verify import run_verification

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VERIFY = 0, 1, 2, 3


# ------------------------------------------------------------------ loaders

def load_delta_csv(path):
    """{(re, im): Delta} from a ``delta`` output file."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return np.array([[complex(float(r["re_lambda"]), float(r["im_lambda"])),
                      complex(float(r["re_delta"]), float(r["im_delta"]))] for r in rows])


def load_spectrum_json(path):
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return obj["R"], obj["N_of_R"], [Eigenvalue.from_json(e) for e in obj["eigenvalues"]]


def load_coefficients(path) -> SequenceElement:
    with open(path, encoding="utf-8") as fh:
        return SequenceElement.from_json(json.load(fh))


def load_remainder_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return [{k: float(v) for k, v in r.items()} for r in csv.DictReader(fh)]


# ------------------------------------------------------------------ helpers

def _floats(text, count=None, name="value"):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise ConfigurationError(f"cannot parse {name} {text!r}") from None
    if count is not None and len(vals) != count:
        raise ConfigurationError(f"{name} needs {count} comma-separated numbers")
    return vals


def _dump_json(obj, path):
    _emit(json.dumps(obj, indent=2) + "\n", path)


def _write_rows(header, rows, path):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) for v in r])
    _emit(buf.getvalue(), path)


def _config(args) -> RunConfig:
    sigma = args.preset
    if args.sigma:
        with open(args.sigma, encoding="utf-8") as fh:
            sigma = json.load(fh)
    return RunConfig.load(args.config, b=args.b, sigma=sigma, n=args.n, radius=args.radius,
                          tol_zero=args.tol_zero, contour_points=args.contour_points, seed=args.seed)


def _spectrum(cfg, cf, R=None):
    return find_spectrum(cf, R or cfg.radius, tol_zero=cfg.tol_zero, contour_points=cfg.contour_points)


# ----------------------------------------------------------------- commands

def cmd_delta(args, cfg):
    x0, x1, nx, y0, y1, ny = _floats(args.grid, 6, "--grid")
    if nx < 1 or ny < 1:
        raise ConfigurationError("--grid counts must be positive")
    cf = CharacteristicFn(cfg.build_sigma())
    re = np.linspace(x0, x1, int(nx))
    im = np.linspace(y0, y1, int(ny))
    lam = (re[None, :] + 1j * im[:, None]).ravel()
    d = delta(cf, lam)
    _write_rows(["re_lambda", "im_lambda", "re_delta", "im_delta"],
                zip(lam.real, lam.imag, d.real, d.imag), args.out)


def cmd_spectrum(args, cfg):
    cf = CharacteristicFn(cfg.build_sigma())
    sp = _spectrum(cfg, cf)
    _dump_json({"R": cfg.radius, "N_of_R": sum(ev.multiplicity for ev in sp),
                "eigenvalues": [ev.to_json() for ev in sp]}, args.out)


def cmd_resolve(args, cfg):
    sigma = cfg.build_sigma()
    re, im = _floats(args.lam, 2, "--lambda")
    f = read_csv(args.f, cfg.grid)
    r = apply_resolvent(sigma, CharacteristicFn(sigma), complex(re, im), f, tol_zero=cfg.tol_zero)
    write_csv(r.y, args.out)


def cmd_convolve(args, cfg):
    sigma = cfg.build_sigma()
    f = read_csv(args.f, cfg.grid)
    g = read_csv(args.g, cfg.grid)
    write_csv(ConvolutionEngine(sigma, cfg.grid).convolve(f, g), args.out)


def cmd_expand(args, cfg):
    sigma = cfg.build_sigma()
    cf = CharacteristicFn(sigma)
    f = read_csv(args.f, cfg.grid)
    engine = ConvolutionEngine(sigma, cfg.grid)
    sp = _spectrum(cfg, cf)
    if args.paranoid:
        for ev in sp:
            err = (project(engine, ev, f) - project_contour(sigma, cf, ev, f)).sup_norm()
            if err > 1e-7 * max(1.0, f.sup_norm()):
                raise NumericalError(f"projection at {ev.lam} disagrees with its contour integral by {err:.2e}")
    _dump_json(fourier_transform(engine, sp, f, cfg.radius).to_json(), args.out)


def cmd_remainder(args, cfg):
    sigma = cfg.build_sigma()
    cf = CharacteristicFn(sigma)
    f = read_csv(args.f, cfg.grid)
    radii = _floats(args.radii, name="--radii")
    if min(radii) <= 0:
        raise ConfigurationError("radii must be positive")
    engine = ConvolutionEngine(sigma, cfg.grid)
    sp = _spectrum(cfg, cf, max(radii) + 1.0)
    S = partial_sums(engine, sp, f, radii, method=args.method)
    rows = []
    for R in radii:
        Q = S[R] - f
        rows.append((R, weighted_remainder_norm(Q), Q.sup_norm(), Q.l2_norm()))
    _write_rows(["R", "weighted_norm", "sup_norm", "l2_norm"], rows, args.out)


def cmd_verify(args, cfg):
    report = run_verification(cfg)
    for line in report.lines():
        print(line, file=sys.stderr if args.out == "-" and args.json else sys.stdout)
    if args.json:
        _dump_json(report.to_dict(), args.out)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_diagnose(args, cfg):
    sigma = cfg.build_sigma()
    cf = CharacteristicFn(sigma)
    wide = _spectrum(cfg, cf, cfg.radius + 2.0)
    sp = [ev for ev in wide if abs(ev.lam) <= cfg.radius * (1 + 1e-12) + 1e-9]
    cond = check_conditions(sigma, sp, cfg.radius)
    engine = ConvolutionEngine(sigma, cfg.grid)
    # counting circles keep a quarter unit away from every zero
    radii = [safe_radius(wide, r, 0.25) for r in np.linspace(cfg.radius / 4, cfg.radius, 4)]
    out = {"conditions": cond.to_dict(),
           "strip_bound": strip_diagnostic(sp),
           "counting_deviation": [[r, d] for r, d in counting_deviation(cf, radii)],
           "riesz": riesz_diagnostics(engine, cf, sp, cfg.radius, seed=cfg.seed)}
    _dump_json(out, args.out)


COMMANDS = {"delta": cmd_delta, "spectrum": cmd_spectrum, "resolve": cmd_resolve,
            "convolve": cmd_convolve, "expand": cmd_expand, "remainder": cmd_remainder,
            "verify": cmd_verify, "diagnose": cmd_diagnose}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration (flags override --config)")
    g.add_argument("--config", help="JSON file with RunConfig fields")
    g.add_argument("--preset", choices=PRESETS, help="built-in sigma (default: antiperiodic)")
    g.add_argument("--sigma", help='JSON file describing sigma, e.g. {"kind": "constant_imag", "alpha": 0.5}')
    g.add_argument("--b", type=float, help="segment length (default: pi)")
    g.add_argument("--n", type=int, help="Chebyshev grid nodes (default: 128)")
    g.add_argument("--radius", type=float, help="spectrum radius R (default: 10)")
    g.add_argument("--tol-zero", type=float, help="zero tolerance on |Delta| (default: 1e-11)")
    g.add_argument("--contour-points", type=int, help="points on tight circles (default: 256)")
    g.add_argument("--seed", type=int, help="seed for randomized checks (default: 0)")
    g.add_argument("--out", default="-", help="output file, '-' for stdout (default)")
    g.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="nonlocal-fourier",
                                description="Spectral tools for -i d/dx with an integral boundary condition.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("delta", parents=[common], help="sample Delta on a rectangular lambda grid")
    s.add_argument("--grid", required=True, metavar="RE0,RE1,NRE,IM0,IM1,NIM",
                   help="use --grid=... when the first value is negative")
    sub.add_parser("spectrum", parents=[common], help="eigenvalues in |lambda| <= R as JSON")
    s = sub.add_parser("resolve", parents=[common], help="apply (L - lambda)^-1 to f")
    s.add_argument("--lambda", dest="lam", required=True, metavar="RE,IM")
    s.add_argument("--f", required=True)
    s = sub.add_parser("convolve", parents=[common], help="boundary-dependent convolution f * g")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s = sub.add_parser("expand", parents=[common], help="coefficient blocks of f for |lambda_n| <= R")
    s.add_argument("--f", required=True)
    s.add_argument("--paranoid", action="store_true", help="check each projection against its contour integral")
    s = sub.add_parser("remainder", parents=[common], help="norms of S_R f - f")
    s.add_argument("--f", required=True)
    s.add_argument("--radii", default="10,20,40")
    s.add_argument("--method", choices=("convolution", "coefficients"), default="convolution")
    s = sub.add_parser("verify", parents=[common], help="run the invariant suite (exit 3 on failure)")
    s.add_argument("--json", action="store_true", help="also write the report as JSON to --out")
    sub.add_parser("diagnose", parents=[common], help="condition report and Riesz-basis proxies")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            cfg = _config(args)
            code = COMMANDS[args.command](args, cfg)
        return EXIT_OK if code is None else code
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (NonlocalFourierError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
