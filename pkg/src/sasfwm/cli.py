"""Command-line front end: ``sasfwm <subcommand> [flags]``.

Subcommands write CSV or JSON to stdout (or ``--out``).  Exit status is 0 on
success, 1 on invalid input and 2 on numerical failure.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys

import numpy as np

from . import kernel as kern
from . import modes, spectra, susceptibility as sus
from .config import ConfigError, MaterialConfig, load_config, load_dispersion, parse_complex, parse_gamma
from .units import cm1_to_rad_s

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _fmt(x):
    return repr(float(x))


def _material_flags(p):
    p.add_argument("--config", help="material config file (key = value lines)")
    p.add_argument("--omega-tilde", type=float, help="phonon resonance, cm^-1")
    p.add_argument("--gamma", help="decay: '<value> cm-1' or '<value> ps' (lifetime)")
    p.add_argument("--lifetime-convention", choices=("angular", "cycles"))
    p.add_argument("--a-r", help="resonant amplitude 're,im'")
    p.add_argument("--a-e", help="electronic amplitude 're,im'")
    p.add_argument("--out", help="write output here instead of stdout")


def _material(args) -> MaterialConfig:
    cfg = load_config(args.config) if args.config else MaterialConfig()
    return cfg.replace(
        omega_tilde=args.omega_tilde,
        gamma=parse_gamma(args.gamma) if args.gamma is not None else None,
        lifetime_convention=args.lifetime_convention,
        a_r=parse_complex(args.a_r) if args.a_r is not None else None,
        a_e=parse_complex(args.a_e) if args.a_e is not None else None,
    )


def _grid(start, stop, step):
    if not step > 0:
        raise ValueError("--step must be > 0")
    if stop < start:
        raise ValueError("--to must be >= --from")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


@contextlib.contextmanager
def _sink(path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh
    else:
        yield sys.stdout


# ------------------------------------------------------------------ subcommands

def cmd_chi3(args):
    cfg = _material(args)
    p = cfg.params()
    lo = p.omega_tilde - 1000.0 if args.from_ is None else args.from_
    hi = p.omega_tilde + 1000.0 if args.to is None else args.to
    shifts = _grid(lo, hi, args.step)
    chi_r = sus.chi3_raman(p, shifts)
    total = sus.chi3_total(p, shifts)
    abs_e = abs(sus.chi3_electronic(p))
    with _sink(args.out) as out:
        out.write("shift_cm-1,re_chiR,im_chiR,abs_chiR,arg_chiR,abs_chiE,re_total,im_total,abs2_total\n")
        for x, r, t in zip(shifts, chi_r, total):
            row = (x, r.real, r.imag, abs(r), math.atan2(r.imag, r.real), abs_e,
                   t.real, t.imag, t.real ** 2 + t.imag ** 2)
            out.write(",".join(_fmt(v) for v in row) + "\n")
    return EXIT_OK


def cmd_kernel(args):
    cfg = _material(args)
    mode = cfg.mode()
    family = kern.TermFamily(args.family)
    w_l = args.omega_l if args.omega_l is not None else 1e7 / args.laser_nm
    w_lp = args.omega_l_prime if args.omega_l_prime is not None else w_l
    if args.omega_scattered is not None:
        w_sc = args.omega_scattered
    else:
        # default: the correlated mode sits on its Raman line
        w_sc = w_lp - mode.omega_tilde if family.correlated == "S" else w_lp + mode.omega_tilde
    freqs = kern.KernelFrequencies(cm1_to_rad_s(w_l), cm1_to_rad_s(w_lp), cm1_to_rad_s(w_sc))
    t_max = args.t_max if args.t_max is not None else 10.0 / mode.gamma_rad_s
    if args.samples < 2:
        raise ValueError("--samples must be >= 2")
    t = np.linspace(0.0, t_max, args.samples)
    f = kern.f_time(family, freqs, mode, t)
    with _sink(args.out) as out:
        out.write("t_s,re,im,abs\n")
        for ti, fi in zip(t, f):
            out.write(",".join(_fmt(v) for v in (ti, fi.real, fi.imag, abs(fi))) + "\n")
    return EXIT_OK


def _parse_vectors(text, name):
    vecs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 3:
            raise ValueError(f"{name}: each vector needs three comma-separated integers, got {chunk!r}")
        try:
            vecs.append(tuple(int(p) for p in parts))
        except ValueError:
            raise ValueError(f"{name}: {chunk!r} is not an integer triple") from None
    if not vecs:
        raise ValueError(f"{name}: no vectors given")
    return vecs


def cmd_terms(args):
    lasers = _parse_vectors(args.lasers, "--lasers")
    qs = _parse_vectors(args.q, "--q")
    dispersion = None
    if args.pitch is not None:
        cfg = load_config(args.config) if args.config else MaterialConfig()
        dispersion = cfg.dispersion
        laser_modes = [modes.optical_mode(k, args.pitch, dispersion) for k in lasers]
    else:
        laser_modes = [modes.OpticalMode(k) for k in lasers]
    records = []
    if args.order in ("zeroth", "both"):
        records += [t.to_record() for t in modes.enumerate_zeroth_order(lasers, qs)]
    if args.order in ("first", "both"):
        records += [t.to_record() for t in modes.enumerate_first_order(laser_modes, qs, dispersion)]
    with _sink(args.out) as out:
        for rec in records:
            out.write(json.dumps(rec) + "\n")
    return EXIT_OK


def cmd_phasematch(args):
    cfg = load_config(args.config) if args.config else MaterialConfig()
    dispersion = load_dispersion(args.dispersion) if args.dispersion else cfg.dispersion
    if args.box is not None:
        box = tuple(float(v) for v in args.box.split(","))
    else:
        box = cfg.box or (1e-3, 1e-3, 1e-3)
    if len(box) != 3:
        raise ValueError("--box needs three comma-separated lengths (m)")
    w_l = cm1_to_rad_s(1e7 / args.laser_nm)
    lo = cfg.omega_tilde if args.from_ is None else args.from_
    hi = lo if args.to is None else args.to
    shifts = _grid(lo, hi, args.step)
    angle = math.radians(args.angle_deg)
    with _sink(args.out) as out:
        out.write("shift_cm-1,dk_x,dk_y,dk_z,dk_abs,sinc2\n")
        for x in shifts:
            k_l, k_lp, k_s, k_a = modes.scattering_wavevectors(dispersion, w_l, x, angle)
            dk, mag = modes.phase_mismatch(k_l, k_lp, k_s, k_a)
            fac = modes.finite_volume_factor(dk, box)
            out.write(",".join(_fmt(v) for v in (x, *dk, mag, fac * fac)) + "\n")
    return EXIT_OK


def cmd_fit(args):
    cfg = _material(args)
    measured = spectra.load_spectrum(args.input)
    opts = spectra.FitOptions(max_iter=args.max_iter, weights=args.weights,
                              fit_ar_imag=args.fit_ar_imag, free_scale=args.free_scale)
    result = spectra.fit(measured, cfg.params(), opts, scale=args.scale)
    with _sink(args.out) as out:
        out.write(result.to_json() + "\n")
    if not result.converged:
        print(f"fit did not converge: {result.message}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_min(args):
    cfg = _material(args)
    p = cfg.params()
    lo = p.omega_tilde + p.gamma if args.from_ is None else args.from_
    if args.to is not None:
        hi = args.to
    elif p.a_e != 0:
        hi = p.omega_tilde + 10.0 * p.gamma * abs(p.a_r) / abs(p.a_e)
    else:
        hi = p.omega_tilde + 1e4 * p.gamma
    res = sus.find_minimum(p, (lo, hi))
    payload = {"delta_min_cm1": res.delta_min if res.found else None,
               "abs2_at_min": res.value if res.found else None}
    with _sink(args.out) as out:
        out.write(json.dumps(payload) + "\n")
    if not res.found:
        print(f"no minimum: {res.message}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser():
    parser = _Parser(prog="sasfwm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("chi3", help="susceptibility table over a Raman-shift grid")
    _material_flags(p)
    p.add_argument("--from", dest="from_", type=float, help="first shift, cm^-1")
    p.add_argument("--to", type=float, help="last shift, cm^-1")
    p.add_argument("--step", type=float, default=0.5)
    p.set_defaults(func=cmd_chi3)

    p = sub.add_parser("kernel", help="time-domain FWM kernel trace")
    _material_flags(p)
    p.add_argument("--family", choices=[f.value for f in kern.TermFamily], default="AS")
    p.add_argument("--laser-nm", type=float, default=633.0)
    p.add_argument("--omega-l", type=float, help="laser frequency, cm^-1")
    p.add_argument("--omega-l-prime", type=float, help="second laser frequency, cm^-1")
    p.add_argument("--omega-scattered", type=float, help="correlated scattered frequency, cm^-1")
    p.add_argument("--t-max", type=float, help="trace length, s (default 10/gamma)")
    p.add_argument("--samples", type=int, default=1001)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("terms", help="enumerate polarization terms as JSON lines")
    p.add_argument("--config")
    p.add_argument("--lasers", required=True, help="laser lattice indices 'i,j,k;i,j,k'")
    p.add_argument("--q", required=True, help="phonon lattice indices 'i,j,k;...'")
    p.add_argument("--order", choices=("first", "zeroth", "both"), default="both")
    p.add_argument("--pitch", type=float, help="lattice pitch, rad/m (adds kernel frequencies)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_terms)

    p = sub.add_parser("phasematch", help="phase mismatch and finite-volume factor")
    p.add_argument("--config")
    p.add_argument("--dispersion", help="file with dispersion/n0/sellmeier/window_um keys")
    p.add_argument("--laser-nm", type=float, default=633.0)
    p.add_argument("--angle-deg", type=float, default=0.0,
                   help="Stokes/anti-Stokes half-angle to the pump (0 = collinear)")
    p.add_argument("--box", help="Lx,Ly,Lz in m")
    p.add_argument("--from", dest="from_", type=float)
    p.add_argument("--to", type=float)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_phasematch)

    p = sub.add_parser("fit", help="fit a measured spectrum")
    _material_flags(p)
    p.add_argument("--in", dest="input", required=True, help="spectrum CSV")
    p.add_argument("--weights", choices=("uniform", "poisson", "sigma"))
    p.add_argument("--free-scale", action="store_true")
    p.add_argument("--fit-ar-imag", action="store_true")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("min", help="interference minimum above resonance")
    _material_flags(p)
    p.add_argument("--from", dest="from_", type=float)
    p.add_argument("--to", type=float)
    p.set_defaults(func=cmd_min)
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except spectra.FitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
