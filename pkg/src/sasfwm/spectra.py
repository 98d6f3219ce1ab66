"""Spectrum evaluation, CSV ingestion and least-squares fitting of |chi|^2."""
from __future__ import annotations

import json
import math
import re
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .phonon import PhononMode
from .susceptibility import SusceptibilityParams, abs2_total, chi3_total

CSV_HEADER = "shift_cm-1,counts"
CSV_HEADER_SIGMA = "shift_cm-1,counts,sigma"
FIT_JSON_KEYS = ("omega_tilde_cm1", "gamma_cm1", "a_r_re", "a_r_im", "a_e_re", "a_e_im",
                 "scale", "residual_norm", "converged", "iterations")

_NUMBER = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")


class SpectrumFormatError(ValueError):
    pass


class FitError(RuntimeError):
    pass


@dataclass
class SpectrumGrid:
    shifts: np.ndarray
    values: np.ndarray            # |chi|^2 (arb. units), unscaled
    chi: np.ndarray | None = None
    rescale: float = 1.0

    def __post_init__(self):
        self.shifts = np.asarray(self.shifts, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.shifts.shape != self.values.shape or self.shifts.ndim != 1:
            raise ValueError("shifts and values must be 1-d arrays of equal length")
        if np.any(np.diff(self.shifts) <= 0):
            raise ValueError("shifts must be strictly increasing")

    @property
    def scaled_values(self):
        return self.values * self.rescale


@dataclass
class MeasuredSpectrum:
    shifts: np.ndarray
    counts: np.ndarray
    sigma: np.ndarray | None = None

    def __post_init__(self):
        self.shifts = np.asarray(self.shifts, dtype=np.float64)
        self.counts = np.asarray(self.counts, dtype=np.float64)
        if self.shifts.shape != self.counts.shape or self.shifts.ndim != 1:
            raise ValueError("shifts and counts must be 1-d arrays of equal length")
        if not np.all(np.isfinite(self.counts)):
            raise ValueError("counts must be finite")
        if self.sigma is not None:
            self.sigma = np.asarray(self.sigma, dtype=np.float64)
            if self.sigma.shape != self.counts.shape:
                raise ValueError("sigma must match counts in length")
            if np.any(~np.isfinite(self.sigma)) or np.any(self.sigma <= 0):
                raise ValueError("sigma must be finite and > 0")

    def __len__(self):
        return self.shifts.size


def evaluate_spectrum(p: SusceptibilityParams, shifts, rescale=1.0) -> SpectrumGrid:
    """|chi_total|^2 on a sorted shift grid; ``rescale`` only affects output."""
    shifts = np.asarray(shifts, dtype=np.float64)
    chi = chi3_total(p, shifts)
    return SpectrumGrid(shifts, chi.real ** 2 + chi.imag ** 2, chi, float(rescale))


# ------------------------------------------------------------------ CSV

def _parse_number(text, lineno, column):
    if not _NUMBER.match(text):
        raise SpectrumFormatError(f"line {lineno}: {column} {text!r} is not a decimal number")
    return float(text)


def parse_spectrum(text: str) -> MeasuredSpectrum:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [ln[:-1] if ln.endswith("\r") else ln for ln in lines]
    if not lines:
        raise SpectrumFormatError("empty file")
    header = lines[0].lstrip("﻿")
    if header == CSV_HEADER:
        ncol = 2
    elif header == CSV_HEADER_SIGMA:
        ncol = 3
    else:
        raise SpectrumFormatError(f"line 1: header must be {CSV_HEADER!r} or {CSV_HEADER_SIGMA!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != ncol:
            raise SpectrumFormatError(f"line {lineno}: expected {ncol} fields, got {len(fields)}")
        shift = _parse_number(fields[0], lineno, "shift")
        counts = _parse_number(fields[1], lineno, "counts")
        if counts < 0:
            raise SpectrumFormatError(f"line {lineno}: negative counts {counts}")
        sigma = None
        if ncol == 3:
            sigma = _parse_number(fields[2], lineno, "sigma")
            if sigma <= 0:
                raise SpectrumFormatError(f"line {lineno}: sigma must be > 0")
        if not (math.isfinite(shift) and math.isfinite(counts)):
            raise SpectrumFormatError(f"line {lineno}: non-finite value")
        rows.append((shift, counts, sigma, lineno))
    if not rows:
        raise SpectrumFormatError("spectrum has a header but no data rows")

    seen = {}
    for shift, _, _, lineno in rows:
        if shift in seen:
            raise SpectrumFormatError(
                f"duplicate shift {shift!r} on lines {seen[shift]} and {lineno}")
        seen[shift] = lineno
    shifts = np.array([r[0] for r in rows])
    order = np.argsort(shifts, kind="stable")
    if np.any(order != np.arange(len(rows))):
        warnings.warn("spectrum rows were not sorted by shift; sorting", stacklevel=3)
    rows = [rows[i] for i in order]
    sigma = np.array([r[2] for r in rows]) if ncol == 3 else None
    return MeasuredSpectrum(np.array([r[0] for r in rows]), np.array([r[1] for r in rows]), sigma)


def load_spectrum(path) -> MeasuredSpectrum:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_spectrum(fh.read())


def format_spectrum(m: MeasuredSpectrum) -> str:
    out = [CSV_HEADER_SIGMA if m.sigma is not None else CSV_HEADER]
    for i in range(len(m)):
        row = [repr(float(m.shifts[i])), repr(float(m.counts[i]))]
        if m.sigma is not None:
            row.append(repr(float(m.sigma[i])))
        out.append(",".join(row))
    return "\n".join(out) + "\n"


# ------------------------------------------------------------------ fitting

@dataclass
class FitOptions:
    max_iter: int = 200
    weights: str | None = None       # None: 1/sigma^2 if available else uniform
    fit_ar_imag: bool = False        # gauge fixing keeps Im A_R = 0 by default
    free_scale: bool = False         # frees the gain and pins |A_R| instead
    xtol: float = 1e-10
    gtol: float = 1e-8
    initial_damping: float = 1e-3
    max_damping: float = 1e16


@dataclass
class FitResult:
    params: SusceptibilityParams
    scale: float
    residual_norm: float
    covariance_proxy: dict = field(default_factory=dict)
    converged: bool = False
    iterations: int = 0
    message: str = ""
    alternate: SusceptibilityParams | None = None

    def to_json(self, indent=None):
        p = self.params
        data = {
            "omega_tilde_cm1": p.omega_tilde,
            "gamma_cm1": p.gamma,
            "a_r_re": p.a_r.real,
            "a_r_im": p.a_r.imag,
            "a_e_re": p.a_e.real,
            "a_e_im": p.a_e.imag,
            "scale": self.scale,
            "residual_norm": self.residual_norm,
            "converged": self.converged,
            "iterations": self.iterations,
        }
        return json.dumps(data, indent=indent)


def fit_weights(measured: MeasuredSpectrum, scheme=None):
    if scheme is None:
        scheme = "sigma" if measured.sigma is not None else "uniform"
    if scheme == "uniform":
        return np.ones_like(measured.counts)
    if scheme == "poisson":
        return 1.0 / np.maximum(measured.counts, 1.0)
    if scheme == "sigma":
        if measured.sigma is None:
            raise ValueError("sigma weighting needs per-point uncertainties")
        return 1.0 / measured.sigma ** 2
    raise ValueError(f"unknown weighting scheme {scheme!r}")


def residual_profile(measured: MeasuredSpectrum, p: SusceptibilityParams, scale=1.0, weights=None):
    """Signed, weighted residuals sqrt(w) (scale |chi|^2 - counts)."""
    if weights is None or isinstance(weights, str):
        w = fit_weights(measured, weights)
    else:
        w = np.asarray(weights, dtype=np.float64)
    if w.shape != measured.counts.shape:
        raise ValueError("weights must match the spectrum length")
    model = scale * abs2_total(p, measured.shifts)
    return np.sqrt(w) * (model - measured.counts)


class _Model:
    """Maps a free-parameter vector onto |chi|^2 residuals."""

    def __init__(self, measured, initial, scale, options):
        self.x = measured.shifts
        self.y = measured.counts
        self.weights = fit_weights(measured, options.weights)
        self.sqrt_w = np.sqrt(self.weights)
        self.fixed = {
            "a_r_re": initial.a_r.real, "a_r_im": initial.a_r.imag,
            "a_e_re": initial.a_e.real, "a_e_im": initial.a_e.imag,
            "omega_tilde": initial.omega_tilde, "gamma": initial.gamma, "scale": scale,
        }
        names = [] if options.free_scale else ["a_r_re"]
        if options.fit_ar_imag:
            names.append("a_r_im")
        names += ["a_e_re", "a_e_im", "omega_tilde", "gamma"]
        if options.free_scale:
            names.append("scale")
        self.names = names

    def theta0(self):
        return np.array([self.fixed[n] for n in self.names], dtype=np.float64)

    def values(self, theta):
        v = dict(self.fixed)
        v.update(zip(self.names, theta))
        return v

    def residuals(self, theta):
        v = self.values(theta)
        if not (v["gamma"] > 0 and v["omega_tilde"] > 0):
            return None
        _, chi = _kernels.chi3_grid(complex(v["a_r_re"], v["a_r_im"]),
                                    complex(v["a_e_re"], v["a_e_im"]),
                                    v["omega_tilde"], v["gamma"], self.x)
        model = v["scale"] * (chi.real ** 2 + chi.imag ** 2)
        return self.sqrt_w * (model - self.y)

    def jacobian(self, theta):
        cols = []
        for j in range(theta.size):
            h = max(1e-6 * abs(theta[j]), 1e-9)
            tp = theta.copy()
            tm = theta.copy()
            tp[j] += h
            tm[j] -= h
            rp = self.residuals(tp)
            rm = self.residuals(tm)
            if rp is None or rm is None:
                # one-sided difference away from the parameter boundary
                r0 = self.residuals(theta)
                cols.append((rp - r0) / h if rp is not None else (r0 - rm) / h)
            else:
                cols.append((rp - rm) / (2.0 * h))
        return np.column_stack(cols)


def _gauge_fixed(p: SusceptibilityParams):
    if p.a_r == 0:
        return p
    rot = abs(p.a_r) / p.a_r
    return p.with_amplitudes(abs(p.a_r), p.a_e * rot)


def fit(measured: MeasuredSpectrum, initial: SusceptibilityParams,
        options: FitOptions | None = None, scale=1.0) -> FitResult:
    """Least-squares fit of ``scale * |chi_total|^2`` to measured counts.

    Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal
    scaling) on a central-difference Jacobian.  The common phase of the
    amplitudes is unobservable, so the initial guess is rotated to
    arg(A_R) = 0 and Im A_R is held there unless ``fit_ar_imag`` is set.
    ``scale`` is held fixed unless ``free_scale`` is set, in which case Re
    A_R is held instead (scale and |A|^2 are otherwise degenerate).
    """
    options = options or FitOptions()
    n = len(measured)
    if not np.any(measured.counts > 0):
        raise ValueError("all counts are zero: the spectrum scale is degenerate")
    if not scale > 0:
        raise ValueError("scale must be > 0")
    if initial.a_r == 0:
        raise ValueError("initial A_R must be nonzero")
    if not measured.shifts[0] <= initial.omega_tilde <= measured.shifts[-1]:
        raise ValueError("initial omega_tilde lies outside the measured shift range")
    if np.any(np.diff(measured.shifts) <= 0):
        raise ValueError("measured shifts must be strictly increasing")

    start = _gauge_fixed(initial)
    model = _Model(measured, start, float(scale), options)
    theta = model.theta0()
    npar = theta.size
    if n < max(6, npar + 1):
        raise ValueError(f"need at least {max(6, npar + 1)} points for {npar} free parameters")

    r = model.residuals(theta)
    cost = float(r @ r)
    lam = options.initial_damping
    converged = False
    message = "maximum iterations reached"
    it = 0
    while it < options.max_iter:
        it += 1
        J = model.jacobian(theta)
        g = J.T @ r
        col_norm = np.linalg.norm(J, axis=0)
        r_norm = math.sqrt(cost)
        if r_norm == 0.0:
            converged, message = True, "zero residual"
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            cosines = np.where(col_norm > 0, np.abs(g) / (col_norm * r_norm), 0.0)
        # a zero column is a flat direction, not a stationary point
        if np.all(col_norm > 0) and np.max(cosines) < options.gtol:
            converged, message = True, "gradient below tolerance"
            break
        A = J.T @ J
        diag = np.diag(A).copy()
        accepted = False
        small_step = False
        while True:
            try:
                step = np.linalg.solve(A + lam * np.diag(diag), -g)
                if not np.all(np.isfinite(step)):
                    raise np.linalg.LinAlgError("non-finite step")
            except np.linalg.LinAlgError:
                lam *= 10.0
                if lam > options.max_damping:
                    raise FitError("degenerate Jacobian: damping escalation failed") from None
                continue
            rel = np.max(np.abs(step) / np.maximum(np.abs(theta), 1e-12))
            trial = theta + step
            r_new = model.residuals(trial)
            cost_new = math.inf if r_new is None else float(r_new @ r_new)
            if cost_new < cost:
                theta, r, cost = trial, r_new, cost_new
                lam = max(lam / 10.0, 1e-12)
                accepted = True
                small_step = rel < options.xtol
                break
            if rel < options.xtol:
                small_step = True
                break
            lam *= 10.0
            if lam > options.max_damping:
                break
        if small_step:
            converged, message = True, "relative step below tolerance"
            break
        if not accepted:
            message = "no decrease possible at maximum damping"
            break

    values = model.values(theta)
    mode = PhononMode(values["omega_tilde"], values["gamma"], initial.mode.mass,
                      initial.mode.label, None, initial.mode.multiplicity)
    a_r = complex(values["a_r_re"], values["a_r_im"])
    a_e = complex(values["a_e_re"], values["a_e_im"])
    fitted_scale = float(values["scale"])
    alternate = None
    if not options.fit_ar_imag:
        mirror = mirror_amplitudes(a_r.real, a_e, fitted_scale, options.free_scale)
        if mirror is not None:
            if _branch_distance(mirror, start, scale) < _branch_distance((a_r.real, a_e, fitted_scale), start, scale):
                alternate = SusceptibilityParams(a_r, a_e, mode, initial.component)
                a_r, a_e, fitted_scale = complex(mirror[0]), mirror[1], mirror[2]
            else:
                alternate = SusceptibilityParams(complex(mirror[0]), mirror[1], mode, initial.component)
    params = SusceptibilityParams(a_r, a_e, mode, initial.component)
    final = residual_profile(measured, params, fitted_scale, model.weights)
    return FitResult(params, fitted_scale, float(np.sqrt(final @ final)),
                     _half_widths(model, theta, cost, n), converged, it, message, alternate)


def mirror_amplitudes(a_r, a_e, scale=1.0, keep_a_r=False):
    """The second amplitude set giving an identical |chi|^2 spectrum.

    With A_R real, scale*|chi|^2 depends on the amplitudes only through
    c1 = A^2 - A Im(E), c2 = A Re(E) and c3 = |E|^2 (effective amplitudes
    sqrt(scale)*A, sqrt(scale)*E), because Im of the Lorentzian is -|L|^2/2.
    That system has two roots in A^2; this returns the one not passed in,
    as ``(a_r, a_e, scale)``.  With ``keep_a_r`` the original A_R is kept
    and the difference moves into ``scale``.  Returns None when the two
    roots coincide or the other root is not positive.
    """
    root_s = math.sqrt(scale)
    big_a = root_s * a_r
    e = root_s * complex(a_e)
    c1 = big_a * big_a - big_a * e.imag
    c2 = big_a * e.real
    c3 = e.real ** 2 + e.imag ** 2
    # u^2 - (2 c1 + c3) u + c1^2 + c2^2 = 0 with u = A^2; one root is big_a^2
    prod = c1 * c1 + c2 * c2
    if big_a * big_a == 0:
        return None
    u_other = prod / (big_a * big_a)
    if not u_other > 0 or math.isclose(u_other, big_a * big_a, rel_tol=1e-12):
        return None
    a_new = math.sqrt(u_other)
    e_new = complex(c2 / a_new, (u_other - c1) / a_new)
    if keep_a_r:
        s_new = (a_new / a_r) ** 2
        return a_r, e_new / math.sqrt(s_new), s_new
    return a_new / root_s, e_new / root_s, scale


def _branch_distance(branch, start, scale0):
    a_r, a_e, s = branch
    s0 = math.sqrt(scale0)
    a0 = s0 * start.a_r.real
    e0 = s0 * start.a_e
    a = math.sqrt(s) * a_r
    e = math.sqrt(s) * a_e
    e_ref = max(abs(e0), 1e-300)
    return ((a - a0) / a0) ** 2 + abs(e - e0) ** 2 / e_ref ** 2


def _half_widths(model, theta, cost, n):
    """One-sigma parameter uncertainties from the Gauss-Newton curvature."""
    dof = n - theta.size
    J = model.jacobian(theta)
    try:
        cov = np.linalg.inv(J.T @ J) * (cost / dof if dof > 0 else math.nan)
    except np.linalg.LinAlgError:
        return {name: math.nan for name in model.names}
    diag = np.diag(cov)
    return {name: float(math.sqrt(v)) if v >= 0 else math.nan for name, v in zip(model.names, diag)}
