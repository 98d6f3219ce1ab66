"""Third-order susceptibility of correlated Stokes/anti-Stokes scattering.

The resonant (vibrational) part is a complex Lorentzian in the Raman shift
``delta`` (laser minus Stokes, cm^-1)::

    chi_R(delta) = A_R * gamma / (w~ - delta + i gamma/2)

so that chi_R(w~) = -2i A_R and, for Re(A_E / A_R) > 0, the flat electronic
part A_E adds constructively below resonance and destructively above it.
The total is chi_R + A_E.  Energy conservation is implied (never
discretised): every shift on a grid is a conserving configuration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .phonon import PhononMode
from .units import as_wavenumber, lifetime_to_decay_wavenumber

DIAMOND_OMEGA_TILDE = 1332.0          # cm^-1
DIAMOND_LIFETIME_PS = 3.0
DIAMOND_A_R = complex(171.0, 0.0)
DIAMOND_A_E = complex(0.37, -0.07)


@dataclass(frozen=True)
class SusceptibilityParams:
    a_r: complex
    a_e: complex
    mode: PhononMode
    component: str = "ijj'i'"   # opaque tensor-component label
    damping_sign: float = field(default=1.0, repr=False)

    def __post_init__(self):
        a_r = complex(self.a_r)
        a_e = complex(self.a_e)
        if not (math.isfinite(a_r.real) and math.isfinite(a_r.imag)
                and math.isfinite(a_e.real) and math.isfinite(a_e.imag)):
            raise ValueError("amplitudes must be finite")
        if self.damping_sign not in (1.0, -1.0):
            raise ValueError("damping_sign must be +1 or -1")
        object.__setattr__(self, "a_r", a_r)
        object.__setattr__(self, "a_e", a_e)

    @property
    def omega_tilde(self):
        return self.mode.omega_tilde

    @property
    def gamma(self):
        return self.mode.gamma

    def scaled(self, z):
        """Both amplitudes multiplied by a common complex factor."""
        return SusceptibilityParams(self.a_r * z, self.a_e * z, self.mode,
                                    self.component, self.damping_sign)

    def with_amplitudes(self, a_r=None, a_e=None):
        return SusceptibilityParams(self.a_r if a_r is None else a_r,
                                    self.a_e if a_e is None else a_e,
                                    self.mode, self.component, self.damping_sign)


def diamond_params(lifetime_convention="angular"):
    """Parameter set for diamond used as the package default."""
    gamma = lifetime_to_decay_wavenumber(DIAMOND_LIFETIME_PS, lifetime_convention)
    mode = PhononMode(DIAMOND_OMEGA_TILDE, gamma)
    return SusceptibilityParams(DIAMOND_A_R, DIAMOND_A_E, mode)


def _shift_array(shift):
    if np.ndim(shift) == 0:
        return np.array([as_wavenumber(shift)]), True
    return np.asarray(shift, dtype=np.float64), False


def _evaluate(p: SusceptibilityParams, shift):
    arr, scalar = _shift_array(shift)
    chi_r, total = _kernels.chi3_grid(p.a_r, p.a_e, p.omega_tilde, p.gamma, arr, p.damping_sign)
    if scalar:
        return complex(chi_r[0]), complex(total[0])
    return chi_r, total


def chi3_raman(p: SusceptibilityParams, shift):
    """Vibrational susceptibility at Raman shift(s) in cm^-1."""
    return _evaluate(p, shift)[0]


def chi3_electronic(p: SusceptibilityParams):
    return p.a_e


def chi3_total(p: SusceptibilityParams, shift):
    return _evaluate(p, shift)[1]


def abs2_total(p: SusceptibilityParams, shift):
    t = chi3_total(p, shift)
    return t.real ** 2 + t.imag ** 2


def phase_sweep(p: SusceptibilityParams, grid):
    """Unwrapped arg(chi_R) over an ascending shift grid, in radians.

    The phase decreases monotonically through resonance and loses pi in
    total as the grid widens.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid must be a 1-d array with at least two points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly ascending")
    if grid[-1] - grid[0] < 10.0 * p.gamma:
        raise ValueError(f"grid span {grid[-1] - grid[0]:.3g} cm^-1 is narrower than 10 gamma")
    return np.unwrap(np.angle(chi3_raman(p, grid)))


def asymmetry_ratio(p: SusceptibilityParams, delta_offset):
    """|chi(w~ + D)|^2 / |chi(w~ - D)|^2."""
    d = as_wavenumber(delta_offset)
    if d <= 0:
        raise ValueError("delta_offset must be > 0")
    above, below = abs2_total(p, np.array([p.omega_tilde + d, p.omega_tilde - d]))
    return float(above / below)


class MinimumResult(NamedTuple):
    found: bool
    delta_min: float     # cm^-1, nan when not found
    value: float         # |chi|^2 at the minimum, nan when not found
    message: str = ""


def find_minimum(p: SusceptibilityParams, bracket, coarse_step=None, xtol=None):
    """Locate the interference minimum of |chi_total|^2 inside ``bracket``.

    A coarse scan (step gamma/10 by default) picks the lowest interior local
    minimum, which golden-section search then refines to a bracket narrower
    than gamma/1000.  Returns ``MinimumResult(found=False, ...)`` when the
    lowest sample sits on the bracket edge.
    """
    lo, hi = (as_wavenumber(b) for b in bracket)
    if not hi > lo:
        raise ValueError("bracket must be (low, high) with high > low")
    if lo < p.omega_tilde:
        raise ValueError("bracket must lie above the phonon resonance")
    if p.a_r == 0:
        raise ValueError("A_R must be nonzero")
    if not abs(p.a_r) > abs(p.a_e):
        raise ValueError("minimum search assumes |A_R| > |A_E|")
    step = p.gamma / 10.0 if coarse_step is None else float(coarse_step)
    tol = p.gamma / 1e3 if xtol is None else float(xtol)

    # Work with amplitudes normalised to A_R: the location is then exactly
    # invariant under a common rescaling of both amplitudes.
    norm = p.with_amplitudes(1.0, p.a_e / p.a_r)
    n = max(3, int(math.ceil((hi - lo) / step)) + 1)
    grid = np.linspace(lo, hi, n)
    vals = abs2_total(norm, grid)
    interior = np.flatnonzero((vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:])) + 1
    if interior.size == 0:
        return MinimumResult(False, math.nan, math.nan, "no interior minimum in bracket")
    i = interior[np.argmin(vals[interior])]
    if vals[i] > min(vals[0], vals[-1]):
        return MinimumResult(False, math.nan, math.nan, "lowest value lies on the bracket edge")

    def objective(x):
        return float(abs2_total(norm, x))

    a, b, c = grid[i - 1], grid[i], grid[i + 1]
    try:
        res = minimize_scalar(objective, bracket=(a, b, c), method="golden",
                              options={"xtol": tol / (2.0 * max(abs(b), 1.0))})
    except ValueError:
        # flat plateau: the samples tie, so the triple is not a strict bracket
        res = minimize_scalar(objective, bounds=(a, c), method="bounded", options={"xatol": tol})
    x = float(res.x)
    if not a <= x <= c:
        x = float(b)
    return MinimumResult(True, x, float(abs2_total(p, x)), "")


def global_maximum(p: SusceptibilityParams, window, step=None):
    """Shift of the largest |chi_total|^2 over ``window`` (dense scan + refine)."""
    lo, hi = window
    step = p.gamma / 100.0 if step is None else step
    grid = np.arange(lo, hi + 0.5 * step, step)
    vals = abs2_total(p, grid)
    i = int(np.argmax(vals))
    if 0 < i < grid.size - 1:
        res = minimize_scalar(lambda x: -float(abs2_total(p, x)),
                              bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden")
        return float(res.x), -float(res.fun)
    return float(grid[i]), float(vals[i])
