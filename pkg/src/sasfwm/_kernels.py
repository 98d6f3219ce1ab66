"""Hot inner loops, in two interchangeable flavours.

Every kernel exists as a numba-compiled loop (``*_nb``) and a vectorised
numpy function (``*_np``).  The public wrappers at the bottom dispatch on
:func:`sasfwm._accel.get_backend`.  All frequencies here are plain floats in
rad/s (kernels) or cm^-1 (susceptibility grid); unit handling happens in the
calling modules.
"""
from __future__ import annotations

import math

import numpy as np

from . import _accel
from ._accel import njit, prange

# Below |d| t < SERIES_THRESHOLD the kernel switches to its Taylor series.
SERIES_THRESHOLD = 1e-6


# ---------------------------------------------------------------- numba path

@njit
def _f_time_point(a, d_re, d_im, t):
    # f = (exp(-i a t) - exp(-i b t)) / d  with  d = a - b
    #   = -exp(-i a t) * expm1(i d t) / d
    ph_re = math.cos(a * t)
    ph_im = -math.sin(a * t)
    mod_d = math.hypot(d_re, d_im)
    if mod_d * t < SERIES_THRESHOLD:
        # -i t (1 + z/2 + z^2/6),  z = i d t
        z_re = -d_im * t
        z_im = d_re * t
        s_re = 1.0 + 0.5 * z_re + (z_re * z_re - z_im * z_im) / 6.0
        s_im = 0.5 * z_im + (2.0 * z_re * z_im) / 6.0
        # multiply by -i t
        q_re = t * s_im
        q_im = -t * s_re
    else:
        x = -d_im * t
        y = d_re * t
        sh = math.sin(0.5 * y)
        e_re = math.expm1(x) * math.cos(y) - 2.0 * sh * sh
        e_im = math.exp(x) * math.sin(y)
        den = d_re * d_re + d_im * d_im
        # -(e / d)
        q_re = -(e_re * d_re + e_im * d_im) / den
        q_im = -(e_im * d_re - e_re * d_im) / den
    return complex(ph_re * q_re - ph_im * q_im, ph_re * q_im + ph_im * q_re)


@njit(parallel=True)
def f_time_trace_nb(a, d_re, d_im, t):
    out = np.empty(t.shape[0], dtype=np.complex128)
    for i in prange(t.shape[0]):
        out[i] = _f_time_point(a, d_re, d_im, t[i])
    return out


@njit
def windowed_transform_nb(a, d_re, d_im, omega, t_max, n):
    # trapezoid rule for int_0^T f(t) exp(i omega t) dt on n intervals
    h = t_max / n
    acc_re = 0.0
    acc_im = 0.0
    for k in range(n + 1):
        t = k * h
        f = _f_time_point(a, d_re, d_im, t)
        c = math.cos(omega * t)
        s = math.sin(omega * t)
        v_re = f.real * c - f.imag * s
        v_im = f.real * s + f.imag * c
        w = 0.5 if (k == 0 or k == n) else 1.0
        acc_re += w * v_re
        acc_im += w * v_im
    return complex(acc_re * h, acc_im * h)


@njit(parallel=True)
def chi3_grid_nb(ar_re, ar_im, ae_re, ae_im, omega_tilde, gamma, damping_sign, shifts):
    n = shifts.shape[0]
    chi_r = np.empty(n, dtype=np.complex128)
    total = np.empty(n, dtype=np.complex128)
    half = 0.5 * gamma * damping_sign
    for i in prange(n):
        x = omega_tilde - shifts[i]
        den = x * x + half * half
        l_re = gamma * x / den
        l_im = -gamma * half / den
        r_re = ar_re * l_re - ar_im * l_im
        r_im = ar_re * l_im + ar_im * l_re
        chi_r[i] = complex(r_re, r_im)
        total[i] = complex(r_re + ae_re, r_im + ae_im)
    return chi_r, total


# ---------------------------------------------------------------- numpy path

def f_time_trace_np(a, d_re, d_im, t):
    t = np.asarray(t, dtype=np.float64)
    phase = np.cos(a * t) - 1j * np.sin(a * t)
    mod_d = math.hypot(d_re, d_im)
    small = mod_d * t < SERIES_THRESHOLD
    z = (-d_im * t) + 1j * (d_re * t)
    x = z.real
    y = z.imag
    sh = np.sin(0.5 * y)
    em1 = (np.expm1(x) * np.cos(y) - 2.0 * sh * sh) + 1j * (np.exp(x) * np.sin(y))
    d = complex(d_re, d_im)
    with np.errstate(invalid="ignore", divide="ignore"):
        full = -em1 / d
    series = -1j * t * (1.0 + 0.5 * z + z * z / 6.0)
    return phase * np.where(small, series, full)


def windowed_transform_np(a, d_re, d_im, omega, t_max, n):
    t = np.linspace(0.0, t_max, n + 1)
    v = f_time_trace_np(a, d_re, d_im, t) * (np.cos(omega * t) + 1j * np.sin(omega * t))
    h = t_max / n
    return complex(h * (v.sum() - 0.5 * (v[0] + v[-1])))


def chi3_grid_np(ar_re, ar_im, ae_re, ae_im, omega_tilde, gamma, damping_sign, shifts):
    half = 0.5 * gamma * damping_sign
    x = omega_tilde - shifts
    den = x * x + half * half
    l_re = gamma * x / den
    l_im = -gamma * half / den
    r_re = ar_re * l_re - ar_im * l_im
    r_im = ar_re * l_im + ar_im * l_re
    return r_re + 1j * r_im, (r_re + ae_re) + 1j * (r_im + ae_im)


# ---------------------------------------------------------------- dispatch

def f_time_trace(a, d_re, d_im, t):
    t = np.ascontiguousarray(np.atleast_1d(t), dtype=np.float64)
    if _accel.get_backend() == "numba":
        return f_time_trace_nb(a, d_re, d_im, t)
    return f_time_trace_np(a, d_re, d_im, t)


def windowed_transform(a, d_re, d_im, omega, t_max, n):
    if _accel.get_backend() == "numba":
        return windowed_transform_nb(a, d_re, d_im, omega, t_max, int(n))
    return windowed_transform_np(a, d_re, d_im, omega, t_max, int(n))


def chi3_grid(ar, ae, omega_tilde, gamma, shifts, damping_sign=1.0):
    shifts = np.ascontiguousarray(np.atleast_1d(shifts), dtype=np.float64)
    args = (float(ar.real), float(ar.imag), float(ae.real), float(ae.imag),
            float(omega_tilde), float(gamma), float(damping_sign), shifts)
    if _accel.get_backend() == "numba":
        return chi3_grid_nb(*args)
    return chi3_grid_np(*args)
