"""Four-wave-mixing response functions.

Time domain, for each of the four first-order term families::

    f(t) = [exp(-i a t) - exp(-i b t)] / (a - b)

    a = s1 w_l + s2 w_l' + s3 w'          (three-wave exponent)
    b = s1 w_l + p w~ - i gamma/2         (decaying phonon branch)
    a - b = s2 w_l' + s3 w' - p w~ + i gamma/2

The signs (s1, s2, s3) and the phonon sign p come from :data:`FAMILY_TABLE`.
The first letter of the family names the polarization mode (p = -1 for a
Stokes polarization, +1 for anti-Stokes); the second names the correlated
scattered mode, whose frequency is passed as ``omega_scattered``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .phonon import PhononMode
from .units import as_angular


class TermFamily(str, enum.Enum):
    AS = "AS"
    SA = "SA"
    AA = "AA"
    SS = "SS"

    @property
    def is_cross(self):
        """Stokes/anti-Stokes coupling (AS, SA) as opposed to self-coupling."""
        return self.value[0] != self.value[1]

    @property
    def polarization(self):
        return self.value[0]

    @property
    def correlated(self):
        return self.value[1]


@dataclass(frozen=True)
class SignSignature:
    s1: int
    s2: int
    s3: int

    def __post_init__(self):
        if any(s not in (-1, 1) for s in (self.s1, self.s2, self.s3)):
            raise ValueError("signs must be +1 or -1")

    def __str__(self):
        return "".join("+" if s > 0 else "-" for s in (self.s1, self.s2, self.s3))

    def negated(self):
        return SignSignature(-self.s1, -self.s2, -self.s3)


class FamilySigns(NamedTuple):
    signature: SignSignature
    phonon_sign: int        # sign of w~ in the decaying exponent
    polarization_q: int     # polarization mode is k_l + polarization_q * q
    scattered_q: int        # scattered operator mode is k_l' + scattered_q * q
    scattered_creation: bool


# Data, not code: snapshot-tested in tests/test_kernel.py.
FAMILY_TABLE = {
    TermFamily.AS: FamilySigns(SignSignature(+1, +1, -1), +1, +1, -1, True),
    TermFamily.SA: FamilySigns(SignSignature(+1, +1, -1), -1, -1, +1, True),
    TermFamily.AA: FamilySigns(SignSignature(+1, -1, +1), +1, +1, +1, False),
    TermFamily.SS: FamilySigns(SignSignature(+1, -1, +1), -1, -1, -1, False),
}


@dataclass(frozen=True)
class KernelFrequencies:
    """Plane-wave angular frequencies (rad/s) of laser, laser', scattered."""

    omega_l: float
    omega_l_prime: float
    omega_scattered: float

    def __post_init__(self):
        for name in ("omega_l", "omega_l_prime", "omega_scattered"):
            v = as_angular(getattr(self, name))
            if v <= 0:
                raise ValueError(f"{name} must be > 0 rad/s, got {v}")
            object.__setattr__(self, name, v)


def kernel_coefficients(family, freqs: KernelFrequencies, mode: PhononMode):
    """Return ``(a, d)``: the three-wave exponent and the complex denominator."""
    family = TermFamily(family)
    sig, p = FAMILY_TABLE[family][:2]
    a = sig.s1 * freqs.omega_l + sig.s2 * freqs.omega_l_prime + sig.s3 * freqs.omega_scattered
    d_re = (sig.s2 * freqs.omega_l_prime + sig.s3 * freqs.omega_scattered
            - p * mode.omega_tilde_rad_s)
    return a, complex(d_re, 0.5 * mode.gamma_rad_s)


def f_time(family, freqs: KernelFrequencies, mode: PhononMode, t):
    """Time-domain FWM kernel for ``t >= 0`` seconds (scalar or array).

    The removable singularity at a vanishing denominator is handled by a
    series expansion, so the result is continuous everywhere.
    """
    tt = np.asarray(t, dtype=np.float64)
    if np.any(tt < 0) or not np.all(np.isfinite(tt)):
        raise ValueError("f_time is defined for finite t >= 0")
    a, d = kernel_coefficients(family, freqs, mode)
    out = _kernels.f_time_trace(a, d.real, d.imag, tt.ravel()).reshape(tt.shape)
    return out if tt.ndim else complex(out)


class ASFrequencyResponse(NamedTuple):
    conserving_amplitude: complex   # multiplies 2 pi delta(conservation_defect)
    conservation_defect: float      # w_l + w_l' - w_S - w_A  (rad/s)
    nonconserving_amplitude: complex


def f_freq_AS(freqs: KernelFrequencies, omega_A, mode: PhononMode) -> ASFrequencyResponse:
    """Frequency-domain AS kernel split into its delta-carrying and regular parts.

    ``freqs.omega_scattered`` is the Stokes frequency.  The Dirac delta is not
    discretised; the caller enforces ``conservation_defect == 0``.
    """
    w_a = as_angular(omega_A)
    if w_a <= 0:
        raise ValueError("omega_A must be > 0")
    w_t = mode.omega_tilde_rad_s
    half = 0.5 * mode.gamma_rad_s
    stokes_den = complex(freqs.omega_l_prime - freqs.omega_scattered - w_t, half)
    anti_den = complex(freqs.omega_l - w_a + w_t, -half)
    return ASFrequencyResponse(
        conserving_amplitude=2.0 * math.pi / stokes_den,
        conservation_defect=freqs.omega_l + freqs.omega_l_prime - freqs.omega_scattered - w_a,
        nonconserving_amplitude=-1j / (stokes_den * anti_den),
    )


def windowed_fourier(family, freqs: KernelFrequencies, mode: PhononMode, omega, t_max, n=200_000):
    """Trapezoid-rule transform  int_0^T f(t) exp(i omega t) dt.

    A finite-window stand-in for the frequency-domain kernel; at the
    energy-conserving frequency it grows linearly with ``t_max``.
    """
    if t_max <= 0 or n < 2:
        raise ValueError("need t_max > 0 and n >= 2")
    a, d = kernel_coefficients(family, freqs, mode)
    return _kernels.windowed_transform(a, d.real, d.imag, as_angular(omega), float(t_max), n)
