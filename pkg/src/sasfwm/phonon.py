"""Damped Raman phonon: free transient envelope and two-time commutator."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .units import as_wavenumber, cm1_to_rad_s

# omega_tilde / gamma below this triggers a warning (weak-damping assumption)
MIN_QUALITY = 10.0


@dataclass(frozen=True)
class PhononMode:
    """One Raman-active phonon branch.

    ``omega_tilde`` and ``gamma`` are in cm^-1 (bare numbers or
    :class:`~sasfwm.units.Wavenumber`).  ``omega_0`` is the bare oscillator
    frequency entering coupling prefactors; it defaults to ``omega_tilde``.
    ``multiplicity`` counts degenerate branches folded into this one.
    """

    omega_tilde: float
    gamma: float
    mass: float | None = None
    label: int = 0
    omega_0: float | None = None
    multiplicity: int = 1

    def __post_init__(self):
        w = as_wavenumber(self.omega_tilde)
        g = as_wavenumber(self.gamma)
        if w <= 0:
            raise ValueError(f"omega_tilde must be > 0 cm^-1, got {w}")
        if g <= 0:
            raise ValueError(f"gamma must be > 0 cm^-1, got {g}")
        object.__setattr__(self, "omega_tilde", w)
        object.__setattr__(self, "gamma", g)
        w0 = w if self.omega_0 is None else as_wavenumber(self.omega_0)
        if w0 <= 0:
            raise ValueError("omega_0 must be > 0")
        object.__setattr__(self, "omega_0", w0)
        if self.mass is not None and not self.mass > 0:
            raise ValueError("mass must be > 0 kg")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")
        if w / g < MIN_QUALITY:
            warnings.warn(
                f"omega_tilde/gamma = {w / g:.3g} < {MIN_QUALITY}; "
                "the weakly damped phonon approximation is questionable",
                stacklevel=3,
            )

    @property
    def omega_tilde_rad_s(self):
        return cm1_to_rad_s(self.omega_tilde)

    @property
    def gamma_rad_s(self):
        return cm1_to_rad_s(self.gamma)

    @property
    def omega_0_rad_s(self):
        return cm1_to_rad_s(self.omega_0)

    def replace(self, **changes):
        kw = dict(omega_tilde=self.omega_tilde, gamma=self.gamma, mass=self.mass,
                  label=self.label, omega_0=self.omega_0, multiplicity=self.multiplicity)
        if ("omega_tilde" in changes) and "omega_0" not in changes and self.omega_0 == self.omega_tilde:
            kw["omega_0"] = None
        kw.update(changes)
        return PhononMode(**kw)


def _scalar_or_array(values, t):
    return values if np.ndim(t) else complex(values)


def damped_commutator(mode: PhononMode, t_prime):
    """[b(t), b^dagger(t - t')] = exp(-i w t') exp(-gamma |t'| / 2).

    ``t_prime`` in seconds, scalar or array, any sign.
    """
    t = np.asarray(t_prime, dtype=np.float64)
    if not np.all(np.isfinite(t)):
        raise ValueError("t_prime must be finite")
    w = mode.omega_tilde_rad_s
    envelope = np.exp(-0.5 * mode.gamma_rad_s * np.abs(t))
    values = envelope * (np.cos(w * t) - 1j * np.sin(w * t))
    return _scalar_or_array(values, t_prime)


def transient_envelope(mode: PhononMode, t):
    """exp(-i (w - i gamma/2) t) for t >= 0 (seconds)."""
    tt = np.asarray(t, dtype=np.float64)
    if np.any(tt < 0) or not np.all(np.isfinite(tt)):
        raise ValueError("transient envelope is defined for finite t >= 0 only")
    w = mode.omega_tilde_rad_s
    values = np.exp(-0.5 * mode.gamma_rad_s * tt) * (np.cos(w * tt) - 1j * np.sin(w * tt))
    return _scalar_or_array(values, t)
