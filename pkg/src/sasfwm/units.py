"""Unit-tagged scalars and the handful of conversions the package needs.

The canonical frequency unit everywhere is the spectroscopic wavenumber
(cm^-1).  Angular frequencies (rad/s) only appear where a time variable is
involved (kernels, commutators).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

from scipy.constants import c as _C_M_PER_S

C_CM_PER_S = _C_M_PER_S * 100.0
TWO_PI_C = 2.0 * math.pi * C_CM_PER_S  # (rad/s) per cm^-1

LIFETIME_CONVENTIONS = ("angular", "cycles")


def _finite(value, name):
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Wavenumber:
    """Spectroscopic wavenumber in cm^-1."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _finite(self.value, "Wavenumber"))

    def __float__(self):
        return self.value

    def to_angular(self) -> "AngularFrequency":
        return wavenumber_to_angular(self)


@dataclass(frozen=True)
class AngularFrequency:
    """Angular frequency in rad/s."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _finite(self.value, "AngularFrequency"))

    def __float__(self):
        return self.value

    def to_wavenumber(self) -> Wavenumber:
        return angular_to_wavenumber(self)


@dataclass(frozen=True)
class DecayRate:
    """Amplitude decay rate in 1/s (strictly positive)."""

    value: float

    def __post_init__(self):
        v = _finite(self.value, "DecayRate")
        if v <= 0:
            raise ValueError(f"DecayRate must be > 0, got {v}")
        object.__setattr__(self, "value", v)

    def __float__(self):
        return self.value


def wavenumber_to_angular(w) -> AngularFrequency:
    """omega = 2 pi c * nu_tilde, with c in cm/s."""
    return AngularFrequency(as_wavenumber(w) * TWO_PI_C)


def angular_to_wavenumber(omega) -> Wavenumber:
    return Wavenumber(as_angular(omega) / TWO_PI_C)


def lifetime_to_decay_wavenumber(tau_ps, convention="angular") -> Wavenumber:
    """Convert a lifetime in ps to a decay rate expressed in cm^-1.

    With ``convention="angular"`` (default) 1/tau is treated as an angular
    rate and divided by 2 pi c; ``"cycles"`` divides by c only.
    """
    tau_ps = _finite(tau_ps, "lifetime")
    if tau_ps <= 0:
        raise ValueError(f"lifetime must be > 0 ps, got {tau_ps}")
    rate = 1.0 / (tau_ps * 1e-12)
    if convention == "angular":
        return Wavenumber(rate / TWO_PI_C)
    if convention == "cycles":
        return Wavenumber(rate / C_CM_PER_S)
    raise ValueError(f"unknown lifetime convention {convention!r}; use one of {LIFETIME_CONVENTIONS}")


def as_wavenumber(x) -> float:
    """Return ``x`` as a float in cm^-1.

    Bare real numbers are taken to be cm^-1 already.  Any other unit-tagged
    type is a unit mix-up and raises ``TypeError``.
    """
    if isinstance(x, Wavenumber):
        return x.value
    if isinstance(x, (AngularFrequency, DecayRate)):
        raise TypeError(f"expected a wavenumber (cm^-1), got {type(x).__name__}")
    if isinstance(x, Real):
        return _finite(x, "wavenumber")
    raise TypeError(f"cannot interpret {x!r} as a wavenumber")


def as_angular(x) -> float:
    """Return ``x`` as a float in rad/s; bare reals are taken as rad/s."""
    if isinstance(x, AngularFrequency):
        return x.value
    if isinstance(x, (Wavenumber, DecayRate)):
        raise TypeError(f"expected an angular frequency (rad/s), got {type(x).__name__}")
    if isinstance(x, Real):
        return _finite(x, "angular frequency")
    raise TypeError(f"cannot interpret {x!r} as an angular frequency")


def cm1_to_rad_s(x):
    """Array-friendly cm^-1 -> rad/s (no tagging)."""
    return x * TWO_PI_C


def rad_s_to_cm1(x):
    return x / TWO_PI_C
