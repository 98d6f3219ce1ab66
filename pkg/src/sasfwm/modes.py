"""Plane-wave mode bookkeeping.

Dispersion and wavevectors, phase mismatch and its finite-volume sinc
factor, the Raman coupling prefactor, and symbolic enumeration of the
polarization terms.  Wavevectors used in enumeration live on an integer
lattice (``index * pitch``) so that momentum conservation is checked with
exact integer arithmetic.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.constants import c as C_M_PER_S
from scipy.optimize import brentq

from .kernel import FAMILY_TABLE, KernelFrequencies, SignSignature, TermFamily
from .phonon import PhononMode
from .units import as_angular, cm1_to_rad_s

_FAMILY_ORDER = (TermFamily.AS, TermFamily.SA, TermFamily.AA, TermFamily.SS)


# ------------------------------------------------------------------ dispersion

@dataclass(frozen=True)
class DispersionModel:
    """Isotropic refractive index, either constant or Sellmeier.

    Sellmeier terms are ``(B, C)`` pairs with ``C`` in um^2::

        n^2 = 1 + sum_i B_i lam^2 / (lam^2 - C_i)

    ``window_um`` is the vacuum-wavelength validity range in um.
    """

    kind: str = "constant"
    n0: float = 1.0
    sellmeier: tuple = ()
    window_um: tuple = (0.0, math.inf)

    def __post_init__(self):
        if self.kind not in ("constant", "sellmeier"):
            raise ValueError(f"unknown dispersion kind {self.kind!r}")
        terms = tuple((float(b), float(c)) for b, c in self.sellmeier)
        object.__setattr__(self, "sellmeier", terms)
        lo, hi = (float(w) for w in self.window_um)
        if not (0 <= lo < hi):
            raise ValueError("window_um must satisfy 0 <= low < high")
        object.__setattr__(self, "window_um", (lo, hi))
        if self.kind == "constant":
            if not self.n0 >= 1:
                raise ValueError("constant refractive index must be >= 1")
            return
        if not terms:
            raise ValueError("Sellmeier model needs at least one (B, C) term")
        # spot-check n >= 1 across the declared window
        hi_s = hi if math.isfinite(hi) else max(10.0 * lo, 100.0)
        lo_s = lo if lo > 0 else 1e-3
        for lam in np.geomspace(lo_s, hi_s, 65):
            if any(abs(lam * lam - c_) < 1e-12 for _, c_ in terms):
                continue
            n2 = _sellmeier_n2(terms, lam)
            if n2 < 1.0:
                raise ValueError(f"Sellmeier index drops below 1 at {lam:.4g} um inside the window")

    @classmethod
    def constant(cls, n0=1.0):
        return cls("constant", n0=float(n0))

    @classmethod
    def from_sellmeier(cls, terms, window_um=(0.0, math.inf)):
        return cls("sellmeier", sellmeier=tuple(terms), window_um=window_um)


def diamond_dispersion():
    """Two-term Sellmeier fit for diamond (visible / near IR)."""
    return DispersionModel.from_sellmeier(
        [(0.3306, 0.1750 ** 2), (4.3356, 0.1060 ** 2)], window_um=(0.225, 25.0))


def _sellmeier_n2(terms, lam_um):
    l2 = lam_um * lam_um
    return 1.0 + sum(b * l2 / (l2 - c_) for b, c_ in terms)


def vacuum_wavelength_um(omega):
    return 2.0 * math.pi * C_M_PER_S / as_angular(omega) * 1e6


def refractive_index(d: DispersionModel, omega):
    """n at angular frequency ``omega`` (rad/s)."""
    w = as_angular(omega)
    if w <= 0:
        raise ValueError("omega must be > 0")
    lam = 2.0 * math.pi * C_M_PER_S / w * 1e6
    lo, hi = d.window_um
    if not lo <= lam <= hi:
        raise ValueError(f"wavelength {lam:.4g} um outside validity window [{lo}, {hi}] um")
    if d.kind == "constant":
        return d.n0
    l2 = lam * lam
    for _, c_ in d.sellmeier:
        if abs(l2 - c_) <= 1e-12 * max(l2, c_):
            raise ValueError(f"wavelength {lam:.6g} um sits on a Sellmeier pole")
    n2 = _sellmeier_n2(d.sellmeier, lam)
    if n2 <= 0:
        raise ValueError(f"negative n^2 at {lam:.4g} um")
    return math.sqrt(n2)


def wavevector_magnitude(d: DispersionModel, omega):
    """|k| = omega n(omega) / c in rad/m."""
    w = as_angular(omega)
    return w * refractive_index(d, w) / C_M_PER_S


def frequency_from_wavevector(d: DispersionModel, k):
    """Invert |k| = omega n(omega)/c for omega (rad/s)."""
    k = float(k)
    if k <= 0:
        raise ValueError("|k| must be > 0")
    if d.kind == "constant":
        return k * C_M_PER_S / d.n0
    lo_um, hi_um = d.window_um
    w_hi = 2 * math.pi * C_M_PER_S / (lo_um * 1e-6) if lo_um > 0 else 1e17
    w_lo = 2 * math.pi * C_M_PER_S / (hi_um * 1e-6) if math.isfinite(hi_um) else 1e9
    w_hi *= 1 - 1e-12
    w_lo *= 1 + 1e-12
    g = lambda w: wavevector_magnitude(d, w) - k  # noqa: E731
    if g(w_lo) * g(w_hi) > 0:
        raise ValueError(f"|k| = {k:.6g} rad/m is not reachable inside the dispersion window")
    return brentq(g, w_lo, w_hi, xtol=1e-6, rtol=1e-15, maxiter=200)


# ------------------------------------------------------------------ modes

def _ivec(index):
    t = tuple(int(i) for i in index)
    if len(t) != 3:
        raise ValueError("lattice index must have three components")
    return t


def _add(u, v, s=1):
    return (u[0] + s * v[0], u[1] + s * v[1], u[2] + s * v[2])


@dataclass(frozen=True, order=True)
class OpticalMode:
    """A plane-wave mode on the integer wavevector lattice.

    ``wavevector = pitch * index`` (rad/m).  ``frequency`` (rad/s) is
    optional; :func:`optical_mode` fills it from a dispersion model.
    """

    index: tuple
    pitch: float = 1.0
    polarization: int = 0
    frequency: float | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", _ivec(self.index))
        if not self.pitch > 0:
            raise ValueError("lattice pitch must be > 0")

    @property
    def wavevector(self):
        return self.pitch * np.array(self.index, dtype=np.float64)

    @property
    def k_magnitude(self):
        return float(np.linalg.norm(self.wavevector))

    def satisfies_dispersion(self, d: DispersionModel, rtol=1e-9):
        if self.frequency is None:
            return False
        k = wavevector_magnitude(d, self.frequency)
        return abs(k - self.k_magnitude) <= rtol * k


def optical_mode(index, pitch, dispersion: DispersionModel, polarization=0):
    idx = _ivec(index)
    k = pitch * math.sqrt(sum(i * i for i in idx))
    return OpticalMode(idx, pitch, polarization, frequency_from_wavevector(dispersion, k))


# ------------------------------------------------------------------ phase matching

def phase_mismatch(k_l, k_l_prime, k_S, k_A):
    """dk = k_l + k_l' - k_S - k_A and its Euclidean norm."""
    dk = (np.asarray(k_l, dtype=np.float64) + np.asarray(k_l_prime, dtype=np.float64)
          - np.asarray(k_S, dtype=np.float64) - np.asarray(k_A, dtype=np.float64))
    return dk, float(np.linalg.norm(dk))


def finite_volume_factor(delta_k, box):
    """(1/V) int_box exp(i dk.r) d^3r for a box centred on the origin.

    Equals prod_axis sinc(dk_axis L_axis / 2), with sinc(u) = sin(u)/u.
    """
    dk = np.asarray(delta_k, dtype=np.float64)
    lengths = np.asarray(box, dtype=np.float64)
    if lengths.shape != (3,) or np.any(lengths <= 0):
        raise ValueError("box must be three positive side lengths (m)")
    return float(np.prod(np.sinc(dk * lengths / (2.0 * np.pi))))


def scattering_wavevectors(d: DispersionModel, omega_l, shift_cm1, angle_rad=0.0):
    """Laser, laser', Stokes and anti-Stokes wavevectors for a degenerate pump.

    The pump runs along +z.  Stokes leaves at +angle and anti-Stokes at
    -angle in the x-z plane (``angle_rad = 0`` is collinear forward
    scattering).  Frequencies are fixed by energy conservation,
    w_S = w_l - W, w_A = w_l + W.
    """
    w_l = as_angular(omega_l)
    big_w = cm1_to_rad_s(float(shift_cm1))
    k_l = wavevector_magnitude(d, w_l) * np.array([0.0, 0.0, 1.0])
    s, c_ = math.sin(angle_rad), math.cos(angle_rad)
    k_s = wavevector_magnitude(d, w_l - big_w) * np.array([s, 0.0, c_])
    k_a = wavevector_magnitude(d, w_l + big_w) * np.array([-s, 0.0, c_])
    return k_l, k_l.copy(), k_s, k_a


# ------------------------------------------------------------------ coupling

@dataclass(frozen=True)
class CouplingConstants:
    """Material constants entering the Raman coupling prefactor (SI units)."""

    dipole_density: float                 # N, m^-3
    raman_tensor_element: float | complex  # alpha_ijm
    scattering_volume: float               # V_S, m^3
    quantization_volume: float = 1.0       # V_Q, m^3
    vacuum_permittivity: float = 8.8541878128e-12
    hbar: float = 1.054571817e-34

    def __post_init__(self):
        for name in ("dipole_density", "scattering_volume", "quantization_volume",
                     "vacuum_permittivity", "hbar"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


def alpha_bar(c: CouplingConstants, mode: PhononMode, unit_polarization_projection):
    """sqrt(2 pi / gamma) V_S / (2 M w0) N eps0 alpha_ijm eps_m  (gamma, w0 in rad/s)."""
    proj = float(unit_polarization_projection)
    if not -1.0 <= proj <= 1.0:
        raise ValueError("polarization projection must lie in [-1, 1]")
    if mode.mass is None or mode.mass <= 0:
        raise ValueError("phonon mode needs a positive effective mass")
    if mode.omega_0 <= 0:
        raise ValueError("phonon frequency must be > 0")
    pref = math.sqrt(2.0 * math.pi / mode.gamma_rad_s)
    pref *= c.scattering_volume / (2.0 * mode.mass * mode.omega_0_rad_s)
    return complex(pref * c.dipole_density * c.vacuum_permittivity * c.raman_tensor_element * proj)


def raman_amplitude(alpha_bars_ij, alpha_bars_i2j2):
    """A_R = sum_eta alpha_bar_ij,eta * conj(alpha_bar_i'j',eta)."""
    a = np.asarray(alpha_bars_ij, dtype=np.complex128)
    b = np.asarray(alpha_bars_i2j2, dtype=np.complex128)
    return complex(np.sum(a * np.conj(b)))


# ------------------------------------------------------------------ term records

@dataclass(frozen=True)
class FwmTerm:
    """One first-order (four-wave-mixing) polarization term.

    Vectors are integer lattice indices.  There is deliberately no phonon
    occupation or material-state field: these terms do not depend on the
    state of the medium.
    """

    family: TermFamily
    laser_modes: tuple              # (k_l, k_l')
    phonon_q: tuple
    polarization_mode: tuple        # k_l +/- q
    scattered_operator_mode: tuple  # k_l' -/+ q
    scattered_creation: bool
    kernel: SignSignature
    frequencies: KernelFrequencies | None
    hermitian_conjugate: bool = False
    prefactor_ref: str = "alpha_bar"

    @property
    def order(self):
        return 1

    def to_record(self):
        rec = {
            "order": 1,
            "family": self.family.value,
            "hermitian_conjugate": self.hermitian_conjugate,
            "k_l": list(self.laser_modes[0]),
            "k_l_prime": list(self.laser_modes[1]),
            "q": list(self.phonon_q),
            "polarization_mode": list(self.polarization_mode),
            "scattered_operator_mode": list(self.scattered_operator_mode),
            "scattered_operator": "creation" if self.scattered_creation else "annihilation",
            "kernel_signs": str(self.kernel),
            "prefactor_ref": self.prefactor_ref,
        }
        if self.frequencies is not None:
            rec["omega_l_rad_s"] = self.frequencies.omega_l
            rec["omega_l_prime_rad_s"] = self.frequencies.omega_l_prime
            rec["omega_scattered_rad_s"] = self.frequencies.omega_scattered
        return rec


@dataclass(frozen=True)
class RamanTerm:
    """One zeroth-order (spontaneous Raman) polarization term."""

    kind: str                 # "stokes" | "anti-stokes"
    laser_mode: tuple
    phonon_q: tuple
    phonon_creation: bool
    polarization_mode: tuple
    hermitian_conjugate: bool = False
    material_state_sensitive: bool = True

    @property
    def order(self):
        return 0

    def to_record(self):
        return {
            "order": 0,
            "kind": self.kind,
            "hermitian_conjugate": self.hermitian_conjugate,
            "k_l": list(self.laser_mode),
            "q": list(self.phonon_q),
            "phonon_operator": "creation" if self.phonon_creation else "annihilation",
            "polarization_mode": list(self.polarization_mode),
            "material_state_sensitive": self.material_state_sensitive,
        }


def _as_indices(modes):
    out = []
    for m in modes:
        out.append(m.index if isinstance(m, OpticalMode) else _ivec(m))
    return out


def _kernel_frequencies(laser, laser_p, scattered_idx, dispersion):
    if dispersion is None or laser.frequency is None or laser_p.frequency is None:
        return None
    k = laser.pitch * math.sqrt(sum(i * i for i in scattered_idx))
    if k == 0:
        return None
    try:
        w_sc = frequency_from_wavevector(dispersion, k)
    except ValueError:
        return None
    return KernelFrequencies(laser.frequency, laser_p.frequency, w_sc)


def enumerate_first_order(lasers, q_grid, dispersion: DispersionModel | None = None):
    """All first-order FWM terms for ordered laser pairs and phonon wavevectors.

    Per ``(k_l, k_l', q)``: one AS, SA, AA and SS term, each followed by its
    Hermitian conjugate.  Operator flags always describe the unconjugated
    product; a conjugate record differs only by ``hermitian_conjugate`` and
    the negated kernel signs.  Output order is lexicographic in lattice indices.
    ``lasers`` are :class:`OpticalMode` (or bare index triples); when a
    dispersion model is given and the lasers carry frequencies, each term
    also gets its kernel frequencies.
    """
    lasers = sorted(lasers, key=lambda m: m.index if isinstance(m, OpticalMode) else _ivec(m))
    qs = sorted(_ivec(q) for q in q_grid)
    if not lasers or not qs:
        raise ValueError("need at least one laser mode and one phonon wavevector")
    modes = [m if isinstance(m, OpticalMode) else OpticalMode(m) for m in lasers]
    terms = []
    for m_l, m_lp in product(modes, repeat=2):
        k_l, k_lp = m_l.index, m_lp.index
        for q in qs:
            for fam in _FAMILY_ORDER:
                sig, _, pol_q, sc_q, creation = FAMILY_TABLE[fam]
                pol = _add(k_l, q, pol_q)
                sc = _add(k_lp, q, sc_q)
                freqs = _kernel_frequencies(m_l, m_lp, sc, dispersion)
                base = FwmTerm(fam, (k_l, k_lp), q, pol, sc, creation, sig, freqs)
                terms.append(base)
                terms.append(dataclasses.replace(base, kernel=sig.negated(),
                                                 hermitian_conjugate=True))
    return terms


def enumerate_zeroth_order(lasers, q_grid):
    """Spontaneous Raman terms: per ``(k_l, q)`` a Stokes and an anti-Stokes
    term plus their conjugates."""
    ks = sorted(_as_indices(lasers))
    qs = sorted(_ivec(q) for q in q_grid)
    if not ks or not qs:
        raise ValueError("need at least one laser mode and one phonon wavevector")
    terms = []
    for k_l in ks:
        for q in qs:
            stokes_pol = _add(k_l, q, -1)
            anti_pol = _add(k_l, q, +1)
            terms.append(RamanTerm("stokes", k_l, q, True, stokes_pol))
            terms.append(RamanTerm("stokes", k_l, q, True, stokes_pol, hermitian_conjugate=True))
            terms.append(RamanTerm("anti-stokes", k_l, q, False, anti_pol))
            terms.append(RamanTerm("anti-stokes", k_l, q, False, anti_pol, hermitian_conjugate=True))
    return terms
