import math

import mpmath
import numpy as np
import pytest

from sasfwm.kernel import (FAMILY_TABLE, KernelFrequencies, SignSignature, TermFamily, f_freq_AS, f_time,
                           kernel_coefficients, windowed_fourier)
from sasfwm.phonon import PhononMode
from sasfwm.units import TWO_PI_C, cm1_to_rad_s

MODE = PhononMode(1332.0, 1.7696124862920484)
W_L = cm1_to_rad_s(1e7 / 633.0)
W_T = MODE.omega_tilde_rad_s
G = MODE.gamma_rad_s


def resonant(family):
    """Frequencies putting the family's denominator exactly on resonance."""
    sig, p = FAMILY_TABLE[TermFamily(family)][:2]
    # s2 w_l' + s3 w' = p w~  with w_l' = w_l
    w_sc = (p * W_T - sig.s2 * W_L) / sig.s3
    return KernelFrequencies(W_L, W_L, w_sc)


def test_family_table_snapshot():
    snap = {fam.value: (str(s.signature), s.phonon_sign, s.polarization_q, s.scattered_q, s.scattered_creation)
            for fam, s in FAMILY_TABLE.items()}
    assert snap == {
        "AS": ("++-", 1, 1, -1, True),
        "SA": ("++-", -1, -1, 1, True),
        "AA": ("+-+", 1, 1, 1, False),
        "SS": ("+-+", -1, -1, -1, False),
    }
    assert TermFamily.AS.is_cross and TermFamily.SA.is_cross
    assert not TermFamily.AA.is_cross and not TermFamily.SS.is_cross


def test_sign_signature():
    s = SignSignature(1, 1, -1)
    assert str(s.negated()) == "--+"
    with pytest.raises(ValueError):
        SignSignature(1, 0, 1)


def test_resonant_frequencies_are_positive():
    for fam in TermFamily:
        f = resonant(fam)
        assert f.omega_scattered > 0
        assert abs(kernel_coefficients(fam, f, MODE)[1].real) <= 4e-16 * W_L


@pytest.mark.parametrize("family", list(TermFamily))
def test_against_difference_of_exponentials(family, backend):
    # away from the singular set the plain two-exponential form is well conditioned
    freqs = KernelFrequencies(W_L, W_L * 1.01, cm1_to_rad_s(1e7 / 690.0))
    a, d = kernel_coefficients(family, freqs, MODE)
    b = a - d
    t = np.linspace(0, 20 / G, 301)
    direct = (np.exp(-1j * a * t) - np.exp(-1j * b * t)) / d
    np.testing.assert_allclose(f_time(family, freqs, MODE, t), direct, rtol=1e-9, atol=1e-9 / abs(d))


@pytest.mark.parametrize("family", list(TermFamily))
def test_resonant_modulus(family, backend):
    t = np.linspace(0, 30 / G, 257)
    got = np.abs(f_time(family, resonant(family), MODE, t))
    np.testing.assert_allclose(got, (2 / G) * (-np.expm1(-0.5 * G * t)), rtol=1e-9, atol=1e-30)


@pytest.mark.parametrize("family", list(TermFamily))
def test_steady_state_and_transient(family, backend):
    freqs = KernelFrequencies(W_L, W_L, cm1_to_rad_s(1e7 / 633.0 - 1300.0))
    a, d = kernel_coefficients(family, freqs, MODE)
    t = np.linspace(0.1 / G, 60 / G, 200)
    f = f_time(family, freqs, MODE, t)
    steady = np.exp(-1j * a * t) / d
    np.testing.assert_allclose(np.abs(f - steady), np.exp(-0.5 * G * t) / abs(d), rtol=1e-6, atol=1e-12 / abs(d))
    late = abs(f_time(family, freqs, MODE, 80 / G))
    assert late == pytest.approx(1 / abs(d), rel=1e-12)


def _mp_kernel(a, d, t):
    mpmath.mp.dps = 60
    a, t = mpmath.mpf(a), mpmath.mpf(t)
    d = mpmath.mpc(d.real, d.imag)
    b = a - d
    return complex((mpmath.exp(-1j * a * t) - mpmath.exp(-1j * b * t)) / d)


@pytest.mark.parametrize("family", list(TermFamily))
def test_series_switch_continuity(family, backend):
    # straddle |d| t = 1e-6 on both sides
    freqs = resonant(family)
    a, d = kernel_coefficients(family, freqs, MODE)
    t_switch = 1e-6 / abs(d)
    for t in t_switch * np.array([0.01, 0.5, 0.999, 1.0, 1.001, 2.0, 100.0]):
        got = f_time(family, freqs, MODE, t)
        ref = _mp_kernel(a, d, t)
        assert abs(got - ref) <= 1e-9 * abs(ref)


def test_zero_time_and_validation(backend):
    for fam in TermFamily:
        assert f_time(fam, resonant(fam), MODE, 0.0) == 0
    with pytest.raises(ValueError):
        f_time("AS", resonant("AS"), MODE, -1e-15)
    with pytest.raises(ValueError):
        KernelFrequencies(W_L, -1.0, W_L)
    with pytest.raises(ValueError):
        TermFamily("XX")


def test_f_freq_as_structure():
    w_s = W_L - W_T
    freqs = KernelFrequencies(W_L, W_L, w_s)
    r = f_freq_AS(freqs, 2 * W_L - w_s, MODE)
    assert r.conservation_defect == pytest.approx(0.0, abs=1e-3)
    # on resonance the conserving amplitude is 2 pi / (i gamma/2)
    assert r.conserving_amplitude == pytest.approx(2 * math.pi / (0.5j * G), rel=1e-9)
    off = f_freq_AS(freqs, 2 * W_L - w_s + 10 * G, MODE)
    assert off.conservation_defect == pytest.approx(-10 * G, rel=1e-6)


@pytest.mark.parametrize("detune", [0.0, 3.0, -40.0])
def test_windowed_fourier_oracle(detune, backend):
    # at the conserving frequency the window integral grows as T / d
    w_s = W_L - W_T - cm1_to_rad_s(detune)
    freqs = KernelFrequencies(W_L, W_L, w_s)
    a, d = kernel_coefficients("AS", freqs, MODE)
    t_max = 1e3 / G
    ft = windowed_fourier("AS", freqs, MODE, a, t_max)
    pref = f_freq_AS(freqs, a, MODE).conserving_amplitude / (2 * math.pi)
    assert abs(ft / t_max - pref) / abs(pref) < 1e-2
    assert pref == pytest.approx(1 / d, rel=1e-12)


def test_windowed_fourier_validation():
    with pytest.raises(ValueError):
        windowed_fourier("AS", resonant("AS"), MODE, W_L, -1.0)


def test_two_pi_c_constant():
    assert TWO_PI_C == pytest.approx(2 * math.pi * 2.99792458e10, rel=1e-15)
