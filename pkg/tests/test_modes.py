import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from sasfwm.kernel import TermFamily
from sasfwm.modes import (CouplingConstants, DispersionModel, FwmTerm, OpticalMode, alpha_bar,
                          diamond_dispersion, enumerate_first_order, enumerate_zeroth_order, finite_volume_factor,
                          frequency_from_wavevector, optical_mode, phase_mismatch, raman_amplitude,
                          refractive_index, scattering_wavevectors, wavevector_magnitude)
from sasfwm.phonon import PhononMode
from sasfwm.units import cm1_to_rad_s

C = 299792458.0
W_L = cm1_to_rad_s(1e7 / 633.0)


def test_vacuum_and_trivial_sellmeier():
    vac = DispersionModel.constant(1.0)
    assert wavevector_magnitude(vac, W_L) == pytest.approx(W_L / C, rel=1e-15)
    zero = DispersionModel.from_sellmeier([(0.0, 0.01)])
    assert refractive_index(zero, W_L) == 1.0


def test_diamond_index_by_hand():
    d = diamond_dispersion()
    lam = 0.633
    n2 = 1 + 0.3306 * lam**2 / (lam**2 - 0.175**2) + 4.3356 * lam**2 / (lam**2 - 0.106**2)
    w = 2 * math.pi * C / (lam * 1e-6)
    assert refractive_index(d, w) == pytest.approx(math.sqrt(n2), rel=1e-12)
    assert 2.40 < refractive_index(d, w) < 2.42


def test_sellmeier_normal_dispersion():
    # n^2 decreases with wavelength away from poles: dn^2/dlam = -sum 2 B C lam / (lam^2 - C)^2 < 0
    d = diamond_dispersion()
    w = 2 * math.pi * C / (np.geomspace(0.25, 20.0, 200) * 1e-6)
    n = [refractive_index(d, x) for x in np.sort(w)]
    assert np.all(np.diff(n) > 0)


def test_dispersion_errors():
    d = diamond_dispersion()
    with pytest.raises(ValueError, match="window"):
        refractive_index(d, 2 * math.pi * C / 0.1e-6)
    with pytest.raises(ValueError, match="pole"):
        refractive_index(DispersionModel.from_sellmeier([(1.0, 0.25)], window_um=(0.5, 5.0)), 2 * math.pi * C / 0.5e-6)
    with pytest.raises(ValueError):
        DispersionModel.constant(0.5)
    with pytest.raises(ValueError):
        DispersionModel("sellmeier")
    with pytest.raises(ValueError):
        DispersionModel.from_sellmeier([(-0.9, 0.01)], window_um=(0.2, 5.0))


@pytest.mark.parametrize("model", [DispersionModel.constant(1.5), diamond_dispersion()])
def test_frequency_inversion(model):
    for w in (W_L, 0.7 * W_L, 1.2 * W_L):
        k = wavevector_magnitude(model, w)
        assert frequency_from_wavevector(model, k) == pytest.approx(w, rel=1e-12)
    with pytest.raises(ValueError):
        frequency_from_wavevector(model, -1.0)


def test_optical_mode_on_dispersion():
    d = diamond_dispersion()
    pitch = wavevector_magnitude(d, W_L) / 1000.0
    m = optical_mode((0, 0, 1000), pitch, d)
    assert m.frequency == pytest.approx(W_L, rel=1e-12)
    assert m.satisfies_dispersion(d)
    assert not OpticalMode((0, 0, 1)).satisfies_dispersion(d)
    with pytest.raises(ValueError):
        OpticalMode((0, 1))


def test_phase_mismatch_basic():
    k = np.array([0.0, 0.0, 5.0])
    dk, norm = phase_mismatch(k, k, k, k)
    assert norm == 0.0 and dk.shape == (3,)
    dk, norm = phase_mismatch([1, 0, 0], [0, 1, 0], [0, 0, 0], [0, 0, 0])
    assert norm == pytest.approx(math.sqrt(2))


def test_constant_index_collinear_degenerate_is_matched():
    d = DispersionModel.constant(2.4)
    k_l, k_lp, k_s, k_a = scattering_wavevectors(d, W_L, 1332.0)
    _, norm = phase_mismatch(k_l, k_lp, k_s, k_a)
    assert norm <= 1e-15 * np.linalg.norm(k_l)


def test_diamond_collinear_mismatch_by_hand():
    d = diamond_dispersion()
    big_w = cm1_to_rad_s(1332.0)

    def k_of(w):
        lam = 2 * math.pi * C / w * 1e6
        n = math.sqrt(1 + 0.3306 * lam**2 / (lam**2 - 0.175**2) + 4.3356 * lam**2 / (lam**2 - 0.106**2))
        return n * w / C

    want = 2 * k_of(W_L) - k_of(W_L - big_w) - k_of(W_L + big_w)
    dk, norm = phase_mismatch(*scattering_wavevectors(d, W_L, 1332.0))
    assert norm > 0
    assert dk[2] == pytest.approx(want, rel=1e-6)
    # normal dispersion: the pump pair carries less momentum than the S/A pair
    assert want < 0


def test_noncollinear_geometry():
    d = diamond_dispersion()
    k_l, _, k_s, k_a = scattering_wavevectors(d, W_L, 1332.0, angle_rad=0.01)
    assert k_s[0] > 0 > k_a[0]
    assert np.linalg.norm(k_s) == pytest.approx(wavevector_magnitude(d, W_L - cm1_to_rad_s(1332.0)))


def test_finite_volume_factor_zeros_and_half_power():
    box = (1e-3, 2e-3, 5e-4)
    assert finite_volume_factor([0, 0, 0], box) == 1.0
    assert abs(finite_volume_factor([2 * math.pi / 1e-3, 0, 0], box)) <= 1e-12
    assert abs(finite_volume_factor([0, 0, 4 * math.pi / 5e-4], box)) <= 1e-12
    # sinc^2(u) = 1/2, solved independently
    u = brentq(lambda u: (math.sin(u) / u) ** 2 - 0.5, 0.5, 2.0)
    assert u == pytest.approx(1.39156, abs=1e-5)
    assert finite_volume_factor([2 * u / 1e-3, 0, 0], box) ** 2 == pytest.approx(0.5, rel=1e-12)
    with pytest.raises(ValueError):
        finite_volume_factor([0, 0, 0], (1, 1))


@settings(max_examples=30, deadline=None)
@given(st.floats(1.0, 1e5))
def test_finite_volume_decays_with_box(dk):
    # for fixed dk != 0 the envelope |sinc| <= 2 / (dk L) -> 0 as the box grows
    for L in (1e-2, 1e-1, 1.0, 10.0):
        f = abs(finite_volume_factor([dk, 0, 0], (L, 1.0, 1.0)))
        assert f <= min(1.0, 2.0 / (dk * L)) + 1e-15


def test_alpha_bar_and_raman_amplitude():
    mode = PhononMode(1332.0, 1.77, mass=2e-26)
    cc = CouplingConstants(1.76e29, 1e-40, 1e-12)
    assert alpha_bar(cc, mode, 0.0) == 0
    full = alpha_bar(cc, mode, 1.0)
    assert alpha_bar(cc, mode, -0.5) == pytest.approx(-0.5 * full)
    expected = (math.sqrt(2 * math.pi / mode.gamma_rad_s) * 1e-12 / (2 * 2e-26 * mode.omega_0_rad_s)
                * 1.76e29 * 8.8541878128e-12 * 1e-40)
    assert full == pytest.approx(expected, rel=1e-14)
    a = [1 + 1j, 2.0]
    assert raman_amplitude(a, a) == pytest.approx(6.0)
    assert raman_amplitude([1j], [1.0]) == 1j
    with pytest.raises(ValueError):
        alpha_bar(cc, PhononMode(1332.0, 1.77), 1.0)
    with pytest.raises(ValueError):
        alpha_bar(cc, mode, 1.5)


LASER_SETS = {1: [(0, 0, 10)], 2: [(0, 0, 10), (0, 1, 10)], 3: [(0, 0, 10), (0, 1, 10), (1, 0, 9)]}
Q_SETS = {1: [(0, 0, 1)], 5: [(0, 0, 1), (0, 0, 2), (1, 0, 1), (0, -1, 3), (2, 2, 0)]}


@pytest.mark.parametrize("nl", [1, 2, 3])
@pytest.mark.parametrize("nq", [1, 5])
def test_term_counts(nl, nq):
    first = enumerate_first_order(LASER_SETS[nl], Q_SETS[nq])
    zeroth = enumerate_zeroth_order(LASER_SETS[nl], Q_SETS[nq])
    assert len(first) == 8 * nl * nl * nq
    assert len(zeroth) == 4 * nl * nq
    fams = Counter(t.family for t in first)
    assert set(fams.values()) == {2 * nl * nl * nq}


def test_term_invariants():
    terms = enumerate_first_order(LASER_SETS[3], Q_SETS[5])
    for t in terms:
        k_l, k_lp = t.laser_modes
        q = t.phonon_q
        add = lambda u, v, s=1: tuple(a + s * b for a, b in zip(u, v))  # noqa: E731
        if t.family is TermFamily.AS:
            assert t.polarization_mode == add(k_l, q)
            assert t.scattered_operator_mode == add(k_lp, q, -1)
            assert t.scattered_creation
        if t.family in (TermFamily.AS, TermFamily.SA):
            assert add(k_l, k_lp) == add(t.scattered_operator_mode, t.polarization_mode)
        if t.hermitian_conjugate:
            assert str(t.kernel) in ("--+", "-+-")
        rec = t.to_record()
        assert not any("occupation" in key or "state" in key for key in rec)
        assert not any("occupation" in f or "state" in f for f in FwmTerm.__dataclass_fields__)


def test_swapping_lasers_maps_as_to_sa():
    # AS for (l, l', q) and SA for (l', l, -q): same polarization/scattered momenta with roles traded
    terms = enumerate_first_order(LASER_SETS[2], [(0, 0, 1), (0, 0, -1)])
    by_key = {(t.family, t.laser_modes, t.phonon_q, t.hermitian_conjugate): t for t in terms}
    for t in terms:
        if t.family is TermFamily.AS and not t.hermitian_conjugate:
            k_l, k_lp = t.laser_modes
            neg_q = tuple(-x for x in t.phonon_q)
            sa = by_key[(TermFamily.SA, (k_l, k_lp), neg_q, False)]
            assert sa.polarization_mode == t.polarization_mode
            assert sa.scattered_operator_mode == t.scattered_operator_mode


def test_enumeration_is_canonical_and_deterministic():
    a = enumerate_first_order(list(reversed(LASER_SETS[3])), list(reversed(Q_SETS[5])))
    b = enumerate_first_order(LASER_SETS[3], Q_SETS[5])
    assert [t.to_record() for t in a] == [t.to_record() for t in b]
    keys = [(t.laser_modes, t.phonon_q) for t in b]
    assert keys == sorted(keys)


def test_zeroth_order_records():
    terms = enumerate_zeroth_order([(0, 0, 10)], [(0, 0, 1)])
    kinds = [(t.kind, t.phonon_creation, t.hermitian_conjugate) for t in terms]
    assert kinds == [("stokes", True, False), ("stokes", True, True),
                     ("anti-stokes", False, False), ("anti-stokes", False, True)]
    assert terms[0].polarization_mode == (0, 0, 9)
    assert terms[2].polarization_mode == (0, 0, 11)
    assert all(t.to_record()["material_state_sensitive"] for t in terms)


def test_terms_with_dispersion_carry_frequencies():
    d = DispersionModel.constant(2.4)
    pitch = wavevector_magnitude(d, W_L) / 1000
    laser = optical_mode((0, 0, 1000), pitch, d)
    terms = enumerate_first_order([laser], [(0, 0, 1)], dispersion=d)
    assert all(t.frequencies is not None for t in terms)
    assert terms[0].frequencies.omega_l == pytest.approx(W_L, rel=1e-12)
    assert "omega_scattered_rad_s" in terms[0].to_record()


def test_enumeration_rejects_empty():
    with pytest.raises(ValueError):
        enumerate_first_order([], [(0, 0, 1)])
    with pytest.raises(ValueError):
        enumerate_zeroth_order([(0, 0, 1)], [])
