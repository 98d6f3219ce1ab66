import os
import subprocess
import sys

import numpy as np
import pytest

from sasfwm import _accel, _kernels

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


@needs_numba
def test_f_time_trace_agrees():
    rng = np.random.default_rng(0)
    t = np.sort(rng.uniform(0, 3e-11, 5000))
    t[0] = 0.0
    for d_re in (0.0, 1e6, -4e13):
        a, d_im = 2.9e15, 1.67e11
        ref = _kernels.f_time_trace_np(a, d_re, d_im, t)
        got = _kernels.f_time_trace_nb(a, d_re, d_im, t)
        np.testing.assert_allclose(got, ref, rtol=1e-12, atol=1e-12 * np.max(np.abs(ref)))


@needs_numba
def test_windowed_transform_agrees():
    args = (2.9e15, 3e11, 1.67e11, 2.9e15, 3e-9, 20_000)
    ref = _kernels.windowed_transform_np(*args)
    got = _kernels.windowed_transform_nb(*args)
    assert abs(got - ref) <= 1e-10 * abs(ref)


@needs_numba
def test_chi3_grid_agrees():
    shifts = np.linspace(300, 2400, 10_001)
    for sign in (1.0, -1.0):
        ref = _kernels.chi3_grid_np(171.0, 3.0, 0.37, -0.07, 1332.0, 1.77, sign, shifts)
        got = _kernels.chi3_grid_nb(171.0, 3.0, 0.37, -0.07, 1332.0, 1.77, sign, shifts)
        for r, g in zip(ref, got):
            np.testing.assert_allclose(g, r, rtol=1e-14, atol=0)


def test_backend_switching():
    before = _accel.get_backend()
    with _accel.use_backend("numpy"):
        assert _accel.get_backend() == "numpy"
    assert _accel.get_backend() == before
    with pytest.raises(ValueError):
        _accel.set_backend("cuda")


@pytest.mark.parametrize("value, expected", [("numpy", "numpy"), ("NumPy", "numpy"), ("numba", None)])
def test_env_flag_selects_backend(value, expected):
    env = dict(os.environ, SAS_FWM_BACKEND=value)
    proc = subprocess.run([sys.executable, "-c", "from sasfwm import get_backend; print(get_backend())"],
                          env=env, capture_output=True, text=True, check=True)
    want = expected or ("numba" if _accel.HAVE_NUMBA else "numpy")
    assert proc.stdout.strip() == want


def test_unknown_env_value_falls_back_with_warning():
    env = dict(os.environ, SAS_FWM_BACKEND="fortran")
    proc = subprocess.run([sys.executable, "-W", "always", "-c",
                           "from sasfwm import get_backend; print(get_backend())"],
                          env=env, capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "numpy"
    assert "not recognised" in proc.stderr
