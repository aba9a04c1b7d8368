"""Compiled and pure numerical cores must agree within their estimates."""

import cmath
import math

import numpy as np
import pytest

from ftjc import _mlpure
from ftjc._backend import backend_name

try:
    from ftjc import _mlcore
except ImportError:
    _mlcore = None

needs_compiled = pytest.mark.skipif(
    _mlcore is None, reason="compiled core not built")


def test_backend_name_is_known():
    assert backend_name() in ("compiled", "pure")


def test_pure_core_always_importable():
    val, est, code = _mlpure.ml_eval(0.5, complex(-1.0), 1e-11)
    assert abs(val - 0.4275835761558070044) <= 1e-11
    assert est <= 1e-11


@needs_compiled
def test_cores_agree_across_the_plane():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(150):
        alpha = float(rng.uniform(0.25, 1.0))
        radius = min(20.0, 0.8 * 705.0 ** alpha)
        r = float(rng.uniform(0.0, radius))
        phi = float(rng.uniform(-math.pi, math.pi))
        z = r * cmath.exp(1j * phi)
        va, ea, _ = _mlcore.ml_eval(alpha, z, 1e-10)
        vb, eb, _ = _mlpure.ml_eval(alpha, z, 1e-10)
        scale = max(abs(va), abs(vb), 1e-300)
        diff = abs(va - vb) / scale
        budget = 3.0 * (ea + eb + 1e-15)
        assert diff <= budget, f"alpha={alpha}, z={z}: {diff:.3e} > {budget:.3e}"
        worst = max(worst, diff)
    assert worst < 1e-9


@needs_compiled
def test_cores_agree_on_gamma():
    for x in (0.1, 0.5, 1.0, 2.5, 17.0, 101.25, 140.0):
        a = _mlcore.gamma_real(x)
        b = _mlpure.gamma_real(x)
        assert abs(a - b) <= 4e-16 * abs(b)


@needs_compiled
def test_cores_agree_vectorized():
    zs = np.array([0.2 + 0.3j, -4.0, 2.0j, -0.5 - 2.5j, 6.0 - 6.0j])
    va, ea, ca = _mlcore.ml_eval_many(0.6, zs, 1e-11)
    vb, eb, cb = _mlpure.ml_eval_many(0.6, zs, 1e-11)
    va = np.asarray(va)
    vb = np.asarray(vb)
    assert np.all(np.abs(va - vb) <= 3.0 * (np.asarray(ea) + np.asarray(eb) + 1e-15)
                  * np.maximum(np.abs(vb), 1.0))
    assert np.array_equal(np.asarray(ca), np.asarray(cb))
