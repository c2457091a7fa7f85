"""Both kernel backends must agree bit-for-bit in semantics (to round-off)."""
import math

import numpy as np
import pytest

from qaequad import kernels

pytestmark = pytest.mark.skipif(kernels.numba_impl is None, reason="numba not installed")

NP, NB = kernels.numpy_impl, kernels.numba_impl


@pytest.mark.parametrize("name", ["subset_mobius", "subset_zeta", "walsh_hadamard"])
@pytest.mark.parametrize("n", [1, 3, 7])
def test_transforms_agree(name, n, rng):
    a = rng.normal(size=1 << n)
    x, y = a.copy(), a.copy()
    getattr(NP, name)(x)
    getattr(NB, name)(y)
    np.testing.assert_allclose(x, y, rtol=0, atol=1e-12)


def _state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_gates_agree(n, rng):
    for _ in range(20):
        v = _state(rng, n)
        t = int(rng.integers(n))
        others = [q for q in range(n) if q != t]
        cmask = sum(1 << q for q in others if rng.random() < 0.5)
        ang = float(rng.uniform(-7, 7))
        for fn, args in (("apply_ry", (t, cmask, ang)), ("apply_x", (t, cmask)),
                         ("apply_h", (t,)), ("flip_sign_zero", ()), ("flip_sign_bit", (t,))):
            x, y = v.copy(), v.copy()
            getattr(NP, fn)(x, *args)
            getattr(NB, fn)(y, *args)
            np.testing.assert_allclose(x, y, rtol=0, atol=1e-13)
        assert math.isclose(NP.prob_bit_one(v, t), NB.prob_bit_one(v, t), abs_tol=1e-14)


def test_loglik_agrees(rng):
    th = np.linspace(0, math.pi / 2, 513)
    ks = np.array([0, 1, 3], dtype=np.int64)
    ns = np.array([100.0, 50.0, 30.0])
    ms = np.array([37.0, 12.5, 30.0])
    np.testing.assert_allclose(NP.loglik_grid(th, ks, ns, ms, 1e-12),
                               NB.loglik_grid(th, ks, ns, ms, 1e-12), rtol=1e-12, atol=1e-9)


def test_backend_flag_is_reported():
    assert kernels.BACKEND in ("numba", "numpy")
