import itertools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


# -- independent oracles (no package code) ------------------------------------

def brute_mobius(theta):
    """c_S = sum over T subset of S of (-1)^{|S|-|T|} theta_T, by explicit enumeration."""
    size = len(theta)
    out = np.zeros(size)
    for s in range(size):
        t = s
        while True:
            out[s] += (-1) ** (bin(s).count("1") - bin(t).count("1")) * theta[t]
            if t == 0:
                break
            t = (t - 1) & s
    return out


I2 = np.eye(2)
XM = np.array([[0, 1], [1, 0]], dtype=complex)
HM = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
P0 = np.diag([1, 0]).astype(complex)
P1 = np.diag([0, 1]).astype(complex)


def ry_matrix(angle):
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def embed(ops, n):
    """Tensor product with qubit q as bit q (qubit 0 is the rightmost factor)."""
    m = np.array([[1.0 + 0j]])
    for q in reversed(range(n)):
        m = np.kron(m, ops.get(q, I2))
    return m


def controlled(controls, target, u, n):
    """Sum over control patterns: U on target only when every control is 1."""
    total = np.zeros((1 << n, 1 << n), dtype=complex)
    for pattern in itertools.product((0, 1), repeat=len(controls)):
        ops = {c: (P1 if b else P0) for c, b in zip(controls, pattern)}
        if all(pattern):
            ops[target] = u
        total += embed(ops, n)
    return total


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
