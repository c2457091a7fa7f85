"""numba-compiled kernels; same contracts as ``_numpy``."""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def subset_mobius(a):
    size = a.shape[0]
    h = 1
    while h < size:
        for block in range(0, size, 2 * h):
            for j in range(block, block + h):
                a[j + h] -= a[j]
        h <<= 1
    return a


@njit(cache=True)
def subset_zeta(a):
    size = a.shape[0]
    h = 1
    while h < size:
        for block in range(0, size, 2 * h):
            for j in range(block, block + h):
                a[j + h] += a[j]
        h <<= 1
    return a


@njit(cache=True)
def walsh_hadamard(a):
    size = a.shape[0]
    h = 1
    while h < size:
        for block in range(0, size, 2 * h):
            for j in range(block, block + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h <<= 1
    return a


@njit(cache=True)
def apply_ry(state, target, cmask, angle):
    c = math.cos(0.5 * angle)
    s = math.sin(0.5 * angle)
    tbit = 1 << target
    for i in range(state.shape[0]):
        if (i & tbit) == 0 and (i & cmask) == cmask:
            a0 = state[i]
            a1 = state[i | tbit]
            state[i] = c * a0 - s * a1
            state[i | tbit] = s * a0 + c * a1
    return state


@njit(cache=True)
def apply_x(state, target, cmask):
    tbit = 1 << target
    for i in range(state.shape[0]):
        if (i & tbit) == 0 and (i & cmask) == cmask:
            a0 = state[i]
            state[i] = state[i | tbit]
            state[i | tbit] = a0
    return state


@njit(cache=True)
def apply_h(state, target):
    r = 1.0 / math.sqrt(2.0)
    tbit = 1 << target
    for i in range(state.shape[0]):
        if (i & tbit) == 0:
            a0 = state[i]
            a1 = state[i | tbit]
            state[i] = r * (a0 + a1)
            state[i | tbit] = r * (a0 - a1)
    return state


@njit(cache=True)
def flip_sign_zero(state):
    state[0] = -state[0]
    return state


@njit(cache=True)
def flip_sign_bit(state, qubit):
    for i in range(state.shape[0]):
        if (i >> qubit) & 1 == 1:
            state[i] = -state[i]
    return state


@njit(cache=True)
def prob_bit_one(state, qubit):
    total = 0.0
    for i in range(state.shape[0]):
        if (i >> qubit) & 1 == 1:
            z = state[i]
            total += z.real * z.real + z.imag * z.imag
    return total


@njit(cache=True)
def loglik_grid(thetas, ks, shots, hits, p_floor):
    out = np.zeros(thetas.shape[0])
    for j in range(thetas.shape[0]):
        acc = 0.0
        for r in range(ks.shape[0]):
            p = math.sin((2 * ks[r] + 1) * thetas[j]) ** 2
            if p < p_floor:
                p = p_floor
            elif p > 1.0 - p_floor:
                p = 1.0 - p_floor
            acc += hits[r] * math.log(p) + (shots[r] - hits[r]) * math.log1p(-p)
        out[j] = acc
    return out
