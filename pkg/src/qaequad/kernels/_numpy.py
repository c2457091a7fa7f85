"""Pure-numpy kernels.

Every function here has a twin in ``_numba`` with the same signature and
the same in-place semantics; tests run both and compare.
"""
import numpy as np


# -- Boolean-lattice transforms ---------------------------------------------

def subset_mobius(a):
    """In-place Möbius inversion over the subset lattice (n passes)."""
    size = a.shape[0]
    h = 1
    while h < size:
        view = a.reshape(-1, 2, h)
        view[:, 1, :] -= view[:, 0, :]
        h <<= 1
    return a


def subset_zeta(a):
    """In-place subset-sum (zeta) transform, inverse of ``subset_mobius``."""
    size = a.shape[0]
    h = 1
    while h < size:
        view = a.reshape(-1, 2, h)
        view[:, 1, :] += view[:, 0, :]
        h <<= 1
    return a


def walsh_hadamard(a):
    """In-place unnormalised Walsh-Hadamard transform (natural order)."""
    size = a.shape[0]
    h = 1
    while h < size:
        view = a.reshape(-1, 2, h)
        lo = view[:, 0, :].copy()
        hi = view[:, 1, :]
        view[:, 0, :] = lo + hi
        view[:, 1, :] = lo - hi
        h <<= 1
    return a


# -- statevector gates --------------------------------------------------------

def _pair_indices(size, target, cmask):
    idx = np.arange(size)
    tbit = 1 << target
    sel = idx[((idx & tbit) == 0) & ((idx & cmask) == cmask)]
    return sel, sel | tbit


def apply_ry(state, target, cmask, angle):
    """RY(angle) on ``target`` wherever all bits of ``cmask`` are set."""
    lo, hi = _pair_indices(state.shape[0], target, cmask)
    c = np.cos(0.5 * angle)
    s = np.sin(0.5 * angle)
    a0 = state[lo]
    a1 = state[hi]
    state[lo] = c * a0 - s * a1
    state[hi] = s * a0 + c * a1
    return state


def apply_x(state, target, cmask):
    lo, hi = _pair_indices(state.shape[0], target, cmask)
    a0 = state[lo]
    state[lo] = state[hi]
    state[hi] = a0
    return state


def apply_h(state, target):
    lo, hi = _pair_indices(state.shape[0], target, 0)
    r = 1.0 / np.sqrt(2.0)
    a0 = state[lo]
    a1 = state[hi]
    state[lo] = r * (a0 + a1)
    state[hi] = r * (a0 - a1)
    return state


def flip_sign_zero(state):
    state[0] = -state[0]
    return state


def flip_sign_bit(state, qubit):
    idx = np.arange(state.shape[0])
    mask = (idx >> qubit) & 1 == 1
    state[mask] = -state[mask]
    return state


def prob_bit_one(state, qubit):
    idx = np.arange(state.shape[0])
    mask = (idx >> qubit) & 1 == 1
    amp = state[mask]
    return float(np.sum(amp.real ** 2 + amp.imag ** 2))


# -- MLAE likelihood ----------------------------------------------------------

def loglik_grid(thetas, ks, shots, hits, p_floor):
    """Log-likelihood at each angle in ``thetas`` for the recorded levels."""
    out = np.zeros(thetas.shape[0])
    for k, n_k, m_k in zip(ks, shots, hits):
        p = np.sin((2 * k + 1) * thetas) ** 2
        p = np.clip(p, p_floor, 1.0 - p_floor)
        out += m_k * np.log(p) + (n_k - m_k) * np.log1p(-p)
    return out
