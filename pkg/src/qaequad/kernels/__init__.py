"""Hot inner loops, dispatched to numba when available.

Set ``QAEQUAD_NUMBA=0`` in the environment to force the pure-numpy path
(useful for debugging and for platforms without an LLVM toolchain).
The choice is made once, at import time.
"""
import os

from . import _numpy as numpy_impl

try:
    from . import _numba as numba_impl
except ImportError:  # numba not installed
    numba_impl = None

_wanted = os.environ.get("QAEQUAD_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

if _wanted and numba_impl is not None:
    _impl = numba_impl
    BACKEND = "numba"
else:
    _impl = numpy_impl
    BACKEND = "numpy"

subset_mobius = _impl.subset_mobius
subset_zeta = _impl.subset_zeta
walsh_hadamard = _impl.walsh_hadamard
apply_ry = _impl.apply_ry
apply_x = _impl.apply_x
apply_h = _impl.apply_h
flip_sign_zero = _impl.flip_sign_zero
flip_sign_bit = _impl.flip_sign_bit
prob_bit_one = _impl.prob_bit_one
loglik_grid = _impl.loglik_grid

__all__ = [
    "BACKEND", "numpy_impl", "numba_impl",
    "subset_mobius", "subset_zeta", "walsh_hadamard",
    "apply_ry", "apply_x", "apply_h", "flip_sign_zero", "flip_sign_bit",
    "prob_bit_one", "loglik_grid",
]
