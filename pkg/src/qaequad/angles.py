"""Angle tables on the n-bit grid and their multilinear expansions.

Arrays are indexed little-endian: position ``i`` holds bit-string ``b``
with ``i = sum(b_k * 2**k)``.  A subset ``S`` of bit positions is stored as
the integer mask with bit ``k`` set iff ``k`` is in ``S``, so the
coefficient of ``S`` lives at array position ``mask``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels

DEFAULT_ZERO_TOL = 1e-9
MAX_QUBITS = 24


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _popcounts(size: int) -> np.ndarray:
    idx = np.arange(size, dtype=np.int64)
    counts = np.zeros(size, dtype=np.int64)
    while idx.any():
        counts += idx & 1
        idx >>= 1
    return counts


def _log2_exact(size: int) -> int:
    if size < 1 or size & (size - 1):
        raise ValueError(f"table length {size} is not a power of two")
    return size.bit_length() - 1


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``2**n_qubits`` points ``(i + sample_offset) / 2**n``."""

    n_qubits: int
    sample_offset: Fraction = Fraction(0)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must lie in [1, {MAX_QUBITS}], got {self.n_qubits}")
        object.__setattr__(self, "sample_offset", Fraction(self.sample_offset))
        if not 0 <= self.sample_offset <= 1:
            raise ValueError("sample_offset must lie in [0, 1]")

    @property
    def size(self) -> int:
        return 1 << self.n_qubits

    def points(self) -> np.ndarray:
        return (np.arange(self.size) + float(self.sample_offset)) / self.size


@dataclass(frozen=True)
class GridFunction:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.size,):
            raise ValueError(f"expected {self.grid.size} values, got shape {values.shape}")
        bad = np.flatnonzero((values < 0.0) | (values > 1.0) | ~np.isfinite(values))
        if bad.size:
            i = int(bad[0])
            raise ValueError(f"value at index {i} is {values[i]!r}, outside [0, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values, sample_offset=0) -> "GridFunction":
        values = np.asarray(values, dtype=float)
        return cls(GridSpec(_log2_exact(values.shape[0]), Fraction(sample_offset)), values)

    @property
    def n_qubits(self) -> int:
        return self.grid.n_qubits


@dataclass(frozen=True)
class AngleTable:
    n_qubits: int
    theta: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        if theta.shape != (1 << self.n_qubits,):
            raise ValueError(f"expected {1 << self.n_qubits} angles, got shape {theta.shape}")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_angles(cls, theta) -> "AngleTable":
        theta = np.asarray(theta, dtype=float)
        return cls(_log2_exact(theta.shape[0]), theta)

    def in_range(self, atol: float = 1e-12) -> bool:
        return bool(np.all((self.theta >= -atol) & (self.theta <= np.pi + atol)))

    def to_json(self) -> str:
        return json.dumps({"n": self.n_qubits, "values": self.theta.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "AngleTable":
        obj = json.loads(text)
        return cls(int(obj["n"]), np.asarray(obj["values"], dtype=float))


@dataclass(frozen=True)
class MultilinearExpansion:
    """Coefficients of ``sum_S coeff[S] * prod_{j in S} b_j``."""

    n_qubits: int
    coeff: np.ndarray
    zero_tol: float = DEFAULT_ZERO_TOL

    def __post_init__(self):
        coeff = np.asarray(self.coeff, dtype=float)
        if coeff.shape != (1 << self.n_qubits,):
            raise ValueError(f"expected {1 << self.n_qubits} coefficients, got shape {coeff.shape}")
        coeff.setflags(write=False)
        object.__setattr__(self, "coeff", coeff)

    @property
    def degree(self) -> int:
        return degree(self, self.zero_tol)

    def support(self, zero_tol: float | None = None) -> list[int]:
        """Masks of non-negligible coefficients, ordered by (|S|, mask)."""
        tol = self.zero_tol if zero_tol is None else zero_tol
        masks = np.flatnonzero(np.abs(self.coeff) > tol)
        return sorted((int(m) for m in masks), key=lambda m: (popcount(m), m))

    def to_json(self) -> str:
        return json.dumps({"n": self.n_qubits, "values": self.coeff.tolist()})

    @classmethod
    def from_json(cls, text: str, zero_tol: float = DEFAULT_ZERO_TOL) -> "MultilinearExpansion":
        obj = json.loads(text)
        return cls(int(obj["n"]), np.asarray(obj["values"], dtype=float), zero_tol)


@dataclass
class MembershipReport:
    d: int
    member: bool
    degree: int
    coeff: np.ndarray
    violations: list[tuple[int, float]] = field(default_factory=list)
    affine_residuals: dict[int, float] | None = None

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "member": self.member,
            "degree": self.degree,
            "n": int(self.coeff.shape[0]).bit_length() - 1,
            "coeff": self.coeff.tolist(),
            "violations": [{"subset_mask": m, "coeff": c} for m, c in self.violations],
        }
        if self.affine_residuals is not None:
            out["affine_residuals"] = [
                {"subset_mask": m, "residual": r} for m, r in self.affine_residuals.items()
            ]
        return out


def build_angle_table(f: GridFunction) -> AngleTable:
    # GridFunction already guarantees values in [0, 1]; re-check for raw arrays
    values = np.asarray(f.values, dtype=float)
    bad = np.flatnonzero((values < 0.0) | (values > 1.0))
    if bad.size:
        raise ValueError(f"value at index {int(bad[0])} outside [0, 1]")
    return AngleTable(f.n_qubits, 2.0 * np.arcsin(np.sqrt(values)))


def mobius_transform(t: AngleTable, zero_tol: float = DEFAULT_ZERO_TOL) -> MultilinearExpansion:
    work = np.array(t.theta, dtype=float, copy=True)
    kernels.subset_mobius(work)
    return MultilinearExpansion(t.n_qubits, work, zero_tol)


def zeta_transform(e: MultilinearExpansion) -> AngleTable:
    work = np.array(e.coeff, dtype=float, copy=True)
    kernels.subset_zeta(work)
    return AngleTable(e.n_qubits, work)


def degree(e: MultilinearExpansion, zero_tol: float = DEFAULT_ZERO_TOL) -> int:
    if zero_tol <= 0:
        raise ValueError("zero_tol must be positive")
    big = np.flatnonzero(np.abs(e.coeff) > zero_tol)
    if big.size == 0:
        return 0
    return int(_popcounts(e.coeff.shape[0])[big].max())


def walsh_sums(t: AngleTable) -> np.ndarray:
    """``sum_b (-1)^{|S & supp(b)|} theta_b`` for every mask S (unnormalised)."""
    work = np.array(t.theta, dtype=float, copy=True)
    kernels.walsh_hadamard(work)
    return work


def check_membership(f: GridFunction | AngleTable, d: int,
                     zero_tol: float = DEFAULT_ZERO_TOL) -> MembershipReport:
    table = f if isinstance(f, AngleTable) else build_angle_table(f)
    n = table.n_qubits
    if not 0 <= d <= n:
        raise ValueError(f"d must lie in [0, {n}], got {d}")
    e = mobius_transform(table, zero_tol)
    sizes = _popcounts(table.theta.shape[0])
    bad = np.flatnonzero((sizes > d) & (np.abs(e.coeff) > zero_tol))
    violations = [(int(m), float(e.coeff[m])) for m in bad]
    residuals = None
    if d == 1:
        w = walsh_sums(table)
        residuals = {int(m): float(w[m]) for m in np.flatnonzero(sizes >= 2)}
    deg = degree(e, zero_tol)
    return MembershipReport(d=d, member=deg <= d, degree=deg, coeff=e.coeff,
                            violations=violations, affine_residuals=residuals)


def pm1_degree(t: AngleTable, zero_tol: float = DEFAULT_ZERO_TOL) -> int:
    """Degree read off the parity (±1) basis via the orthonormal WHT.

    The orthonormal transform scales a top-degree coefficient by
    ``2**(n/2 - |S|)`` relative to the Möbius one, so the tolerance is
    scaled by ``2**(-n/2)`` to keep both notions of "non-zero" aligned.
    """
    n = t.n_qubits
    w = walsh_sums(t) * 2.0 ** (-n / 2.0)
    big = np.flatnonzero(np.abs(w) > zero_tol * 2.0 ** (-n / 2.0))
    if big.size == 0:
        return 0
    return int(_popcounts(w.shape[0])[big].max())


def monomial_table(n: int, mask: int, scale: float = np.pi) -> AngleTable:
    """``scale * prod_{j in S} b_j`` as an angle table."""
    idx = np.arange(1 << n)
    return AngleTable(n, np.where((idx & mask) == mask, scale, 0.0))


def addition_table(theta_g: AngleTable, theta_h: AngleTable) -> AngleTable:
    """Joint table ``(b, beta) -> (1 - beta) * theta_g(b) + beta * theta_h(b)``.

    ``beta`` is bit ``n`` (most significant).  Its degree is an empirical
    quantity; no bound is asserted here.
    """
    if theta_g.n_qubits != theta_h.n_qubits:
        raise ValueError("tables must have the same size")
    return AngleTable(theta_g.n_qubits + 1, np.concatenate([theta_g.theta, theta_h.theta]))
