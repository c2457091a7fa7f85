"""Monomial-factorisation encoding, amplitude oracle, Grover powers, and cost accounting."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .angles import DEFAULT_ZERO_TOL, MultilinearExpansion, popcount
from .simulator import (
    CNOT, MCRY, Circuit, ConsistencyError, Gate, H, ReflectAncilla1, ReflectZero,
)


def _ordered_masks(n: int, max_size: int) -> list[int]:
    masks = [m for m in range(1 << n) if popcount(m) <= max_size]
    return sorted(masks, key=lambda m: (popcount(m), m))


def _controls(mask: int) -> tuple[int, ...]:
    return tuple(j for j in range(mask.bit_length()) if mask >> j & 1)


@dataclass
class EncodingPlan:
    expansion: MultilinearExpansion
    degree_cap: int
    circuit: Circuit

    @property
    def gate_count(self) -> int:
        return len(self.circuit)

    @property
    def depth_layers(self) -> int:
        # every gate targets the shared ancilla, so nothing runs in parallel
        return len(self.circuit)


def plan_encoding(e: MultilinearExpansion, zero_tol: float = DEFAULT_ZERO_TOL,
                  keep_zeros: bool = False, degree_cap: int | None = None) -> EncodingPlan:
    n = e.n_qubits
    cap = e.degree if degree_cap is None else degree_cap
    anc = n
    gates = []
    for mask in _ordered_masks(n, cap):
        angle = float(e.coeff[mask])
        if not keep_zeros and abs(angle) <= zero_tol:
            continue
        gates.append(MCRY(_controls(mask), anc, angle))
    dropped = [m for m in range(1 << n) if popcount(m) > cap and abs(e.coeff[m]) > zero_tol]
    if dropped:
        raise ValueError(f"degree_cap {cap} drops non-negligible coefficients at masks {dropped[:5]}")
    return EncodingPlan(e, cap, Circuit(n + 1, tuple(gates), "G"))


def build_encoding(e: MultilinearExpansion, zero_tol: float = DEFAULT_ZERO_TOL,
                   keep_zeros: bool = False) -> Circuit:
    """One controlled RY per non-negligible coefficient, ordered by (|S|, mask).

    With ``keep_zeros`` every subset up to the expansion's degree gets a
    gate, even when its angle is zero.
    """
    return plan_encoding(e, zero_tol, keep_zeros).circuit


def hadamard_layer(n: int) -> Circuit:
    return Circuit(n + 1, tuple(H(j) for j in range(n)), "H")


def build_oracle(e: MultilinearExpansion, zero_tol: float = DEFAULT_ZERO_TOL,
                 keep_zeros: bool = False) -> Circuit:
    n = e.n_qubits
    enc = build_encoding(e, zero_tol, keep_zeros)
    return Circuit(n + 1, hadamard_layer(n).gates + enc.gates, "A")


def grover_iterate(oracle: Circuit) -> Circuit:
    """Q = A . S_0 . A^-1 . S_good, listed in application order.

    ``S_good`` flips the sign of ancilla-1 states; ``S_0`` flips the sign
    of the all-zeros state.  The global sign differs from the textbook
    convention, which leaves every measurement probability unchanged.
    """
    anc = oracle.n_qubits - 1
    gates = (ReflectAncilla1(anc),) + oracle.inverse().gates + (ReflectZero(),) + oracle.gates
    return Circuit(oracle.n_qubits, gates, "Q")


def build_grover_power(e: MultilinearExpansion, k: int, zero_tol: float = DEFAULT_ZERO_TOL,
                       keep_zeros: bool = False) -> Circuit:
    if k < 0:
        raise ValueError("k must be >= 0")
    a = build_oracle(e, zero_tol, keep_zeros)
    q = grover_iterate(a)
    return Circuit(a.n_qubits, a.gates + q.gates * k, f"Q^{k}A")


# -- decompositions -------------------------------------------------------------

def decompose_ccry(gate: Gate) -> Circuit:
    """Two-control RY as two CNOTs and two single-control RYs.

    Applied in order: C_j-RY(a/2), CNOT(k -> t), C_j-RY(-a/2), CNOT(k -> t),
    with ``j < k`` the two controls.
    """
    if gate.kind != "mcry" or len(gate.controls) != 2:
        raise ValueError("decompose_ccry expects an mcry gate with exactly two controls")
    j, k = gate.controls
    t = gate.target
    half = 0.5 * gate.angle
    width = max(gate.qubits()) + 1
    return Circuit(width, (MCRY((j,), t, half), CNOT(k, t), MCRY((j,), t, -half), CNOT(k, t)),
                   "ccry")


def decompose_mcry(gate: Gate) -> list[Gate]:
    """Recursively lower a multi-controlled RY to CNOTs and <=1-control RYs."""
    if gate.kind == "ry" or (gate.kind == "mcry" and len(gate.controls) <= 1):
        return [gate]
    if gate.kind != "mcry":
        return [gate]
    *rest, k = gate.controls
    t = gate.target
    half = 0.5 * gate.angle
    out = []
    out += decompose_mcry(MCRY(rest, t, half))
    out.append(CNOT(k, t))
    out += decompose_mcry(MCRY(rest, t, -half))
    out.append(CNOT(k, t))
    return out


def lower_circuit(c: Circuit) -> Circuit:
    gates = []
    for g in c.gates:
        gates += decompose_mcry(g)
    return Circuit(c.n_qubits, tuple(gates), c.label)


def _ry(f):
    c, s = math.cos(f / 2), math.sin(f / 2)
    return np.array([[c, -s], [s, c]])


def spin_echo_check(trials: int = 20, seed: int = 0, atol: float = 1e-12) -> bool:
    """Check RY(-f) Z RY(f) == RY(-2f) Z on random angles (plus 0, pi/3, pi)."""
    z = np.diag([1.0, -1.0])
    rng = np.random.default_rng(seed)
    angles = [0.0, math.pi / 3, math.pi] + list(rng.uniform(-2 * math.pi, 2 * math.pi, trials))
    for f in angles:
        lhs = _ry(-f) @ z @ _ry(f)
        rhs = _ry(-2 * f) @ z
        if not np.allclose(lhs, rhs, rtol=0.0, atol=atol):
            raise ConsistencyError(f"spin-echo identity fails at f={f!r}")
    return True


# -- cost accounting --------------------------------------------------------------

@dataclass(frozen=True)
class HardwareProfile:
    name: str
    line_depth_limit: float
    layer_cost: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.line_depth_limit > 0:
            raise ValueError("line_depth_limit must be positive")
        if any(v < 1 for v in self.layer_cost.values()):
            raise ValueError("layer costs must be >= 1")

    def cost(self, kind: str) -> float:
        return self.layer_cost.get(kind, 1)


# Calibrated model, not vendor data: costs chosen so that the k=0 encodings
# of g1/g2 at n=2 compile to ~4 / ~9 lines and every g2 level k >= 1
# exceeds 60 (with or without spin-echo, zeros kept or dropped).
TRIANGULUM60 = HardwareProfile(
    "triangulum60", 60,
    {"h_layer": 1, "ry": 1, "cry": 1, "x": 1, "cnot": 2,
     "reflect_ancilla1": 1, "reflect_zero": 44},
)
UNLIMITED = HardwareProfile("unlimited", math.inf, {})

PROFILES = {p.name: p for p in (TRIANGULUM60, UNLIMITED)}


@dataclass(frozen=True)
class GroverConfig:
    k_max: int = 0
    spin_echo: bool = False

    def __post_init__(self):
        if self.k_max < 0:
            raise ValueError("k_max must be >= 0")


def circuit_lines(c: Circuit, hw: HardwareProfile) -> float:
    """Compiled line count: consecutive H gates on distinct qubits share one line."""
    total = 0.0
    h_run: set[int] = set()
    for g in lower_circuit(c).gates:
        if g.kind == "h" and g.target not in h_run:
            if not h_run:
                total += hw.cost("h_layer")
            h_run.add(g.target)
            continue
        h_run = set()
        if g.kind == "h":
            total += hw.cost("h_layer")
            h_run.add(g.target)
        elif g.kind == "mcry":
            total += hw.cost("cry")
        else:
            total += hw.cost(g.kind)
    return total


@dataclass
class LevelCost:
    k: int
    encoding_applications: int
    mcry_gates: int
    expanded_gates: int
    lines: float
    feasible: bool | None = None

    def to_dict(self) -> dict:
        out = {"k": self.k, "encoding_applications": self.encoding_applications,
               "mcry_gates": self.mcry_gates, "expanded_gates": self.expanded_gates,
               "lines": self.lines}
        if self.feasible is not None:
            out["feasible"] = self.feasible
        return out


@dataclass
class CostBreakdown:
    gates_per_encoding: int
    spin_echo: bool
    profile: str
    levels: list[LevelCost]

    def to_dict(self) -> dict:
        return {"gates_per_encoding": self.gates_per_encoding, "spin_echo": self.spin_echo,
                "profile": self.profile, "levels": [lv.to_dict() for lv in self.levels]}


@dataclass
class FeasibilityReport:
    profile: str
    line_depth_limit: float
    levels: list[LevelCost]

    @property
    def feasible(self) -> list[bool]:
        return [bool(lv.feasible) for lv in self.levels]

    def to_dict(self) -> dict:
        limit = self.line_depth_limit
        return {"profile": self.profile,
                "line_depth_limit": None if math.isinf(limit) else limit,
                "k": [lv.k for lv in self.levels],
                "lines": [lv.lines for lv in self.levels],
                "feasible": self.feasible}


def encoding_cost(e: MultilinearExpansion, cfg: GroverConfig,
                  hw: HardwareProfile = TRIANGULUM60, zero_tol: float = DEFAULT_ZERO_TOL,
                  keep_zeros: bool = False) -> CostBreakdown:
    enc = build_encoding(e, zero_tol, keep_zeros)
    enc_lines = circuit_lines(enc, hw)
    enc_expanded = len(lower_circuit(enc))
    levels = []
    for k in range(cfg.k_max + 1):
        apps = k + 1 if cfg.spin_echo else 2 * k + 1
        full = build_grover_power(e, k, zero_tol, keep_zeros)
        lines = circuit_lines(full, hw)
        expanded = len(lower_circuit(full))
        if cfg.spin_echo:
            # k encodings are absorbed by the rotation identity
            lines -= k * enc_lines
            expanded -= k * enc_expanded
        levels.append(LevelCost(k, apps, apps * len(enc), expanded, lines))
    return CostBreakdown(len(enc), cfg.spin_echo, hw.name, levels)


def feasibility(e: MultilinearExpansion, cfg: GroverConfig,
                hw: HardwareProfile = TRIANGULUM60, zero_tol: float = DEFAULT_ZERO_TOL,
                keep_zeros: bool = False) -> FeasibilityReport:
    cost = encoding_cost(e, cfg, hw, zero_tol, keep_zeros)
    for lv in cost.levels:
        lv.feasible = lv.lines <= hw.line_depth_limit
    return FeasibilityReport(hw.name, hw.line_depth_limit, cost.levels)


def full_gate_count(n: int, d: int) -> int:
    return sum(math.comb(n, k) for k in range(d + 1))
