"""Dense statevector simulation of small index-register + ancilla circuits.

Qubit ``q`` is bit ``q`` of the basis index (little-endian).  Encoding
circuits put the index register on qubits ``0..n-1`` and the ancilla on
qubit ``n``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels

MAX_QUBITS = 25
NORM_TOL = 1e-10

GATE_KINDS = ("ry", "x", "h", "cnot", "mcry", "reflect_zero", "reflect_ancilla1")


class ConsistencyError(RuntimeError):
    """A simulated state drifted off the unit sphere (gate implementation bug)."""


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int | None = None
    controls: tuple[int, ...] = ()
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "controls", tuple(sorted(int(c) for c in self.controls)))
        if self.kind in ("reflect_zero",):
            return
        if self.target is None:
            raise ValueError(f"{self.kind} needs a target qubit")
        if self.target in self.controls:
            raise ValueError("target qubit cannot also be a control")
        if len(set(self.controls)) != len(self.controls):
            raise ValueError("duplicate control qubits")
        if self.kind == "cnot" and len(self.controls) != 1:
            raise ValueError("cnot takes exactly one control")
        if self.kind in ("ry", "x", "h", "reflect_ancilla1") and self.controls:
            raise ValueError(f"{self.kind} takes no controls")
        if not math.isfinite(self.angle):
            raise ValueError("gate angle must be finite")

    @property
    def control_mask(self) -> int:
        mask = 0
        for c in self.controls:
            mask |= 1 << c
        return mask

    def qubits(self) -> tuple[int, ...]:
        if self.target is None:
            return ()
        return self.controls + (self.target,)

    def inverse(self) -> "Gate":
        if self.kind in ("ry", "mcry"):
            return Gate(self.kind, self.target, self.controls, -self.angle)
        return self

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.target is not None:
            out["target"] = self.target
        if self.controls:
            out["controls"] = list(self.controls)
        if self.kind in ("ry", "mcry"):
            out["angle"] = self.angle
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "Gate":
        return cls(obj["kind"], obj.get("target"), tuple(obj.get("controls", ())),
                   float(obj.get("angle", 0.0)))


# convenience constructors
def RY(target, angle):
    return Gate("ry", target, (), float(angle))


def MCRY(controls, target, angle):
    controls = tuple(controls)
    if not controls:
        return RY(target, angle)
    return Gate("mcry", target, controls, float(angle))


def X(target):
    return Gate("x", target)


def H(target):
    return Gate("h", target)


def CNOT(control, target):
    return Gate("cnot", target, (control,))


def ReflectZero():
    return Gate("reflect_zero")


def ReflectAncilla1(ancilla):
    return Gate("reflect_ancilla1", ancilla)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()
    label: str = ""

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must lie in [1, {MAX_QUBITS}]")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q >= self.n_qubits or q < 0 for q in g.qubits()):
                raise ValueError(f"gate {g} does not fit in {self.n_qubits} qubits")

    def __len__(self):
        return len(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise ValueError("cannot concatenate circuits of different widths")
        return Circuit(self.n_qubits, self.gates + other.gates, self.label)

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits, tuple(g.inverse() for g in reversed(self.gates)),
                       f"{self.label}^-1" if self.label else "")

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def to_dict(self) -> dict:
        return {"n_qubits": self.n_qubits, "label": self.label,
                "gates": [g.to_dict() for g in self.gates]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, obj: dict) -> "Circuit":
        return cls(int(obj["n_qubits"]), tuple(Gate.from_dict(g) for g in obj["gates"]),
                   obj.get("label", ""))

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_dict(json.loads(text))


@dataclass
class StateVector:
    amplitudes: np.ndarray
    n_qubits: int = field(init=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        size = amps.shape[0]
        if amps.ndim != 1 or size < 2 or size & (size - 1):
            raise ValueError("amplitude vector length must be a power of two >= 2")
        self.amplitudes = amps
        self.n_qubits = size.bit_length() - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy())


def initial_state(n_qubits: int) -> StateVector:
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must lie in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(amps)


def basis_state(n_qubits: int, index: int) -> StateVector:
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


def _apply_gate(g: Gate, amps: np.ndarray) -> None:
    kind = g.kind
    if kind in ("ry", "mcry"):
        kernels.apply_ry(amps, g.target, g.control_mask, g.angle)
    elif kind in ("x", "cnot"):
        kernels.apply_x(amps, g.target, g.control_mask)
    elif kind == "h":
        kernels.apply_h(amps, g.target)
    elif kind == "reflect_zero":
        kernels.flip_sign_zero(amps)
    elif kind == "reflect_ancilla1":
        kernels.flip_sign_bit(amps, g.target)
    else:  # pragma: no cover - Gate validates kinds
        raise ValueError(kind)


def apply(c: Circuit, v: StateVector, check_norm: bool = True) -> StateVector:
    """Apply the gates of ``c`` in list order to a copy of ``v``."""
    if c.n_qubits != v.n_qubits:
        raise ValueError(f"circuit has {c.n_qubits} qubits but state has {v.n_qubits}")
    amps = v.amplitudes.copy()
    for g in c.gates:
        _apply_gate(g, amps)
        if check_norm:
            drift = abs(math.sqrt(float(np.vdot(amps, amps).real)) - 1.0)
            if drift > NORM_TOL:
                raise ConsistencyError(f"norm drift {drift:.3e} after {g}")
    return StateVector(amps)


def run(c: Circuit) -> StateVector:
    return apply(c, initial_state(c.n_qubits))


def ancilla_prob1(v: StateVector, ancilla_index: int) -> float:
    if not 0 <= ancilla_index < v.n_qubits:
        raise ValueError("ancilla index out of range")
    p = kernels.prob_bit_one(v.amplitudes, ancilla_index)
    return min(1.0, max(0.0, float(p)))


def stream_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for one (seed, level, batch, ...) stream."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(s) for s in stream)])
    return np.random.Generator(np.random.Philox(ss))


def sample_ancilla(v: StateVector, shots: int, seed: int, ancilla_index: int | None = None,
                   stream: tuple[int, ...] = (0, 0)) -> int:
    """Binomial(shots, P(ancilla = 1)) draw from a derived Philox stream."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    anc = v.n_qubits - 1 if ancilla_index is None else ancilla_index
    p = ancilla_prob1(v, anc)
    return sample_binomial(shots, p, seed, stream)


def sample_binomial(shots: int, p: float, seed: int, stream: tuple[int, ...] = (0, 0)) -> int:
    if p <= 0.0:
        return 0
    if p >= 1.0:
        return int(shots)
    return int(stream_rng(seed, *stream).binomial(shots, p))


def unitary(c: Circuit) -> np.ndarray:
    """Full matrix of ``c`` (column j = image of basis state j).  Small circuits only."""
    size = 1 << c.n_qubits
    cols = np.empty((size, size), dtype=np.complex128)
    for j in range(size):
        cols[:, j] = apply(c, basis_state(c.n_qubits, j)).amplitudes
    return cols
