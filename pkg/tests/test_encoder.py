import math

import numpy as np
import pytest

from qaequad.angles import AngleTable, GridFunction, MultilinearExpansion, build_angle_table, mobius_transform
from qaequad.encoder import (
    TRIANGULUM60, UNLIMITED, GroverConfig, HardwareProfile, build_encoding, build_grover_power,
    build_oracle, circuit_lines, decompose_ccry, decompose_mcry, encoding_cost, feasibility,
    full_gate_count, grover_iterate, lower_circuit, plan_encoding, spin_echo_check,
)
from qaequad.integrate import get_function, sample
from qaequad.simulator import CNOT, MCRY, Circuit, ancilla_prob1, apply, basis_state, run, unitary

from conftest import ry_matrix


def _expansion(values):
    return mobius_transform(build_angle_table(GridFunction.from_values(values)))


def _builtin(fn, n=2, rule="left"):
    return mobius_transform(build_angle_table(sample(get_function(fn), rule, n)))


def test_builtin_gate_counts():
    assert len(build_encoding(_builtin("g0"))) == 1
    assert len(build_encoding(_builtin("g1"))) == 2
    assert len(build_encoding(_builtin("g1"), keep_zeros=True)) == 3
    assert len(build_encoding(_builtin("g2"))) == 3
    assert len(build_encoding(_builtin("g2"), keep_zeros=True)) == 4


def test_gate_order_by_size_then_mask():
    e = MultilinearExpansion(3, np.arange(1.0, 9.0) / 10)
    masks = [sum(1 << c for c in g.controls) for g in build_encoding(e).gates]
    assert masks == [0, 1, 2, 4, 3, 5, 6, 7]


@pytest.mark.parametrize("n", range(1, 11))
def test_full_gate_count(n, rng):
    for d in range(n + 1):
        coeff = np.zeros(1 << n)
        for m in range(1 << n):
            if bin(m).count("1") <= d:
                coeff[m] = rng.uniform(0.1, 0.2)
        plan = plan_encoding(MultilinearExpansion(n, coeff), keep_zeros=True)
        assert plan.gate_count == full_gate_count(n, d) == sum(math.comb(n, k) for k in range(d + 1))


def test_spot_counts():
    assert (full_gate_count(2, 1), full_gate_count(2, 2), full_gate_count(10, 2)) == (3, 4, 56)


def test_degree_cap_refuses_to_drop():
    with pytest.raises(ValueError):
        plan_encoding(_builtin("g2"), degree_cap=1)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_encoding_fibres_are_rotations(n, rng):
    theta = rng.uniform(0, math.pi, 1 << n)
    e = mobius_transform(AngleTable(n, theta))
    enc = build_encoding(e)
    for b in range(1 << n):
        out = apply(enc, basis_state(n + 1, b)).amplitudes
        expect = ry_matrix(theta[b]) @ np.array([1, 0])
        assert out[b] == pytest.approx(expect[0], abs=1e-12)
        assert out[b | 1 << n] == pytest.approx(expect[1], abs=1e-12)


def test_oracle_law(rng):
    for _ in range(100):
        n = int(rng.integers(1, 9))
        vals = rng.uniform(0, 1, 1 << n)
        circ = build_oracle(_expansion(vals))
        assert abs(ancilla_prob1(run(circ), n) - vals.mean()) <= 1e-12


def test_grover_oscillation_small(rng):
    for _ in range(10):
        n = int(rng.integers(1, 5))
        vals = rng.uniform(0, 1, 1 << n)
        a = vals.mean()
        e = _expansion(vals)
        for k in range(6):
            p = ancilla_prob1(run(build_grover_power(e, k)), n)
            assert p == pytest.approx(math.sin((2 * k + 1) * math.asin(math.sqrt(a))) ** 2, abs=1e-10)


def test_grover_iterate_matches_textbook_up_to_sign():
    e = _builtin("g1")
    a = build_oracle(e)
    q = unitary(grover_iterate(a))
    ua = unitary(a)
    dim = ua.shape[0]
    s0 = np.eye(dim) - 2 * np.outer(np.eye(dim)[0], np.eye(dim)[0])
    sg = np.diag([-1.0 if i >> 2 & 1 else 1.0 for i in range(dim)])
    textbook = -ua @ s0 @ ua.conj().T @ sg
    assert np.allclose(q, -textbook, atol=1e-12)


def test_ccry_decomposition_exact(rng):
    for _ in range(30):
        ang = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        g = MCRY((0, 1), 2, ang)
        got = unitary(decompose_ccry(g))
        assert np.allclose(got, unitary(Circuit(3, (g,))), rtol=0, atol=1e-12)
    with pytest.raises(ValueError):
        decompose_ccry(MCRY((0,), 1, 0.3))


def test_mcry_lowering(rng):
    for m in range(1, 5):
        ang = float(rng.uniform(-3, 3))
        g = MCRY(tuple(range(m)), m, ang)
        low = decompose_mcry(g)
        assert all(x.kind in ("ry", "cnot") or len(x.controls) <= 1 for x in low)
        assert len(low) == (1 if m == 1 else 3 * 2 ** (m - 1) - 2)
        assert np.allclose(unitary(Circuit(m + 1, tuple(low))), unitary(Circuit(m + 1, (g,))), atol=1e-12)


def test_lower_circuit_preserves_unitary():
    a = build_oracle(_builtin("g2"), keep_zeros=True)
    assert np.allclose(unitary(lower_circuit(a)), unitary(a), atol=1e-12)


def test_spin_echo_identity():
    assert spin_echo_check(trials=50, seed=3)


def test_spin_echo_halves_applications():
    e = _builtin("g1")
    plain = encoding_cost(e, GroverConfig(3, False))
    echo = encoding_cost(e, GroverConfig(3, True))
    assert [lv.encoding_applications for lv in plain.levels] == [1, 3, 5, 7]
    assert [lv.encoding_applications for lv in echo.levels] == [1, 2, 3, 4]
    assert all(b.lines <= a.lines for a, b in zip(plain.levels, echo.levels))


@pytest.mark.parametrize("spin_echo", [False, True])
@pytest.mark.parametrize("keep_zeros", [False, True])
def test_feasibility_pattern(spin_echo, keep_zeros):
    cfg = GroverConfig(2, spin_echo)
    f0 = feasibility(_builtin("g0"), cfg, keep_zeros=keep_zeros).feasible
    f1 = feasibility(_builtin("g1"), cfg, keep_zeros=keep_zeros).feasible
    f2 = feasibility(_builtin("g2"), cfg, keep_zeros=keep_zeros).feasible
    assert f0[0] and f1[0] and f2[0]
    assert not any(f2[1:])


def test_k0_line_counts():
    assert circuit_lines(build_oracle(_builtin("g1"), keep_zeros=True), TRIANGULUM60) == 4
    assert circuit_lines(build_oracle(_builtin("g2")), TRIANGULUM60) == 9


def test_unlimited_profile_always_feasible():
    rep = feasibility(_builtin("g2"), GroverConfig(4), UNLIMITED)
    assert all(rep.feasible)
    assert rep.to_dict()["line_depth_limit"] is None


def test_profile_validation():
    with pytest.raises(ValueError):
        HardwareProfile("x", 0)
    with pytest.raises(ValueError):
        HardwareProfile("x", 10, {"cnot": 0})
    with pytest.raises(ValueError):
        GroverConfig(-1)
    with pytest.raises(ValueError):
        build_grover_power(_builtin("g1"), -1)
