import math

import numpy as np
import pytest

from qaequad.integrate import (
    G0, G1, G2, QuadratureRule, error_bound, estimate_deriv_sup, get_function, min_qubits,
    quadrature, sample,
)

PI = math.pi


def closed_form(fn, rule, n):
    """Riemann sums of sin^2 on 2^n cells, summed by hand (geometric series of cosines)."""
    N = 2 ** n
    if fn == "g2":
        return 0.5  # sum of cos(2 pi (i + c) / N) over a full period vanishes
    return {"left": 0.5 - 1 / (2 * N), "right": 0.5 + 1 / (2 * N),
            "midpoint": 0.5, "simpson": 0.5}[rule]


def test_rule_table():
    assert [QuadratureRule(r).order for r in ("left", "midpoint", "right", "simpson")] == [1, 2, 1, 4]
    assert QuadratureRule("mid").kind == "midpoint"
    assert QuadratureRule("simpson").constant == pytest.approx(1 / 2880)
    with pytest.raises(ValueError):
        QuadratureRule("trapezoid")
    with pytest.raises(ValueError):
        get_function("g9")


def test_g1_left_error_n2_is_one_eighth():
    assert abs(G1.integral - quadrature(G1, "left", 2)) == pytest.approx(1 / 8, abs=1e-15)


def test_simpson_needs_three_runs():
    with pytest.raises(ValueError):
        sample(G1, "simpson", 2)


@pytest.mark.parametrize("fn", ["g1", "g2"])
@pytest.mark.parametrize("rule", ["left", "midpoint", "right", "simpson"])
@pytest.mark.parametrize("n", range(1, 11))
def test_errors_match_closed_form_and_bound(fn, rule, n):
    f = get_function(fn)
    got = quadrature(f, rule, n)
    assert got == pytest.approx(closed_form(fn, rule, n), abs=1e-13)
    err = abs(got - f.integral)
    r = QuadratureRule(rule)
    assert err <= error_bound(r, n, f.deriv_sup(r.order)).bound + 1e-13


def test_derivative_sups_match_finite_differences():
    for f in (G1, G2):
        for p in (1, 2, 3, 4):
            assert estimate_deriv_sup(f.func, p) == pytest.approx(f.deriv_sup(p), rel=2e-3)
    assert G0.deriv_sup(1) == 0.0


@pytest.mark.parametrize("rule", ["left", "midpoint", "right", "simpson"])
def test_min_qubits_is_minimal(rule):
    for eps in np.logspace(-1, -9, 33):
        for sup in (0.5, PI, 8 * PI ** 4):
            n = min_qubits(rule, eps, sup)
            assert error_bound(rule, n, sup).bound <= eps / 2
            if n > 1:
                assert error_bound(rule, n - 1, sup).bound > eps / 2


def test_min_qubits_left_formula():
    # 2 C_1 = 1, so n* = ceil(log2(sup / eps))
    for eps in (1e-2, 3e-3, 1e-5):
        assert min_qubits("left", eps, PI / 2) == math.ceil(math.log2(PI / 2 / eps))


def test_min_qubits_rejects_bad_eps():
    with pytest.raises(ValueError):
        min_qubits("left", 0.0, 1.0)
    with pytest.raises(ValueError):
        error_bound("left", 2, -1.0)


def test_sample_offsets():
    np.testing.assert_allclose(sample(G2, "midpoint", 1).values, [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(sample(G2, "right", 1).values, [1.0, 0.0], atol=1e-15)
