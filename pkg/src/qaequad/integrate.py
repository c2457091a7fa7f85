"""Quadrature rules on the dyadic grid, error bounds, and the built-in test functions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .angles import GridFunction, GridSpec

RULE_ORDER = {"left": 1, "midpoint": 2, "right": 1, "simpson": 4}
RULE_CONSTANT = {"left": 0.5, "midpoint": 1 / 24, "right": 0.5, "simpson": 1 / 2880}
RULE_OFFSET = {"left": Fraction(0), "midpoint": Fraction(1, 2), "right": Fraction(1)}
RULE_ALIASES = {"mid": "midpoint", "l": "left", "r": "right", "simp": "simpson"}


@dataclass(frozen=True)
class QuadratureRule:
    kind: str

    def __post_init__(self):
        kind = RULE_ALIASES.get(self.kind, self.kind)
        if kind not in RULE_ORDER:
            raise ValueError(f"unknown quadrature rule {self.kind!r}")
        object.__setattr__(self, "kind", kind)

    @property
    def order(self) -> int:
        return RULE_ORDER[self.kind]

    @property
    def constant(self) -> float:
        return RULE_CONSTANT[self.kind]


def as_rule(rule) -> QuadratureRule:
    return rule if isinstance(rule, QuadratureRule) else QuadratureRule(rule)


@dataclass(frozen=True)
class TestFunction:
    """A closed-form integrand on [0, 1] with its integral and derivative sups."""

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    integral: float | None = None
    deriv_sups: tuple[float, ...] = ()   # sup |g^(p)| for p = 1, 2, 3, 4

    __test__ = False  # keep pytest from collecting this class

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def deriv_sup(self, p: int) -> float:
        if p - 1 < len(self.deriv_sups):
            return self.deriv_sups[p - 1]
        return estimate_deriv_sup(self.func, p)


def _g0(x):
    return np.full_like(x, 0.25, dtype=float)


def _g1(x):
    return np.sin(np.pi * x / 2) ** 2


def _g2(x):
    return np.sin(np.pi * x) ** 2


pi = math.pi
G0 = TestFunction("g0", _g0, 0.25, (0.0, 0.0, 0.0, 0.0))
# g1 = (1 - cos(pi x)) / 2
G1 = TestFunction("g1", _g1, 0.5, (pi / 2, pi ** 2 / 2, pi ** 3 / 2, pi ** 4 / 2))
# g2 = (1 - cos(2 pi x)) / 2
G2 = TestFunction("g2", _g2, 0.5, (pi, 2 * pi ** 2, 4 * pi ** 3, 8 * pi ** 4))

BUILTIN = {"g0": G0, "g1": G1, "g2": G2}


def get_function(name: str) -> TestFunction:
    try:
        return BUILTIN[name]
    except KeyError:
        raise ValueError(f"unknown test function {name!r}; choose from {sorted(BUILTIN)}") from None


def sample(f, rule, n: int) -> GridFunction:
    """Grid function fed to the left-Riemann oracle for a single-run rule."""
    rule = as_rule(rule)
    if rule.kind == "simpson":
        raise ValueError("simpson combines three runs; sample left/midpoint/right separately")
    spec = GridSpec(n, RULE_OFFSET[rule.kind])
    values = np.asarray(f(spec.points()), dtype=float)
    # sin^2 round-off can land a hair outside [0, 1]
    values = np.where((values < 0) & (values > -1e-15), 0.0, values)
    values = np.where((values > 1) & (values < 1 + 1e-15), 1.0, values)
    return GridFunction(spec, values)


def riemann_mean(f: GridFunction) -> float:
    return float(np.mean(f.values))


def quadrature(f, rule, n: int) -> float:
    """Classical value of the rule on ``2**n`` cells (Simpson = (L + 4M + R)/6)."""
    rule = as_rule(rule)
    if rule.kind == "simpson":
        left = riemann_mean(sample(f, "left", n))
        mid = riemann_mean(sample(f, "midpoint", n))
        right = riemann_mean(sample(f, "right", n))
        return (left + 4 * mid + right) / 6
    return riemann_mean(sample(f, rule, n))


@dataclass(frozen=True)
class ErrorBound:
    rule: QuadratureRule
    n: int
    deriv_sup: float
    bound: float


def error_bound(rule, n: int, deriv_sup: float) -> ErrorBound:
    rule = as_rule(rule)
    if deriv_sup < 0:
        raise ValueError("deriv_sup must be non-negative")
    bound = rule.constant * 2.0 ** (-rule.order * n) * deriv_sup
    return ErrorBound(rule, n, deriv_sup, bound)


def min_qubits(rule, eps: float, deriv_sup: float) -> int:
    """Smallest n >= 1 whose discretisation bound is at most eps / 2."""
    rule = as_rule(rule)
    if eps <= 0:
        raise ValueError("eps must be positive")
    ratio = 2 * rule.constant * deriv_sup / eps
    if ratio <= 1:
        return 1
    n = math.ceil(math.log2(ratio) / rule.order)
    # guard the ceiling against log2 round-off at exact powers of two
    while n > 1 and error_bound(rule, n - 1, deriv_sup).bound <= eps / 2:
        n -= 1
    while error_bound(rule, n, deriv_sup).bound > eps / 2:
        n += 1
    return max(n, 1)


def estimate_deriv_sup(f: Callable, p: int, points: int = 1 << 14) -> float:
    """sup |f^(p)| on [0, 1] by p-fold finite differences on a uniform grid.

    The grid is capped near h ~ eps_mach^(1/(p+2)), where truncation and
    round-off error balance; finer grids only amplify cancellation.
    """
    h_opt = np.finfo(float).eps ** (1.0 / (p + 2))
    points = max(p + 1, min(points, int(round(1.0 / h_opt))))
    x = np.linspace(0.0, 1.0, points + 1)
    h = x[1] - x[0]
    y = np.asarray(f(x), dtype=float)
    d = np.diff(y, n=p) / h ** p
    return float(np.max(np.abs(d)))
