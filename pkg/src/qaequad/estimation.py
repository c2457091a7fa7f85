"""Maximum-likelihood amplitude estimation over a schedule of Grover powers."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import kernels
from .angles import DEFAULT_ZERO_TOL, GridFunction, MultilinearExpansion, build_angle_table, mobius_transform
from .encoder import build_grover_power
from .integrate import as_rule, riemann_mean, sample
from .simulator import ancilla_prob1, run, sample_binomial

P_FLOOR = 1e-12
SCAN_POINTS = 100_000
DEGENERACY_TOL = 1e-9
BIMODAL_WINDOW = 2.0


class BoundaryAmplitudeWarning(UserWarning):
    """Amplitude is exactly 0 or 1: every level is degenerate."""


class InadmissibleScheduleWarning(UserWarning):
    pass


def model_prob(a: float, k: int) -> float:
    if not 0.0 <= a <= 1.0:
        raise ValueError("a must lie in [0, 1]")
    if k == 0:
        return float(a)
    return math.sin((2 * k + 1) * math.asin(math.sqrt(a))) ** 2


def degenerate_levels(a: float, k_max: int, tol: float = DEGENERACY_TOL) -> list[int]:
    if a <= 0.0 or a >= 1.0:
        warnings.warn(f"amplitude {a} on the boundary: every level is degenerate",
                      BoundaryAmplitudeWarning, stacklevel=2)
        return list(range(k_max + 1))
    out = []
    for k in range(k_max + 1):
        p = model_prob(a, k)
        if p <= tol or p >= 1.0 - tol:
            out.append(k)
    return out


@dataclass(frozen=True)
class Schedule:
    levels: tuple[int, ...]
    shots: tuple[int, ...]

    def __post_init__(self):
        levels = tuple(int(k) for k in self.levels)
        shots = self.shots
        if isinstance(shots, (int, np.integer)):
            shots = (int(shots),) * len(levels)
        shots = tuple(int(s) for s in shots)
        if not levels:
            raise ValueError("schedule must contain at least one level")
        if any(b <= a for a, b in zip(levels, levels[1:])) or levels[0] < 0:
            raise ValueError("levels must be non-negative and strictly increasing")
        if len(shots) != len(levels) or any(s < 1 for s in shots):
            raise ValueError("need one positive shot count per level")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "shots", shots)

    @classmethod
    def uniform(cls, levels: Sequence[int], shots: int) -> "Schedule":
        return cls(tuple(levels), (shots,) * len(levels))

    @property
    def oracle_cost(self) -> int:
        return sum(n * (2 * k + 1) for k, n in zip(self.levels, self.shots))


def is_admissible(s: Schedule, a: float, tol: float = DEGENERACY_TOL) -> bool:
    bad = set(degenerate_levels(a, max(s.levels), tol))
    return not bad.intersection(s.levels)


def fisher_info(a: float, s: Schedule, tol: float = DEGENERACY_TOL) -> float | None:
    """Total Fisher information, or None when some level is degenerate."""
    if not 0.0 < a < 1.0 or not is_admissible(s, a, tol):
        return None
    return sum(n * (2 * k + 1) ** 2 for k, n in zip(s.levels, s.shots)) / (a * (1.0 - a))


@dataclass(frozen=True)
class ShotRecord:
    k: int
    shots: int
    hits: float

    def __post_init__(self):
        if not 0 <= self.hits <= self.shots:
            raise ValueError("hits must lie in [0, shots]")

    def to_dict(self) -> dict:
        return {"k": self.k, "N": self.shots, "m": self.hits}


@dataclass
class EstimationResult:
    a_hat: float
    theta_hat: float
    loglik_at_max: float
    records: list[ShotRecord]
    local_maxima: list[tuple[float, float]] = field(default_factory=list)
    n_local_maxima: int = 1
    fisher_total: float | None = None
    cr_bound: float | None = None
    mode: str = "exact"
    seed: int | None = None
    I_hat: float | None = None
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "a_hat": self.a_hat,
            "theta_hat": self.theta_hat,
            "I_hat": self.a_hat if self.I_hat is None else self.I_hat,
            "loglik": self.loglik_at_max,
            "records": [r.to_dict() for r in self.records],
            "local_maxima": [{"theta": t, "loglik": v} for t, v in self.local_maxima],
            "n_local_maxima": self.n_local_maxima,
            "fisher": self.fisher_total,
            "cr_bound": self.cr_bound,
            "mode": self.mode,
            "seed": self.seed,
            "warnings": list(self.warnings),
        }


def _arrays(records):
    ks = np.array([r.k for r in records], dtype=np.int64)
    ns = np.array([r.shots for r in records], dtype=np.float64)
    ms = np.array([r.hits for r in records], dtype=np.float64)
    return ks, ns, ms


def loglik(theta, records, p_floor: float = P_FLOOR) -> np.ndarray:
    """Log-likelihood as a function of theta = arcsin(sqrt(a))."""
    ks, ns, ms = _arrays(records)
    th = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    return kernels.loglik_grid(th, ks, ns, ms, p_floor)


def _score(theta, ks, ns, ms):
    # d loglik / d theta for unclamped probabilities
    total = 0.0
    for k, n, m in zip(ks, ns, ms):
        w = 2 * k + 1
        phi = w * theta
        s, c = math.sin(phi), math.cos(phi)
        total += 2 * w * (m * c / s - (n - m) * s / c)
    return total


def _refine(theta_grid, i, records, p_floor):
    """Polish a grid maximum at index i to |dtheta| <= 1e-12."""
    ks, ns, ms = _arrays(records)
    lo = theta_grid[max(i - 1, 0)]
    hi = theta_grid[min(i + 1, len(theta_grid) - 1)]
    f = lambda t: float(loglik(t, records, p_floor)[0])  # noqa: E731
    eps = 1e-15
    a, b = max(lo, eps), min(hi, math.pi / 2 - eps)
    try:
        sa, sb = _score(a, ks, ns, ms), _score(b, ks, ns, ms)
        if math.isfinite(sa) and math.isfinite(sb) and sa > 0 > sb:
            t = brentq(_score, a, b, args=(ks, ns, ms), xtol=1e-14, rtol=4 * np.finfo(float).eps)
            if f(t) >= f(theta_grid[i]) - 1e-9 * max(1.0, abs(f(theta_grid[i]))):
                return t
    except (ZeroDivisionError, ValueError):
        pass
    if hi <= lo:
        return theta_grid[i]
    res = minimize_scalar(lambda t: -f(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.x) if -res.fun >= f(theta_grid[i]) else theta_grid[i]


def mlae(records: Sequence[ShotRecord], scan_points: int = SCAN_POINTS,
         p_floor: float = P_FLOOR, mode: str = "exact", seed: int | None = None) -> EstimationResult:
    """Global maximiser of the likelihood by a dense theta scan plus local polishing.

    Ties on the grid go to the smallest theta.  ``local_maxima`` lists every
    local maximum within ``BIMODAL_WINDOW`` log-units of the global one;
    ``n_local_maxima`` counts all interior local maxima of the scan.
    """
    records = list(records)
    if not records:
        raise ValueError("mlae needs at least one shot record")
    grid = np.linspace(0.0, math.pi / 2, scan_points)
    vals = loglik(grid, records, p_floor)
    best = int(np.argmax(vals))
    theta = _refine(grid, best, records, p_floor)
    top = float(loglik(theta, records, p_floor)[0])

    # local maxima of the scanned curve (plateaus count once)
    left = np.concatenate(([-np.inf], vals[:-1]))
    right = np.concatenate((vals[1:], [-np.inf]))
    peaks = np.flatnonzero((vals > left) & (vals >= right))
    maxima = []
    for i in peaks:
        t = theta if i == best else float(grid[i])
        v = top if i == best else float(vals[i])
        if top - v <= BIMODAL_WINDOW:
            maxima.append((t, v))
    a_hat = math.sin(theta) ** 2
    return EstimationResult(a_hat=a_hat, theta_hat=theta, loglik_at_max=top, records=records,
                            local_maxima=maxima, n_local_maxima=int(len(peaks)),
                            mode=mode, seed=seed)


def _expansion(f: GridFunction, zero_tol=DEFAULT_ZERO_TOL) -> MultilinearExpansion:
    return mobius_transform(build_angle_table(f), zero_tol)


def collect_shots(e: MultilinearExpansion, s: Schedule, mode: str = "exact",
                  seed: int = 0, stream: int = 0) -> list[ShotRecord]:
    """Simulate Q^k A for each level; exact mode keeps m_k = N_k * p (real)."""
    if mode not in ("exact", "stochastic"):
        raise ValueError("mode must be 'exact' or 'stochastic'")
    out = []
    for k, n in zip(s.levels, s.shots):
        circ = build_grover_power(e, k)
        p = ancilla_prob1(run(circ), circ.n_qubits - 1)
        if mode == "exact":
            m = n * p
        else:
            m = sample_binomial(n, p, seed, (stream, k))
        out.append(ShotRecord(k, n, m))
    return out


def estimate_amplitude(f: GridFunction, s: Schedule, mode: str = "exact", seed: int = 0,
                       stream: int = 0, scan_points: int = SCAN_POINTS) -> EstimationResult:
    e = _expansion(f)
    records = collect_shots(e, s, mode, seed, stream)
    result = mlae(records, scan_points=scan_points, mode=mode,
                  seed=seed if mode == "stochastic" else None)
    a = riemann_mean(f)
    result.fisher_total = fisher_info(a, s)
    result.cr_bound = None if not result.fisher_total else 1.0 / result.fisher_total
    if 0.0 < a < 1.0 and not is_admissible(s, a):
        bad = sorted(set(degenerate_levels(a, max(s.levels))) & set(s.levels))
        msg = f"schedule levels {bad} are degenerate for a={a:.12g}"
        result.warnings.append(msg)
        warnings.warn(msg, InadmissibleScheduleWarning, stacklevel=2)
    return result


@dataclass
class IntegralEstimate:
    rule: str
    n: int
    I_hat: float
    runs: dict[str, EstimationResult]

    @property
    def warnings(self) -> list[str]:
        return [w for r in self.runs.values() for w in r.warnings]

    def to_dict(self) -> dict:
        return {"rule": self.rule, "n": self.n, "I_hat": self.I_hat,
                "runs": {name: r.to_dict() for name, r in self.runs.items()},
                "warnings": self.warnings}


def estimate_integral(f, rule, n: int, s: Schedule, mode: str = "exact",
                      seed: int = 0, scan_points: int = SCAN_POINTS) -> IntegralEstimate:
    """Sample, encode, amplify and estimate; Simpson runs left/mid/right and combines."""
    rule = as_rule(rule)
    if isinstance(f, GridFunction):
        if rule.kind == "simpson":
            raise ValueError("simpson needs a callable, not a fixed grid function")
        res = estimate_amplitude(f, s, mode, seed, 0, scan_points)
        res.I_hat = res.a_hat
        return IntegralEstimate(rule.kind, f.n_qubits, res.a_hat, {rule.kind: res})
    if rule.kind == "simpson":
        runs = {}
        for j, part in enumerate(("left", "midpoint", "right")):
            r = estimate_amplitude(sample(f, part, n), s, mode, seed, j, scan_points)
            r.I_hat = r.a_hat
            runs[part] = r
        i_hat = (runs["left"].a_hat + 4 * runs["midpoint"].a_hat + runs["right"].a_hat) / 6
        return IntegralEstimate("simpson", n, i_hat, runs)
    res = estimate_amplitude(sample(f, rule, n), s, mode, seed, 0, scan_points)
    res.I_hat = res.a_hat
    return IntegralEstimate(rule.kind, n, res.a_hat, {rule.kind: res})
