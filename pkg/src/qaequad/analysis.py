"""Resource trade-off curves, the rough affine-angle family g_s, and separation data."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .angles import AngleTable, GridFunction, GridSpec, build_angle_table, check_membership, mobius_transform
from .encoder import build_grover_power, full_gate_count
from .estimation import Schedule, ShotRecord, mlae
from .integrate import RULE_CONSTANT, as_rule, min_qubits
from .simulator import ancilla_prob1, run, sample_binomial

NORMALISE_AT = 1e-4
PHI_SOBOLEV_SQ = 1 / 8  # squared H^{s'} seminorm of sin^2(pi t), any s' >= 0


@dataclass(frozen=True)
class CostModel:
    C_est: float = 1.0
    delta: float = 0.25
    C_p: dict = field(default_factory=lambda: dict(RULE_CONSTANT))

    def __post_init__(self):
        if self.C_est <= 0:
            raise ValueError("C_est must be positive")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")

    def oracle_calls(self, eps: float) -> int:
        return math.ceil(2 * self.C_est / (eps * math.sqrt(self.delta)))


@dataclass
class TradeoffPoint:
    eps: float
    n_star: int
    M: int
    gates_per_call: int
    total_gates: int
    classical_mc_cost: float
    quantum_normalized: float = float("nan")
    classical_normalized: float = float("nan")


def _gates(n: int, d: int | None) -> int:
    return full_gate_count(n, n if d is None else min(d, n))


def tradeoff_curve(rule, d: int | None, deriv_sup: float, model: CostModel,
                   eps_grid: Sequence[float]) -> list[TradeoffPoint]:
    """Quantum and classical cost per target accuracy.

    ``d=None`` tracks the generic case d = n*.  Both the quantum total and
    the classical N*M count are also reported normalised to 1 at eps = 1e-4.
    """
    rule = as_rule(rule)
    eps_grid = [float(e) for e in eps_grid]
    if not eps_grid:
        raise ValueError("eps grid is empty")
    if any(e <= 0 for e in eps_grid):
        raise ValueError("eps values must be positive")
    p = rule.order

    def point(eps):
        n = min_qubits(rule, eps, deriv_sup)
        m = model.oracle_calls(eps)
        g = _gates(n, d)
        return TradeoffPoint(eps, n, m, g, g * m, eps ** -(2 + 1 / p))

    ref = point(NORMALISE_AT)
    out = []
    for eps in eps_grid:
        pt = point(eps)
        pt.quantum_normalized = pt.total_gates / ref.total_gates
        pt.classical_normalized = pt.classical_mc_cost / ref.classical_mc_cost
        out.append(pt)
    return out


# -- the g_s family --------------------------------------------------------------

def default_gs_params(n: int) -> tuple[float, np.ndarray]:
    return math.pi / 4, np.array([math.pi / 2 ** (k + 2) for k in range(n)])


def weierstrass_terms(s: float, trunc_tol: float) -> int:
    """Number of series terms kept: the first m with 2^{-ms} < trunc_tol."""
    return max(1, math.floor(math.log2(1 / trunc_tol) / s) + 1)


def w_s(t, s: float, trunc_tol: float = 1e-10) -> np.ndarray:
    """Truncated normalised Weierstrass-type series sum_m 2^{-ms} sin^2(pi 2^m t) / Z_s.

    The dyadic shift ``2^m t mod 1`` is tracked exactly by repeated doubling,
    so ``w_s(0) = 0`` holds term by term.
    """
    t = np.asarray(t, dtype=float)
    u = np.mod(t, 1.0)
    z = 1.0 / (1.0 - 2.0 ** (-s))
    total = np.zeros_like(u)
    for m in range(weierstrass_terms(s, trunc_tol)):
        total += 2.0 ** (-m * s) * np.sin(np.pi * u) ** 2
        u = np.mod(2.0 * u, 1.0)
    return total / z


@dataclass
class SeparationFunction:
    s: float
    n: int
    gamma: float
    c: np.ndarray
    trunc_tol: float = 1e-10

    @property
    def Z_s(self) -> float:
        return 1.0 / (1.0 - 2.0 ** (-self.s))

    @property
    def trunc_M(self) -> int:
        return weierstrass_terms(self.s, self.trunc_tol)

    @property
    def tail_bound(self) -> float:
        """Uniform bound on the truncation error of w_s."""
        return 2.0 ** (-self.trunc_M * self.s)

    def angle_table(self) -> AngleTable:
        idx = np.arange(1 << self.n)
        bits = (idx[:, None] >> np.arange(self.n)[None, :]) & 1
        return AngleTable(self.n, self.gamma + bits @ self.c)

    @property
    def grid_values(self) -> np.ndarray:
        return np.sin(self.angle_table().theta / 2) ** 2

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        N = 1 << self.n
        v = self.grid_values
        scaled = x * N
        i = np.minimum(np.floor(scaled).astype(np.int64), N - 1)
        t = scaled - i
        v_next = v[(i + 1) % N]
        return v[i] + (v_next - v[i]) * w_s(t, self.s, self.trunc_tol)

    def grid_function(self) -> GridFunction:
        return GridFunction(GridSpec(self.n), self.grid_values)


def build_gs(s: float, n: int, gamma: float | None = None, c: Sequence[float] | None = None,
             trunc_tol: float = 1e-10) -> SeparationFunction:
    if not 0 < s < 0.5:
        raise ValueError("s must lie in (0, 1/2)")
    if n < 1:
        raise ValueError("n must be >= 1")
    g_default, c_default = default_gs_params(n)
    gamma = g_default if gamma is None else float(gamma)
    c = c_default if c is None else np.asarray(c, dtype=float)
    if c.shape != (n,):
        raise ValueError(f"need {n} slope coefficients")
    if np.any(c == 0):
        raise ValueError("every slope coefficient c_k must be non-zero")
    gs = SeparationFunction(s, n, gamma, c, trunc_tol)
    theta = gs.angle_table().theta
    if theta.min() < 0 or theta.max() > math.pi:
        raise ValueError("gamma and c push some grid angle outside [0, pi]")
    return gs


def gs_degree(gs: SeparationFunction, zero_tol: float = 1e-9) -> int:
    return check_membership(gs.angle_table(), 1, zero_tol).degree


@dataclass
class SeriesReport:
    s: float
    s_prime: float
    ratio: float
    convergent: bool
    partial_sums: np.ndarray
    limit: float | None


def sobolev_series(s: float, s_prime: float, m_max: int) -> SeriesReport:
    """Partial sums of the squared H^{s'} norm of w_s (geometric in 2^{2(s'-s)})."""
    if not 0 < s < 0.5:
        raise ValueError("s must lie in (0, 1/2)")
    if s_prime < 0:
        raise ValueError("s' must be non-negative")
    z = 1.0 / (1.0 - 2.0 ** (-s))
    ratio = 2.0 ** (2 * (s_prime - s))
    pref = PHI_SOBOLEV_SQ / z ** 2
    partial = pref * np.cumsum(ratio ** np.arange(m_max + 1))
    convergent = s_prime < s
    limit = pref / (1 - ratio) if convergent else None
    return SeriesReport(s, s_prime, ratio, convergent, partial, limit)


@dataclass
class SeparationRow:
    s: float
    eps: float
    M: int
    N: float | None
    ratio: float | None
    boundary: bool = False


def separation_curve(s_grid: Iterable[float], eps, model: CostModel,
                     c_s: float = 1.0) -> list[SeparationRow]:
    """Quantum oracle calls M versus classical evaluations N = (c_s/eps)^{1/s}.

    ``s = 1/2`` yields a boundary marker row with no N or ratio.
    """
    eps_list = [float(eps)] if np.isscalar(eps) else [float(e) for e in eps]
    if not eps_list or any(e <= 0 for e in eps_list):
        raise ValueError("eps values must be positive")
    rows = []
    for s in s_grid:
        s = float(s)
        if s <= 0 or s > 0.5:
            raise ValueError(f"s = {s} outside (0, 1/2]")
        for e in eps_list:
            m = model.oracle_calls(e)
            if s == 0.5:
                rows.append(SeparationRow(s, e, m, None, None, boundary=True))
                continue
            n_cl = (c_s / e) ** (1 / s)
            rows.append(SeparationRow(s, e, m, n_cl, m / n_cl))
    return rows


# -- C_est calibration ----------------------------------------------------------

@dataclass
class CestFit:
    C: float
    slope: float
    intercept: float
    r_squared: float
    costs: np.ndarray
    rmse: np.ndarray


def fit_cest(trials: dict) -> CestFit:
    """Fit RMSE ~ C / M on log-log axes.

    ``trials`` maps total oracle cost M to the estimation errors of the seeds
    run at that cost.  C uses the fixed -1 slope; the free slope is a
    diagnostic.
    """
    if len(trials) < 5:
        raise ValueError("need at least 5 distinct cost levels")
    costs, rmse = [], []
    for m, errs in sorted(trials.items()):
        errs = np.asarray(errs, dtype=float)
        if errs.size < 50:
            raise ValueError(f"cost level {m} has {errs.size} seeds; need at least 50")
        costs.append(float(m))
        rmse.append(float(np.sqrt(np.mean(errs ** 2))))
    costs, rmse = np.array(costs), np.array(rmse)
    if np.any(rmse <= 0):
        raise ValueError("zero RMSE at some level; cannot fit on log axes")
    lx, ly = np.log(costs), np.log(rmse)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    c = float(np.exp(np.mean(ly + lx)))
    return CestFit(c, float(slope), float(intercept), r2, costs, rmse)


def mlae_trials(target, schedules: Sequence[Schedule], seeds: int, master_seed: int = 0,
                scan_points: int = 20_000) -> dict:
    """Stochastic MLAE errors per schedule.

    ``target`` is either a known amplitude ``a`` (hit counts drawn from the
    model probabilities) or a GridFunction, whose level probabilities come
    from simulating Q^k A once per level.  Seeds only change the draws.
    """
    if isinstance(target, GridFunction):
        e = mobius_transform(build_angle_table(target))
        a = float(np.mean(target.values))
        cache: dict[int, float] = {}

        def prob(k):
            if k not in cache:
                circ = build_grover_power(e, k)
                cache[k] = ancilla_prob1(run(circ), circ.n_qubits - 1)
            return cache[k]
    else:
        a = float(target)
        theta = math.asin(math.sqrt(a))

        def prob(k):
            return math.sin((2 * k + 1) * theta) ** 2
    out = {}
    for j, sched in enumerate(schedules):
        errs = np.empty(seeds)
        probs = [prob(k) for k in sched.levels]
        for r in range(seeds):
            recs = [ShotRecord(k, n, sample_binomial(n, p, master_seed, (j, r, k)))
                    for k, n, p in zip(sched.levels, sched.shots, probs)]
            errs[r] = mlae(recs, scan_points=scan_points, mode="stochastic").a_hat - a
        out[sched.oracle_cost] = errs
    return out


# -- CSV emission ----------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(rows: Sequence, columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        d = asdict(r) if hasattr(r, "__dataclass_fields__") else dict(r)
        w.writerow([_fmt(d[c]) for c in columns])
    return buf.getvalue()


TRADEOFF_COLUMNS = ("eps", "n_star", "M", "gates_per_call", "total_gates", "classical_mc_cost",
                    "quantum_normalized", "classical_normalized")
SEPARATION_COLUMNS = ("s", "eps", "M", "N", "ratio", "boundary")


def sobolev_rows(s_values, s_prime_values, m_max: int) -> list[dict]:
    rows = []
    for s in s_values:
        for sp in s_prime_values:
            rep = sobolev_series(s, sp, m_max)
            rows.append({"s": s, "s_prime": sp, "partial_sum": float(rep.partial_sums[-1]),
                         "limit_or_divergent": rep.limit if rep.convergent else "divergent"})
    return rows


SOBOLEV_COLUMNS = ("s", "s_prime", "partial_sum", "limit_or_divergent")
