"""Numerical probes of best constants from the side opposite to the certificates.

Two tools are provided.

* Extremal sweeps evaluate the ratio functional on a_n = n^{-1/p-ε}
  (or n^{-1-ε} for the geometric-mean form) for shrinking ε.
* Truncated optimization finds a stationary point of the ratio on
  sequences supported on [1, N] using the nonlinear power iteration

      a ← (Tᵀ(T(a)^{p-1}))^{1/(p-1)}.

Either way the value reported is attained by an explicit sequence, so it
bounds the true constant from the side opposite to the certificate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.special import zeta

from . import weights as W
from .errors import DomainError
from .operators import TailOperator, apply, apply_transpose, geometric_remainders, ratio_functional, safe_power
from .statements import (
    CARLEMAN,
    StatementId,
    closed_constant,
    direction,
    statement_exponent,
    statement_family,
    statement_operator,
)

N_CAP = 10**6
INNER_CUTOFF_MIN = 10**6
INNER_CUTOFF_MAX = 5 * 10**6


class Sample(NamedTuple):
    parameter: float
    N: int
    ratio: float


@dataclass(frozen=True)
class Diagnostics:
    iterations: int = 0
    final_residual: float = 0.0
    converged: bool = True
    notes: dict = field(default_factory=dict)

    def to_dict(self):
        return {"iterations": self.iterations, "final_residual": self.final_residual,
                "converged": self.converged, "notes": dict(self.notes)}


@dataclass(frozen=True)
class ProbeResult:
    statement: StatementId | None
    mode: str
    samples: tuple
    best_bound: float
    monotone_trend: bool
    diagnostics: Diagnostics
    reference: float | None = None
    sequence: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def ratios(self) -> list:
        return [s.ratio for s in self.samples]

    @property
    def gap(self) -> float | None:
        if self.reference is None:
            return None
        return self.best_bound - self.reference

    def to_dict(self) -> dict:
        return {
            "statement": self.statement.as_dict() if self.statement else None,
            "mode": self.mode,
            "samples": [{"parameter": s.parameter, "N": s.N, "ratio": s.ratio} for s in self.samples],
            "best_bound": self.best_bound,
            "monotone_trend": self.monotone_trend,
            "reference": self.reference,
            "gap_to_reference": self.gap,
            "diagnostics": self.diagnostics.to_dict(),
        }


def minimizes(p: float) -> bool:
    """The ratio's extremum is an infimum exactly when 0 < p < 1."""
    return 0 < p < 1


def _map_parallel(fn: Callable, items, threads: int | None):
    items = list(items)
    if not threads or threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# truncated optimization
# ---------------------------------------------------------------------------


def _stationary_update(op, x, p):
    y = safe_power(apply(op, x), p - 1, "operator value")
    z = apply_transpose(op, y)
    cand = safe_power(z, 1 / (p - 1), "adjoint value")
    return cand / cand.max()


def power_iteration(objective: Callable, update: Callable, x0: np.ndarray, minimize: bool,
                    tol: float, max_iter: int):
    """Generic fixed-point iteration x ← update(x) with damping and best-iterate tracking.

    ``update`` must return a max-normalized nonnegative vector.  The residual
    ‖update(x) - x‖_∞ stays meaningful when the extremizer has vanishing
    entries, where entrywise ratios would not settle.  Returns
    (best_x, best_value, iterations, residual, converged).
    """
    better = (lambda a, b: a < b) if minimize else (lambda a, b: a > b)
    x = x0 / x0.max()
    val = objective(x)
    best_x, best_val = x, val
    residual = math.inf
    damp = False
    for it in range(1, max_iter + 1):
        cand = update(x)
        # both vectors have max-norm 1, so this is the relative change in max-norm
        residual = float(np.max(np.abs(cand - x)))
        if residual < tol:
            x = cand
            v = objective(x)
            if not better(best_val, v):
                best_x, best_val = x, v
            return best_x, best_val, it, residual, True
        if damp:
            cand = np.sqrt(x * cand)
            cand = cand / cand.max()
        v = objective(cand)
        # damping switches on whenever an undamped step moves the wrong way
        damp = better(val, v)
        if better(v, best_val):
            best_x, best_val = cand, v
        x, val = cand, v
    return best_x, best_val, max_iter, residual, False


def optimize_ratio(op: TailOperator, p: float, N: int | None = None, tol: float = 1e-12,
                   max_iter: int = 20000, minimize: bool | None = None,
                   statement: StatementId | None = None) -> ProbeResult:
    """Extremize Σ T(a)^p / Σ a^p over positive sequences on [1, N]."""
    if p == 0 or p == 1:
        raise DomainError(f"optimize_ratio needs p not in {{0, 1}}, got {p}")
    if N is not None and N != op.truncation:
        op = op.with_truncation(N)
    N = op.truncation
    if minimize is None:
        minimize = minimizes(p)
    if N == 1:
        val = ratio_functional(op, np.ones(1), p)
        return ProbeResult(statement, "OPTIMIZE", (Sample(float(N), 1, val),), val, True,
                           Diagnostics(0, 0.0, True), sequence=np.ones(1))
    n = np.arange(1, N + 1, dtype=np.float64)
    x0 = np.exp((-1 / p - 0.1) * np.log(n))
    x, val, it, res, ok = power_iteration(
        lambda a: ratio_functional(op, a, p), lambda a: _stationary_update(op, a, p),
        x0, minimize, tol, max_iter)
    return ProbeResult(statement, "OPTIMIZE", (Sample(float(N), N, val),), val, True,
                       Diagnostics(it, res, ok, {"operator": op.describe(), "tol": tol}),
                       sequence=x)


def _monotone(values, nonincreasing, tol=1e-8):
    d = np.diff(values)
    return bool(np.all(d <= tol)) if nonincreasing else bool(np.all(d >= -tol))


def n_sweep(op_template: TailOperator, p: float, N_list, tol: float = 1e-12, max_iter: int = 20000,
            reference: float | None = None, minimize: bool | None = None,
            statement: StatementId | None = None, threads: int | None = None) -> ProbeResult:
    """optimize_ratio for each truncation in N_list (strictly increasing)."""
    N_list = [int(N) for N in N_list]
    if not N_list:
        raise DomainError("N_list is empty")
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise DomainError(f"N_list must be strictly increasing, got {N_list}")
    if minimize is None:
        minimize = minimizes(p)
    runs = _map_parallel(
        lambda N: optimize_ratio(op_template.with_truncation(N), p, tol=tol, max_iter=max_iter,
                                 minimize=minimize, statement=statement),
        N_list, threads)
    samples = tuple(Sample(float(N), N, r.best_bound) for N, r in zip(N_list, runs))
    vals = [s.ratio for s in samples]
    best = min(vals) if minimize else max(vals)
    diag = Diagnostics(
        sum(r.diagnostics.iterations for r in runs),
        max(r.diagnostics.final_residual for r in runs),
        all(r.diagnostics.converged for r in runs),
        {"per_N": [{"N": N, **r.diagnostics.to_dict()} for N, r in zip(N_list, runs)]},
    )
    return ProbeResult(statement, "N_SWEEP", samples, best, _monotone(vals, minimize), diag, reference)


# ---------------------------------------------------------------------------
# extremal sweeps
# ---------------------------------------------------------------------------


def truncation_for(eps: float) -> int:
    return min(math.ceil(eps**-1.5), N_CAP)


def extremal_exponent(p: float, eps: float) -> float:
    """Exponent of a_n = n^{-1/p - ε sign(p)}; the sign keeps Σ a^p convergent for p < 0."""
    return -1 / p - eps * math.copysign(1.0, p)


def _power_ratio(st, eps, op):
    p = statement_exponent(st)
    N = truncation_for(eps)
    op = statement_operator(st, N) if op is None else op.with_truncation(N)
    a = np.exp(extremal_exponent(p, eps) * np.log(np.arange(1, N + 1, dtype=np.float64)))
    return Sample(eps, N, ratio_functional(op, a, p)), {}


def carleman_ratio(family: W.WeightFamily, eps: float, N: int | None = None,
                   inner_cutoff: int | None = None) -> tuple[float, dict]:
    """Σ G_n / Σ a_n for a_k = k^{-1-ε}.

    G_n for n ≤ N uses the exact a_k up to the inner cutoff C, with the
    exponent mass beyond C charged at ln a_{C+1} (an upper bound since a is
    decreasing).  For n > N the ratio G_n/a_n is frozen at its value at N, and
    both Σ a_n are exact zeta sums.
    """
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    N = truncation_for(eps) if N is None else N
    C = inner_cutoff or min(max(INNER_CUTOFF_MIN, 100 * N), INNER_CUTOFF_MAX)
    s = 1 + eps
    a = np.exp(-s * np.log(np.arange(1, C + 1, dtype=np.float64)))
    G, mass = geometric_remainders(family, a, N, tail_log=-s * math.log(C + 1))
    head = math.fsum(G)
    tail = G[-1] / a[N - 1] * float(zeta(s, N + 1))
    ratio = float((head + tail) / zeta(s))
    notes = {"inner_cutoff": C, "max_neglected_mass": float(mass.max()), "frozen_tail_share": tail / (head + tail)}
    return ratio, notes


def _carleman_sample(st, eps, op):
    ratio, notes = carleman_ratio(statement_family(st), eps)
    return Sample(eps, truncation_for(eps), ratio), notes


def extremal_sweep(st: StatementId, eps_grid, op: TailOperator | None = None,
                   threads: int | None = None) -> ProbeResult:
    """Ratios on the extremal family for each ε, ordered as given."""
    eps_grid = [float(e) for e in eps_grid]
    if not eps_grid:
        raise DomainError("eps_grid is empty")
    if any(e <= 0 for e in eps_grid):
        raise DomainError("eps_grid entries must be positive")
    lower = direction(st) == "lower"
    one = _carleman_sample if st.id in CARLEMAN else _power_ratio
    runs = _map_parallel(lambda e: one(st, e, op), eps_grid, threads)
    samples = tuple(s for s, _ in runs)
    # sort by decreasing ε to judge the trend toward the limit
    order = sorted(samples, key=lambda s: -s.parameter)
    vals = [s.ratio for s in order]
    best = min(vals) if lower else max(vals)
    try:
        ref = closed_constant(st)
    except Exception:
        ref = None
    notes = {"N_cap": N_CAP, "per_eps": [{"eps": e, **n} for e, (_, n) in zip(eps_grid, runs)]}
    return ProbeResult(st, "EXTREMAL_SWEEP", samples, best, _monotone(vals, lower, 0.0),
                       Diagnostics(0, 0.0, True, notes), ref)
