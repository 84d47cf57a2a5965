"""Pointwise checks of the auxiliary inequalities used by the certificates.

Every checker evaluates one inequality at n = 1..n_max at once and returns an
:class:`AuxResult` whose ``slack`` is nonnegative where the inequality holds in
the asserted direction.  Sums and differences of powers run in long double.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

import numpy as np

from . import weights as W
from .errors import RegimeError

LD = np.longdouble

AUX_CHECKS = ("BOUND1", "LEMMA_42", "BENNETT_501", "HOLDER_36", "INEQ_611", "COR0_WEIGHT", "COR7_WEIGHT")

PARAMS = {
    "BOUND1": ("r",),
    "LEMMA_42": ("r",),
    "BENNETT_501": ("gamma",),
    "HOLDER_36": ("p", "r"),
    "INEQ_611": ("alpha",),
    "COR0_WEIGHT": ("alpha", "beta", "p"),
    "COR7_WEIGHT": ("alpha", "r", "p"),
}


class AuxResult(NamedTuple):
    n: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    slack: np.ndarray

    @property
    def rel_slack(self) -> np.ndarray:
        scale = np.maximum(np.abs(self.lhs), np.abs(self.rhs))
        return self.slack / np.where(scale > 0, scale, 1.0)

    @property
    def min_slack(self) -> float:
        return float(np.min(self.slack))

    @property
    def min_rel_slack(self) -> float:
        return float(np.min(self.rel_slack))


def _idx(n_max):
    return np.arange(1, n_max + 1).astype(LD)


def _pdr(r, k):
    """((k+1)^r - k^r)/r, ln((k+1)/k) at r = 0."""
    return W.lambdas(W.PowerDiffRemainder(float(r)), np.asarray(k, dtype=np.int64), LD)


def _head_pdr(a, k):
    """(k^a - (k-1)^a)/a for k ≥ 1 (value 1/a at k = 1 needs a > 0)."""
    k = np.asarray(k, dtype=LD)
    out = np.empty_like(k)
    one = k == 1
    out[one] = 1 / LD(a)
    km = k[~one] - 1
    out[~one] = _pdr(a, km.astype(np.int64))
    return out


def _result(n, lhs, rhs, slack):
    f = np.float64
    return AuxResult(n.astype(np.int64), lhs.astype(f), rhs.astype(f), slack.astype(f))


def power_integral(e, n):
    """∫_n^{n+1} x^e dx in closed form (log case at e = -1)."""
    return _pdr(e + 1, n)


def bound1(r: float, n_max: int) -> AuxResult:
    """Σ_{i≤n} i^r vs (r/(1+r)) n^r (n+1)^r / ((n+1)^r - n^r); ≥ for r ≥ 1, ≤ for -1 < r ≤ 1."""
    if not r > -1:
        raise RegimeError(f"BOUND1 needs r > -1, got {r}")
    n = _idx(n_max)
    lhs = np.cumsum(np.power(n, LD(r)))
    rhs = np.power(n * (n + 1), LD(r)) / ((1 + LD(r)) * _pdr(r, n))
    slack = lhs - rhs if r >= 1 else rhs - lhs
    return _result(n, lhs, rhs, slack)


def lemma_42(r: float, n_max: int) -> AuxResult:
    """Σ_{i≤n} i^r ≥ n (n+1)^r / (1+r) for 0 ≤ r ≤ 1."""
    if not 0 <= r <= 1:
        raise RegimeError(f"LEMMA_42 needs 0 <= r <= 1, got {r}")
    n = _idx(n_max)
    lhs = np.cumsum(np.power(n, LD(r)))
    rhs = n * np.power(n + 1, LD(r)) / (1 + LD(r))
    return _result(n, lhs, rhs, lhs - rhs)


def bennett_501(gamma: float, n_max: int) -> AuxResult:
    """(k^γ - (k-1)^γ) Σ_{n≥k} n^-γ ≤ γ/(γ-1) for γ > 1."""
    if not gamma > 1:
        raise RegimeError(f"BENNETT_501 needs gamma > 1, got {gamma}")
    n = _idx(n_max)
    tails = W.tail_sums(W.PurePower(-gamma), n_max)[:n_max]
    lhs = _head_pdr(gamma, n) * LD(gamma) * tails
    rhs = np.full_like(lhs, LD(gamma) / LD(gamma - 1))
    return _result(n, lhs, rhs, rhs - lhs)


def holder_36(p: float, r: float, n_max: int) -> AuxResult:
    """(∫x^{r-1})^p (∫x^{r-1/p-1})^{1-p} ≥ ∫x^{r-1/p} over [n, n+1], 0 < p < 1."""
    if not 0 < p < 1:
        raise RegimeError(f"HOLDER_36 needs 0 < p < 1, got {p}")
    n = _idx(n_max)
    i1 = power_integral(r - 1, n)
    i2 = power_integral(r - 1 / p - 1, n)
    lhs = np.power(i1, LD(p)) * np.power(i2, LD(1 - p))
    rhs = power_integral(r - 1 / p, n)
    return _result(n, lhs, rhs, lhs - rhs)


def ineq_611(alpha: float, n_max: int) -> AuxResult:
    """n^α/(n^α-(n+1)^α) - (n+1)^α/((n+1)^α-(n+2)^α) ≤ 1/α for -1 ≤ α < 0."""
    if not -1 <= alpha < 0:
        raise RegimeError(f"INEQ_611 needs -1 <= alpha < 0, got {alpha}")
    ratios = W.lambda_ratios(W.PowerDiffRemainder(alpha), n_max + 1)
    lhs = ratios[1 : n_max + 1] - ratios[2 : n_max + 2]
    rhs = np.full_like(lhs, 1 / LD(alpha))
    return _result(_idx(n_max), lhs, rhs, rhs - lhs)


def cor0_weight(alpha: float, beta: float, p: float, n_max: int) -> AuxResult:
    """n^{β/p} ((n+1)^α - n^α)/α ≥ ((n+1)^s - n^s)/s, s = α + β/p, for β ≤ 0 < α, p > 0."""
    if not (beta <= 0 < alpha and p > 0):
        raise RegimeError(f"COR0_WEIGHT needs beta <= 0 < alpha and p > 0; got alpha={alpha}, beta={beta}, p={p}")
    n = _idx(n_max)
    lhs = np.power(n, LD(beta) / LD(p)) * _pdr(alpha, n)
    rhs = _pdr(alpha + beta / p, n)
    return _result(n, lhs, rhs, lhs - rhs)


def cor7_weight(alpha: float, r: float, p: float, n_max: int) -> AuxResult:
    """k^{(1-r)/p} (k^α - (k-1)^α)/α ≤ (k^s - (k-1)^s)/s, s = α + (1-r)/p; reversed for p < 0."""
    if not (alpha > 0 and r >= 1 and (p < 0 or (p >= 1 and alpha * p > r))):
        raise RegimeError(f"COR7_WEIGHT needs alpha > 0, r >= 1 and p < 0 or (p >= 1, alpha p > r); "
                          f"got alpha={alpha}, r={r}, p={p}")
    n = _idx(n_max)
    s = alpha + (1 - r) / p
    lhs = np.power(n, LD(1 - r) / LD(p)) * _head_pdr(alpha, n)
    rhs = _head_pdr(s, n)
    slack = rhs - lhs if p > 0 else lhs - rhs
    return _result(n, lhs, rhs, slack)


_CHECKERS = {
    "BOUND1": bound1,
    "LEMMA_42": lemma_42,
    "BENNETT_501": bennett_501,
    "HOLDER_36": holder_36,
    "INEQ_611": ineq_611,
    "COR0_WEIGHT": cor0_weight,
    "COR7_WEIGHT": cor7_weight,
}


def auxiliary_check(which: str, params: dict, n_max: int) -> AuxResult:
    """Run one auxiliary inequality for n = 1..n_max."""
    if which not in _CHECKERS:
        raise ValueError(f"unknown auxiliary check {which!r}; known: {', '.join(AUX_CHECKS)}")
    missing = set(PARAMS[which]) - set(params)
    if missing:
        raise ValueError(f"{which} needs parameters {sorted(missing)}")
    args = [float(params[k]) for k in PARAMS[which]]
    return _CHECKERS[which](*args, n_max)


def auxiliary_slack(which: str, params: dict, n: int) -> float:
    """Slack of a single inequality at index n."""
    return float(auxiliary_check(which, params, n).slack[-1])


# ---------------------------------------------------------------------------
# hypothesis grids used by the test and acceptance suites
# ---------------------------------------------------------------------------

R_GRID = (-0.9, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0)
GAMMA_GRID = (1.5, 2.0, 3.0)
P_GRID = (0.1, 0.25, 1 / 3, 0.5, 0.75, 0.9)


def hypothesis_grid(which: str):
    """Parameter dicts on which the inequality's hypothesis holds, with their n_max."""
    if which == "BOUND1":
        return [({"r": r}, 10**4) for r in R_GRID if r > -1]
    if which == "LEMMA_42":
        return [({"r": r}, 10**4) for r in R_GRID if 0 <= r <= 1]
    if which == "BENNETT_501":
        return [({"gamma": g}, 10**3) for g in GAMMA_GRID]
    if which == "HOLDER_36":
        return [({"p": p, "r": r}, 10**4) for p, r in itertools.product(P_GRID, R_GRID)]
    if which == "INEQ_611":
        return [({"alpha": a}, 10**4) for a in (-1.0, -0.75, -0.5, -0.25, -0.1)]
    if which == "COR0_WEIGHT":
        return [({"alpha": a, "beta": b, "p": p}, 10**4)
                for a, b, p in itertools.product((0.5, 1.0, 2.0), (-1.0, -0.5, 0.0), (0.2, 0.5, 0.9))]
    if which == "COR7_WEIGHT":
        out = []
        for a, r, p in itertools.product((0.5, 1.0, 2.0, 3.0), (1.0, 2.0, 3.0), (-2.0, -0.5, 1.0, 2.0, 3.0)):
            if p < 0 or a * p > r:
                out.append(({"alpha": a, "r": r, "p": p}, 10**4))
        return out
    raise ValueError(f"unknown auxiliary check {which!r}")
