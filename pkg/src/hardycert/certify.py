"""One-sided certificates for best constants with 0 < p < 1.

The auxiliary-sequence engine bounds the constant of the weighted remainder
inequality from below by

    min_k s_k,  s_k = (k^-β - (k+1)^-β)^{1-p} k^{r-p} Σ_{n≤k} n^{β(1-p)-r},

where the minimum over k ≤ K is computed and the tail k > K is covered by
an analytic argument (monotonicity of f_{p,r,β}, or of u_β when r = 1 - p).
If neither argument's hypothesis can be verified the certificate is returned
as UNCERTIFIED.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, SearchError
from .statements import (
    StatementId,
    closed_constant,
    statement,
    statement_operator,
    thm4_constant,
    thm5_constant,
)

LD = np.longdouble
DEFAULT_K = 10**4


class Method(str, Enum):
    CLOSED_FORM = "CLOSED_FORM"
    LS_BETA = "LS_BETA"
    LS_LEMMA1 = "LS_LEMMA1"


class TailTag(str, Enum):
    LEMMA1_MONOTONE = "LEMMA1_MONOTONE"
    U_BETA_DECREASING = "U_BETA_DECREASING"
    NONE = "NONE"


# ---------------------------------------------------------------------------
# s_k and its limit
# ---------------------------------------------------------------------------


def s_values(p: float, r: float, beta: float, K: int) -> np.ndarray:
    """s_1..s_K in long double."""
    if beta <= 0:
        raise DomainError(f"beta must be positive, got {beta}")
    k = np.arange(1, K + 1).astype(LD)
    p, r, beta = LD(p), LD(r), LD(beta)
    # k^-β - (k+1)^-β = k^-β (1 - (1+1/k)^-β), without cancellation
    diff = np.power(k, -beta) * -np.expm1(-beta * np.log1p(1 / k))
    partial = np.cumsum(np.power(k, beta * (1 - p) - r))
    return np.power(diff, 1 - p) * np.power(k, r - p) * partial


def s_value(p: float, r: float, beta: float, k: int) -> float:
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    return float(s_values(p, r, beta, k)[-1])


def s_limit(p: float, r: float, beta: float) -> float:
    """lim_{k→∞} s_k = β^{1-p} / (1 + β(1-p) - r)."""
    return beta ** (1 - p) / (1 + beta * (1 - p) - r)


def in_window(p: float, r: float, beta: float) -> bool:
    """r/(1-p) ≤ β ≤ (1+r)/(1-p), i.e. 0 ≤ β(1-p) - r ≤ 1."""
    e = beta * (1 - p) - r
    return -1e-15 <= e <= 1 + 1e-15


# ---------------------------------------------------------------------------
# lemma functions
# ---------------------------------------------------------------------------

LEMMA_FUNCTIONS = ("F_PRB", "H_PRB", "U_BETA", "V_BETA", "V_BETA_SECOND")


def _difference_quotient(x, hi, lo):
    """((1+x)^hi - (1+x)^lo) / x with the x → 0 limit hi - lo."""
    if x == 0:
        return hi - lo
    l1 = math.log1p(x)
    return math.exp(lo * l1) * math.expm1((hi - lo) * l1) / x


def lemma_function(which: str, x: float, *, p=None, r=None, beta=None) -> float:
    if not 0 <= x <= 1:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if which == "F_PRB":
        s = r / (1 - p)
        return _difference_quotient(x, beta - s, -s)
    if which == "H_PRB":
        return (1 + x - (1 + x) ** (beta + 1)
                + x / (1 - p) * ((beta * (1 - p) - r) * (1 + x) ** beta + r))
    if which == "U_BETA":
        return _difference_quotient(x, beta - 1, -1.0)
    if which == "V_BETA":
        return 1 + x - (1 + x) ** (1 + beta) + x * (1 + (beta - 1) * (1 + x) ** beta)
    if which == "V_BETA_SECOND":
        return beta * (1 + x) ** (beta - 2) * (beta - 3 + (beta**2 - beta - 2) * x)
    raise ValueError(f"unknown lemma function {which!r}; known: {', '.join(LEMMA_FUNCTIONS)}")


def f_increasing_certified(p: float, r: float, beta: float) -> bool:
    """Hypothesis under which f_{p,r,β} increases on [0, 1]: β ≥ 1 + 2r/(1-p), 0 < r ≤ p < 1."""
    return 0 < r <= p < 1 and beta >= 1 + 2 * r / (1 - p) - 1e-15


def u_decreasing_certified(beta: float, x_bar: float) -> bool:
    """v''_β < 0 on [0, x̄]; the factor β - 3 + (β²-β-2)x is linear so endpoints suffice."""
    return beta - 3 < 0 and beta - 3 + (beta**2 - beta - 2) * x_bar < 0


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    statement: StatementId
    method: Method
    beta: float | None
    gamma: float | None
    K: int
    per_k_values: tuple
    tail_bound: float | None
    tail_tag: TailTag
    constant: float
    status: str
    reason: str = ""
    argmin_k: int | None = None
    notes: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.status == "CERTIFIED"

    @property
    def s1(self) -> float | None:
        return self.per_k_values[0][1] if self.per_k_values else None

    @property
    def min_computed(self) -> float | None:
        return min(v for _, v in self.per_k_values) if self.per_k_values else None

    def to_dict(self) -> dict:
        return {
            "statement": self.statement.as_dict(),
            "method": self.method.value,
            "parameters": {"beta": self.beta, "gamma": self.gamma, "K": self.K},
            "per_k_values": [[k, v] for k, v in self.per_k_values],
            "argmin_k": self.argmin_k,
            "tail_bound": self.tail_bound,
            "tail_justification": self.tail_tag.value,
            "constant": self.constant,
            "status": self.status if self.certified else f"UNCERTIFIED({self.reason})",
            "notes": dict(self.notes),
        }


def _uncertified(st, method, beta, K, per_k, reason, argmin):
    const = min(v for _, v in per_k) if per_k else float("nan")
    return Certificate(st, method, beta, None, K, per_k, None, TailTag.NONE, const,
                       "UNCERTIFIED", reason, argmin, {"unproven_beyond_K": K})


def certify_constant(p: float, r: float, beta: float, K: int = DEFAULT_K,
                     method: str | Method | None = None) -> Certificate:
    """Lower bound on the constant of the weighted remainder inequality at (p, r).

    ``method`` may force LS_LEMMA1 or LS_BETA; a forced method whose
    hypotheses fail raises DomainError instead of returning UNCERTIFIED.
    """
    if not 0 < p < 1:
        raise DomainError(f"certificates need 0 < p < 1, got p={p}")
    if beta <= 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    forced = Method(method) if method is not None else None
    st = statement("LS_41", p=p, r=r)
    s = s_values(p, r, beta, K).astype(np.float64)
    argmin = int(np.argmin(s)) + 1
    per_k = tuple((k, float(v)) for k, v in enumerate(s, start=1))
    min_s = float(s[argmin - 1])

    if not in_window(p, r, beta):
        if forced is not None:
            raise DomainError(f"beta={beta} lies outside [r/(1-p), (1+r)/(1-p)] = "
                              f"[{r / (1 - p):g}, {(1 + r) / (1 - p):g}]")
        return _uncertified(st, Method.LS_BETA, beta, K, per_k, "outside window", argmin)

    use_lemma1 = f_increasing_certified(p, r, beta)
    x_bar = 1 / (K + 1)
    use_u = abs(r - (1 - p)) <= 1e-15 and u_decreasing_certified(beta, x_bar)
    if forced is Method.LS_LEMMA1 and not use_lemma1:
        raise DomainError(f"monotone-tail hypothesis beta >= 1 + 2r/(1-p) = {1 + 2 * r / (1 - p):g} fails")
    if forced is Method.LS_BETA and not use_u:
        raise DomainError("u_beta route needs r = 1 - p and v''_beta < 0 on [0, 1/(K+1)]")

    if use_lemma1 and forced is not Method.LS_BETA:
        tail, tag, meth = s_limit(p, r, beta), TailTag.LEMMA1_MONOTONE, Method.LS_LEMMA1
    elif use_u:
        scale = 1 / (1 + beta * (1 - p) - r)
        tail = scale * lemma_function("U_BETA", x_bar, beta=beta) ** (1 - p)
        tag, meth = TailTag.U_BETA_DECREASING, Method.LS_BETA
    else:
        return _uncertified(st, Method.LS_BETA, beta, K, per_k, "no tail justification", argmin)
    return Certificate(st, meth, beta, None, K, per_k, tail, tag, min(min_s, tail), "CERTIFIED",
                       "", argmin, {"x_bar": x_bar} if tag is TailTag.U_BETA_DECREASING else {})


def closed_form_certificate(st: StatementId) -> Certificate:
    """Wrap a catalog constant as a certificate (no per-k evidence)."""
    c = closed_constant(st)
    return Certificate(st, Method.CLOSED_FORM, None, None, 0, (), None, TailTag.NONE, c, "CERTIFIED")


def matching_operator(cert: Certificate, N: int):
    """Operator whose p-ratio the certificate's constant bounds from below."""
    return statement_operator(cert.statement, N)


# ---------------------------------------------------------------------------
# β search, heuristic γ, THM5 consistency
# ---------------------------------------------------------------------------


class BetaCrossing(NamedTuple):
    beta: float
    value: float
    bracket: tuple


def _s1(p, r, beta):
    return (-math.expm1(-beta * math.log(2))) ** (1 - p)


def beta_search(p: float, r: float, lo: float = 1.5, hi: float = 4.0, xtol: float = 1e-7,
                max_expand: int = 30) -> BetaCrossing:
    """β where s_1(β) = s_∞(β); the common value is the best single-β bound."""
    if not 0 < p < 1:
        raise DomainError(f"beta_search needs 0 < p < 1, got {p}")

    def gap(b):
        return _s1(p, r, b) - s_limit(p, r, b)

    g_lo, g_hi = gap(lo), gap(hi)
    tried = [(lo, g_lo), (hi, g_hi)]
    for _ in range(max_expand):
        if g_lo * g_hi <= 0:
            break
        lo, hi = lo / 1.6, hi * 1.6
        g_lo, g_hi = gap(lo), gap(hi)
        tried += [(lo, g_lo), (hi, g_hi)]
    else:
        raise SearchError(f"no sign change of s_1 - s_inf found; sampled {tried[-4:]}")
    b = brentq(gap, lo, hi, xtol=xtol)
    return BetaCrossing(b, s_limit(p, r, b), (lo, hi))


class GammaChoice(NamedTuple):
    gamma: float
    bound: float  # r - 1/p
    satisfies_constraint: bool


def heuristic_gamma(p: float, r: float) -> GammaChoice:
    if p == 0:
        raise DomainError("p must be nonzero")
    g = (r * p - 1) / p**2
    bound = r - 1 / p
    return GammaChoice(g, bound, g < bound)


class Thm5Consistency(NamedTuple):
    middle_branch_gap: float
    r_star: float
    stationarity_residual: float


def thm5_consistency(p: float, step: float = 1e-6) -> Thm5Consistency:
    if not 0 < p < 1:
        raise DomainError(f"need 0 < p < 1, got {p}")
    middle = 0.5 * ((1 + p) / (1 - p)) ** (1 - p)
    gap = abs(thm5_constant(p, p) - middle)
    r_star = (3 - 2 * p) * (1 - p) / (2 * p)

    def log_inv(r):
        return math.log(2 - p + r) + (1 - p) * math.log((1 - p) / (1 - p + 2 * r))

    resid = (log_inv(r_star + step) - log_inv(r_star - step)) / (2 * step)
    return Thm5Consistency(gap, r_star, abs(resid))


__all__ = [
    "BetaCrossing", "Certificate", "GammaChoice", "LEMMA_FUNCTIONS", "Method", "TailTag",
    "Thm5Consistency", "beta_search", "certify_constant", "closed_form_certificate",
    "f_increasing_certified", "heuristic_gamma", "in_window", "lemma_function",
    "matching_operator", "s_limit", "s_value", "s_values", "thm4_constant", "thm5_consistency",
    "u_decreasing_certified",
]
