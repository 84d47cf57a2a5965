"""Positive weight sequences, their head/tail sums, and checks on the ratio Λ_n/λ_n.

Indices start at 1 throughout.  For the remainder-form inequalities the tail sum
Λ_n = Σ_{k≥n} λ_k is the normalizer, and most conditions are phrased through the
ratio R_n = Λ_n/λ_n with the convention R_0 = 1.

Internally sums and ratios are accumulated in ``np.longdouble`` so that the
differences R_{n-1} - R_n, which suffer heavy cancellation for large n, keep
roughly three more digits than plain doubles would.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from .errors import DivergenceError, DomainError, OutOfRangeError

LD = np.longdouble

#: Partial-sum cutoff used before switching to an integral bracket for power tails.
DEFAULT_TAIL_CUTOFF = 10**6

#: Relative slack tolerance: a slack >= -SLACK_TOL * (1 + |L|) counts as holding.
SLACK_TOL = 1e-12


@dataclass(frozen=True)
class PowerDiffRemainder:
    """λ_k = ((k+1)^r - k^r)/r, with λ_k = ln((k+1)/k) at r = 0."""

    r: float

    def __post_init__(self):
        object.__setattr__(self, "r", float(self.r))


@dataclass(frozen=True)
class HeadPowerDiff:
    """λ_k = k^α - (k-1)^α for α > 0; head sums telescope to n^α."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"HeadPowerDiff needs alpha > 0, got {self.alpha}")
        object.__setattr__(self, "alpha", float(self.alpha))


@dataclass(frozen=True)
class PurePower:
    """λ_k = k^α."""

    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))


@dataclass(frozen=True)
class Tabulated:
    """Explicit positive values λ_1..λ_m, optionally continued by another family.

    Without ``tail_rule`` the family is treated as finitely supported: tail sums
    only cover the tabulated range and indices past the end are rejected.
    """

    values: tuple = field(repr=False)
    tail_rule: "WeightFamily | None" = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DomainError("Tabulated family needs at least one value")
        if any(not (v > 0 and math.isfinite(v)) for v in vals):
            raise DomainError("Tabulated weights must be finite and strictly positive")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


WeightFamily = Union[PowerDiffRemainder, HeadPowerDiff, PurePower, Tabulated]


class TailEstimate(NamedTuple):
    """Tail sum value and the width of the bracket it was taken from (0 if exact)."""

    value: float
    width: float


def describe(family: WeightFamily) -> str:
    if isinstance(family, PowerDiffRemainder):
        return f"PowerDiffRemainder(r={family.r:g})"
    if isinstance(family, HeadPowerDiff):
        return f"HeadPowerDiff(alpha={family.alpha:g})"
    if isinstance(family, PurePower):
        return f"PurePower(alpha={family.alpha:g})"
    rule = "" if family.tail_rule is None else f", tail={describe(family.tail_rule)}"
    return f"Tabulated(m={len(family.values)}{rule})"


def is_tail_summable(family: WeightFamily) -> bool:
    if isinstance(family, PowerDiffRemainder):
        return family.r < 0
    if isinstance(family, HeadPowerDiff):
        return False
    if isinstance(family, PurePower):
        return family.alpha < -1
    if family.tail_rule is None:
        return True
    return is_tail_summable(family.tail_rule)


def _require_summable(family):
    if not is_tail_summable(family):
        raise DivergenceError(f"Σ λ_k diverges for {describe(family)}")


def lambdas(family: WeightFamily, k, dtype=np.float64) -> np.ndarray:
    """Vectorized λ_k for an integer array ``k`` (all entries >= 1)."""
    k = np.asarray(k)
    if k.size and k.min() < 1:
        raise DomainError("weight indices start at 1")
    x = k.astype(dtype)
    if isinstance(family, PowerDiffRemainder):
        r = family.r
        step = np.log1p(1 / x)
        if r == 0:
            return step
        # k^r * ((1 + 1/k)^r - 1) / r without cancellation for small r or large k
        return np.power(x, dtype(r)) * np.expm1(dtype(r) * step) / dtype(r)
    if isinstance(family, HeadPowerDiff):
        a = dtype(family.alpha)
        out = np.ones_like(x)
        big = x > 1
        xb = x[big]
        out[big] = -np.power(xb, a) * np.expm1(a * np.log1p(-1 / xb))
        return out
    if isinstance(family, PurePower):
        return np.power(x, dtype(family.alpha))
    m = len(family.values)
    if k.size and k.max() > m and family.tail_rule is None:
        raise OutOfRangeError(f"index {int(k.max())} beyond {m} tabulated weights")
    out = np.empty(x.shape, dtype=dtype)
    inside = k <= m
    out[inside] = np.asarray(family.values, dtype=dtype)[k[inside] - 1]
    if not inside.all():
        out[~inside] = lambdas(family.tail_rule, k[~inside], dtype)
    return out


def lambda_at(family: WeightFamily, k: int) -> float:
    """λ_k for a single index."""
    if k < 1:
        raise DomainError(f"weight index must be >= 1, got {k}")
    return float(lambdas(family, np.array([k]), LD)[0])


def _power_tail_bracket(alpha, cutoff):
    # ∫_{K+1}^∞ x^α dx <= Σ_{k>K} k^α <= ∫_K^∞ x^α dx, for α < -1
    s = -alpha - 1
    lower = (cutoff + 1) ** (-s) / s
    upper = cutoff ** (-s) / s
    return lower, upper


def tail_estimate(family: WeightFamily, n: int, cutoff: int = DEFAULT_TAIL_CUTOFF) -> TailEstimate:
    """Λ_n = Σ_{k≥n} λ_k together with the width of the enclosing bracket."""
    if n < 1:
        raise DomainError(f"tail index must be >= 1, got {n}")
    _require_summable(family)
    if isinstance(family, PowerDiffRemainder):
        r = family.r
        return TailEstimate(float(-np.power(LD(n), LD(r)) / LD(r)), 0.0)
    if isinstance(family, PurePower):
        K = max(cutoff, n)
        k = np.arange(n, K + 1)
        partial = math.fsum(np.power(k.astype(np.float64), family.alpha))
        lower, upper = _power_tail_bracket(family.alpha, K)
        return TailEstimate(partial + 0.5 * (lower + upper), upper - lower)
    m = len(family.values)
    head = math.fsum(family.values[n - 1:]) if n <= m else 0.0
    if family.tail_rule is None:
        if n > m:
            raise OutOfRangeError(f"index {n} beyond {m} tabulated weights")
        return TailEstimate(head, 0.0)
    rest = tail_estimate(family.tail_rule, max(n, m + 1), cutoff)
    return TailEstimate(head + rest.value, rest.width)


def tail_sum(family: WeightFamily, n: int, cutoff: int = DEFAULT_TAIL_CUTOFF) -> float:
    """Λ_n = Σ_{k≥n} λ_k.  Raises DivergenceError for non-summable families."""
    return tail_estimate(family, n, cutoff).value


def tail_sums(family: WeightFamily, n_max: int, cutoff: int = DEFAULT_TAIL_CUTOFF) -> np.ndarray:
    """Λ_1..Λ_{n_max} as a long-double array.

    The far tail Λ_{n_max+1} is computed once; the rest is a suffix scan that
    starts from the smallest terms.
    """
    _require_summable(family)
    n = np.arange(1, n_max + 1)
    if isinstance(family, PowerDiffRemainder):
        r = LD(family.r)
        return -np.power(n.astype(LD), r) / r
    if isinstance(family, Tabulated) and family.tail_rule is None:
        m = len(family.values)
        if n_max > m:
            raise OutOfRangeError(f"index {n_max} beyond {m} tabulated weights")
        far = LD(math.fsum(family.values[n_max:]))
    else:
        far = LD(tail_estimate(family, n_max + 1, max(cutoff, n_max + 1)).value)
    lam = lambdas(family, n, LD)
    return np.cumsum(lam[::-1])[::-1] + far


def head_sum(family: WeightFamily, n: int) -> float:
    """Σ_{k≤n} λ_k."""
    if n < 1:
        raise DomainError(f"head index must be >= 1, got {n}")
    if isinstance(family, HeadPowerDiff):
        return float(n) ** family.alpha
    return math.fsum(lambdas(family, np.arange(1, n + 1)))


def head_sums(family: WeightFamily, n_max: int) -> np.ndarray:
    """Σ_{k≤n} λ_k for n = 1..n_max as a long-double array."""
    n = np.arange(1, n_max + 1)
    if isinstance(family, HeadPowerDiff):
        return np.power(n.astype(LD), LD(family.alpha))
    return np.cumsum(lambdas(family, n, LD))


def lambda_ratio(family: WeightFamily, n: int) -> float:
    """Λ_n/λ_n, equal to 1 at n = 0 by convention."""
    if n < 0:
        raise DomainError(f"ratio index must be >= 0, got {n}")
    _require_summable(family)
    if n == 0:
        return 1.0
    if isinstance(family, PowerDiffRemainder):
        return float(-1 / np.expm1(LD(family.r) * np.log1p(1 / LD(n))))
    return tail_sum(family, n) / lambda_at(family, n)


def lambda_ratios(family: WeightFamily, n_max: int, cutoff: int = DEFAULT_TAIL_CUTOFF) -> np.ndarray:
    """R_0..R_{n_max} with R_n = Λ_n/λ_n and R_0 = 1, in long double."""
    _require_summable(family)
    out = np.empty(n_max + 1, dtype=LD)
    out[0] = 1
    if n_max == 0:
        return out
    if isinstance(family, PowerDiffRemainder):
        # Λ_n/λ_n = n^r / (n^r - (n+1)^r) = -1 / expm1(r log(1 + 1/n))
        n = np.arange(1, n_max + 1).astype(LD)
        out[1:] = -1 / np.expm1(LD(family.r) * np.log1p(1 / n))
        return out
    n = np.arange(1, n_max + 1)
    out[1:] = tail_sums(family, n_max, cutoff) / lambdas(family, n, LD)
    return out


def ratio_differences(family: WeightFamily, n_max: int, cutoff: int = DEFAULT_TAIL_CUTOFF) -> np.ndarray:
    """d_n = R_{n-1} - R_n for n = 1..n_max (long double)."""
    R = lambda_ratios(family, n_max, cutoff)
    return R[:-1] - R[1:]


# ---------------------------------------------------------------------------
# conditions on λ
# ---------------------------------------------------------------------------

L_CONDITIONS = ("EQ66", "EQ66_REVERSED", "EQ66_PRIME")
M_VARIANTS = ("M_LOG", "M_DIFF", "M_AVG")


@dataclass
class WeightConditionReport:
    """Per-index slack of one condition on λ, evaluated for 1 <= n <= n_max.

    For the L conditions ``parameter`` is the L that was tested.  For the M
    functionals it is the supremum of ``values`` and ``slack`` is M - value.
    """

    condition_id: str
    parameter: float
    slack: np.ndarray
    n_max: int
    violated_at: int | None
    tail_note: str
    family: str = ""
    p: float | None = None
    values: np.ndarray | None = None
    e_value: float | None = None

    @property
    def verdict(self) -> str:
        if self.violated_at is None:
            return "HOLDS_UP_TO_N_MAX"
        return f"VIOLATED_AT({self.violated_at})"

    @property
    def holds(self) -> bool:
        return self.violated_at is None

    @property
    def per_index_slack(self) -> list[tuple[int, float]]:
        return [(i + 1, float(s)) for i, s in enumerate(self.slack)]

    @property
    def min_slack(self) -> float:
        return float(np.min(self.slack))

    @property
    def argmin_slack(self) -> int:
        return int(np.argmin(self.slack)) + 1


def _first_violation(slack, scale):
    bad = np.flatnonzero(slack < -SLACK_TOL * (1 + abs(scale)))
    return int(bad[0]) + 1 if bad.size else None


def check_l_condition(
    family: WeightFamily,
    condition: str,
    L: float,
    p: float | None = None,
    n_max: int = 10**4,
) -> WeightConditionReport:
    """Slack of the sufficient condition on λ that yields constant (p/(p-L))^p.

    EQ66:          L - (R_{n-1} - R_n)               (p > 1 or p < 0)
    EQ66_REVERSED: (R_{n-1} - R_n) - L               (0 < p < 1)
    EQ66_PRIME:    R_n (1 - L/(p R_n))^{1-p} + L/p - R_{n-1}, negated for 0 < p < 1
                   where the reversed inequality is the one required.
    """
    if condition not in L_CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}; expected one of {L_CONDITIONS}")
    R = lambda_ratios(family, n_max)
    d = R[:-1] - R[1:]
    note = f"checked 1 <= n <= {n_max}; no claim beyond n_max"
    if condition == "EQ66":
        slack = LD(L) - d
    elif condition == "EQ66_REVERSED":
        slack = d - LD(L)
    else:
        if p is None or p == 0:
            raise DomainError("EQ66_PRIME needs a nonzero exponent p")
        base = 1 - LD(L) / (LD(p) * R[1:])
        bad = np.flatnonzero(base <= 0)
        if bad.size:
            raise DomainError(f"1 - Lλ_n/(pΛ_n) <= 0 at n = {int(bad[0]) + 1}")
        slack = R[1:] * np.exp(LD(1 - p) * np.log(base)) + LD(L) / LD(p) - R[:-1]
        if 0 < p < 1:
            slack = -slack
            note += "; reversed direction (0 < p < 1)"
    slack = slack.astype(np.float64)
    return WeightConditionReport(
        condition_id=condition,
        parameter=float(L),
        slack=slack,
        n_max=n_max,
        violated_at=_first_violation(slack, L),
        tail_note=note,
        family=describe(family),
        p=p,
    )


def carleman_m(
    family: WeightFamily,
    variant: str,
    n_max: int = 10**4,
    inner_cutoff: int = 10**5,
) -> WeightConditionReport:
    """Supremum M of the functional behind the Carleman-type bound E = e^M.

    M_LOG:  R_n log(R_{n-1}/R_n)
    M_DIFF: R_{n-1} - R_n
    M_AVG:  Σ_{k≥n} (λ_k/Λ_n)(R_{k-1} - R_k), with the inner sum cut at
            ``inner_cutoff`` and the remaining mass Λ_{C+1}/Λ_n weighted by the
            largest difference term observed up to the cutoff.
    """
    if variant not in M_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {M_VARIANTS}")
    C = max(n_max, inner_cutoff) if variant == "M_AVG" else n_max
    R = lambda_ratios(family, C)
    d = R[:-1] - R[1:]
    note = f"supremum over 1 <= n <= {n_max} only"
    if variant == "M_DIFF":
        vals = d[:n_max]
    elif variant == "M_LOG":
        vals = R[1:n_max + 1] * np.log1p(d[:n_max] / R[1:n_max + 1])
    else:
        k = np.arange(1, C + 1)
        lam = lambdas(family, k, LD)
        Lam = tail_sums(family, C + 1)
        inner = np.cumsum((lam * d)[::-1])[::-1]
        d_sup = d.max()
        far = Lam[C]
        vals = (inner[:n_max] + far * d_sup) / Lam[:n_max]
        worst_mass = float(far / Lam[n_max - 1])
        note += (
            f"; inner sums cut at k = {C}, remaining mass <= {worst_mass:.3e} "
            f"weighted by observed sup of differences {float(d_sup):.12g}"
        )
    vals = vals.astype(np.float64)
    M = float(vals.max())
    return WeightConditionReport(
        condition_id=variant,
        parameter=M,
        slack=M - vals,
        n_max=n_max,
        violated_at=None,
        tail_note=note,
        family=describe(family),
        values=vals,
        e_value=math.exp(M),
    )


# ---------------------------------------------------------------------------
# file input
# ---------------------------------------------------------------------------


def load_tabulated(path, tail_rule: WeightFamily | None = None) -> Tabulated:
    """Read a two-column ``index value`` file ('#' starts a comment)."""
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns (index, value), got {data.shape[1]}")
    idx = data[:, 0]
    if not np.array_equal(idx, np.arange(1, len(idx) + 1)):
        raise ValueError(f"{path}: indices must run 1, 2, ..., m without gaps")
    return Tabulated(tuple(data[:, 1]), tail_rule)
