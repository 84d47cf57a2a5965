"""Statement-level duality and numerical checks of the duality principle.

For a nonnegative matrix A and p > 1, ‖A‖_{p→p} = ‖Aᵀ‖_{q→q} with
1/p + 1/q = 1.  A remainder operator with weights λ_k and normalizer N_n has
as transpose the head operator with weights 1/N_n and normalizer 1/λ_k, which
is how the remainder-form statements pair with head-form ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import weights as W
from .errors import DomainError, RegimeError
from .operators import Direction, Normalizer, TailOperator
from .probe import power_iteration
from .statements import StatementId, closed_constant, conjugate, validity_region


@dataclass(frozen=True)
class DualDescriptor:
    source: StatementId
    target: StatementId
    exponent_map: tuple  # (p, q)
    parameter_map: dict
    operator_map: str
    source_constant: float | None
    target_constant: float | None
    # target constant = constant_factor * source_constant ** constant_power
    constant_factor: float = 1.0
    constant_power: float = 1.0

    @property
    def predicted_target_constant(self) -> float | None:
        if self.source_constant is None:
            return None
        return self.constant_factor * self.source_constant**self.constant_power

    def to_dict(self) -> dict:
        return {
            "source": self.source.as_dict(),
            "target": self.target.as_dict(),
            "exponent_map": [float(x) for x in self.exponent_map],
            "parameter_map": self.parameter_map,
            "operator_map": self.operator_map,
            "source_constant": self.source_constant,
            "target_constant": self.target_constant,
            "predicted_target_constant": self.predicted_target_constant,
        }


def _constant_or_none(st):
    ok, _ = validity_region(st)
    return closed_constant(st) if ok else None


def _exact(p):
    """p as an exact rational, so that p -> q -> p is the identity."""
    return p if isinstance(p, Fraction) else Fraction(float(p))


def dualize_statement(source: StatementId, recast: bool = False) -> DualDescriptor:
    """The statement paired with ``source`` by the duality principle.

    THM1(p, r) and THM2(p, r) are each other's duals (THM2 is written with the
    conjugate exponent q of p).  With ``recast=True`` and p > 1, THM2 is
    rewritten with p and q interchanged and r replaced by -r (RECAST_17).
    COR6_5(p, α) pairs with COR6_5_DUAL(q, -α).
    """
    sid = source.id
    if sid == "THM1":
        p, r = source.params["p"], source.params["r"]
        q = conjugate(_exact(p))
        target = StatementId("THM2", {"p": p, "r": r})
        return DualDescriptor(source, target, (p, q), {"r": "r"},
                              "REMAINDER[PDR(r), n^r] -> HEAD[k^-r, 1/PDR_n(r)]",
                              _constant_or_none(source), _constant_or_none(target),
                              1.0, float(q) / float(p))
    if sid == "THM2":
        p, r = source.params["p"], source.params["r"]
        q = conjugate(_exact(p))
        if recast:
            if not float(p) > 1:
                raise RegimeError("the recast form needs p > 1")
            target = StatementId("RECAST_17", {"p": q, "r": -float(r)})
            # ((1+r')p'/((1+r')p'-1))^{p'} = (1+r')^{p'} * THM2 constant, with p' = q, r' = -r
            return DualDescriptor(source, target, (p, q), {"r": "-r"},
                                  "HEAD[k^-r, 1/PDR_n(r)] -> HEAD[k^r', (1+r')PDR_n(-r')], p<->q",
                                  _constant_or_none(source), _constant_or_none(target),
                                  (1 - float(r)) ** float(q), 1.0)
        target = StatementId("THM1", {"p": p, "r": r})
        return DualDescriptor(source, target, (q, p), {"r": "r"},
                              "HEAD[k^-r, 1/PDR_n(r)] -> REMAINDER[PDR(r), n^r]",
                              _constant_or_none(source), _constant_or_none(target),
                              1.0, float(p) / float(q))
    if sid == "RECAST_17":
        p, r = source.params["p"], source.params["r"]
        q = conjugate(_exact(p))
        target = StatementId("THM2", {"p": q, "r": -float(r)})
        return DualDescriptor(source, target, (p, q), {"r": "-r"},
                              "HEAD[k^r, (1+r)PDR_n(-r)] -> HEAD[k^-r', 1/PDR_n(r')], p<->q",
                              _constant_or_none(source), _constant_or_none(target),
                              (1 + float(r)) ** -float(p), 1.0)
    if sid in ("COR6_5", "COR6_5_DUAL"):
        p, a = source.params["p"], source.params["alpha"]
        q = conjugate(_exact(p))
        tid = "COR6_5_DUAL" if sid == "COR6_5" else "COR6_5"
        target = StatementId(tid, {"p": q, "alpha": -float(a)})
        # (αq/(αq-1))^q = (α/(α-1))^q * C^{q/p} with α = -alpha_source when going to the dual
        a_dual = -float(a) if sid == "COR6_5" else float(a)
        factor = (a_dual / (a_dual - 1)) ** (float(q) if sid == "COR6_5" else -float(q))
        return DualDescriptor(source, target, (p, q), {"alpha": "-alpha"},
                              "REMAINDER[k^a, Λ_n] <-> HEAD[(a'/(a'-1))/Λ_k, n^a']",
                              _constant_or_none(source), _constant_or_none(target),
                              factor, float(q) / float(p))
    raise DomainError(f"no dual form available for {sid}")


def transpose_operator(op: TailOperator) -> TailOperator:
    """Tᵀ written as a TailOperator: weights 1/N_n, normalizer 1/λ_k, direction flipped."""
    N = op.truncation
    w = W.Tabulated(tuple((1 / op.norm).astype(np.float64)))
    nz = Normalizer.explicit((1 / op.lam).astype(np.float64))
    other = Direction.HEAD if op.direction is Direction.REMAINDER else Direction.REMAINDER
    return TailOperator(w, other, nz, N)


def dense_matrix(op: TailOperator) -> np.ndarray:
    """N×N matrix of the operator (for brute-force comparisons at small N)."""
    N = op.truncation
    lam = op.lam.astype(np.float64)
    norm = op.norm.astype(np.float64)
    i, j = np.indices((N, N))
    mask = j >= i if op.direction is Direction.REMAINDER else j <= i
    return np.where(mask, lam[None, :] / norm[:, None], 0.0)


# ---------------------------------------------------------------------------
# matrix norms
# ---------------------------------------------------------------------------


class MatrixNorm(NamedTuple):
    value: float
    iterations: int
    residual: float
    converged: bool


def matrix_norm(A: np.ndarray, p: float, tol: float = 1e-14, max_iter: int = 100000) -> MatrixNorm:
    """‖A‖_{p→p} for a nonnegative matrix and p > 1 by the nonlinear power method."""
    if not p > 1:
        raise DomainError(f"matrix_norm needs p > 1, got {p}")
    A = np.asarray(A, dtype=np.float64)
    if A.shape == (1, 1):
        return MatrixNorm(abs(float(A[0, 0])), 0, 0.0, True)
    if np.any(A < 0):
        raise DomainError("matrix_norm needs a nonnegative matrix")

    def objective(x):
        return math.fsum((A @ x) ** p) / math.fsum(x**p)

    def update(x):
        z = (A.T @ (A @ x) ** (p - 1)) ** (1 / (p - 1))
        return z / z.max()

    x0 = np.ones(A.shape[1])
    _, val, it, res, ok = power_iteration(objective, update, x0, False, tol, max_iter)
    return MatrixNorm(val ** (1 / p), it, res, ok)


class NormCheck(NamedTuple):
    max_relative_gap: float
    all_converged: bool
    gaps: tuple


def random_lower_triangular(N: int, trial: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng([seed, trial])
    return np.tril(rng.uniform(0.0, 1.0, size=(N, N)))


def transpose_norm_check(N: int, p: float, trials: int, tol: float = 1e-14, seed: int = 0,
                         matrices=None) -> NormCheck:
    """Max over trials of |‖A‖_p - ‖Aᵀ‖_q| / ‖A‖_p for random nonnegative lower-triangular A."""
    if not p > 1:
        raise DomainError(f"transpose_norm_check needs p > 1, got {p}")
    if N < 1 or N > 100:
        raise DomainError(f"N must lie in [1, 100], got {N}")
    q = p / (p - 1)
    gaps = []
    ok = True
    mats = matrices if matrices is not None else (random_lower_triangular(N, t, seed) for t in range(trials))
    for A in mats:
        fwd = matrix_norm(A, p, tol)
        bwd = matrix_norm(A.T, q, tol)
        ok = ok and fwd.converged and bwd.converged
        gaps.append(abs(fwd.value - bwd.value) / fwd.value if fwd.value > 0 else 0.0)
    return NormCheck(max(gaps) if gaps else 0.0, ok, tuple(gaps))


# ---------------------------------------------------------------------------
# change of variables and recast equivalence
# ---------------------------------------------------------------------------


def change_of_vars_check(which: str, params: dict, n_max: int) -> float:
    """Minimum slack of the pointwise weight comparison behind COR0 or COR7."""
    from .auxiliary import cor0_weight, cor7_weight

    if which == "COR0":
        res = cor0_weight(float(params["alpha"]), float(params["beta"]), float(params["p"]), n_max)
    elif which == "COR7":
        res = cor7_weight(float(params["alpha"]), float(params["r"]), float(params["p"]), n_max)
    else:
        raise DomainError(f"change_of_vars_check supports COR0 and COR7, got {which!r}")
    return res.min_slack


class RecastCheck(NamedTuple):
    thm2_lhs: float
    recast_lhs: float
    relative_gap: float


def recast_equivalence(p: float, r: float, a) -> RecastCheck:
    """Left side of THM2(p, r) at a versus the recast form (q, -r) at a/(1-r)."""
    from .operators import apply
    from .statements import statement_operator

    a = np.asarray(a, dtype=np.float64)
    N = len(a)
    src = StatementId("THM2", {"p": p, "r": r})
    tgt = dualize_statement(src, recast=True).target
    q = float(conjugate(_exact(p)))
    lhs_src = math.fsum(apply(statement_operator(src, N), a) ** q)
    lhs_tgt = math.fsum(apply(statement_operator(tgt, N), a / (1 - r)) ** q)
    return RecastCheck(lhs_src, lhs_tgt, abs(lhs_src - lhs_tgt) / abs(lhs_src))
