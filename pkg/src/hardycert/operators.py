"""Normalized head/remainder summation operators on finite sequences.

A :class:`TailOperator` maps a sequence a_1..a_N to

    T(a)_n = (1/N_n) Σ λ_k a_k,

summing over k >= n (REMAINDER) or k <= n (HEAD).  Entries past the truncation
N are treated as zero.  Every evaluation is a single prefix or suffix scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import weights as W
from .errors import DomainError, RegimeError

LD = np.longdouble


class Direction(str, Enum):
    REMAINDER = "REMAINDER"
    HEAD = "HEAD"


class NormalizerKind(str, Enum):
    TAIL_SUM = "TAIL_SUM"
    HEAD_SUM = "HEAD_SUM"
    POWER = "POWER"
    EXPLICIT = "EXPLICIT"


@dataclass(frozen=True)
class Normalizer:
    kind: NormalizerKind
    rho: float = 0.0
    values: tuple | None = field(default=None, repr=False)

    @classmethod
    def tail_sum(cls):
        return cls(NormalizerKind.TAIL_SUM)

    @classmethod
    def head_sum(cls):
        return cls(NormalizerKind.HEAD_SUM)

    @classmethod
    def power(cls, rho):
        return cls(NormalizerKind.POWER, rho=float(rho))

    @classmethod
    def explicit(cls, values):
        return cls(NormalizerKind.EXPLICIT, values=tuple(float(v) for v in values))


@dataclass(frozen=True)
class TailOperator:
    weights: W.WeightFamily
    direction: Direction
    normalizer: Normalizer
    truncation: int

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        if self.truncation < 1:
            raise DomainError(f"truncation must be >= 1, got {self.truncation}")
        if self.normalizer.kind is NormalizerKind.TAIL_SUM and not W.is_tail_summable(self.weights):
            raise W.DivergenceError(f"TAIL_SUM normalizer needs summable weights, got {W.describe(self.weights)}")
        if self.normalizer.kind is NormalizerKind.EXPLICIT:
            vals = self.normalizer.values or ()
            if len(vals) < self.truncation:
                raise DomainError(f"explicit normalizer has {len(vals)} entries, need {self.truncation}")
            if min(vals[: self.truncation]) <= 0:
                raise DomainError("explicit normalizer entries must be positive")

    def with_truncation(self, N: int) -> "TailOperator":
        return replace(self, truncation=N)

    @cached_property
    def lam(self) -> np.ndarray:
        return W.lambdas(self.weights, np.arange(1, self.truncation + 1), LD)

    @cached_property
    def norm(self) -> np.ndarray:
        """N_1..N_N in long double."""
        N = self.truncation
        kind = self.normalizer.kind
        if kind is NormalizerKind.TAIL_SUM:
            # full analytic tail, not the truncated one
            return W.tail_sums(self.weights, N)
        if kind is NormalizerKind.HEAD_SUM:
            return W.head_sums(self.weights, N)
        if kind is NormalizerKind.POWER:
            return np.power(np.arange(1, N + 1).astype(LD), LD(self.normalizer.rho))
        return np.asarray(self.normalizer.values[:N], dtype=LD)

    def describe(self) -> str:
        nz = self.normalizer
        tag = nz.kind.value + (f"(rho={nz.rho:g})" if nz.kind is NormalizerKind.POWER else "")
        return f"{self.direction.value}[{W.describe(self.weights)}, {tag}, N={self.truncation}]"


@dataclass(frozen=True)
class SequenceVector:
    """A finite nonnegative sequence a_1..a_N (stored read-only)."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.float64)
        if a.ndim != 1:
            raise DomainError("a sequence must be one-dimensional")
        if not np.all(np.isfinite(a)) or np.any(a < 0):
            raise DomainError("sequence entries must be finite and nonnegative")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def strict_positive(self) -> bool:
        return bool(np.all(self.entries > 0))

    def __len__(self):
        return len(self.entries)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def as_sequence(a) -> np.ndarray:
    if isinstance(a, SequenceVector):
        return a.entries
    return SequenceVector(a).entries


def load_sequence(path) -> SequenceVector:
    """One value per line; blank lines and '#' comments are ignored."""
    return SequenceVector(np.loadtxt(path, comments="#", ndmin=1))


def save_sequence(path, a) -> None:
    np.savetxt(path, as_sequence(a), fmt="%.17g")


def _check_length(op, a):
    if len(a) != op.truncation:
        raise ValueError(f"sequence length {len(a)} does not match truncation {op.truncation}")


def _scan(values, direction):
    if direction is Direction.REMAINDER:
        return np.cumsum(values[::-1])[::-1]
    return np.cumsum(values)


def apply(op: TailOperator, a) -> np.ndarray:
    """T(a)_n for n = 1..N."""
    a = as_sequence(a)
    _check_length(op, a)
    return (_scan(op.lam * a.astype(LD), op.direction) / op.norm).astype(np.float64)


def apply_transpose(op: TailOperator, y) -> np.ndarray:
    """(Tᵀ y)_k = λ_k Σ_{n : k in window(n)} y_n / N_n."""
    y = np.asarray(y, dtype=LD)
    _check_length(op, y)
    other = Direction.HEAD if op.direction is Direction.REMAINDER else Direction.REMAINDER
    return (op.lam * _scan(y / op.norm, other)).astype(np.float64)


def safe_power(x, p, what="value"):
    """x**p computed as exp(p ln x); zeros allowed only for p > 0."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0):
        raise DomainError(f"negative {what} cannot be raised to a real power")
    if p < 0 and np.any(x == 0):
        raise DomainError(f"zero {what} raised to the negative power {p}")
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(p * np.log(x[pos]))
    return out


def ratio_functional(op: TailOperator, a, p: float) -> float:
    """Σ_n T(a)_n^p / Σ_n a_n^p over the truncated index range."""
    if p == 0:
        raise DomainError("exponent p must be nonzero")
    a = as_sequence(a)
    if not np.any(a > 0):
        raise DomainError("the zero sequence has no ratio")
    if p < 0 and not np.all(a > 0):
        raise DomainError("p < 0 requires a strictly positive sequence")
    T = apply(op, a)
    return math.fsum(safe_power(T, p, "operator value")) / math.fsum(safe_power(a, p, "entry"))


class GeometricMean(NamedTuple):
    value: float
    neglected_mass: float


def geometric_remainders(family: W.WeightFamily, a, n_max: int, tail_log: float | None = None):
    """G_n = Π_{k≥n} a_k^{λ_k/Λ_n} for n = 1..n_max, with the product cut at len(a).

    Returns (values, neglected_mass) arrays.  The exponent mass Λ_{C+1}/Λ_n that
    falls past the cutoff C = len(a) is dropped unless ``tail_log`` supplies a
    log-value to charge it with.
    """
    a = np.asarray(a, dtype=np.float64)
    C = len(a)
    if n_max > C:
        raise DomainError(f"n_max = {n_max} exceeds the cutoff {C}")
    if np.any(a <= 0):
        raise DomainError(f"geometric mean needs positive entries; a_{int(np.argmax(a <= 0)) + 1} <= 0")
    lam = W.lambdas(family, np.arange(1, C + 1), LD)
    Lam = W.tail_sums(family, C + 1)
    S = np.cumsum((lam * np.log(a.astype(LD)))[::-1])[::-1]
    mass = Lam[C] / Lam[:n_max]
    expo = S[:n_max] / Lam[:n_max]
    if tail_log is not None:
        expo = expo + mass * LD(tail_log)
    return np.exp(expo).astype(np.float64), mass.astype(np.float64)


def geometric_remainder(family: W.WeightFamily, a, n: int, cutoff: int, tail_log: float | None = None) -> GeometricMean:
    """G_n computed in the log domain from the first ``cutoff`` entries of a."""
    a = np.asarray(a, dtype=np.float64)
    if len(a) < cutoff:
        raise DomainError(f"sequence has {len(a)} entries, cutoff is {cutoff}")
    vals, mass = geometric_remainders(family, a[:cutoff], n, tail_log)
    return GeometricMean(float(vals[n - 1]), float(mass[n - 1]))


class QuasiLinearResult(NamedTuple):
    lhs: float
    rhs: float
    slack: float


def quasi_linear_check(family: W.WeightFamily, a, p: float, L: float) -> QuasiLinearResult:
    """Compare Σ A_n^p with (p/(p-L)) Σ a_n A_n^{p-1}, A_n = Σ_{k≥n} λ_k a_k / Λ_n.

    The slack is signed so that it is nonnegative when the inequality holds in
    the direction asserted for this p: lhs <= rhs for p >= 1, reversed for
    p < 1.
    """
    if p == 0:
        raise RegimeError("p must be nonzero")
    if (p > 0 and not L < p) or (p < 0 and not L > p):
        raise RegimeError(f"need L < p for p > 0 and L > p for p < 0; got L={L}, p={p}")
    a = as_sequence(a)
    if p < 1 and not np.all(a > 0):
        raise DomainError("p < 1 requires a strictly positive sequence")
    op = TailOperator(family, Direction.REMAINDER, Normalizer.tail_sum(), len(a))
    A = apply(op, a)
    lhs = math.fsum(safe_power(A, p, "mean"))
    rhs = p / (p - L) * math.fsum(a * safe_power(A, p - 1, "mean"))
    slack = rhs - lhs if p >= 1 else lhs - rhs
    return QuasiLinearResult(lhs, rhs, slack)
