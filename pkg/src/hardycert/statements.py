"""Catalog of the Hardy/Copson/Carleman-type statements and their closed-form constants.

Each statement is identified by a :class:`StatementId` carrying exactly the
parameters it uses.  For every id the catalog knows

* its hypothesis region (:func:`validity_region`),
* the closed-form constant (:func:`closed_constant`),
* whether the constant bounds the ratio from below or from above
  (:func:`direction`), and
* the operator and exponent whose ratio functional the constant bounds
  (:func:`statement_operator`, :func:`statement_exponent`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import weights as W
from .errors import DomainError, InvalidRegionError
from .operators import Direction, Normalizer, TailOperator

PARAMS = {
    "HARDY": ("p",),
    "INEQ_1": ("p",),
    "LS_41": ("p", "r"),
    "THM1": ("p", "r"),
    "THM2": ("p", "r"),
    "COR0": ("p", "alpha", "beta"),
    "COR1": ("p",),
    "COR2": ("p",),
    "THM4": ("p",),
    "THM5": ("p", "r"),
    "THM6": ("p",),
    "THM7": ("p", "alpha"),
    "COR7": ("p", "alpha", "r"),
    "INEQ8": ("p", "alpha"),
    "COR2_1": ("alpha",),
    "COR6_5": ("p", "alpha"),
    # dual/recast forms reached through dualize_statement
    "RECAST_17": ("p", "r"),
    "COR6_5_DUAL": ("p", "alpha"),
}

STATEMENT_IDS = tuple(PARAMS)

#: Statements of Carleman type: the functional is Σ G_n / Σ a_n rather than a p-ratio.
CARLEMAN = frozenset({"COR2_1"})


@dataclass(frozen=True)
class StatementId:
    id: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.id not in PARAMS:
            raise ValueError(f"unknown statement {self.id!r}; known: {', '.join(STATEMENT_IDS)}")
        want = set(PARAMS[self.id])
        have = set(self.params)
        if want != have:
            raise ValueError(f"{self.id} takes parameters {sorted(want)}, got {sorted(have)}")
        # Fractions are kept exact so that dualizing twice restores p bit for bit
        clean = {k: v if isinstance(v, Fraction) else float(v) for k, v in self.params.items()}
        object.__setattr__(self, "params", clean)

    def __getitem__(self, key):
        return float(self.params[key])

    def __hash__(self):
        return hash((self.id, tuple(sorted(self.params.items()))))

    def __str__(self):
        args = ", ".join(f"{k}={float(v):g}" for k, v in self.params.items())
        return f"{self.id}({args})"

    def as_dict(self):
        return {"id": self.id, "params": {k: float(v) for k, v in self.params.items()}}


def statement(id: str, **params) -> StatementId:
    return StatementId(id, params)


def conjugate(p):
    """q with 1/p + 1/q = 1.  Exact when given a Fraction."""
    if p == 1 or p == 0:
        raise DomainError(f"no conjugate exponent for p = {p}")
    return p / (p - 1)


# ---------------------------------------------------------------------------
# hypothesis regions
# ---------------------------------------------------------------------------


def _fail(clause):
    return False, f"{clause} fails"


def validity_region(st: StatementId) -> tuple[bool, str]:
    """Whether the parameters satisfy the statement's hypotheses, and if not, which clause fails."""
    g = {k: float(v) for k, v in st.params.items()}
    p = g.get("p")
    r = g.get("r")
    a = g.get("alpha")
    b = g.get("beta")
    sid = st.id
    if sid == "HARDY":
        if not p > 1:
            return _fail("p > 1")
    elif sid == "INEQ_1":
        if not 0 < p < 1:
            return _fail("0 < p < 1")
    elif sid == "LS_41":
        if not 0 < p < 1:
            return _fail("0 < p < 1")
        if p <= 1 / 3 and not r <= p:
            return _fail("r ≤ p (0 < p ≤ 1/3)")
        if p > 1 / 3 and not r <= 1 - 2 * p:
            return _fail("r ≤ 1 - 2p (1/3 < p < 1)")
    elif sid in ("THM1", "THM2"):
        if 0 < p < 1:
            if not (2 + r) * p <= 1:
                return _fail("(2+r)p ≤ 1")
        elif p >= 1 or p < 0:
            if sid == "THM2" and p == 1:
                return _fail("p ≠ 1")
            if not 1 / p - 2 <= r < 1 / p:
                return _fail("1/p - 2 ≤ r < 1/p")
        else:
            return _fail("p ≠ 0")
    elif sid == "COR0":
        if not b <= 0 < a:
            return _fail("β ≤ 0 < α")
        if not 0 < p < 1:
            return _fail("0 < p < 1")
        if not p <= (1 - b) / (2 + a):
            return _fail("p ≤ (1-β)/(2+α)")
    elif sid == "COR1":
        if not 0 < p <= 0.5:
            return _fail("0 < p ≤ 1/2")
    elif sid == "COR2":
        if not -1 <= p < 0:
            return _fail("-1 ≤ p < 0")
    elif sid == "THM4":
        if not 0 < p < 1:
            return _fail("0 < p < 1")
    elif sid == "THM5":
        if not 0 < p < 1:
            return _fail("0 < p < 1")
        if not 0 < r <= p:
            return _fail("0 < r ≤ p")
    elif sid == "THM6":
        if p != 0.5:
            return _fail("p = 1/2")
    elif sid == "THM7":
        if not a > 0:
            return _fail("α > 0")
        if not (p < 0 or p >= 1):
            return _fail("p < 0 or p ≥ 1")
        if p >= 1 and not a * p > 1:
            return _fail("αp > 1")
    elif sid == "COR7":
        if not a > 0:
            return _fail("α > 0")
        if not r >= 1:
            return _fail("r ≥ 1")
        if not (p < 0 or p >= 1):
            return _fail("p < 0 or p ≥ 1")
        if p >= 1 and not a * p > r:
            return _fail("αp > r")
    elif sid == "INEQ8":
        if not p > 1:
            return _fail("p > 1")
        if not 2 <= a <= 2 + 1 / p:
            return _fail("2 ≤ α ≤ 2 + 1/p")
    elif sid == "COR2_1":
        if not -1 <= a < 0:
            return _fail("-1 ≤ α < 0")
    elif sid == "COR6_5":
        if not a < -1:
            return _fail("α < -1")
        if not 0 < p < 1:
            return _fail("0 < p < 1")
    elif sid == "RECAST_17":
        if not p > 1:
            return _fail("p > 1")
        if not 1 / p - 1 < r <= 1 + 1 / p:
            return _fail("1/p - 1 < r ≤ 1 + 1/p")
    elif sid == "COR6_5_DUAL":
        if not a > 1:
            return _fail("α > 1")
        if not p < 0:
            return _fail("p < 0")
    return True, "all hypotheses hold"


def require_valid(st: StatementId) -> None:
    ok, reason = validity_region(st)
    if not ok:
        raise InvalidRegionError(str(st), reason)


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def thm4_constant(p: float) -> float:
    if p <= 1 / 3:
        return (p / (1 - p)) ** p
    if p <= 3 / 5:
        return 0.5 * ((1 + p) / (1 - p)) ** (1 - p)
    return 2 * (p / (3 - p)) ** p


def thm5_constant(p: float, r: float) -> float:
    inv = (2 - p + r) * ((1 - p) / (1 - p + 2 * r)) ** (1 - p)
    return 1 / inv


def closed_constant(st: StatementId) -> float:
    """The statement's constant in double precision; refuses outside its region."""
    require_valid(st)
    g = {k: float(v) for k, v in st.params.items()}
    p = g.get("p")
    r = g.get("r")
    a = g.get("alpha")
    b = g.get("beta")
    sid = st.id
    if sid in ("HARDY", "COR2"):
        return (p / (p - 1)) ** p
    if sid in ("INEQ_1", "COR1"):
        return p**p
    if sid == "LS_41":
        return (p / (1 - r)) ** p
    if sid == "THM1":
        return (p / (1 - r * p)) ** p
    if sid == "THM2":
        return (p / (1 - r * p)) ** float(conjugate(st.params["p"]))
    if sid == "COR0":
        return (a * p / (1 - b - a * p)) ** p
    if sid == "THM4":
        return thm4_constant(p)
    if sid == "THM5":
        return thm5_constant(p, r)
    if sid == "THM6":
        return 0.9
    if sid in ("THM7", "INEQ8", "COR6_5_DUAL"):
        return (a * p / (a * p - 1)) ** p
    if sid == "COR7":
        return (a * p / (a * p - r)) ** p
    if sid == "COR2_1":
        return math.exp(1 / a)
    if sid == "COR6_5":
        s = (1 + a) * p
        return (s / (s - 1)) ** p
    if sid == "RECAST_17":
        s = (r + 1) * p
        return (s / (s - 1)) ** p
    raise AssertionError(sid)


def direction(st: StatementId) -> str:
    """'lower' if the constant bounds the ratio from below (≥ statements), else 'upper'."""
    sid = st.id
    if sid == "COR2_1":
        return "upper"
    p = float(st.params["p"]) if "p" in st.params else None
    if sid in ("INEQ_1", "LS_41", "COR0", "COR1", "THM4", "THM5", "THM6", "COR6_5"):
        return "lower"
    if sid == "THM1":
        return "lower" if 0 < p < 1 else "upper"
    if sid == "THM2":
        # exponent q < 0 when 0 < p < 1 (≤ holds); for p < 0, q in (0, 1) and ≥ holds
        return "lower" if p < 0 else "upper"
    return "upper"


def statement_exponent(st: StatementId) -> float:
    if st.id == "THM2":
        return float(conjugate(st.params["p"]))
    if st.id in CARLEMAN:
        return 1.0
    return float(st.params["p"])


def statement_family(st: StatementId) -> W.WeightFamily:
    """Weights of a Carleman-type statement."""
    if st.id == "COR2_1":
        return W.PowerDiffRemainder(st["alpha"])
    raise ValueError(f"{st.id} is not a Carleman-type statement")


def _pdr_reciprocal(r, N):
    return tuple(1.0 / W.lambdas(W.PowerDiffRemainder(r), np.arange(1, N + 1)))


def statement_operator(st: StatementId, N: int) -> TailOperator:
    """The operator whose ratio Σ T(a)^e / Σ a^e the statement's constant bounds.

    Weighted statements are brought to this unweighted form by the usual change
    of variables (for LS_41-type statements a_n -> n^{(r-p)/p} a_n).
    """
    sid = st.id
    R, H = Direction.REMAINDER, Direction.HEAD
    if sid in ("INEQ_1", "THM4", "THM6"):
        return TailOperator(W.PowerDiffRemainder(1.0), R, Normalizer.power(1.0), N)
    if sid == "THM1":
        return TailOperator(W.PowerDiffRemainder(st["r"]), R, Normalizer.power(st["r"]), N)
    if sid == "COR1":
        return TailOperator(W.PowerDiffRemainder(0.0), R, Normalizer.power(0.0), N)
    if sid in ("LS_41", "THM5"):
        p, r = st["p"], st["r"]
        return TailOperator(W.PurePower((r - p) / p), R, Normalizer.power(r / p), N)
    if sid == "HARDY":
        return TailOperator(W.HeadPowerDiff(1.0), H, Normalizer.power(1.0), N)
    if sid == "THM7":
        return TailOperator(W.HeadPowerDiff(st["alpha"]), H, Normalizer.power(st["alpha"]), N)
    if sid == "INEQ8":
        return TailOperator(W.PurePower(st["alpha"] - 1), H, Normalizer.head_sum(), N)
    if sid == "COR6_5":
        return TailOperator(W.PurePower(st["alpha"]), R, Normalizer.tail_sum(), N)
    if sid == "THM2":
        r = st["r"]
        return TailOperator(W.PurePower(-r), H, Normalizer.explicit(_pdr_reciprocal(r, N)), N)
    if sid == "COR2":
        return TailOperator(W.PurePower(0.0), H, Normalizer.explicit(_pdr_reciprocal(0.0, N)), N)
    if sid == "RECAST_17":
        r = st["r"]
        mu = W.lambdas(W.PowerDiffRemainder(-r), np.arange(1, N + 1))
        return TailOperator(W.PurePower(r), H, Normalizer.explicit(tuple(1 / ((1 + r) * mu))), N)
    if sid == "COR6_5_DUAL":
        a = st["alpha"]
        tails = W.tail_sums(W.PurePower(-a), N)[:N].astype(np.float64)
        w = W.Tabulated(tuple(a / (a - 1) / tails))
        return TailOperator(w, H, Normalizer.power(a), N)
    raise ValueError(f"no single-operator form available for {sid}")
