import math

import numpy as np
import pytest

from hardycert.errors import InvalidRegionError
from hardycert.operators import ratio_functional
from hardycert.statements import (
    STATEMENT_IDS,
    StatementId,
    closed_constant,
    direction,
    statement,
    statement_exponent,
    statement_operator,
    validity_region,
)


class TestValidity:
    def test_thm1_boundary(self):
        assert validity_region(statement("THM1", p=1 / 3, r=1))[0]

    def test_thm1_fails(self):
        ok, reason = validity_region(statement("THM1", p=0.5, r=1))
        assert not ok and reason == "(2+r)p ≤ 1 fails"

    def test_thm7_fails(self):
        ok, reason = validity_region(statement("THM7", p=2, alpha=0.25))
        assert not ok and reason == "αp > 1 fails"

    @pytest.mark.parametrize("st_, ok", [
        (statement("COR1", p=0.5), True),
        (statement("COR1", p=0.6), False),
        (statement("COR2", p=-1), True),
        (statement("COR2", p=0.5), False),
        (statement("INEQ8", p=2, alpha=2.5), True),
        (statement("INEQ8", p=2, alpha=2.6), False),
        (statement("COR2_1", alpha=-1), True),
        (statement("COR2_1", alpha=-1.5), False),
        (statement("COR6_5", p=0.5, alpha=-2), True),
        (statement("COR6_5", p=0.5, alpha=-1), False),
        (statement("COR7", p=-1, alpha=1, r=2), True),
        (statement("COR7", p=2, alpha=1, r=2), False),
        (statement("COR0", p=0.3, alpha=1, beta=-0.5), True),
        (statement("COR0", p=0.6, alpha=1, beta=-0.5), False),
        (statement("THM5", p=0.5, r=0.5), True),
        (statement("THM5", p=0.5, r=0.6), False),
        (statement("LS_41", p=0.25, r=0.25), True),
        (statement("LS_41", p=0.5, r=0.1), False),
    ])
    def test_regions(self, st_, ok):
        assert validity_region(st_)[0] is ok

    def test_unknown_id(self):
        with pytest.raises(ValueError):
            StatementId("NOPE", {})

    def test_parameter_set_enforced(self):
        with pytest.raises(ValueError):
            statement("THM1", p=0.3)


class TestConstants:
    def test_spot_values(self):
        assert closed_constant(statement("THM4", p=0.5)) == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
        assert closed_constant(statement("THM6", p=0.5)) == 0.9
        assert closed_constant(statement("THM1", p=1 / 3, r=1)) == pytest.approx(0.5 ** (1 / 3), rel=1e-15)
        assert closed_constant(statement("COR1", p=0.5)) == pytest.approx(2**-0.5, abs=1e-15)
        assert closed_constant(statement("COR2_1", alpha=-1)) == pytest.approx(math.exp(-1), abs=1e-15)
        assert closed_constant(statement("HARDY", p=2)) == 4

    def test_thm4_third_branch(self):
        # 2 (0.8/2.2)^0.8 evaluated independently
        expected = 2 * math.exp(0.8 * math.log(0.8 / 2.2))
        assert closed_constant(statement("THM4", p=0.8)) == pytest.approx(expected, rel=1e-15)
        assert expected == pytest.approx(0.890356, abs=1e-6)

    def test_thm4_continuous_at_branch_points(self):
        for p in (1 / 3, 3 / 5):
            lo = closed_constant(statement("THM4", p=p - 1e-12))
            hi = closed_constant(statement("THM4", p=p + 1e-12))
            assert lo == pytest.approx(hi, rel=1e-9)

    def test_thm5_matches_thm4_middle(self):
        for p in np.linspace(1 / 3, 3 / 5, 202)[1:-1]:
            a = closed_constant(statement("THM5", p=p, r=p))
            b = closed_constant(statement("THM4", p=p))
            assert abs(a - b) <= 1e-12

    def test_ladder_at_half(self):
        c1 = closed_constant(statement("COR1", p=0.5))
        c4 = closed_constant(statement("THM4", p=0.5))
        c6 = closed_constant(statement("THM6", p=0.5))
        assert c1 < c4 < c6 < 0.90375

    def test_refuses_outside_region(self):
        with pytest.raises(InvalidRegionError) as exc:
            closed_constant(statement("THM1", p=0.5, r=1))
        assert "(2+r)p" in exc.value.reason

    def test_all_ids_have_constants(self):
        samples = {
            "HARDY": dict(p=2), "INEQ_1": dict(p=0.5), "LS_41": dict(p=0.25, r=0.1),
            "THM1": dict(p=0.25, r=1), "THM2": dict(p=2, r=0), "COR0": dict(p=0.3, alpha=1, beta=-0.5),
            "COR1": dict(p=0.5), "COR2": dict(p=-0.5), "THM4": dict(p=0.7), "THM5": dict(p=0.5, r=0.25),
            "THM6": dict(p=0.5), "THM7": dict(p=2, alpha=1), "COR7": dict(p=2, alpha=2, r=1.5),
            "INEQ8": dict(p=2, alpha=2.25), "COR2_1": dict(alpha=-0.5), "COR6_5": dict(p=0.5, alpha=-3),
            "RECAST_17": dict(p=2, r=0.5), "COR6_5_DUAL": dict(p=-1, alpha=2),
        }
        assert set(samples) == set(STATEMENT_IDS)
        for sid, params in samples.items():
            c = closed_constant(StatementId(sid, params))
            assert c > 0 and math.isfinite(c)


class TestOperators:
    """The extremal family pushes each ratio toward its constant from the asserted side."""

    @pytest.mark.parametrize("st_", [
        statement("HARDY", p=2),
        statement("THM1", p=0.25, r=1),
        statement("THM1", p=2, r=0.25),
        statement("THM2", p=2, r=0.25),
        statement("COR1", p=0.5),
        statement("COR2", p=-0.5),
        statement("THM7", p=2, alpha=1.5),
        statement("INEQ8", p=2, alpha=2.25),
        statement("COR6_5", p=0.5, alpha=-3),
        statement("LS_41", p=0.25, r=0.1),
        statement("RECAST_17", p=2, r=0.5),
    ], ids=str)
    def test_correct_side(self, st_):
        N = 3000
        op = statement_operator(st_, N)
        p = statement_exponent(st_)
        a = np.arange(1, N + 1, dtype=float) ** (-1 / p - 0.05 * math.copysign(1, p))
        val = ratio_functional(op, a, p)
        c = closed_constant(st_)
        if direction(st_) == "lower":
            assert val >= c * (1 - 1e-12)
        else:
            assert val <= c * (1 + 1e-12)
