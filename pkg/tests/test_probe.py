import math

import numpy as np
import pytest

from hardycert import weights as W
from hardycert.certify import certify_constant, matching_operator
from hardycert.errors import DomainError
from hardycert.operators import Direction, Normalizer, TailOperator, ratio_functional
from hardycert.probe import (
    carleman_ratio,
    extremal_exponent,
    extremal_sweep,
    minimizes,
    n_sweep,
    optimize_ratio,
    truncation_for,
)
from hardycert.statements import closed_constant, statement, statement_operator

CESARO = TailOperator(W.HeadPowerDiff(1), Direction.HEAD, Normalizer.power(1), 10)


def test_minimizes():
    assert minimizes(0.5) and not minimizes(2) and not minimizes(-1)


def test_single_term():
    op = statement_operator(statement("INEQ_1", p=0.5), 1)
    res = optimize_ratio(op, 0.5)
    # T a_1 = a_1 when only one term survives
    assert res.best_bound == 1.0
    assert res.diagnostics.converged


def test_excluded_exponents():
    with pytest.raises(DomainError):
        optimize_ratio(CESARO, 1)


def test_cesaro_increases_toward_hardy():
    res = n_sweep(CESARO, 2, [20, 80, 300])
    vals = res.ratios
    assert res.monotone_trend and res.diagnostics.converged
    assert vals[0] < vals[1] < vals[2] < 4


def test_optimized_value_is_attained():
    op = statement_operator(statement("INEQ_1", p=0.5), 200)
    res = optimize_ratio(op, 0.5)
    assert ratio_functional(op, res.sequence, 0.5) == pytest.approx(res.best_bound, rel=1e-12)
    assert np.all(res.sequence > 0)


@pytest.mark.parametrize("p,r,beta", [(0.5, 0.5, 2.4), (0.5, 0.5, 3)])
def test_not_below_certified(p, r, beta):
    c = certify_constant(p, r, beta, 10)
    for N in (10, 100):
        res = optimize_ratio(matching_operator(c, N), p)
        assert res.best_bound >= c.constant - 1e-9


def test_optimizer_beats_extremal_family():
    st = statement("INEQ_1", p=0.5)
    N = 500
    op = statement_operator(st, N)
    a = np.arange(1, N + 1, dtype=float) ** extremal_exponent(0.5, 0.05)
    assert optimize_ratio(op, 0.5).best_bound <= ratio_functional(op, a, 0.5) + 1e-12


def test_cor1_correct_side():
    res = extremal_sweep(statement("COR1", p=0.5), [0.1, 0.05])
    assert all(v >= 2**-0.5 for v in res.ratios)
    assert res.monotone_trend


def test_hardy_upper_side():
    res = extremal_sweep(statement("HARDY", p=2), [0.2, 0.1, 0.05])
    assert all(v <= 4 for v in res.ratios) and res.monotone_trend


def test_carleman_ratio_side():
    ratio, notes = carleman_ratio(W.PowerDiffRemainder(-1), 0.1)
    # upper inequality: the ratio sits below e^{-1} and climbs toward it
    assert 0.3 < ratio < math.exp(-1)
    assert notes["max_neglected_mass"] < 1e-2


def test_truncation():
    assert truncation_for(0.01) == 1000
    assert truncation_for(1e-6) == 10**6


@pytest.mark.parametrize("bad", [[], [0.1, -0.1]])
def test_bad_eps_grid(bad):
    with pytest.raises(DomainError):
        extremal_sweep(statement("COR1", p=0.5), bad)


def test_bad_n_list():
    with pytest.raises(DomainError):
        n_sweep(CESARO, 2, [])
    with pytest.raises(DomainError):
        n_sweep(CESARO, 2, [50, 20])


def test_threads_agree():
    st = statement("THM1", p=1 / 3, r=1)
    one = extremal_sweep(st, [0.1, 0.05], threads=1)
    two = extremal_sweep(st, [0.1, 0.05], threads=2)
    assert one.ratios == two.ratios
    assert one.reference == pytest.approx(closed_constant(st))
