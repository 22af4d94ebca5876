import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import grid_maxmin
from relaybounds.bounds import (
    ACTIVE_TOL,
    ChannelParams,
    Constraint,
    ConstraintSet,
    crossing,
    cutset_bound,
    limit_slacks,
    new_increment,
    prop5_bound,
    sharpened_increment,
    solve_astar,
    solve_astar_bisect,
    theorem1_bound,
)
from relaybounds.numerics import (
    INF,
    DomainError,
    IndeterminateLimitError,
    PreconditionError,
)

snrs = st.floats(min_value=1e-3, max_value=1e3)
rates = st.floats(min_value=0.0, max_value=5.0)


def half_log(x):
    return 0.5 * math.log2(1.0 + x)


# -- parameters ------------------------------------------------------------------


class TestChannelParams:
    def test_coerces_and_accepts_inf(self):
        p = ChannelParams("inf", 3, 0.5)
        assert p.snr1.is_inf and not p.snr2.is_inf
        assert not p.finite
        assert ChannelParams.symmetric(2.0, 1.0) == ChannelParams(2.0, 2.0, 1.0)

    @pytest.mark.parametrize("args", [(-1, 1, 0), (1, -1, 0), (1, 1, -0.1), (1, 1, math.inf),
                                      (1, 1, math.nan)])
    def test_rejects_invalid(self, args):
        with pytest.raises(DomainError):
            ChannelParams(*args)


# -- cut-set bound -------------------------------------------------------------------


class TestCutset:
    def test_broadcast_example(self):
        res = cutset_bound(ChannelParams(1, 1, 10))
        assert res.value == pytest.approx(0.5 * math.log2(3), abs=1e-15)
        assert round(res.value, 5) == 0.79248
        assert res.active_constraint is Constraint.BROADCAST
        assert res.a_star == 0.0

    def test_zero_snr(self):
        res = cutset_bound(ChannelParams(0, 0, 1))
        assert res.value == 0.0
        assert res.active_constraint is Constraint.BROADCAST

    def test_infinite(self):
        assert cutset_bound(ChannelParams(INF, INF, 0.5)).value == math.inf

    def test_tie_goes_to_multiple_access(self):
        # 0.5 log2(1 + 3) = 1 = 0.5 log2(1 + 1) + 0.5
        res = cutset_bound(ChannelParams(2, 1, 0.5))
        assert res.active_constraint is Constraint.MULTIPLE_ACCESS

    @given(snrs, snrs, rates)
    def test_closed_form(self, s1, s2, r0):
        res = cutset_bound(ChannelParams(s1, s2, r0))
        assert res.value == pytest.approx(min(half_log(s1 + s2), half_log(s2) + r0), abs=1e-12)


# -- crossing equation -----------------------------------------------------------------


class TestSolveAstar:
    def test_examples(self):
        assert solve_astar(0.0) == 0.0
        assert solve_astar(0.5) == pytest.approx(0.0535, abs=5e-4)

    def test_against_bisection_on_k_grid(self):
        for k in np.linspace(0.0, 10.0, 201):
            assert solve_astar(float(k)) == pytest.approx(solve_astar_bisect(float(k)), abs=1e-10)

    @pytest.mark.parametrize("k", [-1e-9, math.inf, math.nan])
    def test_domain(self, k):
        with pytest.raises(DomainError):
            solve_astar(k)

    @given(st.floats(min_value=0, max_value=100))
    def test_solves_equation(self, k):
        a = solve_astar(k)
        assert a >= 0.0
        assert 2 * a + math.sqrt(2 * a * math.log(2)) / math.log(2) == pytest.approx(k, abs=1e-10)

    def test_crossing_clips_to_r0(self):
        assert crossing(5.0, 0.1) == 0.1
        assert crossing(-1.0, 1.0) == 0.0
        assert crossing(1.0, 0.0) == 0.0


def test_sharpened_increment_reduces_at_rho_one():
    for a in np.linspace(0, 3, 31):
        assert sharpened_increment(float(a), 1.0) == new_increment(float(a))


# -- constraint set ----------------------------------------------------------------------


@pytest.mark.parametrize("s1,s2,r0", [(1, 1, 1), (10, 2, 0.5), (0.1, 5, 2), (100, 100, 3)])
def test_constraint_monotonicity(s1, s2, r0):
    cs = ConstraintSet(ChannelParams(s1, s2, r0))
    grid = np.linspace(0.0, r0, 400)
    c2 = [cs.c2_at(a) for a in grid]
    c3 = [cs.c3_at(a) for a in grid]
    c5 = [cs.c5_at(a) for a in grid]
    assert all(b < a for a, b in zip(c2, c2[1:]))
    assert all(b > a for a, b in zip(c3, c3[1:]))
    assert all(b > a for a, b in zip(c5, c5[1:]))


def test_constraint_set_needs_rho_at_double_infinity():
    cs = ConstraintSet(ChannelParams(INF, INF, 1.0))
    with pytest.raises(IndeterminateLimitError):
        cs.c5_at(0.1)


# -- tightened bounds: examples -------------------------------------------------------------


class TestTheorem1:
    @pytest.mark.parametrize("s", [0.0, 0.3, 1.0, 50.0, 1e6])
    def test_r0_zero_is_cutset(self, s):
        p = ChannelParams(s, s, 0.0)
        res = theorem1_bound(p)
        assert res.value == cutset_bound(p).value
        assert res.a_star == 0.0

    def test_grid_oracle_symmetric(self):
        res = theorem1_bound(ChannelParams(1, 1, 0.25))
        oracle = grid_maxmin(1, 1, 0.25)
        assert res.value == pytest.approx(oracle, abs=1e-6)
        assert res.value >= oracle - 1e-12

    def test_infinite_value(self):
        res = theorem1_bound(ChannelParams(INF, INF, 0.5))
        assert res.value == math.inf
        assert res.a_star == pytest.approx(solve_astar(0.5), abs=1e-15)

    def test_one_infinite_snr(self):
        # relay SNR infinite: the auxiliary constraint never binds
        res = theorem1_bound(ChannelParams(INF, 3, 0.5))
        assert res.a_star == 0.0
        assert res.value == pytest.approx(half_log(3) + 0.5)


class TestProp5:
    @pytest.mark.parametrize("s,r0", [(0.5, 0.2), (1, 0.5), (30, 1.5), (1e4, 0.5)])
    def test_equal_snrs_match_theorem1(self, s, r0):
        p = ChannelParams(s, s, r0)
        assert prop5_bound(p).value == theorem1_bound(p).value

    def test_grid_oracle(self):
        res = prop5_bound(ChannelParams(4, 1, 0.5))
        assert res.value == pytest.approx(grid_maxmin(4, 1, 0.5, "prop5"), abs=1e-6)

    def test_r0_zero(self):
        p = ChannelParams(4, 1, 0.0)
        assert prop5_bound(p).value == cutset_bound(p).value
        assert prop5_bound(p).value == pytest.approx(grid_maxmin(4, 1, 0.0, "prop5"), abs=1e-12)

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            prop5_bound(ChannelParams(1, 2, 0.5))

    def test_double_infinity_needs_rho(self):
        p = ChannelParams(INF, INF, 0.5)
        with pytest.raises(IndeterminateLimitError):
            prop5_bound(p)
        with pytest.raises(PreconditionError):
            prop5_bound(p, rho=1.5)
        assert prop5_bound(p, rho=0.5).value == math.inf

    def test_zero_destination_snr(self):
        # rho = 0: the sharpened constraint is flat at 0.5 log2(1 + snr1)
        p = ChannelParams(3, 0, 1.0)
        res = prop5_bound(p)
        assert res.value == pytest.approx(grid_maxmin(3, 0, 1.0, "prop5"), abs=1e-6)


# -- properties ---------------------------------------------------------------------------------


@st.composite
def channels(draw, ordered=False):
    s1, s2 = draw(snrs), draw(snrs)
    if ordered and s1 < s2:
        s1, s2 = s2, s1
    return ChannelParams(s1, s2, draw(rates))


@given(channels())
def test_dominance_theorem1(p):
    assert theorem1_bound(p).value <= cutset_bound(p).value + 1e-9


@given(channels(ordered=True))
def test_dominance_prop5(p):
    assert prop5_bound(p).value <= theorem1_bound(p).value + 1e-9


@given(channels())
def test_result_invariants(p):
    res = theorem1_bound(p)
    assert res.value >= 0.0
    assert 0.0 <= res.a_star <= p.r0
    cs = ConstraintSet(p)
    rhs = {
        Constraint.BROADCAST: cs.c1,
        Constraint.MULTIPLE_ACCESS: cs.c2_at(res.a_star),
        Constraint.NEW_CONSTRAINT_7: cs.c3_at(res.a_star),
    }[res.active_constraint]
    assert abs(rhs - res.value) <= 1e-9


@given(channels(ordered=True))
def test_result_invariants_prop5(p):
    res = prop5_bound(p)
    assert res.value >= 0.0
    assert 0.0 <= res.a_star <= p.r0
    cs = ConstraintSet(p)
    rhs = {
        Constraint.BROADCAST: cs.c1,
        Constraint.MULTIPLE_ACCESS: cs.c2_at(res.a_star),
        Constraint.NEW_CONSTRAINT_26: cs.c4_at(res.a_star),
        Constraint.NEW_CONSTRAINT_27: cs.c5_at(res.a_star),
    }[res.active_constraint]
    assert abs(rhs - res.value) <= ACTIVE_TOL


@given(channels())
def test_r0_zero_reduction_exact(p):
    q = ChannelParams(p.snr1, p.snr2, 0.0)
    assert theorem1_bound(q).value == cutset_bound(q).value


@given(snrs, snrs, st.floats(min_value=1e-3, max_value=1.0))
@settings(max_examples=200)
def test_strictly_tighter_when_relay_constraint_binds(s1, s2, frac):
    # r0 below 0.5 log2((1 + s1 + s2) / (1 + s2)) keeps multiple access active.
    # A strict gain also needs K = C2(0) - C3(0) > 0 (the auxiliary constraint
    # starts below the multiple-access one); K is kept away from 0 so that the
    # gain a* ~ K^2 ln2 / 2 is visible in double precision.
    p = ChannelParams(s1, s2, frac * half_log(s1 / (1.0 + s2)))
    cut = cutset_bound(p)
    _, k = limit_slacks(p)
    assume(cut.active_constraint is Constraint.MULTIPLE_ACCESS and p.r0 > 0 and k > 1e-6)
    assert theorem1_bound(p).value < cut.value


def test_no_gain_when_auxiliary_constraint_starts_above():
    # multiple access active, r0 > 0, but K < 0: the bounds coincide
    p = ChannelParams(1000, 1, 0.1)
    assert cutset_bound(p).active_constraint is Constraint.MULTIPLE_ACCESS
    assert limit_slacks(p)[1] < 0
    assert theorem1_bound(p).value == cutset_bound(p).value


def _nondecreasing(values, tol=1e-12):
    return all(b >= a - tol for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("fixed", [(0.1, 0.2), (1.0, 0.5), (10.0, 1.0), (300.0, 3.0)])
def test_monotone_in_each_argument(fixed):
    other, r0 = fixed
    xs = np.geomspace(1e-3, 1e3, 120)
    for bound in (cutset_bound, theorem1_bound):
        assert _nondecreasing([bound(ChannelParams(x, other, r0)).value for x in xs])
        assert _nondecreasing([bound(ChannelParams(other, x, r0)).value for x in xs])
        assert _nondecreasing([bound(ChannelParams(other, other, r)).value
                               for r in np.linspace(0, 5, 120)])
    # prop5 along its domain snr1 >= snr2
    assert _nondecreasing([prop5_bound(ChannelParams(x, other, r0)).value for x in xs if x >= other])
    assert _nondecreasing([prop5_bound(ChannelParams(other, x, r0)).value for x in xs if x <= other])
    assert _nondecreasing([prop5_bound(ChannelParams(other, other / 2, r)).value
                           for r in np.linspace(0, 5, 120)])
