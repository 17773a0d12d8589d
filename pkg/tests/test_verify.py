"""Checks of the verification harness on constructed instances.

Each inequality check is exercised at instances whose outcome is known in
advance: neutral digits give exact zeros, saturated digits route to the
surgery case, dominant quotients give empty concentration tails, and the
hypothesis gates and enumeration caps raise their distinct errors.
"""

import dataclasses
import math

import numpy as np
import pytest

from sudlerlab import frozen, verify
from sudlerlab.cfrac import CFExpansion, OstrowskiRep, cf_tail, convergents, ostrowski_encode
from sudlerlab.errors import EnumerationCapError, PrecondError


def _make(digits):
    cf = CFExpansion.from_partial_quotients(0, digits)
    return cf, convergents(cf, cf.L)


def _instance(table, overrides):
    rng = np.random.default_rng(7)
    digits = verify._random_digits(table, rng, overrides=overrides)
    return verify._decode(table, digits)


# -- digit-surgery lower bounds -----------------------------------------------------


def test_local56_i_passes_across_deviation_sweep():
    cf, table = _make([1, 1, 200, 1, 2])
    for b in (0, 40, 100, 166, 199):
        N = _instance(table, {2: b, 3: 0})
        rep = verify.check_local56_i(table, N, 2)
        assert rep.passed and rep.fitted_constant <= frozen.LOCAL56_C


def test_local56_neutral_digit_gives_exact_zeros():
    # at b_k = b* the surgery is the identity: both sides vanish
    cf, table = _make([1, 1, 200, 1, 2])
    N = _instance(table, {2: 166, 3: 0})
    lhs, main, err = verify._local56_i_parts(table, N, 2)
    assert lhs == 0.0 and main == 0.0 and err > 0


def test_local56_ii_surgery_digits():
    cf, table = _make([1, 1, 200, 1, 2])
    k, a_k2 = 2, table.partial(4)
    N = _instance(table, {k + 1: a_k2, k + 2: 0})
    rep = ostrowski_encode(N, table)
    assert rep.digit(k) == 0 and rep.digit(k + 1) == a_k2
    bstar = (5 * table.partial(k + 1)) // 6
    Nstar = N + bstar * table.q(k) - table.q(k + 1)
    srep = ostrowski_encode(Nstar, table)
    assert srep.digit(k) == bstar and srep.digit(k + 1) == a_k2 - 1
    assert verify.check_local56_ii(table, N, k).passed


def test_local56_margin_monotone_in_constant():
    cf, table = _make([1, 1, 200, 1, 2])
    N = _instance(table, {2: 30, 3: 0})
    lo = verify.check_local56_i(table, N, 2, C=1.0).worst_margin
    hi = verify.check_local56_i(table, N, 2, C=4.0).worst_margin
    assert hi >= lo


def test_local56_requires_minimum_quotient():
    cf, table = _make([1, 1, 3, 1, 2])
    with pytest.raises(PrecondError):
        verify.check_local56_i(table, 0, 2)


# -- squared-mass concentration -----------------------------------------------------


def test_concentration_empty_tail_is_exact_zero():
    # a_(k+1) = 300: the tail threshold 10 sqrt(a log a) > 250 covers every digit
    cf, table = _make([1, 300, 1, 2])
    assert verify.concentration_ratios(table, cf.L, 1) == (0.0, 0.0)


def test_concentration_nonempty_tail_still_negligible():
    cf, table = _make([1, 2000, 2])
    r_all, r_head = verify.concentration_ratios(table, cf.L, 1)
    # with a_1 = 1 the head digit is forced to zero, both sums agree
    assert r_all == r_head and 0 < r_all < 1e-150
    rep = verify.check_concentration(table, cf.L, 1)
    assert rep.passed and rep.cases_run == 2 and rep.worst_margin > 0


def test_concentration_hypothesis_gate():
    cf, table = _make([1, 2, 3])
    assert verify.concentration_hypothesis_ratio(table, 1) > frozen.CONCENTRATION_A
    with pytest.raises(PrecondError):
        verify.check_concentration(table, cf.L, 1)


def test_concentration_enumeration_cap():
    cf, table = _make([1, 10**7, 2])
    with pytest.raises(EnumerationCapError):
        verify.check_concentration(table, cf.L, 1)


# -- two-block Sudler factorization -------------------------------------------------


def test_sudler_factor_zero_head_is_exact():
    cf, table = _make([2, 1, 300, 2, 3])
    N = _instance(table, {0: 0, 1: 0, 2: 250, 3: 1})
    err, unit = verify._sudler_factor_parts(table, N, 2)
    assert err == 0.0 and unit > 0


def test_sudler_factor_report_within_envelope():
    cf, table = _make([2, 1, 300, 2, 3])
    N = _instance(table, {0: 1, 1: 1, 2: 250, 3: 1})
    rep = verify.check_sudler_factor(table, N, 2)
    assert rep.passed and 0 < rep.fitted_constant <= frozen.SUDLER_FACTOR_C


def test_sudler_factor_hypothesis_gates():
    cf, table = _make([2, 1, 100, 2, 3])
    with pytest.raises(PrecondError):
        verify.check_sudler_factor(table, _instance(table, {2: 80, 3: 1}), 2)
    cf, table = _make([2, 1, 300, 2, 3])
    with pytest.raises(PrecondError):
        # deviation 150 from b* = 250 exceeds a_(k+1)/10
        verify.check_sudler_factor(table, _instance(table, {2: 100, 3: 1}), 2)


# -- Jones-sum factorization --------------------------------------------------------


def test_kashaev_error_shrinks_with_dominant_quotient():
    err_small, xi_small = verify._kashaev_parts(
        CFExpansion.from_partial_quotients(0, [2, 400, 2, 3]), 1, 4, math.inf
    )
    err_big, xi_big = verify._kashaev_parts(
        CFExpansion.from_partial_quotients(0, [2, 1600, 2, 3]), 1, 4, math.inf
    )
    assert err_big < err_small and xi_big < xi_small


def test_kashaev_report_within_envelope():
    cf = CFExpansion.from_partial_quotients(0, [2, 400, 2, 3])
    rep = verify.check_kashaev_factor(cf, 1, 4)
    assert rep.passed and rep.fitted_constant <= frozen.KASHAEV_FACTOR_C


def test_kashaev_requires_finite_expansion():
    with pytest.raises(PrecondError):
        verify.check_kashaev_factor(CFExpansion.preset("golden"), 1, 4)


def test_kashaev_hypothesis_gate():
    cf = CFExpansion.from_partial_quotients(0, [2, 400, 2, 3])
    with pytest.raises(PrecondError):
        verify.check_kashaev_factor(cf, 1, 4, A=1e-6)


# -- renormalized tail blocks -------------------------------------------------------


def test_tail_empty_block_is_exact_zero():
    cf, table = _make([3, 2, 4, 3, 2])
    tail_table = convergents(cf_tail(cf), cf.L - 1)
    N = _instance(table, {2: 0})
    rep = ostrowski_encode(N, table)
    lhs, unit = verify._tail_parts(table, tail_table, rep, 2)
    assert lhs == 0.0 and unit > 0


def test_tail_level_one_with_unit_quotient_degenerates():
    cf, table = _make([3, 1, 2, 2])
    tail_table = convergents(cf_tail(cf), cf.L - 1)
    rep = ostrowski_encode(_instance(table, {1: 1}), table)
    with pytest.raises(PrecondError):
        verify._tail_parts(table, tail_table, rep, 1)
    rep0 = ostrowski_encode(_instance(table, {1: 0}), table)
    lhs, _ = verify._tail_parts(table, tail_table, rep0, 1)
    assert lhs == 0.0


def test_tail_log_term_carries_large_first_quotient():
    # at level 1 the power term vanishes (empty quotient sum); the block
    # ratio is genuinely nonzero, so only the log(a_1 + 1) term can hold it
    cf, table = _make([40, 2, 3, 2, 2])
    rep = OstrowskiRep((30, 1, 0, 1, 1), table)
    lhs, power, logterm = verify.tail_envelope_terms(cf, rep, 1)
    assert power == 0.0 and logterm > 0
    assert lhs > frozen.TAIL_C * power
    assert lhs <= frozen.TAIL_C * (power + logterm)
    tail_table = convergents(cf_tail(cf), cf.L - 1)
    assert verify.check_tail(table, tail_table, rep, 1).passed


def test_tail_rejects_bad_level():
    cf, table = _make([3, 2, 4, 3, 2])
    tail_table = convergents(cf_tail(cf), cf.L - 1)
    rep = ostrowski_encode(5, table)
    for ell in (0, cf.L):
        with pytest.raises(PrecondError):
            verify._tail_parts(table, tail_table, rep, ell)


# -- oscillation over renormalization intervals -------------------------------------


def test_oscillation_empty_interval_raises():
    with pytest.raises(PrecondError):
        verify.oscillation(CFExpansion.preset("e-2"), 4, qcap=10)


def test_oscillation_single_point_is_zero():
    osc, bound = verify.oscillation(CFExpansion.preset("e-2"), 4, qcap=40)
    assert osc == 0.0 and bound > 0


def test_oscillation_decreases_with_level():
    cf = CFExpansion.preset("e-2")
    osc4, _ = verify.oscillation(cf, 4, qcap=2000)
    osc7, _ = verify.oscillation(cf, 7, qcap=2000)
    assert osc4 > osc7 > 0


def test_oscillation_cap():
    with pytest.raises(EnumerationCapError):
        verify.oscillation(CFExpansion.preset("e-2"), 4, qcap=2 * 10**5)


# -- value-model scan ---------------------------------------------------------------


def test_scan_th3_within_frozen_bound():
    # F_60 is a subset of the F_100 calibration corpus, so its sup is covered
    rep = verify.scan_th3(60)
    assert rep.passed and rep.cases_run > 100
    assert rep.fitted_constant <= frozen.TH3_C


# -- suite plumbing -----------------------------------------------------------------


def test_run_suite_rejects_unknown_name():
    with pytest.raises(PrecondError):
        verify.run_suite("nonsense")


def test_suite_registry_is_complete():
    assert set(verify.SUITES) == {
        "identities", "epsilon", "cotangent", "local56", "concentration",
        "factor", "tail", "continuity", "th3",
    }


def test_epsilon_suite_rows_all_pass():
    rows = verify.run_suite("epsilon")
    assert len(rows) == 4 and all(r.passed for r in rows)


def test_merge_cases_takes_worst_margin():
    rows = [
        verify._case("x", "a", 2.0, 1.0),
        verify._case("x", "b", 1.0, 1.5),
    ]
    rep = verify.merge_cases("x", rows, fitted=0.25)
    assert rep.cases_run == 2 and rep.worst_margin == -0.5
    assert not rep.passed and rep.fitted_constant == 0.25


def test_case_rows_carry_csv_fields_in_order():
    names = [f.name for f in dataclasses.fields(verify.CheckCase)]
    assert names == ["check_id", "case_id", "lhs", "rhs", "margin", "passed"]
