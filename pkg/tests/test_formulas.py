"""Closed forms: achievable rates, bounds, baselines, and the gap search.

The numeric constants in this file were computed by hand from the formula
definitions and act as frozen oracles; any drift in the implementation
shows up as an exact-value failure here.
"""

import numpy as np
import pytest

import burstyx as bx

R_GRID = np.arange(1, 101) / 100.0          # (0, 1]
P_GRID = np.arange(0, 101) / 100.0          # [0, 1]


# -- frozen point values ----------------------------------------------------

def test_normalized_dof_point_values():
    assert bx.normalized_dof(0.5, 0.5) == pytest.approx(0.75, abs=1e-12)
    assert bx.normalized_dof(2 / 3, 1.0) == pytest.approx(4 / 3, abs=1e-12)
    assert bx.normalized_dof(1.0, 0.5) == pytest.approx(1.25, abs=1e-12)
    assert bx.normalized_dof(0.25, 1.0) == pytest.approx(0.5, abs=1e-12)


def test_normalized_dof_open_regime_raises():
    with pytest.raises(ValueError, match="outside the characterized regime"):
        bx.normalized_dof(0.8, 0.6)
    with pytest.raises(ValueError, match="outside the characterized regime"):
        bx.normalized_dof(1.0, 0.51)
    # boundary cases stay inside
    bx.normalized_dof(2 / 3, 0.9)
    bx.normalized_dof(0.9, 0.5)


def test_bound_point_values():
    assert bx.upper_bound_b(1.0, 1.0) == pytest.approx(4 / 3, abs=1e-12)
    assert bx.upper_bound_a(1.0, 1.0) == pytest.approx(2.0, abs=1e-12)
    assert bx.lower_bound(1.0, 1.0) == pytest.approx(4 / 3, abs=1e-12)
    assert bx.lower_bound(0.75, 0.5) == pytest.approx(1.0, abs=1e-12)


def test_composite_point_values():
    assert bx.composite_achievable(4, 2, 0.3) == pytest.approx(2.04, abs=1e-12)
    assert bx.composite_achievable(4, 2, 0.5) == pytest.approx(3.0, abs=1e-12)
    assert bx.composite_achievable(4, 2, 0.7) == pytest.approx(3.64, abs=1e-12)
    assert bx.composite_achievable(4, 3, 0.3) == pytest.approx(2.808, abs=1e-12)
    assert bx.composite_achievable(4, 3, 0.5) == pytest.approx(4.0, abs=1e-12)
    assert bx.composite_achievable(3, 3, 0.7) == pytest.approx(4.3036, abs=1e-12)
    assert bx.composite_achievable(3, 2, 0.7) == pytest.approx(3.346, abs=1e-12)


def test_rate_bound_point_values():
    assert bx.rate_pair_bound(4, 2, 1.0) == pytest.approx(2.0, abs=1e-12)
    assert bx.three_rate_bound(3, 3, 1.0) == pytest.approx(3.0, abs=1e-12)
    assert bx.three_rate_bound(4, 3, 0.5) == pytest.approx(0.25 * 4 + 1.5 * 0.5 * 3)


def test_baseline_point_values():
    assert bx.per_topology_baseline(3, 3, 1.0) == pytest.approx(4.0, abs=1e-12)
    assert bx.baseline_normalized(0.75, 0.5) == pytest.approx(0.90625, abs=1e-12)
    assert bx.baseline_normalized(1.0, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert bx.per_topology_baseline(4, 3, 0.0) == 0.0


# -- identities on grids ----------------------------------------------------

def test_branch_continuity_at_half_ratio():
    """Both branches of the main closed form agree at r = 1/2."""
    for p in P_GRID[1:]:
        low = 2 * 0.5 * p * (1 + (1 - p))
        q = 1 - p
        high = 2 * 0.5 * (p * p + 2 * p * q * q) + 2 * p * p * q
        assert abs(low - high) < 1e-12
        assert bx.normalized_dof(0.5, p) == pytest.approx(low, abs=1e-12)


def test_lower_meets_upper_at_half_probability():
    for r in R_GRID:
        lb = bx.lower_bound(r, 0.5)
        ub = bx.upper_bound_a(r, 0.5)
        assert abs(lb - ub) < 1e-12
        assert abs(lb - (r + 0.25)) < 1e-12


def test_pair_bound_doubles_to_dof_or_upper():
    """Twice the two-message bound, normalized, equals the closed form."""
    for m, n in [(4, 2), (5, 2), (2, 1), (6, 3)]:
        # wide shapes: matches the achievable dof everywhere
        for p in P_GRID:
            lhs = 2 * bx.rate_pair_bound(m, n, p) / max(m, n)
            assert abs(lhs - bx.normalized_dof(min(m, n) / max(m, n), p)) < 1e-12
    for m, n in [(4, 3), (3, 2), (5, 4), (3, 3)]:
        # balanced shapes: matches the first upper bound instead
        for p in P_GRID:
            lhs = 2 * bx.rate_pair_bound(m, n, p) / max(m, n)
            assert abs(lhs - bx.upper_bound_a(min(m, n) / max(m, n), p)) < 1e-12


def test_triple_bound_scales_to_second_upper():
    for m, n in [(4, 3), (3, 2), (4, 2), (3, 3), (5, 4)]:
        r = min(m, n) / max(m, n)
        for p in P_GRID:
            lhs = (4 / 3) * bx.three_rate_bound(m, n, p) / max(m, n)
            assert abs(lhs - bx.upper_bound_b(r, p)) < 1e-12


def test_composite_normalizes_to_lower_bound_in_open_regime():
    for m, n in [(4, 3), (3, 4), (5, 4), (3, 3)]:
        r = min(m, n) / max(m, n)
        for p in P_GRID:
            if p <= 0.5:
                continue  # composite switches to the exact closed form here
            lhs = bx.composite_achievable(m, n, p) / max(m, n)
            assert abs(lhs - bx.lower_bound(r, p)) < 1e-12


def test_composite_matches_dof_inside_characterized_regime():
    for m, n in [(4, 2), (4, 3), (3, 2), (6, 4)]:
        r = min(m, n) / max(m, n)
        for p in P_GRID:
            if 3 * r > 2 and p > 0.5:
                continue
            lhs = bx.composite_achievable(m, n, p) / max(m, n)
            assert abs(lhs - bx.normalized_dof(r, p)) < 1e-12


def test_lower_bound_sandwiched_by_uppers():
    # the bounds bracket the unknown value only where the closed form stops
    for r in R_GRID[R_GRID > 2 / 3]:
        for p in P_GRID[P_GRID > 0.5]:
            lb = bx.lower_bound(r, p)
            cap = min(bx.upper_bound_a(r, p), bx.upper_bound_b(r, p))
            assert lb <= cap + 1e-12


def test_baseline_never_beats_composite():
    for m, n in [(4, 3), (4, 2), (3, 3), (5, 4)]:
        for p in P_GRID:
            assert (
                bx.per_topology_baseline(m, n, p)
                <= bx.composite_achievable(m, n, p) + 1e-9
            )


def test_baseline_routes_agree_off_square_multiples():
    """Closed-form baseline times max equals the probability-weighted sum."""
    for m, n in [(4, 3), (3, 4), (4, 2), (2, 2), (5, 4)]:
        r = min(m, n) / max(m, n)
        for p in P_GRID:
            direct = bx.per_topology_baseline(m, n, p)
            closed = max(m, n) * bx.baseline_normalized(r, p)
            assert abs(direct - closed) < 1e-12


def test_baseline_square_multiple_uplift():
    # all-links slots on 3|m squares decode 4m/3, one extra symbol at (3,3)
    direct = bx.per_topology_baseline(3, 3, 1.0)
    closed = 3 * bx.baseline_normalized(1.0, 1.0)
    assert direct - closed == pytest.approx(1.0, abs=1e-12)


def test_input_validation():
    with pytest.raises(ValueError):
        bx.normalized_dof(0.0, 0.5)
    with pytest.raises(ValueError):
        bx.normalized_dof(1.2, 0.5)
    with pytest.raises(ValueError):
        bx.lower_bound(0.5, 1.5)
    with pytest.raises(ValueError):
        bx.composite_achievable(0, 3, 0.5)
    with pytest.raises(ValueError):
        bx.single_slot_symbols("f", -1, 3)


# -- profiles and the gap search --------------------------------------------

def test_profile_regimes():
    assert bx.dof_profile(4, 2, 0.9).regime == "low"
    assert bx.dof_profile(4, 3, 0.3).regime == "mid"
    assert bx.dof_profile(4, 3, 0.8).regime == "open"
    prof = bx.dof_profile(4, 3, 0.8)
    assert prof.dof is None
    assert prof.lb <= min(prof.ub1, prof.ub2) + 1e-12


def test_profile_to_dict_round_trip():
    d = bx.dof_profile(4, 3, 0.5).to_dict()
    assert d["composite"] == pytest.approx(4.0)
    assert d["regime"] == "mid"
    assert d["r"] == pytest.approx(0.75)


def test_gap_search_coarse_grid_sane():
    res = bx.max_gap_search(step=0.02)
    assert 2 / 3 < res.r <= 1.0
    assert 0.5 < res.p <= 1.0
    assert 0.0 < res.gap < 0.06


def test_gap_search_frozen_location():
    # argmax confirmed by an independent scalar scan over the same lattice
    res = bx.max_gap_search(step=0.005)
    assert res.r == pytest.approx(0.815, abs=1e-9)
    assert res.p == pytest.approx(0.765, abs=1e-9)
    assert res.gap == pytest.approx(0.0512756, abs=1e-6)


def test_gap_value_at_reference_point():
    lb = bx.lower_bound(0.81, 0.77)
    cap = min(bx.upper_bound_a(0.81, 0.77), bx.upper_bound_b(0.81, 0.77))
    assert 1 - lb / cap == pytest.approx(0.051163, abs=1e-5)
