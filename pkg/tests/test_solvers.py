import math
from fractions import Fraction

import numpy as np
import pytest

from seplines.geom import CanonicalLine, pt, side
from seplines.sepsys import PointSet, SeparationMode, TooFewPointsError, properize
from seplines.solvers import (
    EXACT_SIZE_CAP,
    SizeCapError,
    SolverConfig,
    WeightState,
    _capacity,
    exact_separability,
    greedy_hitting_set,
    grid_separator,
    halving_separator,
    realize_variant,
    reweight_approx,
    verify,
)

from .conftest import perturbed_grid, rand_general_position_points

STRICT = SeparationMode.STRICT
RELAXED = SeparationMode.RELAXED

SQUARE = PointSet([pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)])


# ---------------------------------------------------------------------------
# realize_variant


def test_realize_variant_all_sign_patterns():
    rng = np.random.default_rng(0)
    for seed in range(8):
        P = rand_general_position_points(6, seed=200 + seed)
        u, v = sorted(rng.choice(6, size=2, replace=False).tolist())
        from seplines.geom import line_through

        base = line_through(P[u], P[v])
        base_sides = [side(base, p) for p in P]
        for su in (-1, 0, 1):
            for sv in (-1, 0, 1):
                line = realize_variant(P, u, v, su, sv)
                assert side(line, P[u]) == su
                assert side(line, P[v]) == sv
                for i, p in enumerate(P):
                    if base_sides[i] != 0:
                        assert side(line, p) == base_sides[i], (seed, u, v, su, sv, i)


# ---------------------------------------------------------------------------
# exact solver


def test_exact_two_points_both_modes():
    P = PointSet([pt(0, 0), pt(1, 1)])
    for mode in (STRICT, RELAXED):
        sigma, lines = exact_separability(P, mode)
        assert sigma == 1 and len(lines) == 1
        assert verify(P, lines, mode)


def test_exact_square_is_two():
    sigma, lines = exact_separability(SQUARE, STRICT)
    assert sigma == 2
    assert verify(SQUARE, lines, STRICT)


def test_exact_five_general_position_is_three():
    for seed in (0, 1):
        P = rand_general_position_points(5, seed=300 + seed)
        sigma, lines = exact_separability(P, STRICT)
        assert sigma == 3
        assert verify(P, lines, STRICT)


def test_exact_relaxed_leq_strict():
    for seed in range(3):
        P = rand_general_position_points(6, seed=400 + seed)
        s_strict, _ = exact_separability(P, STRICT)
        s_relaxed, lr = exact_separability(P, RELAXED)
        assert s_relaxed <= s_strict
        assert verify(P, lr, RELAXED)


def test_exact_size_cap():
    P = rand_general_position_points(EXACT_SIZE_CAP + 1, seed=1)
    with pytest.raises(SizeCapError):
        exact_separability(P, STRICT)
    with pytest.raises(TooFewPointsError):
        exact_separability(PointSet([pt(0, 0)]), STRICT)


def test_capacity_formulas():
    # t lines cut a face into at most 1 + t(t+1)/2 cells; counting cells,
    # open edges, and vertices gives 1 + 2t^2.
    assert [_capacity(t, STRICT) for t in range(4)] == [1, 2, 4, 7]
    assert [_capacity(t, RELAXED) for t in range(4)] == [1, 3, 9, 19]


# ---------------------------------------------------------------------------
# greedy


def test_greedy_two_points_single_line():
    P = PointSet([pt(0, 0), pt(3, 1)])
    for mode in (STRICT, RELAXED):
        lines = greedy_hitting_set(P, mode)
        assert len(lines) == 1
        assert verify(P, lines, mode)


def test_greedy_verified_and_near_optimal_small():
    for seed in range(4):
        P = rand_general_position_points(8, seed=500 + seed)
        sigma, _ = exact_separability(P, STRICT)
        lines = greedy_hitting_set(P, STRICT)
        assert verify(P, lines, STRICT)
        # ln-approximation bound for hitting set, loose check
        assert len(lines) <= sigma * (1 + math.ceil(math.log(len(P) ** 2)))
        relaxed = greedy_hitting_set(P, RELAXED)
        assert verify(P, relaxed, RELAXED)
        assert len(relaxed) <= len(lines)


def test_greedy_deterministic():
    P = rand_general_position_points(9, seed=7)
    assert greedy_hitting_set(P, STRICT) == greedy_hitting_set(P, STRICT)


# ---------------------------------------------------------------------------
# reweighting


def test_reweight_returns_verified_relaxed_set():
    for seed in range(3):
        P = rand_general_position_points(10, seed=600 + seed)
        res = reweight_approx(P, SolverConfig(rng_seed=seed))
        assert verify(P, res.lines, RELAXED)
        assert res.rounds_used >= 0
        assert res.guess_history


def test_reweight_deterministic_per_seed():
    P = rand_general_position_points(10, seed=42)
    r1 = reweight_approx(P, SolverConfig(rng_seed=5))
    r2 = reweight_approx(P, SolverConfig(rng_seed=5))
    assert r1.lines == r2.lines
    assert r1.rounds_used == r2.rounds_used


def test_reweight_prune_never_hurts():
    P = rand_general_position_points(12, seed=43)
    pruned = reweight_approx(P, SolverConfig(rng_seed=1, prune=True))
    raw = reweight_approx(P, SolverConfig(rng_seed=1, prune=False))
    assert len(pruned.lines) <= len(raw.lines)
    assert verify(P, pruned.lines, RELAXED)
    assert verify(P, raw.lines, RELAXED)


def test_reweight_then_properize_gives_strict():
    P = rand_general_position_points(9, seed=44)
    res = reweight_approx(P, SolverConfig(rng_seed=2))
    strict = properize(res.lines, P)
    assert verify(P, strict, STRICT)
    assert len(strict) <= 3 * len(res.lines)


def test_weight_state_doubling_and_masking():
    w = WeightState(8)
    mask = np.zeros(8, dtype=bool)
    mask[:3] = True
    assert w.masked_weight(mask) == pytest.approx(3.0)
    w.double(mask)
    assert w.masked_weight(mask) == pytest.approx(6.0)
    assert w.total_weight == pytest.approx(11.0)
    # many doublings stay finite thanks to rescaling
    one = np.zeros(8, dtype=bool)
    one[0] = True
    for _ in range(1200):
        w.double(one)
    assert math.isfinite(w.total_weight) and w.total_weight > 0
    assert w.rescale_exponent > 0
    rng = np.random.default_rng(0)
    picks = w.sample(rng, 64)
    assert (picks == 0).mean() > 0.9  # item 0 carries almost all weight


# ---------------------------------------------------------------------------
# halving


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 9, 12])
def test_halving_size_and_verification(n):
    P = rand_general_position_points(n, seed=700 + n)
    lines = halving_separator(P)
    assert len(lines) == math.ceil(n / 2)
    assert verify(P, lines, STRICT)


# ---------------------------------------------------------------------------
# grid


def test_grid_separator_corners():
    P = PointSet(
        [
            pt(Fraction(1, 8), Fraction(1, 8)),
            pt(Fraction(7, 8), Fraction(1, 8)),
            pt(Fraction(7, 8), Fraction(7, 8)),
            pt(Fraction(1, 8), Fraction(7, 8)),
        ]
    )
    lines = grid_separator(P, 2)
    assert len(lines) == 2  # the two grid lines suffice
    assert verify(P, lines, STRICT)


def test_grid_separator_colliding_cell_gets_bisector():
    P = PointSet(
        [
            pt(Fraction(1, 8), Fraction(1, 8)),
            pt(Fraction(2, 8), Fraction(1, 8)),  # same cell as previous
            pt(Fraction(7, 8), Fraction(7, 8)),
        ]
    )
    lines = grid_separator(P, 2)
    assert len(lines) == 3
    assert verify(P, lines, STRICT)


def test_grid_separator_point_on_gridline_warns_and_fixes():
    P = PointSet(
        [
            pt(Fraction(1, 2), Fraction(1, 4)),  # exactly on x = 1/2
            pt(Fraction(3, 4), Fraction(1, 4)),
            pt(Fraction(1, 4), Fraction(3, 4)),
        ]
    )
    with pytest.warns(UserWarning):
        lines = grid_separator(P, 2)
    assert verify(P, lines, STRICT)


def test_grid_separator_matches_perturbed_grid():
    P = perturbed_grid(4, seed=9)  # 16 points, one per cell of the 4x4 grid
    lines = grid_separator(P, 4)
    assert len(lines) == 6
    assert verify(P, lines, STRICT)


def test_grid_separator_rejects_out_of_square():
    with pytest.raises(ValueError):
        grid_separator(PointSet([pt(0, 0), pt(2, 2)]), 2)
