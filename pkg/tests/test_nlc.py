import itertools
from fractions import Fraction

import numpy as np
import pytest

from nlgames.bounds import quantum_bound
from nlgames.games import GameFormatError, evaluate_box, strategy_box
from nlgames.nlc import (
    NlcValidationError,
    building_block_matrix,
    fourier_vector,
    lambda_profile,
    nlc_classical_strategy,
    nlc_game,
    nlc_quantum_bound,
    nlc_spec,
    nlc_spec_from_json,
    nlc_spec_to_json,
    verify_block_circulant,
    verify_theorem3,
)
from nlgames.bounds import ns_winning_box


# ---------------------------------------------------------------------------
# Specification validation
# ---------------------------------------------------------------------------


def test_spec_validation_errors():
    with pytest.raises(NlcValidationError, match="prime"):
        nlc_spec(4, 2, [0, 1, 2, 3])
    with pytest.raises(NlcValidationError, match="at least 1"):
        nlc_spec(2, 0, [])
    with pytest.raises(NlcValidationError, match="prefix strings"):
        nlc_spec(2, 2, [0])
    with pytest.raises(NlcValidationError, match="values must lie"):
        nlc_spec(2, 2, [0, 2])
    with pytest.raises(NlcValidationError, match="sums to"):
        nlc_spec(2, 2, [0, 1], [[1, 2], [1, 3]])
    with pytest.raises(NlcValidationError, match="exact rationals"):
        nlc_spec(2, 2, [0, 1], [0.5, 0.5])
    with pytest.raises(NlcValidationError, match="keyword"):
        nlc_spec(2, 2, [0, 1], "flat")
    with pytest.raises(NlcValidationError, match="cap"):
        nlc_spec(3, 7, [0] * 3**6)


def test_uniform_detection():
    assert nlc_spec(3, 2, [0, 1, 2]).uniform
    assert nlc_spec(3, 2, [0, 1, 2], [[1, 3]] * 3).uniform
    assert not nlc_spec(3, 2, [0, 1, 2], [[1, 2], [1, 4], [1, 4]]).uniform


# ---------------------------------------------------------------------------
# Game construction
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("d,t", [(2, 0), (2, 1), (3, 2)])
def test_single_dit_game_is_building_block(d, t):
    spec = nlc_spec(d, 1, [t])
    game = nlc_game(spec)
    assert game.mA == game.mB == d
    for x in range(d):
        for y in range(d):
            assert game.f_idx[x, y] == (t * (x + y)) % d
            assert game.q_fraction(x, y) == Fraction(1, d * d)
    from nlgames.bounds import game_matrix

    for k in range(1, d):
        phi = game_matrix(game, k)
        assert np.max(np.abs(phi - building_block_matrix(d, k, t) / d**2)) < 1e-14


def test_two_dit_game_block_structure():
    spec = nlc_spec(2, 2, [0, 1])
    game = nlc_game(spec)
    assert game.mA == 4
    for x1, x2, y1, y2 in itertools.product(range(2), repeat=4):
        u, v = 2 * x1 + x2, 2 * y1 + y2
        assert game.f_idx[u, v] == ((x1 ^ y1) * (x2 ^ y2)) % 2
    assert game.has_exact_q
    assert game.is_uniform_q()


def test_weighted_game_q_table():
    spec = nlc_spec(2, 2, [0, 1], [[3, 4], [1, 4]])
    game = nlc_game(spec)
    # Block (x1, y1) carries weight p(x1 xor y1) / d^3 per entry.
    assert game.q_fraction(0, 0) == Fraction(3, 4) / 8
    assert game.q_fraction(0, 2) == Fraction(1, 4) / 8
    assert sum(game.q_fraction(u, v) for u in range(4) for v in range(4)) == 1


# ---------------------------------------------------------------------------
# Multiplicity profiles
# ---------------------------------------------------------------------------


def test_profile_identity_function():
    prof = lambda_profile(nlc_spec(3, 2, [0, 1, 2]))
    assert prof.counts == (1, 1, 1)
    assert prof.count_max == 1
    assert prof.mu == 0
    assert sum(prof.weighted) == Fraction(1, 9)


def test_profile_two_dit_product_function():
    # g(z1, z2) = z1 * z2 over Z_2: three strings map to 0, one maps to 1.
    spec = nlc_spec(2, 3, [0, 0, 0, 1])
    prof = lambda_profile(spec)
    assert prof.counts == (3, 1)
    assert prof.count_max == 3
    assert prof.mu == 0
    assert sum(prof.counts) == 4


def test_profile_point_mass():
    spec = nlc_spec(3, 2, [2, 0, 1], [[0, 1], [1, 1], [0, 1]])
    prof = lambda_profile(spec)
    assert prof.weighted == (Fraction(1, 9), Fraction(0), Fraction(0))
    assert prof.weighted_max == Fraction(1, 9)
    assert prof.mu == 0


def test_profile_tie_breaks_to_smallest():
    prof = lambda_profile(nlc_spec(2, 3, [0, 0, 1, 1]))
    assert prof.counts == (2, 2)
    assert prof.mu == 0


# ---------------------------------------------------------------------------
# Bounds and strategies
# ---------------------------------------------------------------------------


def test_uniform_bound_instances():
    assert nlc_quantum_bound(nlc_spec(2, 2, [0, 1])) == Fraction(3, 4)
    assert nlc_quantum_bound(nlc_spec(3, 2, [0, 1, 2])) == Fraction(5, 9)


@pytest.mark.parametrize(
    "spec",
    [
        nlc_spec(2, 2, [1, 1]),
        nlc_spec(3, 2, [2, 2, 2]),
        nlc_spec(2, 3, [0, 0, 0, 0], [[1, 2], [1, 4], [1, 8], [1, 8]]),
    ],
)
def test_constant_g_saturates_bound(spec):
    assert nlc_quantum_bound(spec) == 1
    strat = nlc_classical_strategy(spec)
    assert strat.value == 1
    assert strat.mu == spec.g[0]


def test_strategy_value_matches_box_evaluation():
    spec = nlc_spec(3, 2, [0, 2, 2], [[1, 2], [1, 3], [1, 6]])
    strat = nlc_classical_strategy(spec)
    game = nlc_game(spec)
    box = strategy_box(game, list(strat.alice), list(strat.bob))
    assert evaluate_box(game, box) == pytest.approx(float(strat.value), abs=1e-12)
    # Closed form: (1/d) * (1 + d^2 (d-1) * weighted_max).
    prof = lambda_profile(spec)
    closed = Fraction(1, 3) * (1 + 9 * 2 * prof.weighted_max)
    assert strat.value == closed


def test_strategy_value_equal_across_tied_maximizers():
    spec = nlc_spec(2, 3, [0, 0, 1, 1])
    v0 = nlc_classical_strategy(spec, mu=0).value
    v1 = nlc_classical_strategy(spec, mu=1).value
    assert v0 == v1 == nlc_quantum_bound(spec)


def test_non_maximizer_mu_scores_strictly_less():
    spec = nlc_spec(2, 3, [0, 0, 0, 1])
    best = nlc_classical_strategy(spec).value
    worse = nlc_classical_strategy(spec, mu=1).value
    assert worse < best


def test_strategy_ignores_prefix():
    spec = nlc_spec(3, 2, [1, 0, 2])
    strat = nlc_classical_strategy(spec)
    for x in range(9):
        assert strat.alice[x] == strat.alice[x % 3 + (x // 3) * 3]
        assert strat.alice[x] == (strat.mu * (x % 3)) % 3


# ---------------------------------------------------------------------------
# Theorem verification
# ---------------------------------------------------------------------------


def test_verify_theorem3_uniform_examples():
    for spec in [
        nlc_spec(2, 2, [0, 1]),
        nlc_spec(2, 3, [0, 1, 1, 0]),
        nlc_spec(3, 2, [0, 2, 1]),
        nlc_spec(5, 1, [3]),
    ]:
        report = verify_theorem3(spec)
        assert report.strategy_value == report.bound
        assert report.brute_forced
        assert report.brute_force_value == report.bound
        assert report.spectral_bound == pytest.approx(float(report.bound), abs=1e-10)


def test_verify_theorem3_single_dit_games_are_winnable():
    for d in (2, 3):
        for t in range(d):
            report = verify_theorem3(nlc_spec(d, 1, [t]))
            assert report.bound == 1
            assert report.brute_force_value == 1


def test_verify_theorem3_weighted_rational():
    report = verify_theorem3(nlc_spec(2, 2, [0, 1], [[3, 4], [1, 4]]))
    assert report.bound == Fraction(7, 8)
    assert report.brute_force_value == Fraction(7, 8)


def test_verify_theorem3_skips_brute_force_over_budget():
    spec = nlc_spec(3, 2, [0, 1, 2])
    report = verify_theorem3(spec, budget=100)
    assert not report.brute_forced
    assert report.brute_force_value is None
    assert report.spectral_bound == pytest.approx(float(report.bound), abs=1e-10)


def test_ns_box_beats_quantum_bound_witness():
    # Non-constant g with full-support p: the no-signaling box wins while the
    # quantum bound stays strictly below 1.
    specs = [
        nlc_spec(2, 2, g, [[3, 4], [1, 4]])
        for g in ([0, 1], [1, 0])
    ] + [
        nlc_spec(2, 2, [0, 1]),
        nlc_spec(3, 2, [0, 1, 0], [[1, 2], [1, 4], [1, 4]]),
    ]
    for spec in specs:
        game = nlc_game(spec)
        assert evaluate_box(game, ns_winning_box(game)) == pytest.approx(1.0, abs=1e-12)
        assert float(nlc_quantum_bound(spec)) < 1.0
        assert quantum_bound(game) < 1.0


FIXED_RATIONAL_P = {
    2: [[(3, 4), (1, 4)], [(1, 2), (1, 2)], [(1, 3), (2, 3)]],
    4: [
        [(1, 2), (1, 4), (1, 8), (1, 8)],
        [(1, 4)] * 4,
        [(2, 5), (1, 5), (1, 5), (1, 5)],
    ],
    3: [[(1, 2), (1, 3), (1, 6)], [(1, 3)] * 3, [(3, 5), (1, 5), (1, 5)]],
}


def test_theorem3_exhaustive_with_rational_distributions():
    # Every g-table for d=2 (n=2,3) and d=3 (n=2), against uniform and three
    # fixed rational prefix distributions: exact equality on all legs.
    for d, n in [(2, 2), (2, 3), (3, 2)]:
        size = d ** (n - 1)
        distributions = ["uniform"] + FIXED_RATIONAL_P[size]
        for g in itertools.product(range(d), repeat=size):
            for p in distributions:
                report = verify_theorem3(nlc_spec(d, n, g, p))
                assert report.strategy_value == report.bound
                assert report.brute_force_value == report.bound


def test_profile_is_row_independent():
    # Recompute the multiplicity profile from every row block by hand.
    spec = nlc_spec(3, 2, [0, 2, 2], [[1, 2], [1, 3], [1, 6]])
    prof = lambda_profile(spec)
    d = spec.d
    for row in range(spec.prefix_count):
        counts = [0] * d
        weighted = [Fraction(0)] * d
        for y in range(spec.prefix_count):
            z = (row + y) % 3  # one-digit prefixes add mod d
            counts[spec.g[z]] += 1
            weighted[spec.g[z]] += spec.p[z] / (d * d)
        assert tuple(counts) == prof.counts
        assert tuple(weighted) == prof.weighted


# ---------------------------------------------------------------------------
# Block-circulant structure
# ---------------------------------------------------------------------------


def test_building_block_eigen_identity():
    # B_k(t)^H B_k(t') f_j = d^2 delta_{t,t'} delta_{j, -k t mod d} f_j.
    for d in (2, 3, 5):
        for k in range(1, d):
            for t in range(d):
                for t2 in range(d):
                    prod = building_block_matrix(d, k, t).conj().T @ building_block_matrix(d, k, t2)
                    for j in range(d):
                        fj = fourier_vector(d, j)
                        expected = (
                            d * d * fj
                            if (t == t2 and j == (-k * t) % d)
                            else np.zeros(d)
                        )
                        assert np.max(np.abs(prod @ fj - expected)) < 1e-10


@pytest.mark.parametrize(
    "spec",
    [
        nlc_spec(2, 2, [0, 1]),
        nlc_spec(2, 2, [1, 1]),
        nlc_spec(3, 2, [0, 1, 2]),
        nlc_spec(3, 2, [2, 2, 0]),
        nlc_spec(2, 3, [0, 1, 1, 0]),
        nlc_spec(3, 2, [0, 1, 2], [[1, 2], [1, 3], [1, 6]]),
    ],
    ids=str,
)
def test_block_circulant_structure(spec):
    reports = [verify_block_circulant(spec, k) for k in range(1, spec.d)]
    for report in reports:
        assert report.off_diagonal_max < 1e-10
        assert len(set(report.lambda_by_k)) == 1
        assert report.spectral_norm == pytest.approx(report.expected_norm, abs=1e-10)
    # The multiplicity maximum is the same for every character index.
    assert len({r.lambda_by_k for r in reports}) == 1


def test_block_circulant_uniform_norm_bridging():
    # With uniform weight 1/d^(2n) on entries the norm is d * Lambda / d^(2n).
    spec = nlc_spec(3, 2, [0, 0, 1])
    prof = lambda_profile(spec)
    report = verify_block_circulant(spec, 1)
    d, n = 3, 2
    assert report.spectral_norm == pytest.approx(
        d * prof.count_max / d ** (2 * n), abs=1e-12
    )


def test_block_circulant_rejects_bad_k():
    spec = nlc_spec(3, 2, [0, 1, 2])
    with pytest.raises(NlcValidationError):
        verify_block_circulant(spec, 0)
    with pytest.raises(NlcValidationError):
        verify_block_circulant(spec, 3)


# ---------------------------------------------------------------------------
# JSON format
# ---------------------------------------------------------------------------


def test_nlc_json_round_trip():
    spec = nlc_spec(3, 2, [0, 1, 2], [[1, 2], [1, 3], [1, 6]])
    doc = nlc_spec_to_json(spec)
    assert doc == {"d": 3, "n": 2, "g": [0, 1, 2], "p": [[1, 2], [1, 3], [1, 6]]}
    assert nlc_spec_from_json(doc) == spec
    uniform = nlc_spec(2, 2, [0, 1])
    assert nlc_spec_to_json(uniform)["p"] == "uniform"
    assert nlc_spec_from_json(nlc_spec_to_json(uniform)) == uniform


def test_nlc_json_rejects_malformed():
    with pytest.raises(GameFormatError, match="unknown keys"):
        nlc_spec_from_json({"d": 2, "n": 1, "g": [0], "p": "uniform", "x": 1})
    with pytest.raises(GameFormatError, match="missing"):
        nlc_spec_from_json({"d": 2, "n": 1, "g": [0]})
    with pytest.raises(GameFormatError, match="integers"):
        nlc_spec_from_json({"d": 2.0, "n": 1, "g": [0], "p": "uniform"})
    with pytest.raises(NlcValidationError):
        nlc_spec_from_json({"d": 2, "n": 2, "g": [0, 1], "p": [[1, 2], [1, 3]]})
