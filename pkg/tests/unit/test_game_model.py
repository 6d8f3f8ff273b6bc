"""
Unit tests for game validation, payoffs and regret
"""

from fractions import Fraction as F

import pytest

from menuforge.adapters.game_adapter import load_game, load_registry
from menuforge.core.exceptions import AssumptionViolationError, InputError
from menuforge.domain.games.v1 import ActionClass, CSP, Game
from menuforge.services.game_model import (
    best_responses,
    expected_payoff,
    incentive_margin,
    marginals,
    mixture_value,
    perturbed_game,
    phi_plus,
    product_csp,
    regret,
    require_valid,
    swap_regret,
    validate,
    zero_sum_value,
)


class TestGameModel:
    """Test suite for the Game model itself"""

    def test_payoff_range_enforced(self):
        """Test entries outside [-1, 1] are rejected"""
        with pytest.raises(InputError):
            Game.build([[F(3, 2), 0], [0, 1]])

    def test_ragged_matrix_rejected(self):
        with pytest.raises(InputError):
            Game.build([[0, 1], [1]])

    def test_u_O_shape_enforced(self):
        with pytest.raises(InputError):
            Game.build([[0, 1], [1, 0]], u_O=[[0, 1]])

    def test_flat_indexing(self, eq_game):
        """Test row-major flattening (i, j) -> i * n + j"""
        assert eq_game.dim == 6
        assert eq_game.index(1, 2) == 5
        assert eq_game.pair(4) == (1, 1)
        assert eq_game.flat_u_L[5] == F(1, 2)

    def test_csp_must_be_distribution(self, eq_game):
        with pytest.raises(InputError):
            CSP.of(eq_game, [F(1, 2)] * 6)


class TestValidation:
    """Test suite for the genericity assumptions"""

    def test_counterexample_is_valid(self, eq_game):
        """Test every learner action is strictly incentivizable"""
        # Act
        report = validate(eq_game)

        # Assert
        assert report.valid
        assert report.violations == []
        assert report.phi_plus == [(1, 2)]
        assert report.phi_plus_unique
        assert report.phi_plus_value == F(1, 2)
        assert all(a.action_class == ActionClass.NON_DOMINATED for a in report.actions)

    @pytest.mark.parametrize(
        "action,margin,x",
        [
            (0, F(1, 6), (F(1), F(0))),
            (1, F(1, 12), (F(1, 2), F(1, 2))),
            (2, F(1, 6), (F(0), F(1))),
        ],
    )
    def test_incentive_margins(self, eq_game, action, margin, x):
        """Test the optimal margin and the mix attaining it"""
        delta, witness = incentive_margin(eq_game, action)

        assert delta == margin
        assert witness == x

    def test_duplicate_column_is_weakly_dominated(self, games_dir):
        game = load_game(games_dir / "duplicate_column.json")

        report = validate(game)

        assert not report.valid
        assert [a.action_class for a in report.actions[:2]] == [ActionClass.WEAKLY_DOMINATED] * 2
        assert len(report.violations) == 2
        with pytest.raises(AssumptionViolationError):
            require_valid(game)

    def test_strictly_dominated_action(self, games_dir):
        game = load_game(games_dir / "dominated_action.json")

        report = validate(game)

        assert report.actions[1].action_class == ActionClass.STRICTLY_DOMINATED
        assert report.actions[1].margin < 0

    def test_phi_plus_ties_are_reported(self, rps):
        """Test several maximizing pairs keep the game valid"""
        report = validate(rps)

        assert report.valid
        assert not report.phi_plus_unique
        assert sorted(report.phi_plus) == [(0, 1), (1, 2), (2, 0)]

    def test_trivial_game_is_valid(self, trivial_game):
        assert validate(trivial_game).valid

    def test_corpus_matches_registry(self, games_dir):
        """Test every registry entry validates as recorded"""
        registry = load_registry(games_dir)

        for entry in registry.games:
            game = load_game(games_dir / entry.file)
            assert validate(game).valid is entry.expect_valid, entry.file

    def test_corpus_size(self, valid_corpus, games_dir):
        """Test the corpus has enough valid and perturbed games"""
        perturbed = [e for e in load_registry(games_dir).games if "perturbed" in e.tags]

        assert len(valid_corpus) >= 10
        assert len(perturbed) >= 5


class TestPayoffsAndRegret:
    """Test suite for payoffs, marginals and regret of CSPs"""

    def test_best_responses(self, eq_game):
        """Test ties on the A/B boundary ray"""
        assert best_responses(eq_game, (F(2, 3), F(1, 3))) == frozenset({0, 1})
        assert best_responses(eq_game, (F(1, 3), F(2, 3))) == frozenset({1, 2})
        assert best_responses(eq_game, (F(1, 2), F(1, 2))) == frozenset({1})

    def test_best_responses_require_distribution(self, eq_game):
        with pytest.raises(InputError):
            best_responses(eq_game, (F(1, 2), F(1, 3)))

    def test_tau_star_profile(self, eq_game, tau_star_profile):
        """Test zero utility, zero regret and swap regret 1/12"""
        assert expected_payoff(eq_game, tau_star_profile) == 0
        assert regret(eq_game, tau_star_profile) == 0
        assert swap_regret(eq_game, tau_star_profile) == F(1, 12)
        assert marginals(eq_game, tau_star_profile) == ((F(2, 3), F(1, 3)), (F(0), F(1, 2), F(1, 2)))

    def test_product_of_best_response_has_no_swap_regret(self, rps):
        csp = product_csp(rps, [F(1, 3)] * 3, [F(1, 3)] * 3)

        assert regret(rps, csp) == 0
        assert swap_regret(rps, csp) == 0

    def test_optimizer_payoff(self, rps, eq_game):
        diagonal = [F(1, 3) if i == j else 0 for i in range(3) for j in range(3)]

        assert expected_payoff(rps, diagonal, "O") == 0
        with pytest.raises(InputError):
            expected_payoff(eq_game, [F(1, 6)] * 6, "O")

    @pytest.mark.parametrize(
        "fixture,value",
        [
            ("rps", F(0)),
            ("eq_game", F(0)),
            ("two_by_two", F(1, 2)),
        ],
    )
    def test_zero_sum_value(self, request, fixture, value):
        """Test min_x max_j u_L(x, j)"""
        game = request.getfixturevalue(fixture)

        result = zero_sum_value(game)

        assert result.value == value

    def test_zero_sum_saddle_pair(self, two_by_two):
        result = zero_sum_value(two_by_two)

        assert result.x == (F(3, 4), F(1, 4))
        assert result.y == (F(1, 2), F(1, 2))

    def test_mixture_value(self):
        """Test the weighted sum of per-component values"""
        value = mixture_value(lambda uO: uO[0], [(F(1, 4), (1, 0)), (F(3, 4), (F(1, 3), 0))])

        assert value == F(1, 4) + F(1, 4)

    def test_mixture_weights_must_sum_to_one(self):
        with pytest.raises(InputError):
            mixture_value(lambda uO: uO[0], [(F(1, 2), (1,))])


class TestPerturbedGames:
    """Test suite for the perturbed counterexample family"""

    def test_unperturbed_matches_corpus(self, eq_game):
        game = perturbed_game()

        assert game.u_L == eq_game.u_L
        assert game.name == "mb_counterexample"

    def test_perturbed_games_stay_valid(self, perturbed_games):
        for game in perturbed_games:
            report = validate(game)
            assert report.valid
            assert report.phi_plus == [(1, 2)]

    @pytest.mark.parametrize(
        "eps",
        [
            [F(1, 50), 0, 0, 0, 0, 0],
            [0, F(1, 100), 0, 0, 0, 0],
            [F(-1, 100), 0, 0, 0, 0, 0],
            [F(1, 100), 0, 0],
        ],
    )
    def test_invalid_perturbations(self, eps):
        with pytest.raises(InputError):
            perturbed_game(eps)
