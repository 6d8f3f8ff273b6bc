"""
Unit tests for Pareto verdicts, separating payoffs and dominance audits
"""

from fractions import Fraction as F

import pytest

from menuforge.core.exceptions import InputError, PreconditionError
from menuforge.domain.menus.v1 import VerdictReason
from menuforge.geometry.polytope import contains_point, contains_polytope
from menuforge.services.game_model import pure_csp
from menuforge.services.mean_based import build_mb_menu
from menuforge.services.menus import (
    build_nr_menu,
    build_nsr_menu,
    fixed_action_menu,
    learner_value,
    menu_from_points,
    value_faces,
)
from menuforge.services.pareto import (
    audit_dominance,
    check_pareto_optimal,
    circle_parameters,
    find_separating_uO,
    high_regret_menu,
    sample_directions,
)


@pytest.fixture(scope="module")
def mb_verdict(eq_menus):
    return check_pareto_optimal(eq_menus["mb"], nr=eq_menus["nr"], nsr=eq_menus["nsr"])


class TestParetoVerdict:
    """Test suite for check_pareto_optimal"""

    def test_nsr_is_optimal(self, eq_menus, rps_menus):
        for menus in (eq_menus, rps_menus):
            # Act
            verdict = check_pareto_optimal(menus["nsr"], nr=menus["nr"], nsr=menus["nsr"])

            # Assert
            assert verdict.optimal
            assert verdict.reason == VerdictReason.MIN_FACE_MATCHES_NSR
            assert verdict.dominating_menu is None

    def test_mean_based_menu_is_dominated(self, mb_verdict, eq_menus, eq_game):
        assert not mb_verdict.optimal
        assert mb_verdict.reason == VerdictReason.MIN_FACE_STRICTLY_LARGER
        assert mb_verdict.witness_vertex in eq_menus["mb"].vertices
        assert not contains_point(eq_menus["nsr"].polytope, mb_verdict.witness_vertex)

    def test_dominating_menu_shape(self, mb_verdict, eq_menus):
        """Test the dominating menu sits between NSR and MB and drops the witness"""
        dominating = mb_verdict.dominating_menu

        assert contains_polytope(eq_menus["mb"].polytope, dominating.polytope)
        assert contains_polytope(dominating.polytope, eq_menus["nsr"].polytope)
        assert not contains_point(dominating.polytope, mb_verdict.witness_vertex)
        assert value_faces(dominating).u_plus == value_faces(eq_menus["mb"]).u_plus

    def test_not_no_regret(self, eq_game, eq_menus):
        # Arrange
        always_a = fixed_action_menu(eq_game, 0)

        # Act
        verdict = check_pareto_optimal(always_a, nr=eq_menus["nr"], nsr=eq_menus["nsr"])

        # Assert
        assert not verdict.optimal
        assert verdict.reason == VerdictReason.NOT_NO_REGRET

    def test_missing_phi_plus(self, eq_game, eq_menus, tau_star_profile):
        menu = menu_from_points(eq_game, [tau_star_profile], label="tau*")

        verdict = check_pareto_optimal(menu, nr=eq_menus["nr"], nsr=eq_menus["nsr"])

        assert verdict.reason == VerdictReason.MISSING_PHI_PLUS

    def test_nsr_not_contained(self, eq_game, eq_menus, tau_star_profile):
        menu = menu_from_points(eq_game, [tau_star_profile, pure_csp(eq_game, 1, 2)], label="segment")

        verdict = check_pareto_optimal(menu, nr=eq_menus["nr"], nsr=eq_menus["nsr"])

        assert verdict.reason == VerdictReason.NSR_NOT_CONTAINED

    def test_dimension_mismatch(self, rps_menus, eq_game):
        with pytest.raises(InputError):
            check_pareto_optimal(rps_menus["nsr"], game=eq_game)

    def test_high_regret_menu(self, eq_game):
        """Test the learner always plays the action of the learner-optimal pair (Y, C)"""
        menu = high_regret_menu(eq_game)

        assert menu.label == "fixed:C"
        assert set(menu.vertices) == {pure_csp(eq_game, 0, 2), pure_csp(eq_game, 1, 2)}


class TestSeparation:
    """Test suite for find_separating_uO and circle_parameters"""

    def test_circle_parameters_start_at_one(self):
        params = list(circle_parameters(5))

        assert params[0] == 1
        assert len(params) == 5
        assert len(set(params)) == 5
        assert all(t > 0 for t in params)

    def test_dominating_menu_separates(self, mb_verdict, eq_menus, eq_game):
        # Arrange
        winner, loser = mb_verdict.dominating_menu, eq_menus["mb"]

        # Act
        witness = find_separating_uO(winner, loser, eq_game)

        # Assert
        assert witness.vL_winner > witness.vL_loser
        assert learner_value(winner, witness.uO) == witness.vL_winner
        assert learner_value(loser, witness.uO) == witness.vL_loser

    def test_no_vertex_outside_winner(self, eq_menus, eq_game):
        with pytest.raises(PreconditionError):
            find_separating_uO(eq_menus["mb"], eq_menus["nsr"], eq_game)

    def test_dimension_mismatch(self, eq_menus, rps_menus, eq_game):
        with pytest.raises(InputError):
            find_separating_uO(eq_menus["mb"], rps_menus["nsr"], eq_game)


class TestDominanceAudit:
    """Test suite for sampled dominance comparisons"""

    def test_sample_directions_are_reproducible(self):
        first = sample_directions(6, 10, seed=3)

        assert first == sample_directions(6, 10, seed=3)
        assert all(len(u) == 6 for u in first)
        assert all(-1 <= v <= 1 and (v * 1000).denominator == 1 for u in first for v in u)

    def test_dominating_menu_never_loses(self, mb_verdict, eq_menus):
        # Arrange
        samples = sample_directions(6, 500, seed=0)

        # Act
        audit = audit_dominance(mb_verdict.dominating_menu, eq_menus["mb"], samples, seed=0, jobs=1)

        # Assert
        assert audit.samples == 500
        assert audit.losses == 0
        assert audit.first_loss is None
        assert audit.wins + audit.ties == 500

    def test_menu_against_itself_ties(self, eq_menus):
        samples = sample_directions(6, 25, seed=1)

        audit = audit_dominance(eq_menus["nsr"], eq_menus["nsr"], samples, jobs=1)

        assert audit.ties == 25
        assert not audit.dominates

    @pytest.mark.parametrize("samples", [[(F(1), F(0))], [(F(0),) * 9]])
    def test_sample_dimension_mismatch(self, eq_menus, samples):
        with pytest.raises(InputError):
            audit_dominance(eq_menus["nsr"], eq_menus["mb"], samples, jobs=1)


class TestCorpusVerdicts:
    """Verdicts, separations and audits across corpus games"""

    def test_rps_no_regret_menu_is_dominated(self, rps, rps_menus):
        """Test M_NR of rock-paper-scissors keeps a diagonal pure CSP that M_NSR excludes"""
        # Arrange
        nr, nsr = rps_menus["nr"], rps_menus["nsr"]

        # Act
        verdict = check_pareto_optimal(nr, nr=nr, nsr=nsr)

        # Assert
        assert not verdict.optimal
        assert verdict.reason == VerdictReason.MIN_FACE_STRICTLY_LARGER
        assert verdict.witness_vertex in {pure_csp(rps, i, i) for i in range(3)}
        assert not contains_point(nsr.polytope, verdict.witness_vertex)

    def test_rps_dominating_menu_separates_and_never_loses(self, rps, rps_menus):
        # Arrange
        nr = rps_menus["nr"]
        dominating = check_pareto_optimal(nr, nr=nr, nsr=rps_menus["nsr"]).dominating_menu

        # Act
        witness = find_separating_uO(dominating, nr, rps)
        audit = audit_dominance(dominating, nr, sample_directions(9, 500, seed=0), seed=0, jobs=1)

        # Assert
        assert witness.vL_winner > witness.vL_loser
        assert audit.samples == 500
        assert audit.losses == 0
        assert audit.wins + audit.ties == 500

    @pytest.mark.slow
    @pytest.mark.parametrize("index", range(5))
    def test_perturbed_mean_based_menu_is_dominated(self, perturbed_games, index):
        # Arrange
        game = perturbed_games[index]
        nr, nsr, mb = build_nr_menu(game), build_nsr_menu(game), build_mb_menu(game, jobs=1)

        # Act
        verdict = check_pareto_optimal(mb, nr=nr, nsr=nsr)
        witness = find_separating_uO(verdict.dominating_menu, mb, game)
        audit = audit_dominance(verdict.dominating_menu, mb, sample_directions(6, 500, seed=index), jobs=1)

        # Assert
        assert game.name == f"mb_counterexample_p{index + 1}"
        assert not verdict.optimal
        assert verdict.reason == VerdictReason.MIN_FACE_STRICTLY_LARGER
        assert witness.vL_winner > witness.vL_loser
        assert audit.losses == 0

    def test_nsr_is_optimal_on_every_valid_game(self, valid_corpus):
        assert len(valid_corpus) == 17
        for name, game in valid_corpus.items():
            # Act
            nsr = build_nsr_menu(game)
            verdict = check_pareto_optimal(nsr, nr=build_nr_menu(game), nsr=nsr)

            # Assert
            assert verdict.optimal, name
            assert verdict.reason == VerdictReason.MIN_FACE_MATCHES_NSR, name
