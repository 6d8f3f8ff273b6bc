"""
Unit tests for the file adapters: rational codec, games, menus, run configs and CSV
"""

import json
from fractions import Fraction as F

import numpy as np
import pandas as pd
import pytest

from menuforge.adapters.csv_writer import transcript_frame, write_curves
from menuforge.adapters.game_adapter import (
    game_from_dict,
    game_to_dict,
    load_game,
    load_registry,
    load_trajectory,
    save_game,
    trajectory_to_dict,
)
from menuforge.adapters.menu_adapter import load_menu, menu_to_dict, save_menu
from menuforge.adapters.rational_codec import encode, encode_vector, parse, parse_vector
from menuforge.adapters.run_config import ConfigResolver, load_run_config, resolve_run
from menuforge.core.exceptions import ParseError, PreconditionError
from menuforge.domain.simulation.v1 import LearnerKind, OptimizerKind, Transcript
from menuforge.geometry.polytope import polytopes_equal
from menuforge.services.mean_based import profile


def _get_default_game_data() -> dict:
    return {
        "name": "pennies",
        "u_L": [[1, -1], [-1, "1"]],
        "u_O": [["-1", 1], [1, -1]],
        "optimizer_actions": ["H", "T"],
        "learner_actions": ["h", "t"],
    }


class TestRationalCodec:
    """Test suite for exact rational text"""

    @pytest.mark.parametrize(
        "value,expected",
        [
            ("1/3", F(1, 3)),
            ("-2/4", F(-1, 2)),
            (3, F(3)),
            ("0.25", F(1, 4)),
            (" 5/10 ", F(1, 2)),
        ],
    )
    def test_parse(self, value, expected):
        assert parse(value) == expected

    @pytest.mark.parametrize("value", [0.5, True, "abc", "1/0", None, [1]])
    def test_parse_rejects(self, value):
        with pytest.raises(ParseError):
            parse(value)

    def test_encode_lowest_terms(self):
        assert encode(F(2, 4)) == "1/2"
        assert encode(F(3)) == "3/1"
        assert encode_vector([F(0), F(-1, 6)]) == ["0/1", "-1/6"]

    def test_parse_vector_needs_list(self):
        with pytest.raises(ParseError):
            parse_vector("1/2")


class TestGameAdapter:
    """Test suite for game files and the corpus registry"""

    def test_game_from_dict(self):
        game = game_from_dict(_get_default_game_data())

        assert (game.m, game.n) == (2, 2)
        assert game.u_L[1][1] == 1
        assert game.learner_label(1) == "t"

    def test_game_round_trip(self, tmp_path, eq_game):
        # Act
        path = save_game(tmp_path / "eq.json", eq_game)
        loaded = load_game(path)

        # Assert
        assert loaded.u_L == eq_game.u_L
        assert loaded.u_O == eq_game.u_O
        assert json.loads(path.read_text())["u_L"][0] == ["0/1", "-1/6", "-1/2"]

    @pytest.mark.parametrize(
        "data",
        [
            [],
            {"name": "no payoffs"},
            {"u_L": [[0.5, 0]]},
            {"u_L": [[1, 0], [0]]},
            {"u_L": [[2, 0]]},
            {"m": 3, "u_L": [[1, 0]]},
        ],
    )
    def test_malformed_games(self, data):
        with pytest.raises(ParseError):
            game_from_dict(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_game(tmp_path / "missing.json")

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")

        with pytest.raises(ParseError):
            load_game(path)

    def test_game_to_dict_declares_shape(self, rps):
        data = game_to_dict(rps)

        assert (data["m"], data["n"]) == (3, 3)
        assert data["name"] == "rps"

    def test_registry(self, games_dir):
        registry = load_registry(games_dir)

        invalid = {entry.file for entry in registry.games if not entry.expect_valid}
        assert invalid == {"duplicate_column.json", "dominated_action.json"}

    def test_trajectory_file(self, configs_dir, eq_game, tau_star_profile):
        trajectory = load_trajectory(configs_dir / "trajectories" / "tau_star.json")

        assert profile(eq_game, trajectory).probs == tau_star_profile
        assert trajectory_to_dict(trajectory)["segments"][0]["t"] == "1/2"


class TestMenuAdapter:
    """Test suite for menu files"""

    def test_menu_round_trip(self, tmp_path, eq_menus, eq_game):
        # Arrange
        path = tmp_path / "nsr.json"

        # Act
        save_menu(path, eq_menus["nsr"])
        loaded = load_menu(path, eq_game)

        # Assert
        assert loaded.label == "M_NSR"
        assert polytopes_equal(loaded.polytope, eq_menus["nsr"].polytope)

    def test_mb_menu_carries_witnesses(self, eq_menus):
        data = menu_to_dict(eq_menus["mb"])

        assert len(data["witnesses"]) == len(data["vertices"])
        assert all("segments" in w["trajectory"] for w in data["witnesses"])

    def test_menu_for_other_shape(self, tmp_path, eq_menus, rps):
        path = tmp_path / "nsr.json"
        save_menu(path, eq_menus["nsr"])

        with pytest.raises(ParseError):
            load_menu(path, rps)


class TestRunConfig:
    """Test suite for run configs and reference resolution"""

    def test_load_run_config(self, configs_dir):
        config = load_run_config(configs_dir / "mw_vs_tau_star.yaml")

        assert config.T == 200000
        assert config.seed == 7
        assert config.menus == ["mb", "nsr"]

    def test_resolve_run(self, configs_dir):
        # Act
        resolved = resolve_run(configs_dir / "grim_trigger.yaml")

        # Assert
        assert resolved.learner.kind == LearnerKind.GRIM_TRIGGER
        assert resolved.learner.actions == [0, 1]
        assert resolved.optimizer.kind == OptimizerKind.SCHEDULE
        assert [run.rounds for run in resolved.optimizer.rounds] == [500, 500]

    def test_ftrl_gets_default_eta(self, configs_dir):
        resolved = resolve_run(configs_dir / "mw_vs_exploiter.yaml")

        assert resolved.learner.eta is not None
        assert resolved.optimizer.uO == tuple(-v for v in resolved.game.flat_u_L)

    def test_missing_config(self, tmp_path):
        with pytest.raises(ParseError):
            load_run_config(tmp_path / "missing.yaml")

    def test_config_without_horizon(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("game: g.json\nlearner: {kind: ftl}\noptimizer: {kind: fixed, x: [1, 0]}\n")

        with pytest.raises(ParseError):
            load_run_config(path)

    def test_named_menu_references(self, tmp_path, eq_game, eq_menus):
        resolver = ConfigResolver(tmp_path, eq_game)

        assert polytopes_equal(resolver.menu("nsr").polytope, eq_menus["nsr"].polytope)
        assert resolver.menu("fixed:B").label == "fixed:B"
        assert resolver.menu("fixed:2").label == "fixed:C"

    def test_extend_reference(self, tmp_path, eq_game, tau_star_profile):
        resolver = ConfigResolver(tmp_path, eq_game)

        menu = resolver.menu({"extend": "nsr", "points": [[str(v) for v in tau_star_profile]], "label": "ext"})

        assert menu.label == "ext"
        assert tau_star_profile in menu.vertices

    def test_dominating_reference(self, tmp_path, eq_game, eq_menus):
        resolver = ConfigResolver(tmp_path, eq_game)
        resolver._named["mb"] = eq_menus["mb"]

        menu = resolver.menu("dominating:mb")

        assert menu.label == "M_MB-drop"
        with pytest.raises(PreconditionError):
            resolver.menu("dominating:nsr")

    @pytest.mark.parametrize("ref", [42, {"points": []}, "fixed:Z"])
    def test_bad_menu_references(self, tmp_path, eq_game, ref):
        with pytest.raises(ParseError):
            ConfigResolver(tmp_path, eq_game).menu(ref)

    def test_vector_references(self, tmp_path, rps):
        resolver = ConfigResolver(tmp_path, rps)

        assert resolver.vector("-u_O") == rps.flat_u_L
        with pytest.raises(ParseError):
            resolver.vector("u_X")


class TestCsvWriter:
    """Test suite for transcript tables"""

    def test_transcript_frame_columns(self):
        transcript = Transcript(
            T=2,
            optimizer_mixes=np.array([[1.0, 0.0], [0.5, 0.5]]),
            learner_mixes=np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
            seed=0,
        )

        frame = transcript_frame(transcript, np.array([0.0, 0.1]), np.array([0.0, 0.2]))

        assert list(frame.columns) == [
            "t", "x_1", "x_2", "y_1", "y_2", "y_3", "regret_prefix", "swap_regret_prefix",
        ]
        assert frame["t"].tolist() == [1, 2]

    def test_write_curves(self, tmp_path):
        path = write_curves(tmp_path / "out" / "curves.csv", [{"t": 1, "regret": 0.5}, {"t": 2, "regret": 0.25}])

        assert pd.read_csv(path)["regret"].tolist() == [0.5, 0.25]
