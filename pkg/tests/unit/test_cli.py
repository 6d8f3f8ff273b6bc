"""
Unit tests for the command-line surface: exit codes, JSON reports and artifact files
"""

import json

import pandas as pd
import pytest

from menuforge.adapters.rational_codec import parse_vector
from menuforge.geometry.polytope import contains_point, convex_hull
from menuforge.main import main


def _run(capsys, *argv):
    """Invoke the CLI; returns (exit code, parsed stdout)"""
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


class TestGameCommands:
    """Test suite for `game validate`"""

    def test_valid_game(self, capsys, games_dir):
        # Act
        code, payload = _run(capsys, "game", "validate", str(games_dir / "mb_counterexample.json"))

        # Assert
        assert code == 0
        assert payload["valid"]
        assert payload["phi_plus"] == [[1, 2]]
        assert [a["margin"] for a in payload["actions"]] == ["1/6", "1/12", "1/6"]

    def test_invalid_game_exits_2(self, capsys, games_dir):
        code, payload = _run(capsys, "game", "validate", str(games_dir / "duplicate_column.json"))

        assert code == 2
        assert not payload["valid"]
        assert payload["violations"]

    def test_malformed_json_exits_1(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")

        code, payload = _run(capsys, "game", "validate", str(path))

        assert code == 1
        assert payload["error"] == "ParseError"

    def test_report_file(self, capsys, games_dir, tmp_path):
        out = tmp_path / "rps.validation.json"

        code, _ = _run(capsys, "game", "validate", str(games_dir / "rps.json"), "--out", str(out))

        assert code == 0
        assert json.loads(out.read_text())["phi_plus_unique"] is False


class TestMenuCommands:
    """Test suite for `menu build`, `menu check-valid` and `menu compare`"""

    def test_build_nsr_of_trivial_game(self, capsys, games_dir):
        code, payload = _run(capsys, "menu", "build", str(games_dir / "trivial_1x1.json"), "--kind", "nsr")

        assert code == 0
        assert payload["vertices"] == [["1/1"]]

    def test_build_mb_contains_tau_star(self, capsys, games_dir, tau_star_profile):
        # Act
        code, payload = _run(capsys, "menu", "build", str(games_dir / "mb_counterexample.json"), "--kind", "mb")

        # Assert
        assert code == 0
        assert payload["label"] == "M_MB"
        polytope = convex_hull([parse_vector(v) for v in payload["vertices"]])
        assert contains_point(polytope, tau_star_profile)

    def test_build_mb_needs_2x3(self, capsys, games_dir):
        code, payload = _run(capsys, "menu", "build", str(games_dir / "rps.json"), "--kind", "mb")

        assert code == 3
        assert payload["error"] == "UnsupportedShapeError"

    def test_build_mb_needs_valid_game(self, capsys, games_dir):
        code, payload = _run(capsys, "menu", "build", str(games_dir / "duplicate_column.json"), "--kind", "mb")

        assert code == 2
        assert payload["error"] == "AssumptionViolationError"

    def test_unknown_kind(self, capsys, games_dir):
        code, payload = _run(capsys, "menu", "build", str(games_dir / "rps.json"), "--kind", "xyz")

        assert code == 1
        assert payload["error"] == "InputError"

    def test_build_into_directory(self, capsys, games_dir, tmp_path):
        # Arrange
        out = str(tmp_path / "menus") + "/"

        # Act
        code, payload = _run(capsys, "menu", "build", str(games_dir / "rps.json"), "--kind", "nr", "--out", out)

        # Assert
        assert code == 0
        assert payload["menu"] == "M_NR"
        manifest = json.loads((tmp_path / "menus" / "manifest.json").read_text())
        assert [o["path"].endswith("menu_nr.json") for o in manifest["outputs"]] == [True]
        assert len(manifest["inputs"]) == 1
        assert manifest["command"].startswith("menuforge menu build")

    def test_check_valid(self, capsys, games_dir):
        code, payload = _run(capsys, "menu", "check-valid", str(games_dir / "rps.json"), "nsr", "--grid", "4")

        assert code == 0
        assert payload["passed"]
        assert payload["points_checked"] == 15

    def test_compare(self, capsys, games_dir):
        code, payload = _run(capsys, "menu", "compare", str(games_dir / "rps.json"), "nsr", "nr")

        assert code == 0
        assert payload["equal"] is False
        assert payload["hausdorff"] > 0


class TestParetoCommands:
    """Test suite for `pareto check` and `pareto audit`"""

    @pytest.mark.parametrize(
        "menu,optimal,reason",
        [
            ("nsr", True, "min_face_matches_nsr"),
            ("fixed:A", False, "not_no_regret"),
        ],
    )
    def test_check(self, capsys, games_dir, menu, optimal, reason):
        code, payload = _run(capsys, "pareto", "check", str(games_dir / "mb_counterexample.json"), menu)

        assert code == 0
        assert payload["optimal"] is optimal
        assert payload["reason"] == reason

    def test_audit_writes_file(self, capsys, games_dir, tmp_path):
        out = tmp_path / "audit.json"

        code, payload = _run(
            capsys, "pareto", "audit", str(games_dir / "rps.json"),
            "--candidate", "nsr", "--baseline", "nsr", "--samples", "10", "--seed", "2", "--out", str(out),
        )

        assert code == 0
        assert payload["ties"] == 10
        assert json.loads(out.read_text())["seed"] == 2

    def test_falsify_precondition(self, capsys, games_dir):
        code, payload = _run(
            capsys, "pareto", "falsify", str(games_dir / "rps.json"), "--winner", "nr", "--loser", "nsr"
        )

        assert code == 1
        assert payload["error"] == "PreconditionError"


class TestSimAndReportCommands:
    """Test suite for `sim run` and `report bundle`"""

    def test_sim_run_writes_artifacts(self, capsys, configs_dir, tmp_path):
        # Arrange
        out = tmp_path / "run"

        # Act
        code, payload = _run(capsys, "sim", "run", str(configs_dir / "constant_learner.yaml"), "--out", str(out))

        # Assert
        assert code == 0
        assert payload["T"] == 1000
        assert payload["distances"]["fixed:Q"] < 1e-6
        for name in ("transcript.csv", "metrics.json", "curves.csv", "manifest.json"):
            assert (out / name).is_file()
        transcript = pd.read_csv(out / "transcript.csv")
        assert len(transcript) == 1000
        assert (transcript["y_2"] == 1.0).all()
        manifest = json.loads((out / "manifest.json").read_text())
        assert len(manifest["inputs"]) == 2
        assert manifest["seed"] == 1

    def test_sim_run_protocol_metrics(self, capsys, configs_dir, tmp_path):
        code, payload = _run(
            capsys, "sim", "run", str(configs_dir / "protocol_cooperative.yaml"), "--out", str(tmp_path / "p")
        )

        assert code == 0
        assert payload["protocol_linf_gap"] <= payload["protocol_bound"]
        assert payload["protocol_target"][1] == "1/3"

    def test_missing_config(self, capsys, tmp_path):
        code, payload = _run(capsys, "sim", "run", str(tmp_path / "missing.yaml"), "--out", str(tmp_path / "o"))

        assert code == 1
        assert payload["error"] == "ParseError"

    def test_report_bundle(self, capsys, games_dir, tmp_path):
        # Act
        code, payload = _run(
            capsys, "report", "bundle", str(games_dir), "--out", str(tmp_path / "bundle"), "--tag", "invalid"
        )

        # Assert
        assert code == 0
        assert payload["games"] == 2
        index = json.loads((tmp_path / "bundle" / "index.json").read_text())
        assert all(not entry["valid"] and not entry["expect_valid"] for entry in index)
        assert (tmp_path / "bundle" / "duplicate_column" / "validation.json").is_file()
        assert (tmp_path / "bundle" / "manifest.json").is_file()

    def test_report_bundle_2x2(self, capsys, games_dir, tmp_path):
        code, _ = _run(capsys, "report", "bundle", str(games_dir), "--out", str(tmp_path / "b"), "--tag", "2x2")

        index = json.loads((tmp_path / "b" / "index.json").read_text())
        assert code == 0
        assert len(index) == 5
        for entry in index:
            assert entry["verdicts"]["M_NR"]["reason"] in {
                "min_face_matches_nsr", "min_face_strictly_larger",
            }
            assert (tmp_path / "b" / entry["game"] / "menu_M_NSR.json").is_file()
