"""
Shared fixtures: corpus games, their menus, and the slow marker
"""

from fractions import Fraction
from pathlib import Path

import pytest

from menuforge.adapters.game_adapter import load_corpus, load_game
from menuforge.domain.games.v1 import Game
from menuforge.domain.trajectories.v1 import Segment, Trajectory


REPO_ROOT = Path(__file__).resolve().parent.parent
GAMES_DIR = REPO_ROOT / "games"
CONFIGS_DIR = REPO_ROOT / "configs" / "sim"

F = Fraction


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long simulations (still run by default)")


@pytest.fixture(scope="session")
def games_dir() -> Path:
    return GAMES_DIR


@pytest.fixture(scope="session")
def configs_dir() -> Path:
    return CONFIGS_DIR


@pytest.fixture(scope="session")
def eq_game() -> Game:
    """2x3 game whose mean-based menu is Pareto-dominated (rows N, Y; columns A, B, C)"""
    return load_game(GAMES_DIR / "mb_counterexample.json")


@pytest.fixture(scope="session")
def rps() -> Game:
    return load_game(GAMES_DIR / "rps.json")


@pytest.fixture(scope="session")
def two_by_two() -> Game:
    """Optimizer A, B; learner P, Q"""
    return load_game(GAMES_DIR / "fixed_learner_2x2.json")


@pytest.fixture(scope="session")
def trivial_game() -> Game:
    return Game.build([[F(1, 2)]], name="trivial")


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(GAMES_DIR)


@pytest.fixture(scope="session")
def valid_corpus():
    return load_corpus(GAMES_DIR, tag="valid")


@pytest.fixture(scope="session")
def perturbed_games():
    """The five perturbed counterexample games of the corpus, p1 to p5"""
    games = load_corpus(GAMES_DIR, tag="perturbed")
    return [games[name] for name in sorted(games)]


@pytest.fixture(scope="session")
def tau_star() -> Trajectory:
    """Mix (1/3, 2/3) against C for 1/2, then N against B for 1/2"""
    return Trajectory(
        segments=(
            Segment(x=(F(1, 3), F(2, 3)), t=F(1, 2), b=2),
            Segment(x=(F(1), F(0)), t=F(1, 2), b=1),
        )
    )


@pytest.fixture(scope="session")
def tau_star_profile():
    """1/6 N(x)C + 1/3 Y(x)C + 1/2 N(x)B, flattened row-major"""
    return (F(0), F(1, 2), F(1, 6), F(0), F(0), F(1, 3))


@pytest.fixture(scope="session")
def eq_menus(eq_game):
    from menuforge.services.mean_based import build_mb_menu
    from menuforge.services.menus import build_nr_menu, build_nsr_menu

    return {
        "nr": build_nr_menu(eq_game),
        "nsr": build_nsr_menu(eq_game),
        "mb": build_mb_menu(eq_game, jobs=1),
    }


@pytest.fixture(scope="session")
def rps_menus(rps):
    from menuforge.services.menus import build_nr_menu, build_nsr_menu

    return {"nr": build_nr_menu(rps), "nsr": build_nsr_menu(rps)}
