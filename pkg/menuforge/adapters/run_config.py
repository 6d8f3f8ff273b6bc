"""
Simulation Run Configuration

YAML run files name a game, a horizon, a seed and learner/optimizer specs.
Menus, vectors and trajectories inside the specs may be given by reference
and are resolved here:

- menus: "nr", "nsr", "mb", "fixed:<label or index>", "dominating:<menu>",
  a menu JSON path, or
  {"extend": <menu>, "points": [...], "trajectories": [...]}
- vectors (uO, target): a list of rationals, "u_L", "-u_L", "u_O", "-u_O",
  or {"profile": <trajectory>}
- trajectories: an inline object or a trajectory JSON path
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from menuforge.adapters.game_adapter import load_game, load_trajectory, trajectory_from_dict
from menuforge.adapters.menu_adapter import load_menu
from menuforge.adapters.rational_codec import parse, parse_vector
from menuforge.core.config import settings
from menuforge.core.exceptions import ParseError, PreconditionError
from menuforge.domain.games.v1 import Game
from menuforge.domain.menus.v1 import Menu
from menuforge.domain.simulation.v1 import GammaRate, LearnerKind, LearnerSpec, OptimizerSpec, ScheduleRun
from menuforge.domain.trajectories.v1 import Trajectory
from menuforge.geometry.rational import Vector, neg


logger = logging.getLogger(__name__)


class RunConfig(BaseModel):
    game: str = Field(..., description="Game JSON path")
    T: int = Field(..., ge=1, description="Horizon")
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    learner: Dict[str, Any]
    optimizer: Dict[str, Any]
    checkpoints: List[int] = Field(default_factory=list, description="Rounds at which distances are recorded")
    menus: List[Any] = Field(default_factory=list, description="Menus to measure the empirical CSP against")
    gamma: Optional[GammaRate] = None


class ResolvedRun(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: RunConfig
    game: Game
    learner: LearnerSpec
    optimizer: OptimizerSpec
    menus: List[Menu]


class ConfigResolver:
    """Resolves references relative to the working directory, then the config's directory"""

    def __init__(self, base_dir: Path, game: Optional[Game] = None):
        self.base_dir = base_dir
        self.game = game
        self._named: Dict[str, Menu] = {}

    def path(self, value: str) -> Path:
        candidate = Path(value)
        if candidate.exists():
            return candidate
        return self.base_dir / value

    # ------------------------------------------------------------------
    # Menus
    # ------------------------------------------------------------------

    def menu(self, ref: Any) -> Menu:
        from menuforge.services import mean_based, menus

        game = self.game
        if isinstance(ref, dict):
            if "extend" not in ref:
                raise ParseError(f"Menu reference object needs 'extend': {ref}")
            base = self.menu(ref["extend"])
            points = [parse_vector(p) for p in ref.get("points", [])]
            points += [mean_based.profile(game, self.trajectory(t)).probs for t in ref.get("trajectories", [])]
            return menus.extend_menu(base, points, label=ref.get("label"))
        if not isinstance(ref, str):
            raise ParseError(f"Unrecognized menu reference {ref!r}")
        if ref in self._named:
            return self._named[ref]
        if ref == "nr":
            menu = menus.build_nr_menu(game)
        elif ref == "nsr":
            menu = menus.build_nsr_menu(game)
        elif ref == "mb":
            menu = mean_based.build_mb_menu(game)
        elif ref.startswith("fixed:"):
            menu = menus.fixed_action_menu(game, self.learner_action(ref.split(":", 1)[1]))
        elif ref.startswith("dominating:"):
            menu = self._dominating(ref.split(":", 1)[1])
        else:
            menu = load_menu(self.path(ref), game)
        self._named[ref] = menu
        return menu

    def _dominating(self, ref: str) -> Menu:
        from menuforge.services.pareto import check_pareto_optimal

        verdict = check_pareto_optimal(self.menu(ref), self.game)
        if verdict.dominating_menu is None:
            raise PreconditionError(f"{ref} is not dominated by a constructed menu ({verdict.reason.value})")
        return verdict.dominating_menu

    def learner_action(self, token: Any) -> int:
        labels = list(self.game.learner_actions or ())
        if isinstance(token, str) and token in labels:
            return labels.index(token)
        try:
            return int(token)
        except (TypeError, ValueError) as e:
            raise ParseError(f"Unknown learner action {token!r}") from e

    # ------------------------------------------------------------------
    # Vectors and trajectories
    # ------------------------------------------------------------------

    def trajectory(self, ref: Any) -> Trajectory:
        if isinstance(ref, str):
            return load_trajectory(self.path(ref))
        return trajectory_from_dict(ref)

    def vector(self, ref: Any) -> Vector:
        game = self.game
        named = {"u_L": game.flat_u_L, "-u_L": neg(game.flat_u_L)}
        if game.u_O is not None:
            named.update({"u_O": game.flat_u_O, "-u_O": neg(game.flat_u_O)})
        if isinstance(ref, str):
            if ref not in named:
                raise ParseError(f"Unknown vector reference {ref!r}")
            return named[ref]
        if isinstance(ref, dict) and "profile" in ref:
            from menuforge.services.mean_based import profile

            return profile(game, self.trajectory(ref["profile"])).probs
        return parse_vector(ref)

    # ------------------------------------------------------------------
    # Specs
    # ------------------------------------------------------------------

    def learner(self, data: Dict[str, Any], T: int) -> LearnerSpec:
        data = dict(data)
        if "target_menu" in data:
            data["target_menu"] = self.menu(data["target_menu"])
        if "base" in data:
            data["base"] = self.learner(data["base"], T)
        if "mix" in data:
            data["mix"] = parse_vector(data["mix"])
        if "action" in data:
            data["action"] = self.learner_action(data["action"])
        if "actions" in data:
            data["actions"] = [self.learner_action(a) for a in data["actions"]]
        if data.get("kind") == "ftrl" and "eta" not in data:
            from menuforge.domain.simulation.v1 import EtaSchedule, Regularizer

            data["eta"] = EtaSchedule.default_for(Regularizer(data.get("regularizer", "negentropy")))
        try:
            spec = LearnerSpec(**data)
        except ValidationError as e:
            raise ParseError(f"Invalid learner spec: {e}") from e
        if spec.kind == LearnerKind.PROTOCOL:
            from menuforge.services.learners import protocol_learner

            spec = protocol_learner(spec.target_menu, spec.base, T)
        return spec

    def optimizer(self, data: Dict[str, Any]) -> OptimizerSpec:
        data = dict(data)
        if "x" in data:
            data["x"] = parse_vector(data["x"])
        if "rounds" in data:
            data["rounds"] = [ScheduleRun(x=parse_vector(r["x"]), rounds=int(r["rounds"])) for r in data["rounds"]]
        if "trajectory" in data:
            data["trajectory"] = self.trajectory(data["trajectory"])
        if "epsilon" in data:
            data["epsilon"] = parse(data["epsilon"])
        for key in ("uO", "target"):
            if key in data:
                data[key] = self.vector(data[key])
        try:
            return OptimizerSpec(**data)
        except ValidationError as e:
            raise ParseError(f"Invalid optimizer spec: {e}") from e


def load_run_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle)
        return RunConfig(**data)
    except FileNotFoundError as e:
        raise ParseError(f"Config not found: {path}") from e
    except (yaml.YAMLError, TypeError, ValidationError) as e:
        raise ParseError(f"Malformed run config {path}: {e}") from e


def resolve_run(path) -> ResolvedRun:
    config = load_run_config(path)
    resolver = ConfigResolver(Path(path).parent)
    game = load_game(resolver.path(config.game))
    resolver.game = game
    try:
        learner = resolver.learner(config.learner, config.T)
        optimizer = resolver.optimizer(config.optimizer)
    except (KeyError, TypeError) as e:
        raise ParseError(f"Incomplete spec in {path}: {e}") from e
    menus = [resolver.menu(ref) for ref in config.menus]
    logger.info(f"Resolved run config {path}", extra={"game": game.name, "T": config.T, "seed": config.seed})
    return ResolvedRun(config=config, game=game, learner=learner, optimizer=optimizer, menus=menus)
