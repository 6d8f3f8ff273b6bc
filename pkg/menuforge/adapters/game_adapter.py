"""
Game and Trajectory File Adapter

Maps corpus JSON files onto the domain models and back.

CRITICAL RESPONSIBILITIES:
1. Parse exact payoffs ("p/q" strings or integers) into Game models
2. Turn malformed files into ParseError, never into half-built models
3. Read the corpus registry (YAML) that lists games and their expected verdicts
4. Round-trip trajectories in the documented JSON layout
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from pydantic import BaseModel, Field, ValidationError

from menuforge.adapters.rational_codec import encode, encode_matrix, encode_vector, parse, parse_matrix, parse_vector
from menuforge.core.exceptions import InputError, ParseError
from menuforge.domain.games.v1 import Game, ValidationReport
from menuforge.domain.trajectories.v1 import Segment, Trajectory, TrajectoryKind


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def read_json(path: PathLike) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as e:
        raise ParseError(f"File not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"Malformed JSON in {path}: {e}") from e


def write_json(path: PathLike, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")
    logger.debug(f"Wrote {path}")
    return path


# ============================================================================
# GAMES
# ============================================================================

def game_from_dict(data: Dict[str, Any], default_name: Optional[str] = None) -> Game:
    if not isinstance(data, dict):
        raise ParseError("A game file must hold a JSON object")
    if "u_L" not in data:
        raise ParseError("A game needs a learner payoff matrix 'u_L'")
    try:
        u_L = parse_matrix(data["u_L"])
        u_O = parse_matrix(data["u_O"]) if data.get("u_O") is not None else None
        declared = (data.get("m", len(u_L)), data.get("n", len(u_L[0]) if u_L else 0))
        if u_L and declared != (len(u_L), len(u_L[0])):
            raise ParseError(f"Declared shape {declared[0]}x{declared[1]} does not match u_L")
        return Game.build(
            u_L,
            u_O,
            name=data.get("name", default_name),
            optimizer_actions=data.get("optimizer_actions"),
            learner_actions=data.get("learner_actions"),
        )
    except InputError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(str(e)) from e


def load_game(path: PathLike) -> Game:
    game = game_from_dict(read_json(path), default_name=Path(path).stem)
    logger.info(f"Loaded game {game.name}", extra={"path": str(path), "m": game.m, "n": game.n})
    return game


def game_to_dict(game: Game) -> Dict[str, Any]:
    data: Dict[str, Any] = {"name": game.name, "m": game.m, "n": game.n, "u_L": encode_matrix(game.u_L)}
    if game.u_O is not None:
        data["u_O"] = encode_matrix(game.u_O)
    if game.optimizer_actions:
        data["optimizer_actions"] = list(game.optimizer_actions)
    if game.learner_actions:
        data["learner_actions"] = list(game.learner_actions)
    return data


def save_game(path: PathLike, game: Game) -> Path:
    return write_json(path, game_to_dict(game))


def validation_report_to_dict(report: ValidationReport) -> Dict[str, Any]:
    return {
        "game": report.game_name,
        "valid": report.valid,
        "phi_plus": [list(pair) for pair in report.phi_plus],
        "phi_plus_unique": report.phi_plus_unique,
        "phi_plus_value": encode(report.phi_plus_value),
        "actions": [
            {
                "action": a.action,
                "label": a.label,
                "class": a.action_class.value,
                "margin": encode(a.margin),
                "witness_x": encode_vector(a.witness_x),
            }
            for a in report.actions
        ],
        "violations": list(report.violations),
    }


# ============================================================================
# REGISTRY
# ============================================================================

class RegistryEntry(BaseModel):
    """One corpus game and what is known about it"""

    file: str
    tags: List[str] = Field(default_factory=list)
    expect_valid: bool = True
    description: Optional[str] = None


class GameRegistry(BaseModel):
    version: str = "1"
    games: List[RegistryEntry]


def load_registry(games_dir: PathLike) -> GameRegistry:
    path = Path(games_dir) / "registry.yaml"
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle)
        return GameRegistry(**data)
    except FileNotFoundError as e:
        raise ParseError(f"No registry at {path}") from e
    except (yaml.YAMLError, TypeError, ValidationError) as e:
        raise ParseError(f"Malformed registry {path}: {e}") from e


def load_corpus(games_dir: PathLike, tag: Optional[str] = None) -> Dict[str, Game]:
    """Games of the registry keyed by name, optionally restricted to a tag"""
    registry = load_registry(games_dir)
    games = {}
    for entry in registry.games:
        if tag is not None and tag not in entry.tags:
            continue
        game = load_game(Path(games_dir) / entry.file)
        games[game.name] = game
    return games


# ============================================================================
# TRAJECTORIES
# ============================================================================

def trajectory_from_dict(data: Dict[str, Any]) -> Trajectory:
    if not isinstance(data, dict) or not isinstance(data.get("segments"), list):
        raise ParseError("A trajectory needs a 'segments' list")
    try:
        segments = [
            Segment(x=parse_vector(s["x"]), t=parse(s["t"]), b=int(s["b"])) for s in data["segments"]
        ]
        kind = TrajectoryKind(data.get("kind", "plain"))
        X0 = parse_vector(data["X0"]) if data.get("X0") is not None else None
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"Malformed trajectory segment: {e}") from e
    return Trajectory.build(segments, kind=kind, X0=X0)


def trajectory_to_dict(trajectory: Trajectory) -> Dict[str, Any]:
    data: Dict[str, Any] = {"kind": trajectory.kind.value}
    if trajectory.X0 is not None:
        data["X0"] = encode_vector(trajectory.X0)
    data["segments"] = [
        {"x": encode_vector(s.x), "t": encode(s.t), "b": s.b} for s in trajectory.segments
    ]
    return data


def load_trajectory(path: PathLike) -> Trajectory:
    return trajectory_from_dict(read_json(path))
