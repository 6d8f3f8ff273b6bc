"""
Menu and Verdict File Adapter

Menus serialize as exact vertex lists (plus the halfspace system when the
menu came from constraints, and trajectory witnesses for mean-based menus).
Pareto results serialize with the same "p/q" convention.
"""

import logging
from typing import Any, Dict

from menuforge.adapters.game_adapter import PathLike, read_json, trajectory_to_dict, write_json
from menuforge.adapters.rational_codec import encode, encode_vector, parse_matrix
from menuforge.core.exceptions import ParseError
from menuforge.domain.games.v1 import Game
from menuforge.domain.menus.v1 import CheckReport, DominanceAudit, Menu, ParetoVerdict, SeparationWitness
from menuforge.geometry.models import HalfspaceSystem
from menuforge.geometry.polytope import convex_hull


logger = logging.getLogger(__name__)


def _halfspaces_to_dict(system: HalfspaceSystem) -> Dict[str, Any]:
    return {
        "rows": [{"normal": encode_vector(a), "offset": encode(b)} for a, b in system.rows],
        "equalities": [{"normal": encode_vector(a), "offset": encode(b)} for a, b in system.equalities],
    }


def menu_to_dict(menu: Menu) -> Dict[str, Any]:
    game = menu.game
    data: Dict[str, Any] = {
        "label": menu.label,
        "game": game.name,
        "m": game.m,
        "n": game.n,
        "vertices": [encode_vector(v) for v in menu.vertices],
    }
    if menu.polytope.halfspaces is not None:
        data["halfspaces"] = _halfspaces_to_dict(menu.polytope.halfspaces)
    if menu.witnesses:
        from menuforge.services.mean_based import witness_trajectory

        data["witnesses"] = [
            {
                "vertex": encode_vector(v),
                "fingerprint": menu.witnesses[v].fingerprint.label,
                "trajectory": trajectory_to_dict(witness_trajectory(menu.witnesses[v])),
            }
            for v in menu.vertices
            if v in menu.witnesses
        ]
    return data


def save_menu(path: PathLike, menu: Menu) -> None:
    write_json(path, menu_to_dict(menu))
    logger.info(f"Saved menu {menu.label}", extra={"path": str(path), "vertices": len(menu.vertices)})


def menu_from_dict(data: Dict[str, Any], game: Game) -> Menu:
    if not isinstance(data, dict) or "vertices" not in data:
        raise ParseError("A menu file needs a 'vertices' list")
    if (data.get("m"), data.get("n")) not in ((None, None), (game.m, game.n)):
        raise ParseError(f"Menu is for a {data.get('m')}x{data.get('n')} game, not {game.m}x{game.n}")
    vertices = parse_matrix(data["vertices"])
    polytope = convex_hull(vertices)
    return Menu(polytope=polytope, game=game, label=data.get("label", ""))


def load_menu(path: PathLike, game: Game) -> Menu:
    try:
        return menu_from_dict(read_json(path), game)
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"Invalid menu in {path}: {e}") from e


# ============================================================================
# REPORTS
# ============================================================================

def check_report_to_dict(report: CheckReport) -> Dict[str, Any]:
    return {
        "menu": report.menu_label,
        "passed": report.passed,
        "grid_denominator": report.grid_denominator,
        "points_checked": report.points_checked,
        "failing_x": None if report.failing_x is None else encode_vector(report.failing_x),
    }


def verdict_to_dict(verdict: ParetoVerdict) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "menu": verdict.menu_label,
        "optimal": verdict.optimal,
        "reason": verdict.reason.value,
    }
    if verdict.witness_vertex is not None:
        data["witness_vertex"] = encode_vector(verdict.witness_vertex)
    if verdict.dominating_menu is not None:
        data["dominating_menu"] = menu_to_dict(verdict.dominating_menu)
    return data


def separation_to_dict(witness: SeparationWitness) -> Dict[str, Any]:
    return {
        "uO": encode_vector(witness.uO),
        "vL_winner": encode(witness.vL_winner),
        "vL_loser": encode(witness.vL_loser),
        "direction": encode_vector(witness.direction),
        "circle_parameter": None if witness.circle_parameter is None else encode(witness.circle_parameter),
        "mirrored": witness.mirrored,
        "separated_vertex": encode_vector(witness.separated_vertex),
    }


def audit_to_dict(audit: DominanceAudit) -> Dict[str, Any]:
    return {
        "candidate": audit.candidate_label,
        "baseline": audit.baseline_label,
        "samples": audit.samples,
        "wins": audit.wins,
        "ties": audit.ties,
        "losses": audit.losses,
        "dominates": audit.dominates,
        "seed": audit.seed,
        "first_loss": None if audit.first_loss is None else encode_vector(audit.first_loss),
    }
