"""
Report Command

`report bundle <games_dir> --out <dir>` runs the full pipeline over every
registry game: validation, the no-regret and no-swap-regret menus, the
mean-based menu for 2x3 games, and Pareto verdicts. Each game gets its own
subdirectory; index.json summarizes the run and manifest.json lists every file.
"""

import argparse
import logging
from pathlib import Path
from typing import Any, Dict

from menuforge.adapters.game_adapter import load_game, load_registry, validation_report_to_dict
from menuforge.adapters.menu_adapter import menu_to_dict, verdict_to_dict
from menuforge.cli.common import ArtifactSink, emit
from menuforge.core.exceptions import MenuforgeError
from menuforge.domain.games.v1 import Game
from menuforge.services.game_model import validate
from menuforge.services.mean_based import build_mb_menu
from menuforge.services.menus import build_nr_menu, build_nsr_menu
from menuforge.services.pareto import check_pareto_optimal


logger = logging.getLogger(__name__)


def bundle_game(game: Game, sink: ArtifactSink) -> Dict[str, Any]:
    """Artifacts of one game; returns its index entry"""
    report = validate(game)
    sink.write_json(f"{game.name}/validation.json", validation_report_to_dict(report))
    entry: Dict[str, Any] = {"game": game.name, "m": game.m, "n": game.n, "valid": report.valid}
    if not report.valid:
        return entry

    nr, nsr = build_nr_menu(game), build_nsr_menu(game)
    menus = [nr, nsr]
    if (game.m, game.n) == (2, 3):
        try:
            menus.append(build_mb_menu(game))
        except MenuforgeError as e:
            logger.warning(f"No mean-based menu for {game.name}: {e}")
            entry["mb_error"] = f"{type(e).__name__}: {e}"

    verdicts = {}
    for menu in menus:
        sink.write_json(f"{game.name}/menu_{menu.label}.json", menu_to_dict(menu))
        entry[f"vertices_{menu.label}"] = len(menu.vertices)
        if menu is nsr:
            continue
        verdict = check_pareto_optimal(menu, game, nr=nr, nsr=nsr)
        sink.write_json(f"{game.name}/verdict_{menu.label}.json", verdict_to_dict(verdict))
        verdicts[menu.label] = {"optimal": verdict.optimal, "reason": verdict.reason.value}
    entry["verdicts"] = verdicts
    return entry


def cmd_bundle(args: argparse.Namespace) -> int:
    games_dir = Path(args.games_dir)
    registry = load_registry(games_dir)
    out = args.out if args.out.endswith("/") else args.out + "/"
    inputs = [str(games_dir / "registry.yaml")] + [str(games_dir / e.file) for e in registry.games]
    sink = ArtifactSink(out, command=args.command_line, inputs=inputs)

    index = []
    for entry in registry.games:
        if args.tag and args.tag not in entry.tags:
            continue
        game = load_game(games_dir / entry.file)
        logger.info(f"Bundling {game.name}", extra={"m": game.m, "n": game.n})
        summary = bundle_game(game, sink)
        summary["expect_valid"] = entry.expect_valid
        index.append(summary)

    sink.write_json("index.json", index)
    sink.close()
    emit({"games": len(index), "out": out})
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="Artifact bundles")
    commands = parser.add_subparsers(dest="action", required=True)

    bundle = commands.add_parser("bundle", help="Validate, build and judge every corpus game")
    bundle.add_argument("games_dir", help="Directory holding registry.yaml")
    bundle.add_argument("--out", required=True, help="Output directory")
    bundle.add_argument("--tag", help="Restrict to registry games with this tag")
    bundle.set_defaults(handler=cmd_bundle)
