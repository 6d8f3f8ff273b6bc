"""
Menu Commands

`menu build` writes exact vertex lists, `menu check-valid` runs the grid
validity check, `menu compare` reports equality and Hausdorff distance.

Menu arguments are references: nr, nsr, mb, fixed:<action>,
dominating:<menu> or a menu JSON path.
"""

import argparse
import logging
from pathlib import Path

from menuforge.adapters.game_adapter import load_game
from menuforge.adapters.menu_adapter import check_report_to_dict, menu_to_dict
from menuforge.adapters.run_config import ConfigResolver
from menuforge.cli.common import ArtifactSink, emit
from menuforge.core.exceptions import InputError
from menuforge.geometry.hausdorff import hausdorff_distance
from menuforge.geometry.polytope import polytopes_equal
from menuforge.services.game_model import require_valid
from menuforge.services.menus import is_valid_menu


logger = logging.getLogger(__name__)


BUILD_KINDS = ("nr", "nsr", "mb")


def file_stem(ref: str) -> str:
    name = Path(ref).stem if ref.endswith(".json") else ref
    return "menu_" + name.replace(":", "_").replace("/", "_")


def cmd_build(args: argparse.Namespace) -> int:
    kind = args.kind
    if kind not in BUILD_KINDS and not kind.startswith("fixed:"):
        raise InputError(f"Unknown menu kind {kind!r}; expected nr, nsr, mb or fixed:<action>")
    game = load_game(args.game)
    if kind == "mb":
        require_valid(game)

    menu = ConfigResolver(Path.cwd(), game).menu(kind)
    payload = menu_to_dict(menu)

    sink = ArtifactSink(args.out, command=args.command_line, inputs=[args.game])
    sink.write_json(f"{file_stem(kind)}.json", payload)
    sink.close()
    if not sink.active:
        emit(payload)
    else:
        emit({"menu": menu.label, "vertices": len(menu.vertices), "out": args.out})
    return 0


def cmd_check_valid(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    menu = ConfigResolver(Path.cwd(), game).menu(args.menu)
    payload = check_report_to_dict(is_valid_menu(menu, args.grid))

    sink = ArtifactSink(args.out, command=args.command_line, inputs=[args.game, args.menu])
    sink.write_json(f"{file_stem(args.menu)}.check.json", payload)
    sink.close()
    emit(payload)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    resolver = ConfigResolver(Path.cwd(), game)
    first, second = resolver.menu(args.first), resolver.menu(args.second)
    payload = {
        "first": first.label,
        "second": second.label,
        "equal": polytopes_equal(first.polytope, second.polytope),
        "hausdorff": hausdorff_distance(first.polytope, second.polytope),
    }
    emit(payload)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("menu", help="Build and inspect menus")
    commands = parser.add_subparsers(dest="action", required=True)

    build = commands.add_parser("build", help="Build a menu as an exact vertex list")
    build.add_argument("game", help="Game JSON file")
    build.add_argument("--kind", required=True, help="nr | nsr | mb | fixed:<action>")
    build.add_argument("--out", help="Menu file, or directory for menu and manifest")
    build.set_defaults(handler=cmd_build)

    check = commands.add_parser("check-valid", help="Grid check that every optimizer mix has a response")
    check.add_argument("game", help="Game JSON file")
    check.add_argument("menu", help="Menu reference or file")
    check.add_argument("--grid", type=int, default=10, help="Grid denominator on the optimizer simplex")
    check.add_argument("--out", help="Report file, or directory for report and manifest")
    check.set_defaults(handler=cmd_check_valid)

    compare = commands.add_parser("compare", help="Exact equality and Hausdorff distance of two menus")
    compare.add_argument("game", help="Game JSON file")
    compare.add_argument("first", help="Menu reference or file")
    compare.add_argument("second", help="Menu reference or file")
    compare.set_defaults(handler=cmd_compare)
