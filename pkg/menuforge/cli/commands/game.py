"""
Game Commands

`game validate` checks the genericity assumptions of a game file.

Exit codes: 0 valid, 2 assumption violation, 1 unreadable or malformed file.
"""

import argparse
import logging

from menuforge.adapters.game_adapter import load_game, validation_report_to_dict
from menuforge.cli.common import ArtifactSink, emit
from menuforge.services.game_model import validate


logger = logging.getLogger(__name__)


def cmd_validate(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    report = validate(game)
    payload = validation_report_to_dict(report)

    sink = ArtifactSink(args.out, command=args.command_line, inputs=[args.game])
    sink.write_json(f"{game.name}.validation.json", payload)
    sink.close()
    emit(payload)

    if not report.valid:
        logger.warning(f"Game {game.name} violates its assumptions", extra={"violations": len(report.violations)})
        return 2
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("game", help="Game files")
    commands = parser.add_subparsers(dest="action", required=True)

    validate_parser = commands.add_parser("validate", help="Check genericity assumptions")
    validate_parser.add_argument("game", help="Game JSON file")
    validate_parser.add_argument("--out", help="Report file, or directory for report and manifest")
    validate_parser.set_defaults(handler=cmd_validate)
