"""
Pareto Commands

check   - exact Pareto-optimality verdict of a no-regret menu
falsify - search for an optimizer payoff on which the winner beats the loser
audit   - sampled comparison of two menus over random optimizer payoffs

An exhausted falsify sweep raises SearchFailureError, which exits with 4.
"""

import argparse
import logging
from pathlib import Path

from menuforge.adapters.game_adapter import load_game
from menuforge.adapters.menu_adapter import audit_to_dict, separation_to_dict, verdict_to_dict
from menuforge.adapters.run_config import ConfigResolver
from menuforge.cli.common import ArtifactSink, emit
from menuforge.core.config import settings
from menuforge.services.pareto import audit_dominance, check_pareto_optimal, find_separating_uO, sample_directions


logger = logging.getLogger(__name__)


def cmd_check(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    resolver = ConfigResolver(Path.cwd(), game)
    verdict = check_pareto_optimal(resolver.menu(args.menu), game, nr=resolver.menu("nr"), nsr=resolver.menu("nsr"))
    payload = verdict_to_dict(verdict)

    sink = ArtifactSink(args.out, command=args.command_line, inputs=[args.game, args.menu])
    sink.write_json("verdict.json", payload)
    sink.close()
    emit(payload)
    return 0


def cmd_falsify(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    resolver = ConfigResolver(Path.cwd(), game)
    winner, loser = resolver.menu(args.winner), resolver.menu(args.loser)
    witness = find_separating_uO(winner, loser, game, sweep_budget=args.budget)
    payload = {"winner": winner.label, "loser": loser.label, **separation_to_dict(witness)}

    sink = ArtifactSink(args.out, command=args.command_line, inputs=[args.game, args.winner, args.loser])
    sink.write_json("separation.json", payload)
    sink.close()
    emit(payload)
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    resolver = ConfigResolver(Path.cwd(), game)
    candidate, baseline = resolver.menu(args.candidate), resolver.menu(args.baseline)
    samples = sample_directions(game.dim, args.samples, args.seed)
    audit = audit_dominance(candidate, baseline, samples, seed=args.seed)
    payload = audit_to_dict(audit)

    sink = ArtifactSink(
        args.out, command=args.command_line, inputs=[args.game, args.candidate, args.baseline], seed=args.seed
    )
    sink.write_json("audit.json", payload)
    sink.close()
    emit(payload)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("pareto", help="Pareto-optimality of menus")
    commands = parser.add_subparsers(dest="action", required=True)

    check = commands.add_parser("check", help="Exact Pareto-optimality verdict")
    check.add_argument("game", help="Game JSON file")
    check.add_argument("menu", help="Menu reference or file")
    check.add_argument("--out", help="Verdict file, or directory for verdict and manifest")
    check.set_defaults(handler=cmd_check)

    falsify = commands.add_parser("falsify", help="Find u_O separating two menus")
    falsify.add_argument("game", help="Game JSON file")
    falsify.add_argument("--winner", required=True, help="Menu expected to do better")
    falsify.add_argument("--loser", required=True, help="Menu expected to do worse")
    falsify.add_argument("--budget", type=int, default=None, help="Circle points tried per direction")
    falsify.add_argument("--out", help="Witness file, or directory for witness and manifest")
    falsify.set_defaults(handler=cmd_falsify)

    audit = commands.add_parser("audit", help="Sampled dominance audit")
    audit.add_argument("game", help="Game JSON file")
    audit.add_argument("--candidate", required=True, help="Menu expected to dominate")
    audit.add_argument("--baseline", required=True, help="Menu compared against")
    audit.add_argument("--samples", type=int, default=settings.AUDIT_SAMPLES)
    audit.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    audit.add_argument("--out", help="Audit file, or directory for audit and manifest")
    audit.set_defaults(handler=cmd_audit)
