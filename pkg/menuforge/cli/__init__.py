"""
Command Tree

Each command module registers its own subcommands.
"""

import argparse

from menuforge import __version__
from menuforge.cli.commands import game, menu, pareto, report, sim


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="menuforge",
        description="Asymptotic menus of learning algorithms in bimatrix games",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--jobs", type=int, default=None, help="Parallel workers (default MENUFORGE_JOBS)")
    parser.add_argument("--log-level", default=None, help="Root log level (default MENUFORGE_LOG_LEVEL)")

    subparsers = parser.add_subparsers(dest="command", required=True)
    game.register(subparsers)
    menu.register(subparsers)
    pareto.register(subparsers)
    sim.register(subparsers)
    report.register(subparsers)

    return parser
