"""
Simulation Command

`sim run <config> --out <dir>` plays the configured learner against the
configured optimizer and writes:

- transcript.csv: per-round mixes with prefix regret and swap regret
- metrics.json:   SimMetrics summary
- curves.csv:     per-checkpoint averages and distances to the configured menus
- manifest.json
"""

import argparse
import logging
from pathlib import Path
from typing import Dict, List

import numpy as np

from menuforge.adapters.csv_writer import write_curves, write_transcript
from menuforge.adapters.rational_codec import encode_vector
from menuforge.adapters.run_config import ConfigResolver, ResolvedRun, resolve_run
from menuforge.cli.common import ArtifactSink, emit
from menuforge.domain.simulation.v1 import LearnerKind, OptimizerKind
from menuforge.schemas.reports import SimMetrics
from menuforge.services import simulator


logger = logging.getLogger(__name__)


def curve_rows(resolved: ResolvedRun, transcript, regret: np.ndarray, swap: np.ndarray) -> List[Dict[str, float]]:
    T = transcript.T
    checkpoints = resolved.config.checkpoints or simulator.default_checkpoints(T)
    csps = simulator.prefix_csps(transcript, checkpoints)
    rows = []
    for c, csp in zip(checkpoints, csps):
        row: Dict[str, float] = {"t": c, "regret": regret[c - 1] / c, "swap_regret": swap[c - 1] / c}
        for menu in resolved.menus:
            row[f"distance_{menu.label}"] = simulator.distance_to_menu([csp], menu)
        rows.append(row)
    return rows


def simulate(resolved: ResolvedRun) -> tuple:
    """Run the configured game; returns (transcript, regret, swap, metrics)"""
    config, game = resolved.config, resolved.game
    transcript = simulator.run(game, resolved.learner, resolved.optimizer, config.T, config.seed)
    regret, swap = simulator.regret_curves(game, transcript)
    empirical = simulator.empirical_csp(transcript)
    u_L = np.array([float(v) for v in game.flat_u_L])

    metrics = SimMetrics(
        game=game.name,
        learner=resolved.learner.kind.value,
        optimizer=resolved.optimizer.kind.value,
        T=config.T,
        seed=config.seed,
        empirical_csp=[float(v) for v in empirical.values],
        learner_utility=float(empirical.values @ u_L),
        regret=float(regret[-1]) / config.T,
        swap_regret=float(swap[-1]) / config.T,
        mean_based_violations=simulator.mean_based_audit(game, transcript, gamma=config.gamma),
        distances={menu.label: simulator.distance_to_menu([empirical], menu) for menu in resolved.menus},
    )
    if resolved.learner.kind == LearnerKind.PROTOCOL and resolved.optimizer.kind == OptimizerKind.COOPERATIVE:
        gap = simulator.protocol_gap(game, resolved.learner, resolved.optimizer, transcript)
        metrics.protocol_target = encode_vector(gap.target)
        metrics.protocol_linf_gap = gap.linf_gap
        metrics.protocol_bound = gap.bound
    return transcript, regret, swap, metrics


def cmd_run(args: argparse.Namespace) -> int:
    resolved = resolve_run(args.config)
    transcript, regret, swap, metrics = simulate(resolved)

    out = args.out if args.out.endswith("/") else args.out + "/"
    game_path = ConfigResolver(Path(args.config).parent).path(resolved.config.game)
    sink = ArtifactSink(out, command=args.command_line, inputs=[args.config, str(game_path)], seed=resolved.config.seed)
    sink.register(write_transcript(Path(out) / "transcript.csv", transcript, regret, swap))
    sink.write_json("metrics.json", metrics.model_dump())
    sink.register(write_curves(Path(out) / "curves.csv", curve_rows(resolved, transcript, regret, swap)))
    sink.close()

    emit(metrics.model_dump())
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("sim", help="Repeated-game simulation")
    commands = parser.add_subparsers(dest="action", required=True)

    run = commands.add_parser("run", help="Simulate a run config")
    run.add_argument("config", help="Run config YAML")
    run.add_argument("--out", required=True, help="Output directory")
    run.set_defaults(handler=cmd_run)
