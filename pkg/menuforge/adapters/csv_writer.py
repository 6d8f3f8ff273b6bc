"""
CSV Writers

Transcripts and plot-ready curves are written as flat CSV tables through
pandas.
"""

import logging
from pathlib import Path
from typing import Dict, Sequence

import numpy as np
import pandas as pd

from menuforge.domain.simulation.v1 import Transcript


logger = logging.getLogger(__name__)


def transcript_frame(transcript: Transcript, regret: np.ndarray, swap_regret: np.ndarray) -> pd.DataFrame:
    """Columns t, x_1..x_m, y_1..y_n, regret_prefix, swap_regret_prefix (t is 1-based)"""
    X, Y = transcript.optimizer_mixes, transcript.learner_mixes
    frame = pd.DataFrame({"t": np.arange(1, transcript.T + 1)})
    for i in range(X.shape[1]):
        frame[f"x_{i + 1}"] = X[:, i]
    for j in range(Y.shape[1]):
        frame[f"y_{j + 1}"] = Y[:, j]
    frame["regret_prefix"] = regret
    frame["swap_regret_prefix"] = swap_regret
    return frame


def write_transcript(path, transcript: Transcript, regret: np.ndarray, swap_regret: np.ndarray) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    transcript_frame(transcript, regret, swap_regret).to_csv(path, index=False)
    logger.info(f"Wrote transcript {path}", extra={"T": transcript.T})
    return path


def write_curves(path, rows: Sequence[Dict[str, float]]) -> Path:
    """One row per checkpoint; columns are whatever the rows carry"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(list(rows)).to_csv(path, index=False)
    return path
