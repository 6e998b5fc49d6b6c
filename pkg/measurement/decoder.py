import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from measurement.sampler import ShotResult

logger = logging.getLogger(__name__)


def correct(raw: float) -> float:
    """
    Invert |c1|^2 = sin^2(pi f / 2): f = (2/pi) arcsin(sqrt(raw)). The argument is clamped to
    [0, 1], so 0 and 1 map exactly onto themselves.
    """
    x = math.sqrt(min(max(raw, 0.0), 1.0))
    return min(2 * math.asin(x) / math.pi, 1.0)


@dataclass(frozen = True)
class DecodedFrequency:
    """
    Frequency estimate from one batch of shots.

    Args:
        raw: Empirical |c1|^2, i.e. N1/N.
        corrected: Decoded back-event frequency, correct(raw).
        raw_front: Empirical |c0|^2, i.e. N0/N.
    """
    raw: float
    corrected: float
    raw_front: float

    @property
    def corrected_front(self) -> float:
        """
        Decoded front-event frequency. Equals 1 - corrected.
        """
        return correct(self.raw_front)


@dataclass(frozen = True)
class RunStatistics:
    """
    Summary of n repetitions of the same experiment.

    Args:
        mean_raw: Mean of the raw frequencies.
        std_raw: Sample standard deviation (n - 1 denominator) of the raw frequencies.
        mean_corrected: Mean of the corrected frequencies.
        std_corrected: Sample standard deviation of the corrected frequencies.
        eps: Decoding error of the mean corrected frequency.
        eps_raw: |true f1 - mean raw|.
        n_reps: Number of repetitions n.
        eps_per_rep: Decoding error of each repetition.
    """
    mean_raw: float
    std_raw: float
    mean_corrected: float
    std_corrected: float
    eps: float
    eps_raw: float
    n_reps: int
    eps_per_rep: tuple[float, ...] = field(default = (), repr = False)


def decode(shots: ShotResult) -> DecodedFrequency:
    """
    Turn counts into the raw and arcsin-corrected back-event frequency.
    """
    raw = shots.n1 / shots.n_shots
    return DecodedFrequency(raw, correct(raw), shots.n0 / shots.n_shots)

def decoding_error(true_f1: float, decoded: DecodedFrequency) -> float:
    """
    Absolute difference between the true and the decoded back-event frequency.
    """
    if not 0 <= true_f1 <= 1:
        raise ValueError(f'True frequency must lie in [0, 1], got {true_f1}')
    return abs(true_f1 - decoded.corrected)

def _mean_std(values: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(values))
    std = float(np.std(values, ddof = 1)) if len(values) > 1 else 0.0
    return mean, std

def aggregate(runs: Sequence[DecodedFrequency], true_f1: float) -> RunStatistics:
    """
    Aggregate repeated decodings of one window.

    Args:
        runs: One decoded frequency per repetition. Must not be empty.
        true_f1: The window's actual back-event frequency.

    Returns:
        Means, sample standard deviations and errors.
    """
    if not runs:
        raise ValueError('Cannot aggregate an empty list of runs')

    raw = np.array([r.raw for r in runs])
    corrected = np.array([r.corrected for r in runs])
    mean_raw, std_raw = _mean_std(raw)
    mean_corrected, std_corrected = _mean_std(corrected)

    return RunStatistics(
        mean_raw = mean_raw,
        std_raw = std_raw,
        mean_corrected = mean_corrected,
        std_corrected = std_corrected,
        eps = abs(true_f1 - mean_corrected),
        eps_raw = abs(true_f1 - mean_raw),
        n_reps = len(runs),
        eps_per_rep = tuple(decoding_error(true_f1, r) for r in runs),
    )
