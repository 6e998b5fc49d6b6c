import logging
from dataclasses import dataclass

import numpy as np

from perception import Event, EventSequence

logger = logging.getLogger(__name__)

# Grid size of the scaled default plan for large windows.
SCALED_POINTS = 101


@dataclass(frozen = True)
class DatasetSpec:
    """
    Description of a sequence dataset: `points` windows of length tau whose back-event counts are
    spread evenly over [0, tau].

    Args:
        tau: Window length.
        points: Number of grid points, endpoints included.
        seed: Seed of the permutation generator.
    """
    tau: int
    points: int
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.tau, bool) or not isinstance(self.tau, (int, np.integer)) or self.tau < 1:
            raise ValueError(f'tau must be a positive integer, got {self.tau!r}')
        if isinstance(self.points, bool) or not isinstance(self.points, (int, np.integer)) or self.points < 2:
            raise ValueError(f'points must be an integer >= 2, got {self.points!r}')
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) \
                or not 0 <= self.seed < 2 ** 64:
            raise ValueError(f'Seed must lie in [0, 2^64), got {self.seed}')
        for name in ('tau', 'points', 'seed'):
            object.__setattr__(self, name, int(getattr(self, name)))

    def tau1_grid(self) -> list[int]:
        """
        Target back-event counts round(tau * i / (points - 1)), i = 0..points-1.
        """
        return [round(self.tau * i / (self.points - 1)) for i in range(self.points)]


def default_points(tau: int, full_grid: bool = False) -> int:
    """
    Grid size used when none is given: every integer count for small windows, otherwise the scaled
    grid unless the full one is requested.
    """
    return tau + 1 if full_grid else min(tau + 1, SCALED_POINTS)

def build_dataset(spec: DatasetSpec) -> list[EventSequence]:
    """
    Build one random window per grid point. Each window is a uniformly random permutation of tau1
    back events and tau - tau1 front events.

    Args:
        spec: Dataset description.

    Returns:
        Windows in grid order.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    dataset = []
    for tau1 in spec.tau1_grid():
        marks = np.zeros(spec.tau, dtype = bool)
        marks[:tau1] = True
        rng.shuffle(marks)
        dataset.append(EventSequence(tuple(Event.BACK if m else Event.FRONT for m in marks.tolist())))

    logger.debug(f'Built dataset tau={spec.tau} with {spec.points} windows')
    return dataset
