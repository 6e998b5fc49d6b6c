import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from perception.encoder import Event, EventSequence

logger = logging.getLogger(__name__)

# Gaussian steps drawn per refill of a world's step buffer.
_STEP_BLOCK = 4096


@dataclass(frozen = True)
class WorldConfig:
    """
    Parameters of the simulated world: a fixed robot at the origin and one object doing a
    random walk inside an annulus around it.

    Args:
        r_min: Collision-exclusion radius (m). The object never gets closer.
        r_max: Detectability radius (m). The object never gets farther.
        step_sigma: Standard deviation of the per-axis Gaussian step (m). 0 pins the object.
        sample_period_s: Sensor sample period T_s (s). Only scales trace timestamps.
        seed: Seed of the world's random walk.
        start_x: Initial object x (m).
        start_y: Initial object y (m).
    """
    r_min: float = 0.5
    r_max: float = 3.0
    step_sigma: float = 0.25
    sample_period_s: float = 0.1
    seed: int = 0
    start_x: float = 1.5
    start_y: float = 0.0

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise ValueError(f'Need 0 < r_min < r_max, got r_min={self.r_min}, r_max={self.r_max}')
        if self.step_sigma < 0:
            raise ValueError(f'step_sigma must be non-negative, got {self.step_sigma}')
        if self.sample_period_s <= 0:
            raise ValueError(f'sample_period_s must be positive, got {self.sample_period_s}')
        if not self.r_min <= math.hypot(self.start_x, self.start_y) <= self.r_max:
            raise ValueError(f'Start pose ({self.start_x}, {self.start_y}) lies outside '
                             f'[{self.r_min}, {self.r_max}]')


@dataclass(frozen = True)
class ObjectPose:
    """
    Object position relative to the robot (m).
    """
    x: float
    y: float

    @property
    def radius(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def bearing(self) -> float:
        """
        Angle of the object seen from the robot, in (-pi, pi].
        """
        return math.atan2(self.y, self.x)


def _scale_to_radius(x: float, y: float, r: float, target: float, outward: bool) -> tuple[float, float]:
    """
    Radially rescale (x, y) to `target`, then nudge by ulps until the rounded radius sits on the
    requested side of the target.
    """
    x, y = x * target / r, y * target / r
    if outward:
        while math.hypot(x, y) < target:
            x, y = math.nextafter(x, math.copysign(math.inf, x)), math.nextafter(y, math.copysign(math.inf, y))
    else:
        while math.hypot(x, y) > target:
            x, y = math.nextafter(x, 0.0), math.nextafter(y, 0.0)
    return x, y

def step(pose: ObjectPose, cfg: WorldConfig, rng: np.random.Generator) -> ObjectPose:
    """
    Advance the random walk by one sample period.

    Args:
        pose: Current pose, inside the annulus.
        cfg: World parameters.
        rng: Random generator driving the walk.

    Returns:
        The next pose, projected radially back into [r_min, r_max] if the step left the annulus.
    """
    dx, dy = rng.normal(0.0, cfg.step_sigma, size = 2) if cfg.step_sigma else (0.0, 0.0)
    return _advance(pose, float(dx), float(dy), cfg)

def _advance(pose: ObjectPose, dx: float, dy: float, cfg: WorldConfig) -> ObjectPose:
    """
    Move by (dx, dy) and project back into the annulus.
    """
    x, y = pose.x + dx, pose.y + dy
    r = math.hypot(x, y)

    if r < cfg.r_min:
        if r == 0:
            # Landed exactly on the robot: keep the previous bearing.
            x, y, r = pose.x, pose.y, pose.radius
        x, y = _scale_to_radius(x, y, r, cfg.r_min, outward = True)
    elif r > cfg.r_max:
        x, y = _scale_to_radius(x, y, r, cfg.r_max, outward = False)

    return ObjectPose(x, y)

def sense(pose: ObjectPose) -> Event:
    """
    Binary presence reading. The front sensor covers bearings in (-pi/2, pi/2); everything else,
    including both boundary bearings, is reported by the back sensor.
    """
    return Event.FRONT if abs(pose.bearing) < math.pi / 2 else Event.BACK


class World:
    """
    A single simulated world. Holds the object pose and the random generator, so stepping is
    single-threaded; independent worlds can run side by side.

    Args:
        cfg: World parameters.
        record_trace: Whether to keep a (t, x, y, alpha) row per sample.
    """
    def __init__(self, cfg: WorldConfig, *, record_trace: bool = False,
                 rng: np.random.Generator | None = None):
        self.cfg = cfg
        self.pose = ObjectPose(cfg.start_x, cfg.start_y)
        self._rng = rng if rng is not None else np.random.Generator(np.random.PCG64(cfg.seed))
        self._samples = 0
        self._steps: list[list[float]] = [] # Pre-drawn Gaussian steps, consumed row by row.
        self._next_step = 0
        self.record_trace = record_trace
        self.trace: list[tuple[float, float, float, float]] = []

    @property
    def samples(self) -> int:
        """
        Number of sensor samples taken so far.
        """
        return self._samples

    def sample(self) -> Event:
        """
        Move the object one period and take exactly one sensor reading.
        """
        if self._next_step == len(self._steps):
            self._steps = self._rng.normal(0.0, self.cfg.step_sigma, size = (_STEP_BLOCK, 2)).tolist()
            self._next_step = 0
        dx, dy = self._steps[self._next_step]
        self._next_step += 1

        self.pose = _advance(self.pose, dx, dy, self.cfg)
        event = sense(self.pose)
        if self.record_trace:
            t = self._samples * self.cfg.sample_period_s
            self.trace.append((t, self.pose.x, self.pose.y, event.alpha))
        self._samples += 1
        return event

    def generate_window(self, tau: int) -> EventSequence:
        """
        Collect tau consecutive events, a window of tau * T_s simulated seconds.
        """
        if tau < 1:
            raise ValueError(f'tau must be at least 1, got {tau}')
        return EventSequence(tuple(self.sample() for _ in range(tau)))


def generate_window(cfg: WorldConfig, tau: int, rng: np.random.Generator) -> EventSequence:
    """
    One window from a fresh world starting at the configured pose.
    """
    return World(cfg, rng = rng).generate_window(tau)

def write_trace(path: str | Path, trace: Iterable[tuple[float, float, float, float]]):
    """
    Write a pose trace as CSV with header t,x,y,alpha.
    """
    path = Path(path)
    path.parent.mkdir(parents = True, exist_ok = True)
    with open(path, 'w', newline = '') as f:
        writer = csv.writer(f, lineterminator = '\n')
        writer.writerow(['t', 'x', 'y', 'alpha'])
        for t, x, y, alpha in trace:
            writer.writerow([repr(t), repr(x), repr(y), repr(alpha)])

    logger.debug(f'Wrote pose trace to {path}')
