import logging
import time
from dataclasses import dataclass
from typing import Iterator

import psutil

from qubit import QubitState
from perception import EventSequence, EncoderConfig, OnlineSession, World, WorldConfig
from measurement import NoiseModel, DecodedFrequency, measure_shots, noisy_encode_shots, decode
from harness.experiment import derive_seed

logger = logging.getLogger(__name__)


@dataclass(frozen = True)
class OnlineWindow:
    """
    One completed online window.

    Args:
        index: Window number, from 0.
        sequence: Events received during the window.
        state: Pre-measurement state at the window boundary.
        decoded: Decoded frequency of the sampled state.
    """
    index: int
    sequence: EventSequence
    state: QubitState
    decoded: DecodedFrequency


def run_online(world_cfg: WorldConfig, cfg: EncoderConfig, windows: int, n_shots: int = 2 ** 13,
               seed: int = 0, noise: NoiseModel | None = None,
               world: World | None = None) -> Iterator[OnlineWindow]:
    """
    Drive the online workflow: the world produces one event per sample period, each event updates
    the perception state right away, and at every window boundary the state is measured, decoded
    and reset.

    Args:
        world_cfg: World parameters.
        cfg: Encoder settings; cfg.tau is the window length.
        windows: Number of windows, at least 1.
        n_shots: Shots per window boundary.
        seed: Master seed of the shot sampling. The world walks with world_cfg.seed.
        noise: Optional noise model. Gate noise replays the window's compiled circuit.
        world: Existing world to draw from, e.g. one recording a pose trace.

    Yields:
        One OnlineWindow per window, in order.
    """
    if windows < 1:
        raise ValueError(f'windows must be at least 1, got {windows}')
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f'Master seed must lie in [0, 2^64), got {seed}')

    world = world if world is not None else World(world_cfg)
    session = OnlineSession(cfg)
    start = time.time()

    for index in range(windows):
        while not session.complete:
            session.push(world.sample())

        seq = session.window()
        state = session.state
        window_seed = derive_seed(seed, index, 0)
        if noise is None or noise.is_trivial:
            shots = measure_shots(state, n_shots, None, window_seed)
        else:
            shots = noisy_encode_shots(seq, cfg, n_shots, noise, window_seed)

        yield OnlineWindow(index, seq, state, decode(shots))
        session.reset()

    logger.info(f'Online session of {windows} windows finished in {time.time() - start:.2f}s')
    logger.debug(f'Memory usage: {psutil.virtual_memory().percent}%')
