import hashlib
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import psutil

from perception import EventSequence, EncoderConfig, InitState, encode_batch
from measurement import (NoiseModel, DecodedFrequency, RunStatistics, measure_shots,
                         noisy_encode_shots, decode, aggregate)
from harness.dataset import DatasetSpec, build_dataset

logger = logging.getLogger(__name__)


class ExperimentError(RuntimeError):
    """
    Raised when one repetition of a plan entry fails.

    Args:
        message: Description of the failure.
        entry: Index of the dataset entry.
        rep: Index of the repetition.
    """
    def __init__(self, message: str, entry: int, rep: int):
        super().__init__(message)
        self.entry = entry
        self.rep = rep

    def __reduce__(self):
        # Crosses process boundaries when raised inside a worker.
        return type(self), (str(self), self.entry, self.rep)


class Percept(Enum):
    """
    Perceived position of the object after decoding a window.
    """
    FRONT = 'front'
    BACK = 'back'
    UNDECIDED = 'undecided'


@dataclass(frozen = True)
class ExperimentPlan:
    """
    A batch of repeated encode -> sample -> decode experiments.

    Args:
        sequences: Dataset entries, one window each.
        n_shots: Shots per run (N).
        n_reps: Repetitions per entry (n).
        noise: Noise model, or None for ideal sampling.
        init: Initial state variant of the encoder.
        master_seed: Seed all per-run seeds are derived from.
        dataset: Description the sequences were built from, if any.
    """
    sequences: tuple[EventSequence, ...]
    n_shots: int
    n_reps: int
    noise: NoiseModel | None = None
    init: InitState = InitState.ZERO
    master_seed: int = 0
    dataset: DatasetSpec | None = None

    def __post_init__(self):
        if not self.sequences:
            raise ValueError('A plan needs at least one sequence')
        if self.n_shots < 1:
            raise ValueError(f'n_shots must be at least 1, got {self.n_shots}')
        if self.n_reps < 1:
            raise ValueError(f'n_reps must be at least 1, got {self.n_reps}')
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError(f'Master seed must lie in [0, 2^64), got {self.master_seed}')
        object.__setattr__(self, 'sequences', tuple(self.sequences))
        if not isinstance(self.init, InitState):
            object.__setattr__(self, 'init', InitState(self.init))

    @classmethod
    def from_dataset(cls, spec: DatasetSpec, n_shots: int, n_reps: int, **kwargs) -> 'ExperimentPlan':
        return cls(tuple(build_dataset(spec)), n_shots, n_reps, dataset = spec, **kwargs)

    @property
    def noise_label(self) -> str:
        return self.noise.label if self.noise is not None else 'none'

    @property
    def total_experiments(self) -> int:
        """
        Number of single-shot experiments the plan performs: entries * n * N.
        """
        return len(self.sequences) * self.n_reps * self.n_shots


@dataclass(frozen = True)
class EntryResult:
    """
    Outcome of all repetitions of one dataset entry.
    """
    sequence: EventSequence
    runs: tuple[DecodedFrequency, ...]
    stats: RunStatistics


def derive_seed(master_seed: int, entry: int, rep: int) -> int:
    """
    Child seed of one run: the first 8 bytes (big-endian) of sha256("<master>:<entry>:<rep>").
    Independent of scheduling, so parallel and sequential runs draw the same numbers.
    """
    digest = hashlib.sha256(f'{master_seed}:{entry}:{rep}'.encode('ascii')).digest()
    return int.from_bytes(digest[:8], 'big')

def sample_sequence(seq: EventSequence, cfg: EncoderConfig, n_shots: int,
                    noise: NoiseModel | None = None, seed: int = 0) -> DecodedFrequency:
    """
    Encode one window, measure it n_shots times and decode the counts.
    """
    if noise is None:
        shots = measure_shots(encode_batch(seq, cfg), n_shots, None, seed)
    else:
        shots = noisy_encode_shots(seq, cfg, n_shots, noise, seed)
    return decode(shots)

def classify_sequence(seq: EventSequence, cfg: EncoderConfig, n_shots: int,
                      noise: NoiseModel | None = None, seed: int = 0) -> tuple[Percept, DecodedFrequency]:
    """
    Decide where the object was during a completed window: back if the decoded back-event
    frequency exceeds one half, front if it falls below, undecided on a tie. The comparison uses
    the counts, so N1 == N0 is always a tie.

    Returns:
        The percept and the decoded frequency it was drawn from.
    """
    decoded = sample_sequence(seq, cfg, n_shots, noise, seed)
    if decoded.raw > decoded.raw_front:
        percept = Percept.BACK
    elif decoded.raw < decoded.raw_front:
        percept = Percept.FRONT
    else:
        percept = Percept.UNDECIDED
    return percept, decoded

_Task = tuple[int, EventSequence, int, int, NoiseModel | None, InitState, int]

def _run_entry(task: _Task) -> list[DecodedFrequency]:
    """
    All repetitions of one entry. Top-level so worker processes can unpickle it.
    """
    entry, seq, n_shots, n_reps, noise, init, master_seed = task
    runs = []
    for rep in range(n_reps):
        try:
            cfg = EncoderConfig(seq.tau, init)
            seed = derive_seed(master_seed, entry, rep)
            runs.append(sample_sequence(seq, cfg, n_shots, noise, seed))
        except Exception as e:
            raise ExperimentError(f'Entry {entry} (tau1={seq.tau1}), repetition {rep}: {e}',
                                  entry, rep) from e
    return runs

def _format_elapsed(seconds: float) -> str:
    return f'{int(seconds // 60)}m{seconds % 60:.1f}s'

def execute_plan(plan: ExperimentPlan, workers: int = 1) -> list[EntryResult]:
    """
    Run every repetition of every entry and aggregate per entry.

    Args:
        plan: The plan.
        workers: Worker processes. 1 runs in-process.

    Returns:
        One result per entry, in dataset order regardless of completion order.

    Raises:
        ExperimentError: Naming the entry and repetition that failed.
    """
    if workers < 1:
        raise ValueError(f'workers must be at least 1, got {workers}')

    start = time.time()
    logger.info(f'Running {len(plan.sequences)} entries x {plan.n_reps} repetitions x '
                f'{plan.n_shots} shots ({plan.total_experiments} experiments, '
                f'noise: {plan.noise_label})')

    tasks = [(entry, seq, plan.n_shots, plan.n_reps, plan.noise, plan.init, plan.master_seed)
             for entry, seq in enumerate(plan.sequences)]
    if workers == 1:
        all_runs = [_run_entry(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers = workers) as executor:
            all_runs = list(executor.map(_run_entry, tasks))

    results = [EntryResult(seq, tuple(runs), aggregate(runs, seq.f1))
               for seq, runs in zip(plan.sequences, all_runs)]

    logger.info(f'Plan finished in {_format_elapsed(time.time() - start)}')
    logger.debug(f'Memory usage: {psutil.virtual_memory().percent}%')
    return results

def run_plan(plan: ExperimentPlan, workers: int = 1) -> list[RunStatistics]:
    """
    Aggregated statistics of every plan entry, in dataset order.
    """
    return [result.stats for result in execute_plan(plan, workers)]
