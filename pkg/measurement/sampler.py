import logging
import math
from dataclasses import dataclass

import numpy as np

from qubit import QubitState, pauli
from perception.encoder import EncoderConfig, EventSequence, encode_batch
from circuit import compile_sequence
from measurement.calibration import BackendCalibration

logger = logging.getLogger(__name__)

# Identifier of the bit generator behind every sampled count. Written into results files.
PRNG_ALGORITHM = 'numpy.PCG64'

_SEED_LIMIT = 2 ** 64

# Pauli errors applied by the depolarizing channel, drawn uniformly.
_PAULI_ERRORS = tuple(pauli(axis).matrix.T for axis in ('x', 'y', 'z'))


@dataclass(frozen = True)
class ShotResult:
    """
    Counts from N identically prepared and measured qubits.

    Args:
        n_shots: Number of shots N.
        n0: Shots that read 0.
        n1: Shots that read 1.
        seed: Seed of the generator that produced the counts.
    """
    n_shots: int
    n0: int
    n1: int
    seed: int

    def __post_init__(self):
        if self.n_shots < 1 or self.n0 < 0 or self.n1 < 0:
            raise ValueError(f'Invalid counts: N={self.n_shots}, N0={self.n0}, N1={self.n1}')
        if self.n0 + self.n1 != self.n_shots:
            raise ValueError(f'N0 + N1 = {self.n0 + self.n1} does not match N = {self.n_shots}')


@dataclass(frozen = True)
class NoiseModel:
    """
    Simplified hardware noise.

    Args:
        readout_flip: Probability that the measured bit is flipped (same for 0->1 and 1->0).
        gate_depolarizing: Per-gate probability of a uniformly drawn Pauli error.
        gate_time_us: Gate duration (us), used for amplitude damping.
        damping_enabled: Whether amplitude damping is applied after each gate.
        t1_us: Relaxation time T1 (us) used for damping.
        label: Name written to results files.
    """
    readout_flip: float = 0.0
    gate_depolarizing: float = 0.0
    gate_time_us: float = 0.0
    damping_enabled: bool = False
    t1_us: float | None = None
    label: str = 'custom'

    def __post_init__(self):
        for name in ('readout_flip', 'gate_depolarizing'):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f'{name} must lie in [0, 1], got {value}')
        if not self.gate_time_us >= 0:
            raise ValueError(f'gate_time_us must be non-negative, got {self.gate_time_us}')
        if self.damping_enabled and not (self.t1_us and self.t1_us > 0):
            raise ValueError('Amplitude damping needs a positive T1')

    @property
    def damping_gamma(self) -> float:
        """
        Per-gate decay probability of |1>, 1 - exp(-gate_time / T1).
        """
        if not self.damping_enabled:
            return 0.0
        return -math.expm1(-self.gate_time_us / self.t1_us)

    @property
    def is_trivial(self) -> bool:
        """
        Whether the model cannot change any outcome.
        """
        return self.readout_flip == 0 and self.gate_depolarizing == 0 and self.damping_gamma == 0


def make_rng(seed: int) -> np.random.Generator:
    """
    The generator used for all sampling, seeded with a 64-bit unsigned seed.
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < _SEED_LIMIT:
        raise ValueError(f'Seed must be an integer in [0, 2^64), got {seed!r}')
    return np.random.Generator(np.random.PCG64(int(seed)))

def _check_shots(n: int):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f'Number of shots must be a positive integer, got {n!r}')

def _shot_result(outcomes: np.ndarray, seed: int) -> ShotResult:
    n1 = int(np.count_nonzero(outcomes))
    return ShotResult(len(outcomes), len(outcomes) - n1, n1, seed)

def _read_out(p1: np.ndarray, readout_flip: float, rng: np.random.Generator) -> np.ndarray:
    """
    Born-sample each shot, then flip each recorded bit with probability readout_flip.
    """
    outcomes = rng.random(len(p1)) < p1
    if readout_flip:
        outcomes ^= rng.random(len(p1)) < readout_flip
    return outcomes

def measure_shots(state: QubitState, n: int, noise: NoiseModel | None = None,
                  seed: int = 0) -> ShotResult:
    """
    Measure n identically prepared copies of a state.

    Without noise (or with a model that cannot alter outcomes) N1 is drawn from
    Binomial(n, |c1|^2) in one call. With noise, every shot is a separate trajectory; only the
    readout flip applies here since a bare state carries no gate list (see noisy_encode_shots).

    Args:
        state: State to measure.
        n: Number of shots, at least 1.
        noise: Optional noise model.
        seed: 64-bit seed. Identical inputs and seed give identical counts.

    Returns:
        The counts.
    """
    _check_shots(n)
    rng = make_rng(seed)
    p1 = min(max(state.p1, 0.0), 1.0)

    if noise is None or noise.readout_flip == 0:
        if noise is not None and not noise.is_trivial:
            logger.debug('Gate noise ignored when measuring a bare state')
        n1 = int(rng.binomial(n, p1))
        return ShotResult(n, n - n1, n1, seed)

    return _shot_result(_read_out(np.full(n, p1), noise.readout_flip, rng), seed)

def noisy_encode_shots(seq: EventSequence, cfg: EncoderConfig, n: int, noise: NoiseModel,
                       seed: int = 0) -> ShotResult:
    """
    Emulate running the window's compiled circuit n times on a noisy device. Each shot is an
    independent pure-state trajectory starting from |0>: after every gate a Pauli error strikes
    with probability gate_depolarizing, and amplitude damping jumps to |0> with probability
    gamma |c1|^2 (otherwise |1> is attenuated by sqrt(1 - gamma) and the state renormalized).
    The Born outcome is finally flipped with probability readout_flip. Shots are simulated as
    rows of one array.

    A trivial noise model falls back to measure_shots on the batch encoding, so it reproduces
    the noiseless counts for the same seed.

    Args:
        seq: Window of exactly cfg.tau events.
        cfg: Encoder settings.
        n: Number of shots.
        noise: Noise model.
        seed: 64-bit seed.

    Returns:
        The counts.
    """
    _check_shots(n)
    if noise.is_trivial:
        return measure_shots(encode_batch(seq, cfg), n, None, seed)

    circuit = compile_sequence(seq, cfg)
    rng = make_rng(seed)
    gamma = noise.damping_gamma
    keep = math.sqrt(1 - gamma)

    states = np.zeros((n, 2), dtype = np.complex128)
    states[:, 0] = 1

    for gate in circuit.gates:
        states = states @ gate.unitary().matrix.T

        if noise.gate_depolarizing:
            hit = rng.random(n) < noise.gate_depolarizing
            axes = rng.integers(0, 3, size = n)
            for k, error in enumerate(_PAULI_ERRORS):
                mask = hit & (axes == k)
                states[mask] = states[mask] @ error

        if gamma:
            jump = rng.random(n) < gamma * np.abs(states[:, 1]) ** 2
            states[jump] = (1, 0)
            stay = ~jump
            states[stay, 1] *= keep
            states[stay] /= np.linalg.norm(states[stay], axis = 1, keepdims = True)

    p1 = np.clip(np.abs(states[:, 1]) ** 2, 0.0, 1.0)
    return _shot_result(_read_out(p1, noise.readout_flip, rng), seed)

def noise_from_calibration(cal: BackendCalibration, qubit_index: int, gate_time_us: float = 0.0,
                           damping_enabled: bool = True) -> NoiseModel:
    """
    Map a calibration record onto the noise model: readout error becomes the symmetric readout
    flip, the U2 error rate the per-gate depolarizing probability, and T1 drives per-gate
    amplitude damping over the supplied gate duration. T2 is not used.

    Args:
        cal: Backend calibration.
        qubit_index: Which qubit's record to use.
        gate_time_us: Gate duration (us). 0 disables damping in effect.
        damping_enabled: Whether to apply amplitude damping at all.

    Raises:
        IndexError: If the qubit does not exist on the backend.
    """
    q = cal[qubit_index]
    return NoiseModel(readout_flip = q.readout_error,
                      gate_depolarizing = q.u2_error_rate,
                      gate_time_us = gate_time_us,
                      damping_enabled = damping_enabled,
                      t1_us = q.t1_us,
                      label = f'{cal.name}:q{qubit_index}')
