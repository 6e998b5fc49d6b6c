import logging
import math
from dataclasses import dataclass
from pathlib import Path

from defs import CALIBRATIONS_DIR

logger = logging.getLogger(__name__)

_FIELDS = ('backend', 'qubit', 't1_us', 't2_us', 'freq_ghz', 'readout_error', 'u2_error')


class CalibrationError(ValueError):
    """
    Raised for malformed or physically inconsistent calibration data.
    """


@dataclass(frozen = True)
class QubitCalibration:
    """
    Calibration record of one physical qubit.

    Args:
        qubit: Index of the qubit on its backend.
        t1_us: Relaxation time T1 (us).
        t2_us: Dephasing time T2 (us). Stored, not used by the noise model.
        frequency_ghz: Qubit frequency (GHz).
        readout_error: Probability of misreading the measured bit.
        u2_error_rate: Single-qubit U2 gate error rate.
    """
    qubit: int
    t1_us: float
    t2_us: float
    frequency_ghz: float
    readout_error: float
    u2_error_rate: float

    def __post_init__(self):
        for name in ('t1_us', 't2_us', 'frequency_ghz'):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise CalibrationError(f'q{self.qubit}: {name} must be positive, got {value}')
        for name in ('readout_error', 'u2_error_rate'):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise CalibrationError(f'q{self.qubit}: {name} must lie in [0, 1], got {value}')
        if self.t2_us > 2 * self.t1_us:
            raise CalibrationError(f'q{self.qubit}: T2={self.t2_us}us exceeds 2*T1={2 * self.t1_us}us')


@dataclass(frozen = True)
class BackendCalibration:
    """
    Calibration datasheet of a backend: one record per qubit, ordered by qubit index.
    """
    name: str
    qubits: tuple[QubitCalibration, ...]

    def __getitem__(self, qubit_index: int) -> QubitCalibration:
        if isinstance(qubit_index, bool) or not 0 <= qubit_index < len(self.qubits):
            raise IndexError(f'Backend {self.name} has qubits 0..{len(self.qubits) - 1}, '
                             f'got {qubit_index}')
        return self.qubits[qubit_index]

    def __len__(self) -> int:
        return len(self.qubits)


def parse_calibration(text: str, source: str = '<string>') -> BackendCalibration:
    """
    Parse calibration text. One record per line:
    backend,qubit,t1_us,t2_us,freq_ghz,readout_error,u2_error. Lines starting with '#' and blank
    lines are ignored.

    Args:
        text: File content.
        source: Name used in error messages.

    Returns:
        The backend calibration.
    """
    name = None
    records: dict[int, QubitCalibration] = {}

    for number, line in enumerate(text.splitlines(), start = 1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue

        parts = [p.strip() for p in line.split(',')]
        if len(parts) != len(_FIELDS):
            raise CalibrationError(f'{source}:{number}: expected {len(_FIELDS)} fields '
                                   f'({",".join(_FIELDS)}), got {len(parts)}')

        backend, qubit, *values = parts
        if name is None:
            name = backend
        elif backend != name:
            raise CalibrationError(f'{source}:{number}: mixed backends {name!r} and {backend!r}')

        try:
            index = int(qubit)
            t1, t2, freq, readout, u2 = (float(v) for v in values)
        except ValueError as e:
            raise CalibrationError(f'{source}:{number}: {e}') from e

        if index in records:
            raise CalibrationError(f'{source}:{number}: duplicate record for qubit {index}')

        try:
            records[index] = QubitCalibration(index, t1, t2, freq, readout, u2)
        except CalibrationError as e:
            raise CalibrationError(f'{source}:{number}: {e}') from e

    if name is None:
        raise CalibrationError(f'{source}: no calibration records')
    if sorted(records) != list(range(len(records))):
        raise CalibrationError(f'{source}: qubit indices must be 0..{len(records) - 1}, '
                               f'got {sorted(records)}')

    return BackendCalibration(name, tuple(records[i] for i in range(len(records))))

def load_calibration(path: str | Path) -> BackendCalibration:
    """
    Load a calibration file from disk.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise CalibrationError(f'Cannot read calibration file {path}: {e}') from e

    cal = parse_calibration(text, str(path))
    logger.debug(f'Loaded calibration {cal.name} ({len(cal)} qubits) from {path}')
    return cal

def bundled_calibrations() -> list[str]:
    """
    Names of the calibration files shipped with the package.
    """
    return sorted(p.stem for p in CALIBRATIONS_DIR.glob('*.cal'))

def load_bundled(name: str) -> BackendCalibration:
    """
    Load a shipped calibration by backend name, e.g. 'armonk' or 'burlington'.
    """
    path = CALIBRATIONS_DIR / f'{name.lower()}.cal'
    if not path.exists():
        raise CalibrationError(f'No bundled calibration {name!r}; available: '
                               f'{", ".join(bundled_calibrations())}')
    return load_calibration(path)

def resolve_calibration(name_or_path: str | Path) -> BackendCalibration:
    """
    Load a calibration from a file path, falling back to the bundled datasheets by name.
    """
    path = Path(name_or_path)
    if path.exists():
        return load_calibration(path)
    return load_bundled(path.stem)
