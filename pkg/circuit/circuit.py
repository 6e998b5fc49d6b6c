import logging
import math
from dataclasses import dataclass
from enum import Enum

from qubit import QubitState, Unitary2, apply, compose, hadamard, rotation_y, zero_state
from perception.encoder import (ConfigurationError, EncoderConfig, EventSequence, Event, InitState,
                                event_angle)

logger = logging.getLogger(__name__)


class GateKind(Enum):
    RY = 'ry'
    H = 'h'


@dataclass(frozen = True)
class Gate:
    """
    A single-qubit gate of the circuit.

    Args:
        kind: Gate type.
        angle: Rotation angle in radians. Required for ry, absent for h.
    """
    kind: GateKind
    angle: float | None = None

    def __post_init__(self):
        if self.kind is GateKind.RY:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f'ry needs a finite angle, got {self.angle!r}')
        elif self.angle is not None:
            raise ValueError(f'{self.kind.value} takes no angle')

    @classmethod
    def ry(cls, angle: float) -> 'Gate':
        return cls(GateKind.RY, float(angle))

    @classmethod
    def h(cls) -> 'Gate':
        return cls(GateKind.H)

    def unitary(self) -> Unitary2:
        return rotation_y(self.angle) if self.kind is GateKind.RY else hadamard()


@dataclass(frozen = True)
class Circuit:
    """
    Single-qubit circuit on q[0], starting from |0>. The optional measurement always comes last,
    so it is kept as a flag rather than a gate.

    Args:
        gates: Gates in application order.
        measured: Whether q[0] is measured into c[0] at the end.
    """
    gates: tuple[Gate, ...] = ()
    measured: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'gates', tuple(self.gates))

    @property
    def rotation_count(self) -> int:
        return sum(1 for g in self.gates if g.kind is GateKind.RY)


def compile_sequence(seq: EventSequence, cfg: EncoderConfig) -> Circuit:
    """
    Compile an event window into a measured circuit. Starting from |0>, only back events produce
    a gate, ry(pi/tau) each. Starting from |+>, an h gate comes first and every event produces a
    signed ry(+-pi/(2 tau)). Equal gates are kept separate, one per event.

    Args:
        seq: Window of exactly cfg.tau events.
        cfg: Encoder settings.

    Returns:
        The circuit.
    """
    if seq.tau != cfg.tau:
        raise ConfigurationError(f'Sequence length {seq.tau} does not match tau={cfg.tau}')

    if cfg.init is InitState.ZERO:
        gates = [Gate.ry(event_angle(Event.BACK, cfg)) for e in seq if e is Event.BACK]
    else:
        gates = [Gate.h()] + [Gate.ry(event_angle(e, cfg)) for e in seq]

    return Circuit(tuple(gates), measured = True)

def simulate(circuit: Circuit) -> QubitState:
    """
    Pre-measurement statevector of a circuit.
    """
    return apply(compose(g.unitary() for g in circuit.gates), zero_state())
