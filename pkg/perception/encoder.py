import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from qubit import (QubitState, Unitary2, apply, rotation_y, zero_state, plus_state)

logger = logging.getLogger(__name__)


class ConfigurationError(ValueError):
    """
    Raised when events, sequences and encoder settings do not fit together.
    """


class Event(Enum):
    """
    A single presence reading. The value is the event angle alpha in radians.
    """
    FRONT = 0.0 # Object seen by the front sensor.
    BACK = math.pi # Object seen by the back sensor.

    @property
    def alpha(self) -> float:
        return self.value

    @property
    def symbol(self) -> str:
        """
        Character used in sequence files.
        """
        return 'F' if self is Event.FRONT else 'B'

    @classmethod
    def from_alpha(cls, alpha: float) -> 'Event':
        """
        Map an event angle to its event. Only 0 and pi are valid.
        """
        if alpha == 0:
            return cls.FRONT
        if alpha == math.pi:
            return cls.BACK
        raise ConfigurationError(f'Event angle must be 0 or pi, got {alpha}')

    @classmethod
    def from_symbol(cls, symbol: str) -> 'Event':
        if symbol == 'F':
            return cls.FRONT
        if symbol == 'B':
            return cls.BACK
        raise ConfigurationError(f'Unknown event symbol {symbol!r}, expected F or B')


class InitState(Enum):
    """
    Initial qubit state for encoding.
    """
    ZERO = 'zero' # Start from |0>, back events rotate by pi/tau.
    PLUS = 'plus' # Start from |+>, every event rotates by +-pi/(2 tau).


@dataclass(frozen = True)
class EventSequence:
    """
    Ordered window of events.

    Args:
        events: The events in arrival order. Must not be empty.
    """
    events: tuple[Event, ...]

    def __post_init__(self):
        events = tuple(self.events)
        if not events:
            raise ConfigurationError('An event sequence needs at least one event')
        for e in events:
            if not isinstance(e, Event):
                raise ConfigurationError(f'Not an event: {e!r}')
        object.__setattr__(self, 'events', events)

    @classmethod
    def from_string(cls, line: str) -> 'EventSequence':
        """
        Build a sequence from its F/B text form, e.g. 'FFBF'.
        """
        return cls(tuple(Event.from_symbol(c) for c in line))

    def to_string(self) -> str:
        return ''.join(e.symbol for e in self.events)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    @property
    def tau(self) -> int:
        """
        Window length.
        """
        return len(self.events)

    @property
    def tau0(self) -> int:
        """
        Number of front events.
        """
        return self.events.count(Event.FRONT)

    @property
    def tau1(self) -> int:
        """
        Number of back events.
        """
        return self.events.count(Event.BACK)

    @property
    def f1(self) -> float:
        return relative_frequency(self, Event.BACK)


@dataclass(frozen = True)
class EncoderConfig:
    """
    Encoder settings.

    Args:
        tau: Window length, fixed in advance so online updates know the rotation fraction.
        init: Initial state variant.
    """
    tau: int
    init: InitState = InitState.ZERO

    def __post_init__(self):
        if isinstance(self.tau, bool) or not isinstance(self.tau, (int, np.integer)) or self.tau < 1:
            raise ConfigurationError(f'tau must be a positive integer, got {self.tau!r}')
        object.__setattr__(self, 'tau', int(self.tau))
        if not isinstance(self.init, InitState):
            object.__setattr__(self, 'init', InitState(self.init))


def initial_state(cfg: EncoderConfig) -> QubitState:
    """
    The state an encoding window starts from.
    """
    return zero_state() if cfg.init is InitState.ZERO else plus_state()

def relative_frequency(seq: EventSequence, event: Event) -> float:
    """
    Fraction of the window's events equal to `event`.
    """
    return seq.events.count(event) / seq.tau

def event_angle(e: Event, cfg: EncoderConfig) -> float:
    """
    Rotation angle about y applied for one event.

    Returns:
        0 or pi/tau when starting from |0>; -pi/(2 tau) or +pi/(2 tau) when starting from |+>.
    """
    if cfg.init is InitState.ZERO:
        return math.pi / cfg.tau if e is Event.BACK else 0.0
    half = math.pi / (2 * cfg.tau)
    return half if e is Event.BACK else -half

def event_operator(e: Event, cfg: EncoderConfig) -> Unitary2:
    """
    Per-event operator. Identity for front events when starting from |0>.
    """
    return rotation_y(event_angle(e, cfg))

def encode_batch(seq: EventSequence, cfg: EncoderConfig) -> QubitState:
    """
    Encode a complete window. All per-event operators rotate about the same axis, so they are
    fused into a single rotation by the summed angle.

    Args:
        seq: Window of exactly cfg.tau events.
        cfg: Encoder settings.

    Returns:
        State with Bloch polar angle pi * tau1 / tau and zero azimuth.

    Raises:
        ConfigurationError: If the window length differs from cfg.tau.
    """
    if seq.tau != cfg.tau:
        raise ConfigurationError(f'Sequence length {seq.tau} does not match tau={cfg.tau}')

    angle = math.fsum(event_angle(e, cfg) for e in seq)
    return apply(rotation_y(angle), initial_state(cfg))

def online_update(state: QubitState, e: Event, cfg: EncoderConfig) -> QubitState:
    """
    Apply one event's operator to the current state.
    """
    return apply(event_operator(e, cfg), state)

def fold_online(events: Iterable[Event], cfg: EncoderConfig) -> QubitState:
    """
    Run a stream of events through online_update from the configured initial state.
    """
    state = initial_state(cfg)
    for e in events:
        state = online_update(state, e, cfg)
    return state


class OnlineSession:
    """
    Mutable perception state updated event by event. Not thread-safe: a session has a single
    writer.

    Args:
        cfg: Encoder settings; cfg.tau is the window length.
    """
    def __init__(self, cfg: EncoderConfig):
        self.cfg = cfg
        self._state = initial_state(cfg)
        self._events: list[Event] = []

    @property
    def state(self) -> QubitState:
        """
        Current state. Only meaningful for decoding once the window is complete.
        """
        return self._state

    @property
    def complete(self) -> bool:
        return len(self._events) == self.cfg.tau

    @property
    def seen(self) -> int:
        return len(self._events)

    def push(self, e: Event) -> QubitState:
        """
        Feed one event.

        Raises:
            ConfigurationError: If the window is already complete.
        """
        if self.complete:
            raise ConfigurationError(f'Window of {self.cfg.tau} events is already complete; '
                                     f'reset the session first')
        self._state = online_update(self._state, e, self.cfg)
        self._events.append(e)
        return self._state

    def window(self) -> EventSequence:
        """
        Events received so far in this window.
        """
        return EventSequence(tuple(self._events))

    def reset(self):
        """
        Start a new window from the configured initial state.
        """
        self._state = initial_state(self.cfg)
        self._events.clear()
