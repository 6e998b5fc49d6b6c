import cmath
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

logger = logging.getLogger(__name__)

# Unitarity residual accepted at API boundaries (apply, compose). Internal products stay far below.
UNITARY_TOLERANCE = 1e-9

# Normalization residual accepted when a state is constructed.
_NORM_TOLERANCE = 1e-9

# Amplitude magnitude under which a state is treated as sitting on a pole of the Bloch sphere.
_POLE_TOLERANCE = 1e-15

_TWO_PI = 2 * math.pi


class NonUnitaryError(ValueError):
    """
    Raised when an operator handed to the simulator is not unitary within tolerance.
    """


@dataclass(frozen = True)
class QubitState:
    """
    Pure single-qubit state c0|0> + c1|1>.

    Args:
        c0: Amplitude of the basis state |0> ("front").
        c1: Amplitude of the basis state |1> ("back").
    """
    c0: complex
    c1: complex

    def __post_init__(self):
        c0, c1 = complex(self.c0), complex(self.c1)
        for c in (c0, c1):
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError(f'Amplitudes must be finite, got ({c0}, {c1})')

        norm = abs(c0) ** 2 + abs(c1) ** 2
        if abs(norm - 1) > _NORM_TOLERANCE:
            raise ValueError(f'State is not normalized: |c0|^2 + |c1|^2 = {norm}')

        object.__setattr__(self, 'c0', c0)
        object.__setattr__(self, 'c1', c1)

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> 'QubitState':
        """
        Build a state from a length-2 complex vector.
        """
        return cls(complex(vector[0]), complex(vector[1]))

    @property
    def vector(self) -> np.ndarray:
        """
        The amplitudes as a (2,) complex128 array.
        """
        return np.array([self.c0, self.c1], dtype = np.complex128)

    @property
    def p0(self) -> float:
        """
        Born probability of measuring |0>.
        """
        return abs(self.c0) ** 2

    @property
    def p1(self) -> float:
        """
        Born probability of measuring |1>.
        """
        return abs(self.c1) ** 2

    def canonical(self) -> 'QubitState':
        """
        The same physical state with the global phase fixed: c0 real and non-negative, or c1 real
        and non-negative when c0 vanishes.
        """
        anchor = self.c0 if abs(self.c0) > _POLE_TOLERANCE else self.c1
        if anchor == 0:
            return self
        phase = anchor / abs(anchor)
        c0, c1 = self.c0 / phase, self.c1 / phase
        if abs(self.c0) > _POLE_TOLERANCE:
            c0 = complex(abs(self.c0), 0.0)
        else:
            c1 = complex(abs(self.c1), 0.0)
        return QubitState(c0, c1)

    def distance(self, other: 'QubitState') -> float:
        """
        Largest absolute amplitude difference to another state (no phase alignment).
        """
        return max(abs(self.c0 - other.c0), abs(self.c1 - other.c1))

    def phase_distance(self, other: 'QubitState') -> float:
        """
        Largest absolute amplitude difference once both states are canonicalized.
        """
        return self.canonical().distance(other.canonical())


def zero_state() -> QubitState:
    """
    The basis state |0>.
    """
    return QubitState(1, 0)

def one_state() -> QubitState:
    """
    The basis state |1>.
    """
    return QubitState(0, 1)

def plus_state() -> QubitState:
    """
    The balanced superposition |+> = (|0> + |1>)/sqrt(2).
    """
    return QubitState(math.sqrt(0.5), math.sqrt(0.5))


@dataclass(frozen = True, eq = False)
class Unitary2:
    """
    A 2x2 complex operator in the {|0>, |1>} basis. The wrapped matrix is read-only.

    Args:
        matrix: Anything numpy can turn into a (2, 2) complex array.
    """
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype = np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f'Expected a 2x2 matrix, got shape {m.shape}')
        if not np.all(np.isfinite(m)):
            raise ValueError('Operator entries must be finite')
        m.setflags(write = False)
        object.__setattr__(self, 'matrix', m)

    @property
    def m00(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def m01(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def m10(self) -> complex:
        return complex(self.matrix[1, 0])

    @property
    def m11(self) -> complex:
        return complex(self.matrix[1, 1])

    def __matmul__(self, other: 'Unitary2') -> 'Unitary2':
        return Unitary2(self.matrix @ other.matrix)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Unitary2):
            return NotImplemented
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def unitarity_residual(self) -> float:
        """
        Largest entrywise deviation of U U^dagger from the identity.
        """
        return float(np.max(np.abs(self.matrix @ self.matrix.conj().T - np.eye(2))))

    def allclose(self, other: 'Unitary2', atol: float = 1e-12) -> bool:
        """
        Entrywise comparison within an absolute tolerance.
        """
        return bool(np.allclose(self.matrix, other.matrix, rtol = 0, atol = atol))


def identity() -> Unitary2:
    return Unitary2(np.eye(2))

def pauli(axis: Literal['x', 'y', 'z']) -> Unitary2:
    """
    Pauli matrix along one axis.

    Args:
        axis: One of 'x', 'y' or 'z'.

    Returns:
        sigma_x, sigma_y or sigma_z in the computational basis.
    """
    if axis == 'x':
        return Unitary2([[0, 1], [1, 0]])
    if axis == 'y':
        return Unitary2([[0, -1j], [1j, 0]])
    if axis == 'z':
        return Unitary2([[1, 0], [0, -1]])
    raise ValueError(f'Unknown Pauli axis {axis!r}, expected one of x, y, z')

def rotation_y(theta: float) -> Unitary2:
    """
    Rotation about the y axis of the Bloch sphere, exp(-i theta sigma_y / 2), in closed form.

    Args:
        theta: Rotation angle in radians.

    Returns:
        [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]
    """
    if not math.isfinite(theta):
        raise ValueError(f'Rotation angle must be finite, got {theta}')
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return Unitary2([[c, -s], [s, c]])

def hadamard() -> Unitary2:
    return Unitary2(np.array([[1, 1], [1, -1]]) / math.sqrt(2))

def apply(u: Unitary2, s: QubitState) -> QubitState:
    """
    Apply an operator to a state.

    Args:
        u: Operator. Must be unitary within UNITARY_TOLERANCE.
        s: Input state.

    Returns:
        The state u|s>.

    Raises:
        NonUnitaryError: If u is not unitary.
    """
    residual = u.unitarity_residual()
    if residual > UNITARY_TOLERANCE:
        raise NonUnitaryError(f'Operator is not unitary (residual {residual:.3e})')

    return QubitState.from_vector(u.matrix @ s.vector)

def compose(u_list: Iterable[Unitary2]) -> Unitary2:
    """
    Chain operators in application order: compose([U1, U2, U3]) = U3 U2 U1. An empty chain is the
    identity.

    Args:
        u_list: Operators, first-applied first.

    Returns:
        The total operator.
    """
    total = np.eye(2, dtype = np.complex128)
    for u in u_list:
        residual = u.unitarity_residual()
        if residual > UNITARY_TOLERANCE:
            raise NonUnitaryError(f'Operator in chain is not unitary (residual {residual:.3e})')
        total = u.matrix @ total
    return Unitary2(total)


@dataclass(frozen = True)
class BlochAngles:
    """
    Polar/azimuthal coordinates of a pure state on the Bloch sphere.

    Args:
        theta: Polar angle in [0, pi].
        phi: Azimuth in [0, 2 pi).
    """
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0 <= self.theta <= math.pi:
            raise ValueError(f'theta must lie in [0, pi], got {self.theta}')
        if not 0 <= self.phi < _TWO_PI:
            raise ValueError(f'phi must lie in [0, 2pi), got {self.phi}')


def bloch_from_state(s: QubitState) -> BlochAngles:
    """
    Bloch coordinates of a state, with the global phase chosen so that c0 is real non-negative.
    The azimuth of either pole is defined as 0.
    """
    r0, r1 = abs(s.c0), abs(s.c1)
    theta = min(2 * math.atan2(r1, r0), math.pi)

    if r0 <= _POLE_TOLERANCE or r1 <= _POLE_TOLERANCE:
        return BlochAngles(theta, 0.0)

    phi = (cmath.phase(s.c1) - cmath.phase(s.c0)) % _TWO_PI
    if phi >= _TWO_PI:
        phi = 0.0
    return BlochAngles(theta, phi)

def state_from_bloch(b: BlochAngles) -> QubitState:
    """
    The state cos(theta/2)|0> + e^(i phi) sin(theta/2)|1>.
    """
    return QubitState(math.cos(b.theta / 2), cmath.exp(1j * b.phi) * math.sin(b.theta / 2))
