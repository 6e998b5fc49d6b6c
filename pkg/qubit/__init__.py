from .core import (QubitState, Unitary2, BlochAngles, NonUnitaryError, zero_state, one_state,
                   plus_state, identity, pauli, rotation_y, hadamard, apply, compose,
                   bloch_from_state, state_from_bloch)

__all__ = ['QubitState', 'Unitary2', 'BlochAngles', 'NonUnitaryError', 'zero_state', 'one_state',
           'plus_state', 'identity', 'pauli', 'rotation_y', 'hadamard', 'apply', 'compose',
           'bloch_from_state', 'state_from_bloch']
