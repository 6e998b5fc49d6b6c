from .circuit import Gate, GateKind, Circuit, compile_sequence, simulate
from .qasm import QasmParseError, emit, parse, format_angle, read_circuit, write_circuit

__all__ = ['Gate', 'GateKind', 'Circuit', 'compile_sequence', 'simulate', 'QasmParseError', 'emit',
           'parse', 'format_angle', 'read_circuit', 'write_circuit']
