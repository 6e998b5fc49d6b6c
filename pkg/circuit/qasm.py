import logging
import math
import re
from pathlib import Path
from typing import TextIO

from circuit.circuit import Circuit, Gate, GateKind

logger = logging.getLogger(__name__)

HEADER = ('OPENQASM 2.0;', 'include "qelib1.inc";', 'qreg q[1];', 'creg c[1];')
MEASURE = 'measure q[0] -> c[0];'

# Statement patterns. Whitespace between tokens is tolerated on input; emission is canonical.
_HEADER_PATTERNS = (
    re.compile(r'OPENQASM\s+2\.0\s*;'),
    re.compile(r'include\s+"qelib1\.inc"\s*;'),
    re.compile(r'qreg\s+q\s*\[\s*(?P<size>\d+)\s*\]\s*;'),
    re.compile(r'creg\s+c\s*\[\s*(?P<size>\d+)\s*\]\s*;'),
)
_STATEMENT = re.compile(r'(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*(?:\((?P<params>[^)]*)\))?\s*(?P<args>[^;]*);')
_QUBIT = re.compile(r'q\s*\[\s*(?P<index>\d+)\s*\]')
_MEASURE_ARGS = re.compile(r'q\s*\[\s*(?P<q>\d+)\s*\]\s*->\s*c\s*\[\s*(?P<c>\d+)\s*\]')
_DECIMAL = re.compile(r'[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?')


class QasmParseError(ValueError):
    """
    Raised when circuit text falls outside the supported single-qubit grammar.

    Args:
        message: Diagnostic.
        line: 1-based line number.
        column: 1-based column number.
    """
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f'{line}:{column}: {message}')
        self.message = message
        self.line = line
        self.column = column


def format_angle(angle: float) -> str:
    """
    Shortest decimal that reads back to the same binary64 value.
    """
    return repr(float(angle))

def emit(c: Circuit) -> str:
    """
    Serialize a circuit to OpenQASM 2.0 text, one statement per line.
    """
    lines = list(HEADER)
    for gate in c.gates:
        if gate.kind is GateKind.RY:
            lines.append(f'ry({format_angle(gate.angle)}) q[0];')
        else:
            lines.append('h q[0];')
    if c.measured:
        lines.append(MEASURE)
    return ''.join(f'{line}\n' for line in lines)

def _strip_comment(line: str) -> str:
    idx = line.find('//')
    return line if idx < 0 else line[:idx]

def _check_qubit(args: str, number: int, column: int):
    """
    Validate a gate's operand, which must be q[0].
    """
    m = _QUBIT.fullmatch(args.strip())
    if not m:
        raise QasmParseError(f'expected operand q[0], got {args.strip()!r}', number, column)
    if m['index'] != '0':
        raise QasmParseError(f'qubit index {m["index"]} out of range for single-qubit register',
                             number, column)

def parse(text: str) -> Circuit:
    """
    Parse circuit text. Accepts the emitted grammar plus '//' comments and blank lines.

    Args:
        text: QASM source.

    Returns:
        The parsed circuit.

    Raises:
        QasmParseError: With line and column of the first offending token.
    """
    header_seen = 0
    gates: list[Gate] = []
    measured = False
    last_line = 0

    for number, raw in enumerate(text.splitlines(), start = 1):
        last_line = number
        code = _strip_comment(raw)
        stripped = code.strip()
        if not stripped:
            continue
        column = len(code) - len(code.lstrip()) + 1

        if header_seen < len(_HEADER_PATTERNS):
            m = _HEADER_PATTERNS[header_seen].fullmatch(stripped)
            if not m:
                raise QasmParseError(f'expected {HEADER[header_seen]!r}', number, column)
            if 'size' in m.groupdict() and m['size'] != '1':
                size_column = column + m.start('size')
                raise QasmParseError(f'unsupported register size {m["size"]}: only single-qubit '
                                     f'registers are allowed', number, size_column)
            header_seen += 1
            continue

        m = _STATEMENT.fullmatch(stripped)
        if not m:
            raise QasmParseError(f'malformed statement {stripped!r}', number, column)

        if measured:
            raise QasmParseError('measurement must be the last operation', number, column)

        name = m['name']
        args_column = column + m.start('args')

        if name == 'ry':
            if m['params'] is None:
                raise QasmParseError('ry needs an angle', number, column + m.end('name'))
            param = m['params'].strip()
            param_column = column + m.start('params') + (len(m['params']) - len(m['params'].lstrip()))
            if not _DECIMAL.fullmatch(param):
                raise QasmParseError(f'angle {param!r} is not a decimal number', number, param_column)
            angle = float(param)
            if not math.isfinite(angle):
                raise QasmParseError(f'angle {param!r} is not finite', number, param_column)
            _check_qubit(m['args'], number, args_column)
            gates.append(Gate.ry(angle))
        elif name == 'h':
            if m['params'] is not None:
                raise QasmParseError('h takes no parameters', number, column + m.end('name'))
            _check_qubit(m['args'], number, args_column)
            gates.append(Gate.h())
        elif name == 'measure':
            a = _MEASURE_ARGS.fullmatch(m['args'].strip())
            if m['params'] is not None or not a:
                raise QasmParseError('expected measure q[0] -> c[0]', number, args_column)
            if a['q'] != '0' or a['c'] != '0':
                raise QasmParseError('register index out of range for single-qubit registers',
                                     number, args_column)
            measured = True
        elif name in ('qreg', 'creg'):
            raise QasmParseError(f'{name} redeclared; only one single-qubit register is allowed',
                                 number, column)
        else:
            raise QasmParseError(f'unsupported gate {name!r}', number, column)

    if header_seen < len(_HEADER_PATTERNS):
        raise QasmParseError(f'missing {HEADER[header_seen]!r}', max(last_line, 1), 1)

    return Circuit(tuple(gates), measured)

def read_circuit(source: str | Path | TextIO) -> Circuit:
    """
    Parse a circuit from a .qasm file or an open text stream (e.g. standard input).
    """
    if hasattr(source, 'read'):
        return parse(source.read())
    return parse(Path(source).read_text())

def write_circuit(path: str | Path, c: Circuit):
    path = Path(path)
    path.parent.mkdir(parents = True, exist_ok = True)
    with open(path, 'w', newline = '') as f:
        f.write(emit(c))

    logger.debug(f'Wrote circuit with {len(c.gates)} gates to {path}')
