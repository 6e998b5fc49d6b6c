import logging
from pathlib import Path
from typing import Iterable, TextIO

from perception.encoder import Event, EventSequence

logger = logging.getLogger(__name__)


class SequenceFormatError(ValueError):
    """
    Raised for malformed F/B sequence files.

    Args:
        message: What went wrong.
        line: 1-based line number of the offending line.
    """
    def __init__(self, message: str, line: int):
        super().__init__(f'line {line}: {message}')
        self.line = line


def parse_sequences(text: str) -> list[EventSequence]:
    """
    Parse sequence text: one window per line, characters F (front) and B (back) only, every line
    newline terminated.

    Args:
        text: Whole file content.

    Returns:
        One EventSequence per line, in file order.
    """
    if text and not text.endswith('\n'):
        raise SequenceFormatError('missing trailing newline', text.count('\n') + 1)

    sequences = []
    for number, line in enumerate(text.split('\n')[:-1], start = 1):
        if not line:
            raise SequenceFormatError('empty line', number)
        for col, c in enumerate(line, start = 1):
            if c not in 'FB':
                raise SequenceFormatError(f'unexpected character {c!r} at column {col}', number)
        sequences.append(EventSequence(tuple(Event.from_symbol(c) for c in line)))

    return sequences

def read_sequences(source: str | Path | TextIO) -> list[EventSequence]:
    """
    Read a sequence file from a path or an open text stream.
    """
    if hasattr(source, 'read'):
        return parse_sequences(source.read())

    with open(source, 'r', newline = '') as f:
        sequences = parse_sequences(f.read())

    logger.debug(f'Read {len(sequences)} sequences from {source}')
    return sequences

def format_sequences(sequences: Iterable[EventSequence]) -> str:
    return ''.join(f'{seq.to_string()}\n' for seq in sequences)

def write_sequences(path: str | Path, sequences: Iterable[EventSequence]):
    """
    Write windows one per line in the F/B format.
    """
    path = Path(path)
    path.parent.mkdir(parents = True, exist_ok = True)
    with open(path, 'w', newline = '') as f:
        f.write(format_sequences(sequences))

    logger.debug(f'Wrote sequences to {path}')
