import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

from qubit import bloch_from_state
from measurement import PRNG_ALGORITHM
from harness.experiment import ExperimentPlan, EntryResult
from harness.online import OnlineWindow

logger = logging.getLogger(__name__)

RESULT_FIELDS = ('tau', 'tau1', 'true_f1', 'mean_raw', 'std_raw', 'mean_corrected', 'std_corrected',
                 'eps', 'eps_raw', 'n_reps', 'n_shots', 'seed', 'noise_profile')
REPETITION_FIELDS = ('tau', 'tau1', 'rep', 'raw', 'corrected', 'eps')
ONLINE_FIELDS = ('window', 'sequence', 'tau', 'tau1', 'true_f1', 'theta', 'raw', 'corrected', 'eps')
PLOT_FIELDS = ('f', 'mean_raw', 'std_raw', 'mean_corrected', 'std_corrected')

_INT_FIELDS = {'tau', 'tau1', 'n_reps', 'n_shots', 'seed'}


class ResultsFormatError(ValueError):
    """
    Raised when a results CSV cannot be read back.

    Args:
        message: Diagnostic.
        line: 1-based line number, or 0 for whole-file problems.
    """
    def __init__(self, message: str, line: int = 0):
        super().__init__(f'line {line}: {message}' if line else message)
        self.line = line


@dataclass(frozen = True)
class ResultRow:
    """
    One aggregated row of a results CSV.
    """
    tau: int
    tau1: int
    true_f1: float
    mean_raw: float
    std_raw: float
    mean_corrected: float
    std_corrected: float
    eps: float
    eps_raw: float
    n_reps: int
    n_shots: int
    seed: int
    noise_profile: str


def _fmt(x: float) -> str:
    return repr(float(x))

def _writer(f: TextIO, master_seed: int, fields: Iterable[str]):
    f.write(f'# prng={PRNG_ALGORITHM} master_seed={master_seed}\n')
    writer = csv.writer(f, lineterminator = '\n')
    writer.writerow(fields)
    return writer

def write_results(f: TextIO, plan: ExperimentPlan, results: Iterable[EntryResult]):
    """
    Write one aggregated row per entry. Floats use their shortest round-trip form, so equal
    plans and seeds give byte-identical files.
    """
    writer = _writer(f, plan.master_seed, RESULT_FIELDS)
    for result in results:
        seq, s = result.sequence, result.stats
        writer.writerow([seq.tau, seq.tau1, _fmt(seq.f1), _fmt(s.mean_raw), _fmt(s.std_raw),
                         _fmt(s.mean_corrected), _fmt(s.std_corrected), _fmt(s.eps),
                         _fmt(s.eps_raw), s.n_reps, plan.n_shots, plan.master_seed,
                         plan.noise_label])

def write_repetitions(f: TextIO, plan: ExperimentPlan, results: Iterable[EntryResult]):
    """
    Long format: one row per repetition with its raw, corrected and error values.
    """
    writer = _writer(f, plan.master_seed, REPETITION_FIELDS)
    for result in results:
        seq = result.sequence
        for rep, (run, eps) in enumerate(zip(result.runs, result.stats.eps_per_rep)):
            writer.writerow([seq.tau, seq.tau1, rep, _fmt(run.raw), _fmt(run.corrected), _fmt(eps)])

def write_plot_data(f: TextIO, results: Iterable[EntryResult]):
    """
    Whitespace-separated columns for gnuplot: f mean_raw std_raw mean_corrected std_corrected.
    """
    f.write(f'# {" ".join(PLOT_FIELDS)}\n')
    for result in results:
        s = result.stats
        f.write(' '.join(_fmt(x) for x in (result.sequence.f1, s.mean_raw, s.std_raw,
                                           s.mean_corrected, s.std_corrected)) + '\n')

def write_online(f: TextIO, windows: Iterable[OnlineWindow], master_seed: int):
    """
    One row per online window. Rows are written as windows complete.
    """
    writer = _writer(f, master_seed, ONLINE_FIELDS)
    for w in windows:
        seq = w.sequence
        theta = bloch_from_state(w.state).theta
        writer.writerow([w.index, seq.to_string(), seq.tau, seq.tau1, _fmt(seq.f1), _fmt(theta),
                         _fmt(w.decoded.raw), _fmt(w.decoded.corrected),
                         _fmt(abs(seq.f1 - w.decoded.corrected))])

def _parse_row(record: dict[str, str], line: int) -> ResultRow:
    values = {}
    for name in RESULT_FIELDS:
        text = record[name]
        try:
            if name in _INT_FIELDS:
                values[name] = int(text)
            elif name == 'noise_profile':
                values[name] = text
            else:
                values[name] = float(text)
        except ValueError:
            raise ResultsFormatError(f'bad value {text!r} for {name}', line) from None
    return ResultRow(**values)

def read_results(source: str | Path | TextIO) -> list[ResultRow]:
    """
    Read a results CSV written by write_results. Leading '#' lines are skipped.
    """
    if not hasattr(source, 'read'):
        with open(source, newline = '') as f:
            return read_results(f)

    lines = source.read().splitlines()
    skipped = 0
    while skipped < len(lines) and lines[skipped].startswith('#'):
        skipped += 1

    reader = csv.reader(lines[skipped:])
    try:
        header = next(reader, None)
        if header is None:
            raise ResultsFormatError('no header row')
        if tuple(header) != RESULT_FIELDS:
            raise ResultsFormatError(f'expected header {",".join(RESULT_FIELDS)}', skipped + 1)

        rows = []
        for offset, record in enumerate(reader, start = skipped + 2):
            if len(record) != len(RESULT_FIELDS):
                raise ResultsFormatError(f'expected {len(RESULT_FIELDS)} fields, got {len(record)}',
                                         offset)
            rows.append(_parse_row(dict(zip(RESULT_FIELDS, record)), offset))
    except csv.Error as e:
        raise ResultsFormatError(str(e), skipped + reader.line_num) from None

    if not rows:
        raise ResultsFormatError('no result rows')
    return rows

def format_error_table(profiles: Iterable[list[ResultRow]]) -> str:
    """
    Error table with one column per tau1 and, per noise profile, a row of decoding errors
    followed by a row of raw errors.

    Args:
        profiles: Rows of each results file.

    Returns:
        The table, newline-terminated.
    """
    profiles = list(profiles)
    columns = sorted({row.tau1 for rows in profiles for row in rows})
    label_width = max([len('tau1')] + [len(f'eps_raw[{rows[0].noise_profile}]') for rows in profiles])
    width = 10

    def line(label: str, cells: Iterable[str]) -> str:
        return f'{label:<{label_width}} ' + ' '.join(f'{c:>{width}}' for c in cells)

    out = [line('tau1', (str(c) for c in columns))]
    out.append('-' * len(out[0]))
    for rows in profiles:
        by_tau1 = {row.tau1: row for row in rows}
        profile = rows[0].noise_profile
        for label, attr in ((f'eps[{profile}]', 'eps'), (f'eps_raw[{profile}]', 'eps_raw')):
            out.append(line(label, (f'{getattr(by_tau1[c], attr):.3e}' if c in by_tau1 else '-'
                                    for c in columns)))
    return '\n'.join(out) + '\n'

def format_summary(rows: Iterable[ResultRow]) -> str:
    """
    Plain per-row listing: tau1, mean corrected frequency with its spread, and error.
    """
    out = []
    for row in rows:
        out.append(f'tau1={row.tau1:<6} f={row.true_f1:<8.4f} '
                   f'f_hat={row.mean_corrected:.6f} +/- {row.std_corrected:.2e}  eps={row.eps:.3e}  '
                   f'[{row.noise_profile}]')
    return '\n'.join(out) + '\n'
