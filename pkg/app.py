import argparse
import csv
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

import pyfiglet

from defs import RESULTS_DIR
from qubit import bloch_from_state
from perception import (EncoderConfig, InitState, encode_batch, read_sequences, write_sequences,
                        write_trace, World)
from perception.sequence_io import format_sequences
from circuit import compile_sequence, read_circuit, simulate, write_circuit
from measurement import PRNG_ALGORITHM, NoiseModel, noise_from_calibration, resolve_calibration
from harness import (DatasetSpec, ExperimentError, ExperimentPlan, build_dataset, default_points,
                     derive_seed, classify_sequence, execute_plan, run_online, write_results,
                     write_repetitions, write_plot_data, write_online, read_results, format_error_table,
                     format_summary, generate_analysis, load_config, world_config_from)
from harness.config import ConfigFileError, parse_bool, env_flag, env_int


DEBUG = env_flag('DEBUG') # Enable debug logging.
WORKERS = env_int('WORKERS', 1) # Worker processes for run.
# Use every integer tau1 for large windows instead of the scaled grid - 10x the compute at tau=1000.
FULL_GRID = env_flag('FULL_GRID')

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """
    Argument parser that reports usage errors with exit code 1.
    """
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {text}')
    return value

def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f'expected a non-negative integer, got {text}')
    return value

def _non_negative_float(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f'expected a non-negative number, got {text}')
    return value

def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    """
    The command-line parser and its subcommand parsers by name.
    """
    common = argparse.ArgumentParser(add_help = False)
    common.add_argument('--config', help = 'key=value file with option defaults')
    common.add_argument('--debug', action = 'store_true', default = DEBUG, help = 'debug logging')

    sampling = argparse.ArgumentParser(add_help = False)
    sampling.add_argument('--seed', type = _non_negative_int, default = 0, help = 'master seed')
    sampling.add_argument('--init', type = InitState, default = InitState.ZERO,
                          metavar = '{zero,plus}', help = 'initial state variant')
    sampling.add_argument('--noise', help = 'bundled calibration name or .cal file')
    sampling.add_argument('--qubit', type = _non_negative_int, default = 0,
                          help = 'qubit of the calibration to use')
    sampling.add_argument('--gate-time-us', type = _non_negative_float, default = 0.0,
                          help = 'gate duration for amplitude damping (us)')

    parser = _ArgumentParser(prog = 'app.py', description = 'Quantum-like robot perception simulator')
    sub = parser.add_subparsers(dest = 'command', required = True)

    commands = {}
    p = commands['dataset'] = sub.add_parser('dataset', parents = [common],
                                             help = 'generate a sequence dataset')
    p.add_argument('--tau', type = _positive_int)
    p.add_argument('--points', type = _positive_int)
    p.add_argument('--seed', type = _non_negative_int, default = 0)
    p.add_argument('--full-grid', action = 'store_true', default = FULL_GRID,
                   help = 'default to tau + 1 points at any tau')
    p.add_argument('--out', help = 'sequence file (default: standard output)')

    p = commands['encode'] = sub.add_parser('encode', parents = [common, sampling],
                                            help = 'encode sequences, report Bloch angles')
    p.add_argument('--shots', type = _positive_int, help = 'also sample and classify each line')
    p.add_argument('--in', dest = 'in_path', help = "sequence file, '-' for standard input")
    p.add_argument('--emit-qasm', dest = 'emit_qasm', help = 'directory for one circuit per line')
    p.add_argument('--out', help = 'report CSV (default: standard output)')

    p = commands['run'] = sub.add_parser('run', parents = [common, sampling],
                                         help = 'repeated sampling experiments over a dataset')
    p.add_argument('--in', dest = 'in_path', help = "sequence file, '-' for standard input")
    p.add_argument('--reps', type = _positive_int, default = 30, help = 'repetitions n')
    p.add_argument('--shots', type = _positive_int, default = 2 ** 13, help = 'shots N')
    p.add_argument('--workers', type = _positive_int, default = WORKERS)
    p.add_argument('--out', help = f'results CSV (default: {RESULTS_DIR}/run_<seed>.csv)')
    p.add_argument('--reps-out', dest = 'reps_out', help = 'per-repetition CSV')
    p.add_argument('--plot-data', dest = 'plot_data', help = 'gnuplot data file')

    p = commands['online'] = sub.add_parser('online', parents = [common, sampling],
                                            help = 'online perception over a simulated world')
    p.add_argument('--tau', type = _positive_int)
    p.add_argument('--windows', type = _positive_int)
    p.add_argument('--shots', type = _positive_int, default = 2 ** 13, help = 'shots N per window')
    p.add_argument('--world-config', dest = 'world_config', help = 'key=value world settings')
    p.add_argument('--out', help = f'online CSV (default: {RESULTS_DIR}/online_<seed>.csv)')
    p.add_argument('--trace', help = 'pose trace CSV')
    p.add_argument('--events', help = 'event log, one F/B window per line')

    p = commands['report'] = sub.add_parser('report', parents = [common],
                                            help = 'format results CSVs')
    p.add_argument('--in', dest = 'in_path', nargs = '+', help = 'results CSV(s)')
    p.add_argument('--table2', action = 'store_true', help = 'error table, one row pair per file')

    p = commands['qasm'] = sub.add_parser('qasm', parents = [common],
                                          help = 'check a circuit file and simulate it')
    p.add_argument('--in', dest = 'in_path', default = '-', help = "circuit file, '-' for standard input")

    return parser, commands

def _apply_config(parser: argparse.ArgumentParser, values: dict[str, str]):
    """
    Install config file values as parser defaults, so explicit flags still win.
    """
    actions = {}
    for a in parser._actions:
        if a.dest in ('help', 'config'):
            continue
        actions[a.dest] = a
        for option in a.option_strings:
            actions[option.lstrip('-').replace('-', '_')] = a

    defaults = {}
    for key, text in values.items():
        action = actions.get(key)
        if action is None:
            raise ConfigFileError(f'Unknown setting {key!r} for {parser.prog}')
        if action.nargs == 0:
            defaults[action.dest] = parse_bool(text)
        elif action.nargs == '+':
            defaults[action.dest] = text.split()
        else:
            defaults[action.dest] = text # Converted by the action's type when parsed.
    parser.set_defaults(**defaults)

def _require(parser: argparse.ArgumentParser, args: argparse.Namespace, *names: str):
    for name in names:
        if getattr(args, name) is None:
            parser.error(f'--{name.removesuffix("_path").replace("_", "-")} is required')

@contextmanager
def _output(path: str | None, default: Path | None = None):
    """
    Open an output destination: a file, or standard output for '-' or when there is no default.
    """
    if path == '-' or (path is None and default is None):
        yield sys.stdout
        return

    target = Path(path) if path is not None else default
    target.parent.mkdir(parents = True, exist_ok = True)
    with open(target, 'w', newline = '') as f:
        yield f
    logger.info(f'Wrote {target}')

def _read_input(path: str):
    return read_sequences(sys.stdin if path == '-' else path)

def _noise(args: argparse.Namespace) -> NoiseModel | None:
    if args.noise is None:
        return None
    return noise_from_calibration(resolve_calibration(args.noise), args.qubit, args.gate_time_us)

def _cmd_dataset(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    _require(parser, args, 'tau')
    points = args.points if args.points is not None else default_points(args.tau, args.full_grid)
    if points < 2:
        parser.error('--points must be at least 2')

    sequences = build_dataset(DatasetSpec(args.tau, points, args.seed))
    with _output(args.out) as f:
        f.write(format_sequences(sequences))
    return EXIT_OK

def _cmd_encode(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    _require(parser, args, 'in_path')
    sequences = _read_input(args.in_path)
    noise = _noise(args)

    fields = ['line', 'tau', 'tau1', 'f1', 'theta', 'phi']
    if args.shots is not None:
        fields += ['raw', 'corrected', 'percept']

    with _output(args.out) as f:
        if args.shots is not None:
            f.write(f'# prng={PRNG_ALGORITHM} master_seed={args.seed}\n')
        writer = csv.writer(f, lineterminator = '\n')
        writer.writerow(fields)

        for number, seq in enumerate(sequences, start = 1):
            cfg = EncoderConfig(seq.tau, args.init)
            bloch = bloch_from_state(encode_batch(seq, cfg))
            row = [number, seq.tau, seq.tau1, repr(seq.f1), repr(bloch.theta), repr(bloch.phi)]
            if args.shots is not None:
                percept, decoded = classify_sequence(seq, cfg, args.shots, noise,
                                                     derive_seed(args.seed, number - 1, 0))
                row += [repr(decoded.raw), repr(decoded.corrected), percept.value]
            writer.writerow(row)

            if args.emit_qasm:
                write_circuit(Path(args.emit_qasm) / f'seq_{number:05d}.qasm', compile_sequence(seq, cfg))

    return EXIT_OK

def _cmd_run(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    _require(parser, args, 'in_path')
    plan = ExperimentPlan(tuple(_read_input(args.in_path)), args.shots, args.reps, _noise(args),
                          args.init, args.seed)
    results = execute_plan(plan, args.workers)

    with _output(args.out, RESULTS_DIR / f'run_{args.seed}.csv') as f:
        write_results(f, plan, results)
    if args.reps_out:
        with _output(args.reps_out) as f:
            write_repetitions(f, plan, results)
    if args.plot_data:
        with _output(args.plot_data) as f:
            write_plot_data(f, results)

    if args.out != '-':
        generate_analysis(plan, [r.stats for r in results])
    return EXIT_OK

def _cmd_online(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    _require(parser, args, 'tau', 'windows')
    world_cfg = world_config_from(load_config(args.world_config) if args.world_config else {})
    world = World(world_cfg, record_trace = args.trace is not None)
    windows = list(run_online(world_cfg, EncoderConfig(args.tau, args.init), args.windows, args.shots,
                              args.seed, _noise(args), world = world))

    with _output(args.out, RESULTS_DIR / f'online_{args.seed}.csv') as f:
        write_online(f, windows, args.seed)
    if args.trace:
        write_trace(args.trace, world.trace)
    if args.events:
        write_sequences(args.events, (w.sequence for w in windows))
    return EXIT_OK

def _cmd_report(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    _require(parser, args, 'in_path')
    profiles = [read_results(path) for path in args.in_path]
    if args.table2:
        sys.stdout.write(format_error_table(profiles))
    else:
        for rows in profiles:
            sys.stdout.write(format_summary(rows))
    return EXIT_OK

def _cmd_qasm(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    circuit = read_circuit(sys.stdin if args.in_path == '-' else args.in_path)
    bloch = bloch_from_state(simulate(circuit))
    print(f'gates={len(circuit.gates)} rotations={circuit.rotation_count} '
          f'measured={circuit.measured} theta={bloch.theta!r} phi={bloch.phi!r}')
    return EXIT_OK

_COMMANDS = {
    'dataset': _cmd_dataset,
    'encode': _cmd_encode,
    'run': _cmd_run,
    'online': _cmd_online,
    'report': _cmd_report,
    'qasm': _cmd_qasm,
}

def main(argv: list[str] | None = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 on success, 2 on data or parse errors. Usage errors exit with 1 from the parser.
    """
    parser, commands = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(level = logging.DEBUG if args.debug else logging.INFO,
                        format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    print(pyfiglet.figlet_format('QL Perception', font = 'slant'), file = sys.stderr)

    try:
        if args.config:
            _apply_config(commands[args.command], load_config(args.config))
            args = parser.parse_args(argv)
            if args.debug:
                logging.getLogger().setLevel(logging.DEBUG)
        logger.debug(f'Started {args.command} in DEBUG mode')

        return _COMMANDS[args.command](args, commands[args.command])
    except (ValueError, IndexError, OSError, ExperimentError) as e:
        logger.error(str(e))
        print(f'error: {e}', file = sys.stderr)
        return EXIT_DATA

if __name__ == '__main__':
    sys.exit(main())
