from .dataset import DatasetSpec, build_dataset, default_points
from .experiment import (ExperimentError, ExperimentPlan, EntryResult, Percept, derive_seed,
                         sample_sequence, classify_sequence, execute_plan, run_plan)
from .online import OnlineWindow, run_online
from .results import (ResultsFormatError, ResultRow, write_results, write_repetitions,
                      write_plot_data, write_online, read_results, format_error_table, format_summary)
from .analysis import generate_analysis
from .config import ConfigFileError, parse_config, load_config, world_config_from

__all__ = ['DatasetSpec', 'build_dataset', 'default_points', 'ExperimentError', 'ExperimentPlan',
           'EntryResult', 'Percept', 'derive_seed', 'sample_sequence', 'classify_sequence',
           'execute_plan', 'run_plan', 'OnlineWindow', 'run_online', 'ResultsFormatError',
           'ResultRow', 'write_results', 'write_repetitions', 'write_plot_data', 'write_online',
           'read_results', 'format_error_table', 'format_summary', 'generate_analysis',
           'ConfigFileError', 'parse_config', 'load_config', 'world_config_from']
