from .calibration import (CalibrationError, QubitCalibration, BackendCalibration, parse_calibration,
                          load_calibration, load_bundled, bundled_calibrations, resolve_calibration)
from .sampler import (PRNG_ALGORITHM, ShotResult, NoiseModel, make_rng, measure_shots,
                      noisy_encode_shots, noise_from_calibration)
from .decoder import DecodedFrequency, RunStatistics, correct, decode, decoding_error, aggregate

__all__ = ['CalibrationError', 'QubitCalibration', 'BackendCalibration', 'parse_calibration',
           'load_calibration', 'load_bundled', 'bundled_calibrations', 'resolve_calibration',
           'PRNG_ALGORITHM', 'ShotResult', 'NoiseModel', 'make_rng', 'measure_shots',
           'noisy_encode_shots', 'noise_from_calibration', 'DecodedFrequency', 'RunStatistics',
           'correct', 'decode', 'decoding_error', 'aggregate']
