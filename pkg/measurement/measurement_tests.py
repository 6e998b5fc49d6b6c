import math
import statistics
import unittest

from qubit import BlochAngles, QubitState, state_from_bloch, zero_state, one_state
from perception import EventSequence, EncoderConfig, InitState, encode_batch
from measurement import (CalibrationError, parse_calibration, load_bundled, bundled_calibrations,
                         resolve_calibration, ShotResult, NoiseModel, measure_shots,
                         noisy_encode_shots, noise_from_calibration, DecodedFrequency, correct,
                         decode, decoding_error, aggregate)

N = 2 ** 13


def within_sigmas(observed: float, expected: float, n: int, k: float = 4.0) -> bool:
    """
    Whether a sample proportion lies within k binomial standard deviations of its expectation.
    """
    sigma = math.sqrt(expected * (1 - expected) / n)
    return abs(observed - expected) <= k * sigma


class CalibrationTests(unittest.TestCase):
    def test_bundled_datasheets(self):
        self.assertEqual(['armonk', 'burlington'], bundled_calibrations())

        armonk = load_bundled('armonk')
        self.assertEqual(('armonk', 1), (armonk.name, len(armonk)))
        self.assertEqual(0.0815, armonk[0].readout_error)
        self.assertEqual(144.311046943353, armonk[0].t1_us)

        burlington = load_bundled('Burlington')
        self.assertEqual(5, len(burlington))
        self.assertEqual([0.1865, 0.152, 0.0855, 0.1325, 0.072],
                         [q.readout_error for q in burlington.qubits])

    def test_resolve_by_name(self):
        self.assertEqual('burlington', resolve_calibration('burlington.cal').name)

    def test_unknown_bundled(self):
        with self.assertRaises(CalibrationError):
            load_bundled('tokyo')

    def test_t2_bound(self):
        with self.assertRaises(CalibrationError) as ctx:
            parse_calibration('x,0,10.0,25.0,5.0,0.1,0.001\n', 'bad.cal')
        self.assertIn('bad.cal:1', str(ctx.exception))

    def test_malformed_records(self):
        for text in ('x,0,10.0,5.0\n',
                     'x,0,10.0,5.0,5.0,0.1,abc\n',
                     'x,0,10.0,5.0,5.0,1.5,0.001\n',
                     'x,0,10.0,5.0,5.0,0.1,0.001\ny,1,10.0,5.0,5.0,0.1,0.001\n',
                     'x,1,10.0,5.0,5.0,0.1,0.001\n',
                     '# nothing\n'):
            with self.subTest(text = text):
                with self.assertRaises(CalibrationError):
                    parse_calibration(text)

    def test_index_out_of_range(self):
        with self.assertRaises(IndexError):
            load_bundled('armonk')[1]


class NoiseModelTests(unittest.TestCase):
    def test_from_armonk(self):
        noise = noise_from_calibration(load_bundled('armonk'), 0, 0.0)
        self.assertEqual(0.0815, noise.readout_flip)
        self.assertAlmostEqual(7.9098e-4, noise.gate_depolarizing, delta = 1e-8)
        self.assertEqual('armonk:q0', noise.label)

    def test_from_burlington_q2(self):
        self.assertEqual(0.0855, noise_from_calibration(load_bundled('burlington'), 2, 0.0).readout_flip)

    def test_zero_gate_time_disables_damping(self):
        noise = noise_from_calibration(load_bundled('burlington'), 4, 0.0, damping_enabled = True)
        self.assertEqual(0.0, noise.damping_gamma)

    def test_damping_gamma(self):
        noise = NoiseModel(gate_time_us = 10.0, damping_enabled = True, t1_us = 10.0)
        self.assertAlmostEqual(1 - math.exp(-1), noise.damping_gamma, places = 15)

    def test_bad_qubit(self):
        with self.assertRaises(IndexError):
            noise_from_calibration(load_bundled('burlington'), 5, 0.0)

    def test_validation(self):
        with self.assertRaises(ValueError):
            NoiseModel(readout_flip = 1.5)
        with self.assertRaises(ValueError):
            NoiseModel(damping_enabled = True)

    def test_trivial(self):
        self.assertTrue(NoiseModel().is_trivial)
        self.assertFalse(NoiseModel(readout_flip = 0.01).is_trivial)


class MeasureShotsTests(unittest.TestCase):
    def test_basis_states(self):
        self.assertEqual(0, measure_shots(zero_state(), N, seed = 1).n1)
        self.assertEqual(N, measure_shots(one_state(), N, seed = 1).n1)

    def test_rejects_zero_shots(self):
        with self.assertRaises(ValueError):
            measure_shots(zero_state(), 0)

    def test_rejects_bad_seed(self):
        with self.assertRaises(ValueError):
            measure_shots(zero_state(), 10, seed = -1)
        with self.assertRaises(ValueError):
            measure_shots(zero_state(), 10, seed = 2 ** 64)

    def test_deterministic(self):
        state = state_from_bloch(BlochAngles(1.0))
        self.assertEqual(measure_shots(state, N, seed = 42), measure_shots(state, N, seed = 42))
        self.assertEqual(42, measure_shots(state, N, seed = 42).seed)

    def test_equator_concentration(self):
        """
        Tests that a theta = pi/2 state yields N1/N within 0.0221 of 0.5 across 50 seeds.
        """
        state = state_from_bloch(BlochAngles(math.pi / 2))
        for seed in range(50):
            shots = measure_shots(state, N, seed = seed)
            self.assertEqual(N, shots.n0 + shots.n1)
            self.assertLessEqual(abs(shots.n1 / N - 0.5), 4 * math.sqrt(0.25 / N))

    def test_convergence(self):
        state = state_from_bloch(BlochAngles(math.pi / 3))
        for n in (2 ** 7, 2 ** 10, 2 ** 13):
            shots = measure_shots(state, n, seed = n)
            self.assertTrue(within_sigmas(shots.n1 / n, state.p1, n, k = 3))

    def test_readout_flip_expectation(self):
        """
        Tests the per-shot readout flip path against q(1 - p) + (1 - q)p.
        """
        state = state_from_bloch(BlochAngles(math.pi / 4))
        p, q, n = 0.1, state.p1, 2 ** 16
        shots = measure_shots(state, n, NoiseModel(readout_flip = p), seed = 3)
        self.assertTrue(within_sigmas(shots.n1 / n, q * (1 - p) + (1 - q) * p, n, k = 3))

    def test_counts_conserved_under_noise(self):
        shots = measure_shots(QubitState(0.6, 0.8), 1000, NoiseModel(readout_flip = 0.3), seed = 5)
        self.assertEqual(1000, shots.n0 + shots.n1)

    def test_shot_result_invariant(self):
        with self.assertRaises(ValueError):
            ShotResult(10, 3, 4, 0)


class NoisyEncodeTests(unittest.TestCase):
    def test_trivial_noise_matches_noiseless(self):
        seq = EventSequence.from_string('BFBBFFBFFB')
        for init in InitState:
            cfg = EncoderConfig(10, init)
            expected = measure_shots(encode_batch(seq, cfg), N, None, seed = 77)
            self.assertEqual(expected, noisy_encode_shots(seq, cfg, N, NoiseModel(), seed = 77))

    def test_readout_on_deterministic_zero(self):
        """
        Tests that a window without back events reads 1 at the calibrated readout error rate.
        """
        seq = EventSequence.from_string('F' * 10)
        n = 200_000
        for name, qubit, p in (('armonk', 0, 0.0815), ('burlington', 0, 0.1865)):
            noise = noise_from_calibration(load_bundled(name), qubit, 0.05)
            shots = noisy_encode_shots(seq, EncoderConfig(10), n, noise, seed = 11)
            self.assertTrue(within_sigmas(shots.n1 / n, p, n), (name, shots.n1 / n))

    def test_depolarizing_after_half_turn(self):
        """
        After ry(pi) a certain Pauli error leaves |1> (Z) or flips to |0> (X, Y): P(1) = 1/3.
        """
        n = 60_000
        shots = noisy_encode_shots(EventSequence.from_string('B'), EncoderConfig(1), n,
                                   NoiseModel(gate_depolarizing = 1.0), seed = 12)
        self.assertTrue(within_sigmas(shots.n1 / n, 1 / 3, n))

    def test_amplitude_damping(self):
        n = 60_000
        noise = NoiseModel(gate_time_us = 50.0 * math.log(2), damping_enabled = True, t1_us = 50.0)
        shots = noisy_encode_shots(EventSequence.from_string('B'), EncoderConfig(1), n, noise,
                                   seed = 13)
        self.assertTrue(within_sigmas(shots.n1 / n, 0.5, n))

    def test_damping_trajectory_is_unbiased(self):
        """
        Tests damping on a superposition: the expected |1> population after the channel is
        (1 - gamma) |c1|^2.
        """
        n = 100_000
        gamma = 0.3
        noise = NoiseModel(gate_time_us = -10.0 * math.log(1 - gamma), damping_enabled = True,
                           t1_us = 10.0)
        seq = EventSequence.from_string('BF')
        shots = noisy_encode_shots(seq, EncoderConfig(2), n, noise, seed = 14)
        self.assertTrue(within_sigmas(shots.n1 / n, (1 - gamma) * 0.5, n))

    def test_deterministic(self):
        seq = EventSequence.from_string('BFBB')
        noise = noise_from_calibration(load_bundled('burlington'), 1, 0.1)
        cfg = EncoderConfig(4, InitState.PLUS)
        self.assertEqual(noisy_encode_shots(seq, cfg, 5000, noise, seed = 9),
                         noisy_encode_shots(seq, cfg, 5000, noise, seed = 9))


class DecoderTests(unittest.TestCase):
    def test_midpoint(self):
        d = decode(ShotResult(N, 4096, 4096, 0))
        self.assertEqual(0.5, d.raw)
        self.assertAlmostEqual(0.5, d.corrected, places = 15)

    def test_endpoints_exact(self):
        self.assertEqual(1.0, decode(ShotResult(N, 0, N, 0)).corrected)
        self.assertEqual(0.0, decode(ShotResult(N, N, 0, 0)).corrected)
        self.assertEqual(1.0, correct(1 + 1e-16))
        self.assertEqual(0.0, correct(-1e-18))

    def test_quarter(self):
        self.assertAlmostEqual(0.25, correct(math.sin(math.pi / 8) ** 2), delta = 1e-12)

    def test_front_and_back_sum_to_one(self):
        d = decode(ShotResult(1000, 731, 269, 0))
        self.assertAlmostEqual(1.0, d.corrected + d.corrected_front, delta = 1e-12)

    def test_inverse_law(self):
        for i in range(1001):
            f = i / 1000
            self.assertAlmostEqual(f, correct(math.sin(math.pi * f / 2) ** 2), delta = 1e-12)

    def test_monotonic(self):
        values = [correct(n1 / N) for n1 in range(N + 1)]
        self.assertTrue(all(a < b for a, b in zip(values, values[1:])))

    def test_decoding_error(self):
        self.assertEqual(0.0, decoding_error(0.25, DecodedFrequency(0.1, 0.25, 0.9)))
        self.assertAlmostEqual(0.02, decoding_error(0.3, DecodedFrequency(0.1, 0.28, 0.9)), places = 15)
        with self.assertRaises(ValueError):
            decoding_error(1.2, DecodedFrequency(0.1, 0.28, 0.9))


class AggregateTests(unittest.TestCase):
    def test_single_run(self):
        stats = aggregate([DecodedFrequency(0.5, 0.5, 0.5)], 0.5)
        self.assertEqual((0.5, 0.0, 0.0, 1), (stats.mean_corrected, stats.std_corrected, stats.eps,
                                             stats.n_reps))

    def test_empty(self):
        with self.assertRaises(ValueError):
            aggregate([], 0.5)

    def test_sample_std(self):
        runs = [DecodedFrequency(r, correct(r), 1 - r) for r in (0.1, 0.2, 0.4, 0.35)]
        stats = aggregate(runs, 0.3)
        self.assertAlmostEqual(statistics.stdev([0.1, 0.2, 0.4, 0.35]), stats.std_raw, places = 15)
        self.assertAlmostEqual(abs(0.3 - statistics.mean([0.1, 0.2, 0.4, 0.35])), stats.eps_raw,
                               places = 15)
        self.assertEqual(4, len(stats.eps_per_rep))

    def test_noiseless_endpoint_is_exact(self):
        cfg = EncoderConfig(10)
        seq = EventSequence.from_string('F' * 10)
        runs = [decode(measure_shots(encode_batch(seq, cfg), N, seed = s)) for s in range(30)]
        stats = aggregate(runs, 0.0)
        self.assertEqual(0.0, stats.eps)
        self.assertEqual(0.0, stats.eps_raw)

    def test_noiseless_midpoint(self):
        cfg = EncoderConfig(10)
        seq = EventSequence.from_string('BBBBBFFFFF')
        runs = [decode(measure_shots(encode_batch(seq, cfg), N, seed = s)) for s in range(30)]
        stats = aggregate(runs, 0.5)
        bound = 4 * math.sqrt(0.25 / N) / math.sqrt(30)
        self.assertLessEqual(stats.eps_raw, bound)
        self.assertLessEqual(stats.eps, 5e-3)


if __name__ == '__main__':
    unittest.main()
