import io
import itertools
import math
import tempfile
import unittest
from pathlib import Path

import numpy as np

from qubit import apply, rotation_y, zero_state, bloch_from_state, identity
from perception import (Event, EventSequence, EncoderConfig, InitState, ConfigurationError,
                        OnlineSession, relative_frequency, event_operator, encode_batch,
                        online_update, fold_online, SequenceFormatError, parse_sequences,
                        read_sequences, write_sequences, WorldConfig, ObjectPose, World, step,
                        sense, generate_window)


def random_sequence(rng: np.random.Generator, tau: int) -> EventSequence:
    """
    Uniformly random window of tau events.
    """
    return EventSequence(tuple(Event.BACK if b else Event.FRONT for b in rng.integers(0, 2, size = tau)))

def sequence_with(tau: int, tau1: int) -> EventSequence:
    """
    Window with tau1 back events placed first.
    """
    return EventSequence((Event.BACK,) * tau1 + (Event.FRONT,) * (tau - tau1))


class EventTests(unittest.TestCase):
    def test_alpha_values(self):
        self.assertEqual(0.0, Event.FRONT.alpha)
        self.assertEqual(math.pi, Event.BACK.alpha)
        self.assertIs(Event.BACK, Event.from_alpha(math.pi))
        self.assertIs(Event.FRONT, Event.from_alpha(0))

    def test_rejects_other_angles(self):
        with self.assertRaises(ConfigurationError):
            Event.from_alpha(math.pi / 2)
        with self.assertRaises(ConfigurationError):
            Event.from_symbol('X')

    def test_empty_sequence_rejected(self):
        with self.assertRaises(ConfigurationError):
            EventSequence(())

    def test_counts(self):
        seq = EventSequence.from_string('FBBFFB')
        self.assertEqual((6, 3, 3), (seq.tau, seq.tau0, seq.tau1))
        self.assertEqual('FBBFFB', seq.to_string())

    def test_config_validation(self):
        with self.assertRaises(ConfigurationError):
            EncoderConfig(0)
        with self.assertRaises(ConfigurationError):
            EncoderConfig(True)
        self.assertIs(InitState.PLUS, EncoderConfig(3, 'plus').init)

    def test_config_accepts_numpy_integers(self):
        cfg = EncoderConfig(np.int64(10))
        self.assertEqual(10, cfg.tau)
        self.assertIs(int, type(cfg.tau))
        with self.assertRaises(ConfigurationError):
            EncoderConfig(10.0)


class RelativeFrequencyTests(unittest.TestCase):
    def test_worked_example(self):
        seq = sequence_with(12, 3)
        self.assertEqual(0.25, relative_frequency(seq, Event.BACK))
        self.assertEqual(0.75, relative_frequency(seq, Event.FRONT))

    def test_all_front(self):
        self.assertEqual(0, relative_frequency(sequence_with(9, 0), Event.BACK))

    def test_matches_naive_count(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            seq = random_sequence(rng, 10)
            count = 0
            for e in seq.events:
                if e.alpha == math.pi:
                    count += 1
            self.assertEqual(count / 10, relative_frequency(seq, Event.BACK))
            self.assertAlmostEqual(1.0, seq.f1 + relative_frequency(seq, Event.FRONT))


class EventOperatorTests(unittest.TestCase):
    def test_front_is_identity_from_zero(self):
        self.assertEqual(identity(), event_operator(Event.FRONT, EncoderConfig(10)))

    def test_back_from_zero(self):
        self.assertEqual(rotation_y(math.pi / 4), event_operator(Event.BACK, EncoderConfig(4)))

    def test_plus_variant(self):
        cfg = EncoderConfig(10, InitState.PLUS)
        self.assertTrue(event_operator(Event.BACK, cfg).allclose(rotation_y(math.pi / 20)))
        self.assertTrue(event_operator(Event.FRONT, cfg).allclose(rotation_y(-math.pi / 20)))


class EncodeBatchTests(unittest.TestCase):
    def test_worked_example_quarter_turn(self):
        state = encode_batch(sequence_with(12, 3), EncoderConfig(12))
        self.assertAlmostEqual(math.pi / 4, bloch_from_state(state).theta, delta = 1e-12)
        self.assertLess(state.distance(apply(rotation_y(math.pi / 4), zero_state())), 1e-15)

    def test_no_back_events_stays_at_zero(self):
        self.assertEqual(zero_state(), encode_batch(sequence_with(7, 0), EncoderConfig(7)))

    def test_midpoint_both_variants(self):
        for init in InitState:
            state = encode_batch(sequence_with(10, 5), EncoderConfig(10, init))
            self.assertAlmostEqual(math.pi / 2, bloch_from_state(state).theta, delta = 1e-12)
            self.assertAlmostEqual(0.5, state.p1, delta = 1e-12)

    def test_length_mismatch(self):
        with self.assertRaises(ConfigurationError):
            encode_batch(sequence_with(5, 1), EncoderConfig(6))

    def test_encoding_law(self):
        """
        Tests theta = pi * tau1 / tau for every tau up to 200 and every tau1.
        """
        for tau in range(1, 201):
            cfg = EncoderConfig(tau)
            for tau1 in range(tau + 1):
                b = bloch_from_state(encode_batch(sequence_with(tau, tau1), cfg))
                self.assertAlmostEqual(math.pi * tau1 / tau, b.theta, delta = 1e-10)
                self.assertEqual(0.0, b.phi)

    def test_encoding_law_large_windows(self):
        rng = np.random.default_rng(2)
        for tau in (500, 999, 1000):
            seq = random_sequence(rng, tau)
            b = bloch_from_state(encode_batch(seq, EncoderConfig(tau)))
            self.assertAlmostEqual(math.pi * seq.tau1 / tau, b.theta, delta = 1e-10)

    def test_order_invariance(self):
        seq = EventSequence.from_string('FBBFB')
        cfg = EncoderConfig(5)
        expected = encode_batch(seq, cfg)
        for perm in set(itertools.permutations(seq.events)):
            self.assertLess(encode_batch(EventSequence(perm), cfg).distance(expected), 1e-12)

    def test_init_variants_agree(self):
        """
        Tests that |0> and |+> initialisations give identical states on 500 random windows.
        """
        rng = np.random.default_rng(3)
        for _ in range(500):
            tau = int(rng.integers(1, 60))
            seq = random_sequence(rng, tau)
            zero = encode_batch(seq, EncoderConfig(tau, InitState.ZERO))
            plus = encode_batch(seq, EncoderConfig(tau, InitState.PLUS))
            self.assertLess(zero.distance(plus), 1e-12)

    def test_probability_law(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            tau = int(rng.integers(1, 100))
            seq = random_sequence(rng, tau)
            state = encode_batch(seq, EncoderConfig(tau))
            self.assertAlmostEqual(math.sin(math.pi * seq.f1 / 2) ** 2, state.p1, delta = 1e-10)


class OnlineTests(unittest.TestCase):
    def test_front_from_zero(self):
        self.assertEqual(zero_state(), online_update(zero_state(), Event.FRONT, EncoderConfig(3)))

    def test_first_gate(self):
        state = online_update(zero_state(), Event.BACK, EncoderConfig(4))
        self.assertAlmostEqual(math.pi / 4, bloch_from_state(state).theta, delta = 1e-12)

    def test_fold_equals_batch(self):
        """
        Tests online folding against batch encoding on 500 random windows, both variants.
        """
        rng = np.random.default_rng(5)
        for i in range(500):
            tau = 20 if i < 100 else int(rng.integers(1, 200))
            seq = random_sequence(rng, tau)
            for init in InitState:
                cfg = EncoderConfig(tau, init)
                self.assertLess(fold_online(seq, cfg).distance(encode_batch(seq, cfg)), 1e-12)

    def test_session_lifecycle(self):
        cfg = EncoderConfig(3)
        session = OnlineSession(cfg)
        for e in (Event.BACK, Event.FRONT):
            session.push(e)
        self.assertFalse(session.complete)
        session.push(Event.BACK)
        self.assertTrue(session.complete)
        self.assertLess(session.state.distance(encode_batch(session.window(), cfg)), 1e-12)

        with self.assertRaises(ConfigurationError):
            session.push(Event.FRONT)

        session.reset()
        self.assertEqual(0, session.seen)
        self.assertEqual(zero_state(), session.state)


class SequenceFormatTests(unittest.TestCase):
    def test_parse(self):
        seqs = parse_sequences('FFB\nBBFB\n')
        self.assertEqual(['FFB', 'BBFB'], [s.to_string() for s in seqs])

    def test_errors_carry_line(self):
        with self.assertRaises(SequenceFormatError) as ctx:
            parse_sequences('FFB\nF B\n')
        self.assertEqual(2, ctx.exception.line)
        with self.assertRaises(SequenceFormatError):
            parse_sequences('FFB')
        with self.assertRaises(SequenceFormatError):
            parse_sequences('FFB\n\nBB\n')

    def test_file_round_trip(self):
        seqs = [EventSequence.from_string(s) for s in ('F', 'BFB', 'BBBB')]
        with tempfile.TemporaryDirectory() as d:
            path = Path(d) / 'seqs.txt'
            write_sequences(path, seqs)
            self.assertEqual(b'F\nBFB\nBBBB\n', path.read_bytes())
            self.assertEqual(seqs, read_sequences(path))
        self.assertEqual(seqs, read_sequences(io.StringIO('F\nBFB\nBBBB\n')))


class WorldTests(unittest.TestCase):
    def test_zero_sigma_pins_object(self):
        cfg = WorldConfig(step_sigma = 0.0)
        pose = ObjectPose(1.0, 0.5)
        self.assertEqual(pose, step(pose, cfg, np.random.default_rng(0)))

    def test_tiny_sigma_barely_moves(self):
        cfg = WorldConfig(step_sigma = 1e-12)
        pose = step(ObjectPose(1.0, 0.5), cfg, np.random.default_rng(0))
        self.assertAlmostEqual(1.0, pose.x, places = 9)
        self.assertAlmostEqual(0.5, pose.y, places = 9)

    def test_inward_step_projects_to_inner_radius(self):
        cfg = WorldConfig(r_min = 0.5, r_max = 3.0, step_sigma = 1.0)

        class Inward:
            def normal(self, loc, scale, size):
                return np.array([-0.2, 0.0])

        pose = step(ObjectPose(0.5, 0.0), cfg, Inward())
        self.assertAlmostEqual(0.5, pose.radius, places = 15)
        self.assertGreaterEqual(pose.radius, 0.5)
        self.assertGreater(pose.x, 0)

    def test_annulus_containment(self):
        """
        Tests that a 10^6-step walk never leaves [r_min, r_max].
        """
        cfg = WorldConfig(r_min = 0.5, r_max = 2.0, step_sigma = 0.4, seed = 9)
        world = World(cfg)
        low, high = math.inf, -math.inf
        for _ in range(1_000_000):
            world.sample()
            r = math.hypot(world.pose.x, world.pose.y)
            low, high = min(low, r), max(high, r)
        self.assertGreaterEqual(low, cfg.r_min)
        self.assertLessEqual(high, cfg.r_max)
        self.assertEqual(1_000_000, world.samples)

    def test_sense(self):
        self.assertIs(Event.FRONT, sense(ObjectPose(1, 0.3)))
        self.assertIs(Event.BACK, sense(ObjectPose(-1, 0.1)))
        # Boundary bearings go to the back sensor.
        self.assertIs(Event.BACK, sense(ObjectPose(0.0, 1.0)))
        self.assertIs(Event.BACK, sense(ObjectPose(0.0, -1.0)))

    def test_frequency_matches_pose_recount(self):
        world = World(WorldConfig(seed = 21), record_trace = True)
        seq = world.generate_window(5000)
        back = sum(1 for _, x, y, _ in world.trace if abs(math.atan2(y, x)) >= math.pi / 2)
        self.assertEqual(back / 5000, seq.f1)
        self.assertEqual(5000, len(world.trace))

    def test_generate_window(self):
        cfg = WorldConfig(seed = 4)
        self.assertEqual(1, generate_window(cfg, 1, np.random.default_rng(1)).tau)

        seq = World(cfg).generate_window(1000)
        self.assertEqual(1000, seq.tau0 + seq.tau1)
        self.assertEqual(seq.to_string(), World(cfg).generate_window(1000).to_string())

    def test_window_encodes_online_and_batch_alike(self):
        world = World(WorldConfig(seed = 8))
        cfg = EncoderConfig(50)
        for _ in range(20):
            seq = world.generate_window(cfg.tau)
            self.assertLess(fold_online(seq, cfg).distance(encode_batch(seq, cfg)), 1e-12)

    def test_config_validation(self):
        with self.assertRaises(ValueError):
            WorldConfig(r_min = 2.0, r_max = 1.0)
        with self.assertRaises(ValueError):
            WorldConfig(start_x = 10.0)


if __name__ == '__main__':
    unittest.main()
