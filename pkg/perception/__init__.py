from .encoder import (Event, EventSequence, EncoderConfig, InitState, ConfigurationError,
                      OnlineSession, initial_state, relative_frequency, event_angle,
                      event_operator, encode_batch, online_update, fold_online)
from .sequence_io import SequenceFormatError, parse_sequences, read_sequences, write_sequences
from .world import WorldConfig, ObjectPose, World, step, sense, generate_window, write_trace

__all__ = ['Event', 'EventSequence', 'EncoderConfig', 'InitState', 'ConfigurationError',
           'OnlineSession', 'initial_state', 'relative_frequency', 'event_angle', 'event_operator',
           'encode_batch', 'online_update', 'fold_online', 'SequenceFormatError',
           'parse_sequences', 'read_sequences', 'write_sequences', 'WorldConfig', 'ObjectPose',
           'World', 'step', 'sense', 'generate_window', 'write_trace']
