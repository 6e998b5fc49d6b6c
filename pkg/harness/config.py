import dataclasses
import logging
import os
from pathlib import Path

from perception import WorldConfig

logger = logging.getLogger(__name__)

_TRUE = {'true', '1', 'yes', 'on'}
_FALSE = {'false', '0', 'no', 'off'}


class ConfigFileError(ValueError):
    """
    Raised for malformed key=value configuration files.
    """


def parse_config(text: str, source: str = '<string>') -> dict[str, str]:
    """
    Parse flat key=value lines. '#' starts a comment line; blank lines are skipped. Keys are
    normalised to identifiers ('gate-time-us' and 'gate_time_us' are the same key).

    Args:
        text: File content.
        source: Name used in error messages.

    Returns:
        Raw string values by key, in file order.
    """
    values: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start = 1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        key, sep, value = line.partition('=')
        key = key.strip().lstrip('-').replace('-', '_')
        if not sep or not key.isidentifier():
            raise ConfigFileError(f'{source}:{number}: expected key=value, got {line!r}')
        if key in values:
            raise ConfigFileError(f'{source}:{number}: duplicate key {key!r}')
        values[key] = value.strip()
    return values

def load_config(path: str | Path) -> dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigFileError(f'Cannot read config file {path}: {e}') from e
    values = parse_config(text, str(path))
    logger.debug(f'Loaded {len(values)} settings from {path}')
    return values

def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError(f'Expected a boolean, got {text!r}')

def env_flag(name: str, default: bool = False) -> bool:
    """
    Boolean environment flag, e.g. DEBUG=True.
    """
    value = os.environ.get(name)
    return default if value is None else parse_bool(value)

def env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f'Environment variable {name} must be an integer, got {value!r}') from None

def world_config_from(values: dict[str, str]) -> WorldConfig:
    """
    Build a WorldConfig from raw key=value settings. Missing keys keep their defaults.

    Raises:
        ConfigFileError: On unknown keys or values of the wrong type.
    """
    fields = {f.name: f for f in dataclasses.fields(WorldConfig)}
    kwargs = {}
    for key, text in values.items():
        if key not in fields:
            raise ConfigFileError(f'Unknown world setting {key!r}; expected one of {", ".join(fields)}')
        try:
            kwargs[key] = int(text) if key == 'seed' else float(text)
        except ValueError:
            raise ConfigFileError(f'Bad value {text!r} for world setting {key!r}') from None
    return WorldConfig(**kwargs)
