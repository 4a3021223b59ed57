"""Flat ``key = value`` experiment files.

One file per experiment, no sections. Lists are comma or whitespace
separated; ``#`` and ``;`` start comments. Parsing goes through
:mod:`configparser` with an implicit section header.
"""
from __future__ import annotations

import configparser
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["ConfigError", "Config", "load_config", "parse_config", "OUTPUT_DIR_ENV", "RunConfig"]

OUTPUT_DIR_ENV = "NEUROPHOT_OUTPUT_DIR"
_SECTION = "experiment"


class ConfigError(ValueError):
    """Malformed or inconsistent experiment file."""


@dataclass
class Config:
    """Typed access to the flat key/value pairs of an experiment file."""

    values: dict
    source: str = "<string>"
    used: set = field(default_factory=set)

    def __contains__(self, key):
        return key in self.values

    def _raw(self, key, default):
        if key in self.values:
            self.used.add(key)
            return self.values[key]
        if default is _REQUIRED:
            raise ConfigError(f"{self.source}: missing required key {key!r}")
        return default

    def str(self, key, default=None):
        return self._raw(key, default)

    def float(self, key, default=None):
        raw = self._raw(key, default)
        if raw is None or isinstance(raw, float):
            return raw
        try:
            return float(raw)
        except (TypeError, ValueError):
            raise ConfigError(f"{self.source}: {key} = {raw!r} is not a number") from None

    def int(self, key, default=None):
        raw = self._raw(key, default)
        if raw is None or isinstance(raw, int):
            return raw
        try:
            return int(raw)
        except (TypeError, ValueError):
            raise ConfigError(f"{self.source}: {key} = {raw!r} is not an integer") from None

    def bool(self, key, default=None):
        raw = self._raw(key, default)
        if raw is None or isinstance(raw, bool):
            return raw
        text = str(raw).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{self.source}: {key} = {raw!r} is not a boolean")

    def floats(self, key, default=None):
        raw = self._raw(key, default)
        if raw is None or isinstance(raw, (list, tuple, np.ndarray)):
            return None if raw is None else np.asarray(raw, dtype=float)
        items = [s for s in re.split(r"[,\s]+", str(raw).strip()) if s]
        try:
            return np.array([float(s) for s in items])
        except ValueError:
            raise ConfigError(f"{self.source}: {key} must be a list of numbers") from None

    def ints(self, key, default=None):
        vals = self.floats(key, default)
        if vals is None:
            return None
        if np.any(vals != np.round(vals)):
            raise ConfigError(f"{self.source}: {key} must be a list of integers")
        return vals.astype(int)

    def unused(self):
        return sorted(set(self.values) - self.used)

    def check_unused(self):
        extra = self.unused()
        if extra:
            raise ConfigError(f"{self.source}: unknown key(s) {', '.join(extra)}")


_REQUIRED = object()
Config.REQUIRED = _REQUIRED


def parse_config(text: str, source="<string>") -> Config:
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"),
                                       inline_comment_prefixes=("#", ";"), delimiters=("=",))
    parser.optionxform = str
    try:
        parser.read_string(f"[{_SECTION}]\n" + text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    if parser.sections() != [_SECTION]:
        raise ConfigError(f"{source}: sections are not allowed in experiment files")
    return Config(dict(parser[_SECTION]), source)


def load_config(path) -> Config:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise FileNotFoundError(f"config file not found: {path}") from None
    return parse_config(text, str(path))


@dataclass
class RunConfig:
    """Resolved options common to every subcommand."""

    subcommand: str
    inputs: list
    output_dir: Path
    dt: float | None = None
    horizon: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise ConfigError("dt must be positive")
        if self.horizon is not None and not self.horizon > 0:
            raise ConfigError("horizon must be positive")

    @staticmethod
    def resolve_output_dir(cli_value=None) -> Path:
        if cli_value:
            return Path(cli_value)
        return Path(os.environ.get(OUTPUT_DIR_ENV, "out"))
