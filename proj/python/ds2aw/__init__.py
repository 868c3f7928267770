"""Finite-gap anomalous waves of the DS2 equation.

Configurations are plain dicts in the same layout as the JSON files the
command line tool reads.
"""

import json

from . import _core
from ._core import Error, growth_rate

__all__ = [
    "Error",
    "analyze",
    "evaluate",
    "evolve_fieldgen",
    "evolve_reference",
    "growth_rate",
    "spectrum",
    "theta",
]


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def analyze(config):
    return json.loads(_core.analyze(_text(config)))


def spectrum(config):
    return json.loads(_core.spectrum(_text(config)))


def theta(B, z, radius=8, tail_tol=1e-12):
    return _core.theta(B, list(z), radius, tail_tol)


def evaluate(config, x, y, t):
    return _core.evaluate(_text(config), x, y, t)


def evolve_fieldgen(config, threads=1):
    """Returns (times, [array of shape (ny, nx)])."""
    return _core.evolve_fieldgen(_text(config), threads)


def evolve_reference(config):
    return _core.evolve_reference(_text(config))
