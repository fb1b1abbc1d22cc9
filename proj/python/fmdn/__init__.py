"""Analytic performance model and slot simulator for flying mesh drone networks.

Scenarios and sweep specifications are dicts with the same layout as the
JSON files the command-line tool reads. ``None`` selects the built-in
reference scenario.
"""

import csv
import io
import json

from . import _core
from ._core import (
    ConfigError,
    DomainError,
    FmdnError,
    InstabilityError,
    IoError,
    NumericalError,
    UsageError,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "FmdnError",
    "InstabilityError",
    "IoError",
    "NumericalError",
    "UsageError",
    "analyze",
    "compare",
    "compare_reports",
    "reference_config",
    "scenario_hash",
    "simulate",
    "sweep",
]


def _text(config):
    return None if config is None else json.dumps(config)


def reference_config():
    """The built-in reference scenario as a dict."""
    return json.loads(_core.reference_config())


def scenario_hash(config=None):
    return _core.scenario_hash(_text(config))


def analyze(config=None):
    """Solves the analytic model; returns the analysis report."""
    return json.loads(_core.analyze(_text(config)))


def simulate(config=None, *, slots=None, seed=None, reps=None, workers=0):
    """Runs the slot simulator; returns the simulation report."""
    return json.loads(_core.simulate(_text(config), slots, seed, reps, workers))


def sweep(spec, config=None, *, slots=None, seed=None, reps=None, workers=0, as_csv=False):
    """Evaluates a sweep. Returns the CSV text, or a list of row dicts."""
    text = _core.sweep(json.dumps(spec), _text(config), slots, seed, reps, workers)
    if as_csv:
        return text
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        for key in ("value", "analytic", "sim", "sim_stderr"):
            row[key] = float(row[key]) if row[key] != "" else None
        rows.append(row)
    return rows


def compare(config=None, *, slots=None, seed=None, reps=None, workers=0):
    """Runs both sides on one scenario; returns the comparison report."""
    return json.loads(_core.compare(_text(config), slots, seed, reps, workers))


def compare_reports(analysis, simulation):
    """Compares previously produced analysis and simulation reports."""
    return json.loads(_core.compare_reports(json.dumps(analysis), json.dumps(simulation)))
