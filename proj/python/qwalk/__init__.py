"""Continuous-time quantum and classical walks on networks."""

import json

from . import _core
from ._core import (
    ConfigError,
    GraphError,
    SpectralError,
    dark_state_count,
    dimer_pi_trap,
    eig_biorthogonal,
    eigh,
    gurvitz_populations,
    long_time_average,
    propagate_classical,
    propagate_quantum,
    quantum_survival,
    ring_lta_closed,
    scenarios,
    wigner_ring,
)

__version__ = _core.__version__


def graph(spec):
    """Build a graph from a dict such as {"family": "ring", "n": 10}; edges come back 1-based."""
    return json.loads(_core.graph_json(json.dumps(spec)))


def coupling_matrix(spec, gamma=1.0):
    return _core.coupling_matrix(json.dumps(spec), gamma)


def run_scenario(config):
    """Run one scenario config (dict) and return its manifest."""
    return json.loads(_core.run_scenario(json.dumps(config)))


def check(criterion):
    """Run an acceptance criterion: (passed, summary, [(name, pass, info, detail), ...])."""
    return _core.check(criterion)
