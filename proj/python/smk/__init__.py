"""Certify finite convergence of sparse moment relaxations and extract minimizers.

Documents (moment vectors, problems, measures) are plain dicts in the same
JSON layout the ``smk`` command-line tool reads and writes.
"""

import json as _json

from . import _smk

__all__ = [
    "find_rip_order",
    "moment_matrix",
    "certify",
    "extract_assemble",
    "solve_weight_lp",
    "enumerate_extreme_measures",
    "emit_sdpa",
    "pipeline",
    "run_cli",
]


def _text(doc):
    if doc is None or isinstance(doc, str):
        return doc
    return _json.dumps(doc)


def find_rip_order(n, cliques):
    """1-based clique order with the running intersection property, or None."""
    return _smk.find_rip_order(n, cliques)


def moment_matrix(moments, clique, order):
    """Moment matrix of a 1-based clique as a numpy array (canonical labels)."""
    return _smk.moment_matrix(_text(moments), clique, order)


def certify(moments, pop=None, rel_tol=1e-6, round=None):
    return _json.loads(_smk.certify(_text(moments), _text(pop), rel_tol, round))


def extract_assemble(moments, pop=None, rel_tol=1e-6, round=None, seed=42):
    return _json.loads(_smk.extract_assemble(_text(moments), _text(pop), rel_tol, round, seed))


def solve_weight_lp(atoms, moments, cost):
    return _smk.solve_weight_lp(atoms, _text(moments), cost)


def enumerate_extreme_measures(atoms, moments, budget, seed=42):
    return _smk.enumerate_extreme_measures(atoms, _text(moments), budget, seed)


def emit_sdpa(pop, omega):
    return _smk.emit_sdpa(_text(pop), omega)


def pipeline(pop, omega, solution=None, rel_tol=1e-6, round=None, seed=42, max_iters=20000):
    return _json.loads(
        _smk.pipeline(_text(pop), omega, _text(solution), rel_tol, round, seed, max_iters)
    )


def run_cli(args):
    """Runs the command-line tool in process; returns (exit code, parsed report, stderr)."""
    code, out, err = _smk.run_cli([str(a) for a in args])
    return code, (_json.loads(out) if out.lstrip().startswith("{") else out), err
