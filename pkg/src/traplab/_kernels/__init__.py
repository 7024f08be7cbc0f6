"""Simulation kernel backend selection.

At import time the compiled Cython core is preferred; the pure-numpy
implementation is the fallback.  Both follow one randomness-consumption
protocol (see ``pure`` module docstring) and return bit-identical results,
so switching backends never changes numbers, only speed.

Set ``TRAPLAB_BACKEND=pure`` or ``TRAPLAB_BACKEND=cython`` to force a
backend (``cython`` raises if the extension is missing).
"""

import os

from . import pure as _pure

_choice = os.environ.get("TRAPLAB_BACKEND", "auto").lower()
if _choice not in ("auto", "pure", "cython"):
    raise RuntimeError(f"TRAPLAB_BACKEND must be auto, pure, or cython, not {_choice!r}")

if _choice == "pure":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _core as _impl
        BACKEND = "cython"
    except ImportError:
        if _choice == "cython":
            raise
        _impl = _pure
        BACKEND = "pure"

hypercube_hit_ranks = _impl.hypercube_hit_ranks
complete_hit_ranks = _impl.complete_hit_ranks
hypercube_states_at_times = _impl.hypercube_states_at_times
complete_states_at_times = _impl.complete_states_at_times
hypercube_trajectory = _impl.hypercube_trajectory
complete_trajectory = _impl.complete_trajectory
hypercube_chain = _impl.hypercube_chain
complete_chain = _impl.complete_chain
k_events = _impl.k_events
k_states_at_times = _impl.k_states_at_times

__all__ = [
    "BACKEND",
    "hypercube_hit_ranks",
    "complete_hit_ranks",
    "hypercube_states_at_times",
    "complete_states_at_times",
    "hypercube_trajectory",
    "complete_trajectory",
    "hypercube_chain",
    "complete_chain",
    "k_events",
    "k_states_at_times",
]
