"""Backend dispatch for the hot Monte Carlo kernels.

The default is the numba backend; set ``FRAB_NOMA_BACKEND=numpy`` to force
the pure-numpy fallback (or ``numba`` to insist on numba and fail loudly if
it is unavailable).  Both backends implement the same ``simulate_block``
contract and produce the same per-trial outage flags.
"""

import os

from .common import KernelParams, build_params, tape_len  # noqa: F401

ENV_VAR = "FRAB_NOMA_BACKEND"


def resolve_backend(name=None):
    """Return the backend module selected by argument or environment."""
    choice = name or os.environ.get(ENV_VAR, "")
    choice = choice.strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(f"unknown backend {choice!r}; expected 'numba' or 'numpy'")
    if choice == "numpy":
        from . import numpy_backend
        return numpy_backend
    try:
        from . import numba_backend
        return numba_backend
    except ImportError:
        if choice == "numba":
            raise
        from . import numpy_backend
        return numpy_backend
