"""Optional on-disk memoisation of 1D eigenvalue lists.

Activated by setting the environment variable QUASILAB_CACHE_DIR; cache files
are the CSV serialisation of an empirical measure, keyed by the substitution
order, hopping value, matrix size, restriction convention, and solver
tolerance.  Without the variable every call recomputes.
"""

from __future__ import annotations

import os
import tempfile

import numpy as np

from .measures import EmpiricalMeasure

ENV_VAR = "QUASILAB_CACHE_DIR"


def _sanitize(x) -> str:
    return repr(x).replace(".", "p").replace("-", "m").replace("+", "")


def cache_key(s: int, a: float, n: int, convention: str, tol: float) -> str:
    return f"eigs1d_s{s}_a{_sanitize(float(a))}_N{n}_{convention}_tol{_sanitize(tol)}.csv"


def cached_eigenvalues(key: str, compute) -> np.ndarray:
    """Return ``compute()`` as a sorted eigenvalue array, memoised under ``key``."""
    root = os.environ.get(ENV_VAR)
    if not root:
        return np.sort(np.asarray(compute(), dtype=float))
    os.makedirs(root, exist_ok=True)
    path = os.path.join(root, key)
    if os.path.exists(path):
        with open(path, "r", encoding="ascii") as fh:
            return EmpiricalMeasure.from_csv_text(fh.read()).support
    measure = EmpiricalMeasure(np.asarray(compute(), dtype=float))
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(measure.to_csv_text())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return measure.support
