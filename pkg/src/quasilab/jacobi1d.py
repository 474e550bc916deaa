"""Finite Dirichlet restrictions of the one-dimensional off-diagonal operator.

A hopping sequence omega over {a, 1} (letter a -> value a, letter b -> value 1)
drawn from a metallic-mean sequence defines the Jacobi matrix

    (H psi)(n) = omega(n+1) psi(n+1) + omega(n) psi(n-1).

The restriction to an N-site window keeps only the interior couplings, giving a
zero-diagonal symmetric tridiagonal matrix.  Eigenvalue counting runs through a
Sturm (LDL^T inertia) recurrence vectorised over energies, and full spectra come
from bisection on those counts; the integrated density of states (IDS) is the
normalised counting function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError
from .measures import EmpiricalMeasure
from .words import DEFAULT_WORD_CAP, prefix, rotation_sequence

#: Pivot safeguard for the inertia recurrence.  A pivot smaller than this in
#: magnitude is replaced by a signed tiny value; that can shift a count by at
#: most one, which bisection absorbs.
PIVMIN = 1e-300


def coupling_constant(a: float, b: float = 1.0) -> float:
    """|a^2 - b^2| / (ab), the single parameter controlling the spectral type."""
    if a <= 0 or b <= 0:
        raise ValueError(f"hopping values must be positive, got a={a}, b={b}")
    return abs(a * a - b * b) / (a * b)


def hopping_from_coupling(lam: float) -> float:
    """Inverse of :func:`coupling_constant` at b = 1 on the branch a >= 1.

    Solves a^2 - lam*a - 1 = 0 for its positive root (lam + sqrt(lam^2 + 4))/2.
    """
    if lam < 0:
        raise ValueError("coupling constants are nonnegative")
    return (lam + math.sqrt(lam * lam + 4.0)) / 2.0


@dataclass(frozen=True)
class ModelParams:
    """One off-diagonal operator family: substitution order s and hopping value a."""

    s: int
    a: float

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be a positive integer")
        if not (self.a > 0):
            raise ValueError("the hopping value a must be positive")

    @property
    def coupling(self) -> float:
        return coupling_constant(self.a, 1.0)

    @classmethod
    def from_coupling(cls, s: int, lam: float) -> "ModelParams":
        return cls(s, hopping_from_coupling(lam))


@dataclass(frozen=True, eq=False)
class HoppingWindow:
    """Hopping values omega(offset+1 .. offset+N) read off a hull element."""

    weights: np.ndarray = field(repr=False)
    offset: int = 0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("a window needs at least one weight")
        if not np.all(w > 0):
            raise ValueError("hopping weights must be positive")
        object.__setattr__(self, "weights", w)

    def __repr__(self):  # pragma: no cover
        return f"HoppingWindow(n={self.size}, offset={self.offset})"

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def interior_offdiagonals(self) -> np.ndarray:
        """Couplings omega(offset+2 .. offset+N) of the Dirichlet restriction.

        The window's first weight is the bond leaving the box on the left and is
        dropped, as is the (never generated) bond leaving on the right: the matrix
        is the principal N x N submatrix with zero diagonal.
        """
        return self.weights[1:]

    def to_dense(self) -> np.ndarray:
        off = self.interior_offdiagonals()
        n = self.size
        m = np.zeros((n, n))
        idx = np.arange(n - 1)
        m[idx, idx + 1] = off
        m[idx + 1, idx] = off
        return m


def build_window(
    params: ModelParams,
    n: int,
    source: str = "substitution",
    *,
    beta: float = 0.0,
    offset: int = 0,
    max_len: int = DEFAULT_WORD_CAP,
) -> HoppingWindow:
    """Read N hopping values from the substitution sequence or a rotation coding.

    ``source="substitution"`` takes letters offset+1 .. offset+N of u_s;
    ``source="rotation"`` codes the circle rotation at phase ``beta`` over the
    same index range.  Letters map a -> params.a, b -> 1.
    """
    if n < 1:
        raise ValueError("window length must be positive")
    if source == "substitution":
        if offset < 0:
            raise ValueError("substitution windows need a nonnegative offset")
        if offset + n > max_len:
            raise ResourceLimitError(f"window end {offset + n} exceeds the cap of {max_len}")
        letters = prefix(params.s, offset + n, max_len=max_len)[offset:]
    elif source == "rotation":
        letters = rotation_sequence(params.s, beta, range(offset + 1, offset + n + 1))
    else:
        raise ValueError(f"unknown window source {source!r}")
    codes = np.frombuffer(letters.encode("ascii"), dtype=np.uint8)
    weights = np.where(codes == ord("a"), params.a, 1.0)
    return HoppingWindow(weights, offset)


# ---------------------------------------------------------------------------
# Sturm counting and bisection


def _guard_pivots(q: np.ndarray) -> np.ndarray:
    return np.where(np.abs(q) < PIVMIN, np.copysign(PIVMIN, q), q)


def count_below_offdiag(offdiag, energies) -> np.ndarray:
    """Eigenvalues of the zero-diagonal tridiagonal matrix below each energy.

    ``offdiag`` holds the N-1 couplings of an N x N matrix.  The LDL^T pivot
    recurrence q_1 = -E, q_k = -E - b_{k-1}^2 / q_{k-1} counts eigenvalues through
    the number of negative pivots; the computation is vectorised across energies.
    At an energy that is itself an eigenvalue of a leading submatrix the guarded
    count may land on either side of the jump.
    """
    off2 = np.square(np.asarray(offdiag, dtype=float))
    e = np.atleast_1d(np.asarray(energies, dtype=float))
    with np.errstate(divide="ignore", over="ignore"):
        q = _guard_pivots(-e)
        count = (q < 0).astype(np.int64)
        for b2 in off2:
            q = _guard_pivots(-e - b2 / q)
            count += q < 0
    return count


def eig_count_below(window: HoppingWindow, energy: float) -> int:
    """Number of Dirichlet-restriction eigenvalues strictly below ``energy``."""
    return int(count_below_offdiag(window.interior_offdiagonals(), energy)[0])


def eigenvalues_offdiag(offdiag, tol: float = 1e-10, search_bound: float | None = None) -> np.ndarray:
    """All eigenvalues of the zero-diagonal tridiagonal matrix, by bisection.

    Every eigenvalue is bracketed to a width of at most ``tol`` inside the
    symmetric search interval (default a Gershgorin-style bound 2(1 + max|b|)).
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    off = np.asarray(offdiag, dtype=float)
    n = off.size + 1
    if search_bound is None:
        search_bound = 2.0 * (1.0 + (float(np.max(np.abs(off))) if off.size else 0.0))
    lo = np.full(n, -search_bound)
    hi = np.full(n, search_bound)
    k = np.arange(n)
    while float(np.max(hi - lo)) > tol:
        mid = 0.5 * (lo + hi)
        c = count_below_offdiag(off, mid)
        above = c > k  # kth smallest eigenvalue lies below mid
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return np.sort(0.5 * (lo + hi))


def eigenvalues(window: HoppingWindow, tol: float = 1e-10) -> EmpiricalMeasure:
    """Eigenvalues of the window's Dirichlet restriction as an empirical measure.

    The multiset is symmetric about the origin to within ``tol`` (flipping the
    sign of every other component of an eigenvector negates its eigenvalue), and
    for odd N zero is an exact eigenvalue of the underlying matrix.
    """
    bound = 2.0 * (1.0 + float(np.max(window.weights)))
    return EmpiricalMeasure(
        eigenvalues_offdiag(window.interior_offdiagonals(), tol, search_bound=bound)
    )


def ids_curve(params: ModelParams, energies, n: int, *, source: str = "substitution",
              beta: float = 0.0, offset: int = 0) -> np.ndarray:
    """Finite-volume IDS (1/N) #{eigenvalues <= E} over a vector of energies."""
    if n < 1:
        raise ValueError("N must be positive")
    window = build_window(params, n, source, beta=beta, offset=offset)
    counts = count_below_offdiag(window.interior_offdiagonals(), energies)
    return counts.astype(float) / n


def ids(params: ModelParams, energy: float, n: int, **kwargs) -> float:
    """Finite-volume integrated density of states at a single energy."""
    return float(ids_curve(params, [energy], n, **kwargs)[0])


def free_ids(energy):
    """IDS of the free chain: 0 below -2, 1 above 2, else arccos(-E/2)/pi."""
    e = np.asarray(energy, dtype=float)
    inner = np.arccos(np.clip(-e / 2.0, -1.0, 1.0)) / np.pi
    out = np.where(e <= -2.0, 0.0, np.where(e >= 2.0, 1.0, inner))
    return float(out) if np.isscalar(energy) or e.ndim == 0 else out
