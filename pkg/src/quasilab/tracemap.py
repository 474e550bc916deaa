"""Trace-map dynamics on R^3 for the metallic-mean hopping chains.

The order-s map is T_s = U^s o P with U(x,y,z) = (2xz - y, x, z) and
P(x,y,z) = (x,z,y); it conserves the Fricke-Vogt invariant
G = x^2 + y^2 + z^2 - 2xyz - 1.  An energy E enters through the initial point
line_point(params, E), which sits on the level surface G = lambda^2 / 4; the
spectrum consists of the energies whose forward orbit stays bounded, and finite
iteration depth turns that into computable outer band covers.

Escape detection is heuristic: an orbit is declared escaped once its sup-norm
exceeds a radius R (default coupling + 3) while having strictly grown on two
consecutive steps, or once a coordinate stops being finite.  Covers computed
this way are outer approximations at the sampling resolution; no rigorous inner
bound is claimed, and both R and the iteration budget are caller-configurable.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .bands import BandCover, merge_intervals
from .errors import ResourceLimitError
from .jacobi1d import ModelParams
from .measures import EmpiricalMeasure

#: Number of points in the initial energy grid (odd, so 0 is always sampled).
DEFAULT_GRID = 4097

#: Cap on the number of bands a cover may carry.
DEFAULT_BAND_CAP = 10**6


class TraceVector(NamedTuple):
    x: float
    y: float
    z: float


def apply_u(v) -> TraceVector:
    x, y, z = v
    return TraceVector(2.0 * x * z - y, x, z)


def apply_p(v) -> TraceVector:
    x, y, z = v
    return TraceVector(x, z, y)


def trace_map(s: int, v) -> TraceVector:
    """One step of T_s = U^s o P."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    v = apply_p(v)
    for _ in range(s):
        v = apply_u(v)
    return v


def fricke_vogt(v) -> float:
    """The conserved quantity x^2 + y^2 + z^2 - 2xyz - 1 (elementwise on arrays)."""
    x, y, z = v
    return x * x + y * y + z * z - 2.0 * x * y * z - 1.0


def line_point(params: ModelParams, energy) -> TraceVector:
    """Initial condition ((E^2 - a^2 - 1)/(2a), E/(2a), E/2) for the hopping chain.

    Lies on the surface G = coupling^2 / 4 for every energy.
    """
    a = params.a
    e = energy
    return TraceVector((e * e - a * a - 1.0) / (2.0 * a), e / (2.0 * a), e / 2.0)


def onsite_line_point(lam: float, energy) -> TraceVector:
    """Initial condition ((E^2 - lam*E - 2)/2, (E - lam)/2, E/2) of the on-site model.

    At lam = 0 this coincides with ``line_point`` for the free chain, and it sits
    on the same invariant surface G = lam^2 / 4; the bounded-orbit description of
    the spectrum carries over verbatim to the on-site family through this line.
    """
    e = energy
    return TraceVector((e * e - lam * e - 2.0) / 2.0, (e - lam) / 2.0, e / 2.0)


def default_escape_radius(coupling: float) -> float:
    return coupling + 3.0


def escape_time(s: int, v, max_iter: int, radius: float) -> int | None:
    """Step at which the orbit of ``v`` under T_s is flagged as escaping, else None.

    Escape at step t requires sup-norm(v_t) > radius together with
    norm(v_t) > norm(v_{t-1}) > norm(v_{t-2}), or a nonfinite coordinate.  The
    two-step growth requirement guards against transient excursions.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    if radius <= 2.0:
        raise ValueError("escape radius must exceed 2")
    x, y, z = (float(c) for c in v)
    prev = max(abs(x), abs(y), abs(z))
    prev2 = math.inf
    for t in range(1, max_iter + 1):
        x, y, z = x, z, y
        for _ in range(s):
            x, y, z = 2.0 * x * z - y, x, z
        norm = max(abs(x), abs(y), abs(z))
        if not math.isfinite(norm):
            return t
        if norm > radius and norm > prev and prev > prev2:
            return t
        prev2 = prev
        prev = norm
    return None


def escape_steps(s: int, x, y, z, max_iter: int, radius: float) -> np.ndarray:
    """Vectorised :func:`escape_time` over arrays of initial points; -1 = survived.

    Applies the same arithmetic and the same escape rule lane by lane, so the
    result is identical to the scalar routine on every lane and independent of
    how lanes are grouped.
    """
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)
    z = np.array(z, dtype=float)
    steps = np.full(x.shape, -1, dtype=np.int64)
    alive = np.ones(x.shape, dtype=bool)
    prev = np.maximum(np.abs(x), np.maximum(np.abs(y), np.abs(z)))
    prev2 = np.full(x.shape, np.inf)
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(1, max_iter + 1):
            x, y, z = x, z.copy(), y
            for _ in range(s):
                x, y, z = 2.0 * x * z - y, x, z
            norm = np.maximum(np.abs(x), np.maximum(np.abs(y), np.abs(z)))
            escaped = ~np.isfinite(norm) | ((norm > radius) & (norm > prev) & (prev > prev2))
            newly = escaped & alive
            steps[newly] = t
            alive &= ~escaped
            if not alive.any():
                break
            # freeze escaped lanes so they cannot overflow into NaNs
            x = np.where(alive, x, 0.0)
            y = np.where(alive, y, 0.0)
            z = np.where(alive, z, 0.0)
            prev2 = np.where(alive, prev, np.inf)
            prev = np.where(alive, norm, 0.0)
    return steps


def _survives(params: ModelParams, energy: float, level: int, radius: float) -> bool:
    return escape_time(params.s, line_point(params, energy), level, radius) is None


def _refine_edge(params, e_surviving, e_escaping, level, radius, resolution) -> float:
    """Bisect a survival/escape bracket; returns the escaping-side endpoint."""
    while abs(e_escaping - e_surviving) > resolution:
        mid = 0.5 * (e_surviving + e_escaping)
        if _survives(params, mid, level, radius):
            e_surviving = mid
        else:
            e_escaping = mid
    return e_escaping


def _bands_from_samples(params, energies, level, radius, resolution, cap) -> list:
    e = np.asarray(energies, dtype=float)
    pts = line_point(params, e)
    steps = escape_steps(params.s, pts.x, pts.y, pts.z, level, radius)
    surv = steps < 0
    if not surv.any():
        return []
    padded = np.concatenate([[False], surv, [False]])
    starts = np.flatnonzero(padded[1:] & ~padded[:-1])
    ends = np.flatnonzero(~padded[1:] & padded[:-1]) - 1
    if starts.size > cap:
        raise ResourceLimitError(f"{starts.size} bands exceed the cap of {cap}")
    bands = []
    for i0, i1 in zip(starts, ends):
        if i0 == 0:
            lo = float(e[0])
        else:
            lo = _refine_edge(params, float(e[i0]), float(e[i0 - 1]), level, radius, resolution)
        if i1 == e.size - 1:
            hi = float(e[-1])
        else:
            hi = _refine_edge(params, float(e[i1]), float(e[i1 + 1]), level, radius, resolution)
        bands.append((lo, hi))
    return bands


def spectrum_cover(
    params: ModelParams,
    level: int,
    resolution: float,
    *,
    initial_grid: int = DEFAULT_GRID,
    escape_radius: float | None = None,
    band_cap: int = DEFAULT_BAND_CAP,
) -> BandCover:
    """Outer cover of the energies surviving ``level`` trace-map iterations.

    Samples the search interval [-2(1+a), 2(1+a)] on a uniform grid, then sharpens
    every survive/escape edge by bisection to width ``resolution``, placing band
    endpoints on the escaping side.  Survival islands narrower than the grid
    spacing can be missed; run with a denser ``initial_grid`` to chase those.
    """
    if level < 1:
        raise ValueError("level must be positive")
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    radius = default_escape_radius(params.coupling) if escape_radius is None else escape_radius
    bound = 2.0 * (1.0 + params.a)
    grid = np.linspace(-bound, bound, initial_grid)
    bands = _bands_from_samples(params, grid, level, radius, resolution, band_cap)
    return BandCover(
        merge_intervals(bands, cap=band_cap) if bands else (),
        level=level, s=params.s, coupling=params.coupling, resolution=resolution,
    )


def cover_sequence(
    params: ModelParams,
    levels,
    resolution: float,
    *,
    initial_grid: int = DEFAULT_GRID,
    escape_radius: float | None = None,
    band_cap: int = DEFAULT_BAND_CAP,
) -> list[BandCover]:
    """Nested covers over increasing levels; each is computed inside the previous.

    Deeper levels only resample inside the bands already found, which enforces
    cover(n+1) <= cover(n) by construction.  The zero energy is always kept as a
    sample point of whichever band contains it.
    """
    levels = list(levels)
    if not levels or any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly increasing")
    radius = default_escape_radius(params.coupling) if escape_radius is None else escape_radius
    bound = 2.0 * (1.0 + params.a)
    spacing = 2.0 * bound / (initial_grid - 1)
    out = [spectrum_cover(params, levels[0], resolution,
                          initial_grid=initial_grid, escape_radius=radius, band_cap=band_cap)]
    for lvl in levels[1:]:
        pieces = []
        for lo, hi in out[-1].intervals:
            m = max(17, int(math.ceil((hi - lo) / spacing)) + 1)
            pts = np.linspace(lo, hi, m)
            if lo < 0.0 < hi:
                pts = np.unique(np.append(pts, 0.0))
            pieces.extend(_bands_from_samples(params, pts, lvl, radius, resolution, band_cap))
        out.append(BandCover(
            merge_intervals(pieces, cap=band_cap) if pieces else (),
            level=lvl, s=params.s, coupling=params.coupling, resolution=resolution,
        ))
    return out


# ---------------------------------------------------------------------------
# torus factor


def cat_map(s: int, theta, phi):
    """Hyperbolic torus automorphism (theta, phi) -> (s*theta + phi mod 1, theta)."""
    return (s * theta + phi) % 1.0, theta


def factor_map(theta, phi) -> TraceVector:
    """Semi-conjugacy F(theta, phi) = (cos 2pi(theta+phi), cos 2pi theta, cos 2pi phi).

    Intertwines the torus automorphism with the trace map on the bounded part of
    the invariant surface G = 0: T_s(F(p)) = F(cat_map(s, p)).
    """
    tp = 2.0 * np.pi
    return TraceVector(np.cos(tp * (theta + phi)), np.cos(tp * theta), np.cos(tp * phi))


def pushforward_free_dos(num_samples: int) -> EmpiricalMeasure:
    """Push the uniform measure on the diagonal segment {(t, t), t in [0, 1/2]}
    through E = 2 cos(2 pi t), by deterministic stratified (midpoint) sampling.

    The resulting empirical CDF converges to the free-chain IDS with sup error
    at most 2 / num_samples.
    """
    if num_samples < 1:
        raise ValueError("need at least one sample")
    t = (np.arange(num_samples) + 0.5) / (2.0 * num_samples)
    return EmpiricalMeasure(2.0 * np.cos(2.0 * np.pi * t))
