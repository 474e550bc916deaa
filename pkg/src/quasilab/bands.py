"""Band covers: finite unions of closed intervals approximating spectra from
outside, with the gap/thickness/dimension statistics and the set arithmetic
(products, sums, logs) that the two-dimensional model calls for.

Thickness follows the ordered-gap (Newhouse) convention: the bridges flanking a
gap extend to the nearest gap at least as long, or to the hull boundary.  For
the middle-thirds construction this gives the classical value 1 at every stage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError

#: Default cap on interval counts in covers produced by set arithmetic.
DEFAULT_INTERVAL_CAP = 10**6

#: Guard on the pairwise working set of product/sum set arithmetic.
_PAIR_GUARD = 4 * 10**6

#: Default positive floor used when taking logarithms of covers.
DEFAULT_LOG_FLOOR = 1e-12


def merge_intervals(pairs, *, merge_tol: float = 0.0, cap: int = DEFAULT_INTERVAL_CAP):
    """Sort [lo, hi] pairs and merge overlaps (and gaps up to ``merge_tol``)."""
    arr = np.asarray(list(pairs), dtype=float).reshape(-1, 2)
    if arr.size == 0:
        return ()
    if not np.all(arr[:, 1] >= arr[:, 0]):
        raise ValueError("intervals must satisfy lo <= hi")
    order = np.lexsort((arr[:, 1], arr[:, 0]))
    lo = arr[order, 0]
    hi = arr[order, 1]
    run_hi = np.maximum.accumulate(hi)
    new_run = np.empty(lo.size, dtype=bool)
    new_run[0] = True
    new_run[1:] = lo[1:] > run_hi[:-1] + merge_tol
    starts = np.flatnonzero(new_run)
    if starts.size > cap:
        raise ResourceLimitError(f"{starts.size} intervals exceed the cap of {cap}")
    ends = np.append(starts[1:], lo.size)
    merged_lo = lo[starts]
    merged_hi = run_hi[ends - 1]
    return tuple(zip(merged_lo.tolist(), merged_hi.tolist()))


@dataclass(frozen=True)
class BandCover:
    """Sorted disjoint closed intervals, tagged with how they were produced."""

    intervals: tuple
    level: int | None = None
    s: int | None = None
    coupling: float | None = None
    resolution: float | None = None

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        for (a, b) in ivs:
            if b < a:
                raise ValueError("intervals must satisfy lo <= hi")
        for (_, b), (c, _) in zip(ivs, ivs[1:]):
            if c <= b:
                raise ValueError("intervals must be sorted and disjoint")
        object.__setattr__(self, "intervals", ivs)

    @property
    def count(self) -> int:
        return len(self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def hull(self) -> tuple[float, float]:
        if self.is_empty:
            raise ValueError("an empty cover has no hull")
        return (self.intervals[0][0], self.intervals[-1][1])

    @property
    def total_length(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    def contains(self, x: float) -> bool:
        return any(a <= x <= b for a, b in self.intervals)

    def covers(self, other: "BandCover", slack: float = 0.0) -> bool:
        """True when every band of ``other`` sits inside a band of self (up to slack)."""
        return all(
            any(a - slack <= c and d <= b + slack for a, b in self.intervals)
            for c, d in other.intervals
        )

    def scaled(self, factor: float) -> "BandCover":
        if factor <= 0:
            raise ValueError("scaling factor must be positive")
        return BandCover(
            tuple((a * factor, b * factor) for a, b in self.intervals),
            self.level, self.s, self.coupling, self.resolution,
        )

    def to_json_obj(self) -> dict:
        return {
            "s": self.s,
            "lambda": self.coupling,
            "level": self.level,
            "resolution": self.resolution,
            "bands": [[a, b] for a, b in self.intervals],
        }


def middle_thirds_cover(level: int) -> BandCover:
    """Stage ``level`` of the middle-thirds construction on [0, 1]."""
    if level < 0:
        raise ValueError("level must be nonnegative")
    ivs = [(0.0, 1.0)]
    for _ in range(level):
        ivs = [piece for a, b in ivs for piece in ((a, a + (b - a) / 3), (b - (b - a) / 3, b))]
    return BandCover(tuple(ivs), level=level, resolution=3.0 ** (-level))


def gaps(cover: BandCover) -> list[tuple[float, float]]:
    """Open gaps between consecutive bands, strictly inside the hull."""
    return [
        (b, c) for (_, b), (c, _) in zip(cover.intervals, cover.intervals[1:])
    ]


def _blocking_indices(lengths: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For each gap, the nearest gap on each side with length >= its own.

    Monotonic-stack passes; -1 marks 'none, bridge runs to the hull boundary'.
    """
    m = lengths.size
    left = np.full(m, -1, dtype=np.intp)
    stack: list[int] = []
    for i in range(m):
        while stack and lengths[stack[-1]] < lengths[i]:
            stack.pop()
        left[i] = stack[-1] if stack else -1
        stack.append(i)
    right = np.full(m, -1, dtype=np.intp)
    stack = []
    for i in range(m - 1, -1, -1):
        while stack and lengths[stack[-1]] < lengths[i]:
            stack.pop()
        right[i] = stack[-1] if stack else -1
        stack.append(i)
    return left, right


def thickness(cover: BandCover) -> float:
    """Bridge-to-gap ratio infimum of a band cover; +inf when there are no gaps.

    For each gap the two bridges extend from its endpoints to the nearest gap at
    least as long (or to the hull boundary); the thickness is the minimum over
    gaps of min(bridge) / gap.  Scale invariant, since only ratios of endpoint
    differences enter.
    """
    gs = gaps(cover)
    if not gs:
        return math.inf
    hull_lo, hull_hi = cover.hull
    glo = np.array([g[0] for g in gs])
    ghi = np.array([g[1] for g in gs])
    lengths = ghi - glo
    left, right = _blocking_indices(lengths)
    left_edge = np.where(left >= 0, ghi[left], hull_lo)
    right_edge = np.where(right >= 0, glo[right], hull_hi)
    bridges = np.minimum(glo - left_edge, right_edge - ghi)
    with np.errstate(over="ignore", divide="ignore"):
        return float(np.min(bridges / lengths))


@dataclass(frozen=True)
class CantorStats:
    """Summary statistics of a cover (or refinement sequence of covers)."""

    thickness_estimate: float
    box_dim_estimate: float | None
    total_length: float
    hull: tuple[float, float]

    def to_json_obj(self) -> dict:
        t = self.thickness_estimate
        return {
            "thickness_estimate": ("inf" if math.isinf(t) else t),
            "box_dim_estimate": self.box_dim_estimate,
            "total_length": self.total_length,
            "hull": list(self.hull),
        }


def box_dimension_estimate(covers, scales=None) -> float:
    """Least-squares slope of log(band count) against log(1 / scale).

    By default each cover's scale is its mean band width (total length divided by
    band count), the natural box size for a cover by unequal intervals; pass
    explicit ``scales`` to override.  Raises ValueError when fewer than three
    covers are given or the scales are degenerate.
    """
    covers = list(covers)
    if len(covers) < 3:
        raise ValueError("need at least three refinement levels")
    counts = np.array([c.count for c in covers], dtype=float)
    if scales is None:
        scales = np.array([c.total_length / c.count for c in covers])
    else:
        scales = np.asarray(scales, dtype=float)
    if np.unique(scales).size < 2:
        raise ValueError("degenerate fit: all scales identical")
    slope = np.polyfit(np.log(1.0 / scales), np.log(counts), 1)[0]
    return float(slope)


def cantor_stats(covers) -> CantorStats:
    """Thickness of the finest cover plus a box-dimension fit over the sequence.

    ``covers`` may be a single BandCover (no dimension estimate) or a sequence of
    covers ordered coarse to fine.
    """
    if isinstance(covers, BandCover):
        seq = [covers]
    else:
        seq = list(covers)
    finest = seq[-1]
    dim = box_dimension_estimate(seq) if len(seq) >= 3 else None
    return CantorStats(thickness(finest), dim, finest.total_length, finest.hull)


# ---------------------------------------------------------------------------
# set arithmetic


def _combine(a: BandCover, b: BandCover, kind: str, merge_tol: float, cap: int) -> tuple:
    la = np.array([iv[0] for iv in a.intervals])
    ha = np.array([iv[1] for iv in a.intervals])
    lb = np.array([iv[0] for iv in b.intervals])
    hb = np.array([iv[1] for iv in b.intervals])
    if la.size * lb.size > _PAIR_GUARD:
        raise ResourceLimitError(
            f"{la.size} x {lb.size} interval pairs exceed the working guard of {_PAIR_GUARD}"
        )
    if kind == "product":
        cands = np.stack([
            np.multiply.outer(la, lb),
            np.multiply.outer(la, hb),
            np.multiply.outer(ha, lb),
            np.multiply.outer(ha, hb),
        ])
        lo = cands.min(axis=0).ravel()
        hi = cands.max(axis=0).ravel()
    else:
        lo = np.add.outer(la, lb).ravel()
        hi = np.add.outer(ha, hb).ravel()
    return merge_intervals(np.column_stack([lo, hi]), merge_tol=merge_tol, cap=cap)


def _join_meta(a: BandCover, b: BandCover) -> dict:
    level = a.level if a.level == b.level else None
    res = None
    if a.resolution is not None and b.resolution is not None:
        res = max(a.resolution, b.resolution)
    return {"level": level, "resolution": res}


def product_set(a: BandCover, b: BandCover, *, merge_tol: float = 0.0,
                cap: int = DEFAULT_INTERVAL_CAP) -> BandCover:
    """Pointwise product set {xy}: pairwise interval products, merged.

    Each pair of bands contributes [min, max] over the four endpoint products,
    which is exact for products of intervals of any signs.
    """
    return BandCover(_combine(a, b, "product", merge_tol, cap), **_join_meta(a, b))


def sum_set(a: BandCover, b: BandCover, *, merge_tol: float = 0.0,
            cap: int = DEFAULT_INTERVAL_CAP) -> BandCover:
    """Minkowski sum {x + y} of two covers."""
    return BandCover(_combine(a, b, "sum", merge_tol, cap), **_join_meta(a, b))


def log_positive_part(a: BandCover, floor: float = DEFAULT_LOG_FLOOR) -> BandCover:
    """Elementwise log of the cover's intersection with (0, inf).

    Bands crossing zero are clipped at ``floor`` so no endpoint becomes -inf.
    Raises ValueError when nothing intersects the positive axis.
    """
    if floor <= 0:
        raise ValueError("the clipping floor must be positive")
    out = []
    for lo, hi in a.intervals:
        if hi < floor:
            continue
        out.append((math.log(max(lo, floor)), math.log(hi)))
    if not out:
        raise ValueError("the cover does not intersect the positive axis")
    return BandCover(merge_intervals(out), level=a.level)


@dataclass(frozen=True)
class IntervalCheck:
    """Outcome of an is-this-an-interval test, with the offending gaps."""

    ok: bool
    tol: float
    offending_gaps: tuple

    def __bool__(self) -> bool:
        return self.ok


def is_interval(cover: BandCover, tol: float) -> IntervalCheck:
    """True when every gap of the cover is no longer than ``tol``."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    offending = tuple(g for g in gaps(cover) if g[1] - g[0] > tol)
    return IntervalCheck(not offending, tol, offending)
