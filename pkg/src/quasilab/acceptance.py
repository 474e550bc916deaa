"""Quantitative verification suite for the whole toolkit.

Each criterion checks one structural property of the models at desk scale with
a pinned tolerance: invariant conservation, the torus factor identity, the
free-chain spectrum and counting function, spectral symmetry, the 2D tensor
law, the product form of the 2D counting measure, the log-convolution identity,
the interval/Cantor dichotomy of the product spectrum, membership of zero in
every spectrum, twin combinatorics, and the thickness trend in the coupling.

Criteria with a runtime budget report a boolean ``runtime_ok``; wall-clock
values are deliberately left out of the rendered table so that repeated runs
are byte-identical (the final criterion re-runs everything and compares).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import bands, labyrinth, tracemap, words
from .jacobi1d import ModelParams, build_window, eigenvalues_offdiag, free_ids, ids_curve

_SEED = 20260810


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    runtime_ok: bool | None = None
    runtime_limit: float | None = None

    @property
    def ok(self) -> bool:
        return self.passed and self.runtime_ok is not False

    def to_json_obj(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "runtime_ok": self.runtime_ok,
            "runtime_limit_s": self.runtime_limit,
            "detail": self.detail,
        }


class VerifyContext:
    """Shared memo space so criteria can reuse covers and eigenvalue lists."""

    def __init__(self):
        self._covers = {}
        self._sequences = {}

    def cover(self, s: int, a: float, level: int, resolution: float):
        key = (s, a, level, resolution)
        if key not in self._covers:
            self._covers[key] = tracemap.spectrum_cover(ModelParams(s, a), level, resolution)
        return self._covers[key]

    def cover_sequence(self, s: int, a: float, levels: tuple, resolution: float):
        key = (s, a, levels, resolution)
        if key not in self._sequences:
            self._sequences[key] = tracemap.cover_sequence(ModelParams(s, a), list(levels), resolution)
            for c in self._sequences[key]:
                self._covers.setdefault((s, a, c.level, resolution), c)
        return self._sequences[key]

    def all_covers(self):
        return list(self._covers.values())


def _a_from_lambda(lam: float) -> float:
    return (lam + math.sqrt(lam * lam + 4.0)) / 2.0


# ---------------------------------------------------------------------------
# criteria


def criterion_trace_conservation(ctx: VerifyContext) -> CriterionResult:
    limit = 5.0
    t0 = time.perf_counter()
    rng = np.random.default_rng(_SEED)
    pts = rng.uniform(-2.0, 2.0, size=(100_000, 3))
    v = tracemap.TraceVector(pts[:, 0], pts[:, 1], pts[:, 2])
    g0 = tracemap.fricke_vogt(v)
    worst = 0.0
    for s in (1, 2, 3):
        g1 = tracemap.fricke_vogt(tracemap.trace_map(s, v))
        worst = max(worst, float(np.max(np.abs(g1 - g0) / (1.0 + np.abs(g0)))))
    elapsed = time.perf_counter() - t0
    return CriterionResult(
        1, "trace-map conservation", worst <= 1e-10,
        f"max relative drift {worst:.3e} (tol 1e-10)", elapsed < limit, limit,
    )


def criterion_semiconjugacy(ctx: VerifyContext) -> CriterionResult:
    rng = np.random.default_rng(_SEED + 1)
    theta, phi = rng.random(10_000), rng.random(10_000)
    worst = 0.0
    for s in (1, 2, 3):
        lhs = tracemap.trace_map(s, tracemap.factor_map(theta, phi))
        rhs = tracemap.factor_map(*tracemap.cat_map(s, theta, phi))
        for l, r in zip(lhs, rhs):
            worst = max(worst, float(np.max(np.abs(l - r))))
    return CriterionResult(
        2, "torus semi-conjugacy", worst <= 1e-10, f"max deviation {worst:.3e} (tol 1e-10)",
    )


def criterion_free_spectrum(ctx: VerifyContext) -> CriterionResult:
    limit = 10.0
    t0 = time.perf_counter()
    cover = ctx.cover(1, 1.0, 20, 1e-4)
    elapsed = time.perf_counter() - t0
    if cover.count != 1:
        return CriterionResult(3, "free-chain spectrum", False,
                               f"expected one band, got {cover.count}", elapsed < limit, limit)
    lo, hi = cover.intervals[0]
    dist = max(abs(lo + 2.0), abs(hi - 2.0))
    return CriterionResult(
        3, "free-chain spectrum", dist <= 1e-3,
        f"single band, Hausdorff distance to [-2,2] {dist:.3e} (tol 1e-3)",
        elapsed < limit, limit,
    )


def criterion_free_ids(ctx: VerifyContext) -> CriterionResult:
    grid = np.linspace(-2.5, 2.5, 401)
    curve = ids_curve(ModelParams(1, 1.0), grid, 4096)
    err = float(np.max(np.abs(curve - free_ids(grid))))
    return CriterionResult(
        4, "free-chain counting function", err <= 1e-2,
        f"sup deviation {err:.3e} over 401 energies at N=4096 (tol 1e-2)",
    )


def criterion_spectral_symmetry(ctx: VerifyContext) -> CriterionResult:
    worst = 0.0
    for s in (1, 2):
        for a in (1.5, 2.0, 4.0):
            for n in (257, 512):
                w = build_window(ModelParams(s, a), n)
                e = eigenvalues_offdiag(
                    w.interior_offdiagonals(), tol=1e-12,
                    search_bound=2.0 * (1.0 + a),
                )
                worst = max(worst, float(np.max(np.abs(e + e[::-1]))))
    return CriterionResult(
        5, "spectral symmetry", worst <= 1e-9, f"max |e_k + e_(N+1-k)| {worst:.3e} (tol 1e-9)",
    )


def criterion_tensor_law(ctx: VerifyContext) -> CriterionResult:
    limit = 30.0
    t0 = time.perf_counter()
    p = labyrinth.LabyrinthParams(1, 1.3, 1.5)
    worst = 0.0
    for n in (6, 8):
        dense = labyrinth.dense_eigs_2d(labyrinth.build_2d(p, n)).support
        prod = np.sort(labyrinth.product_eigs(p, n).support)
        worst = max(worst, float(np.max(np.abs(dense - prod))))
    elapsed = time.perf_counter() - t0
    return CriterionResult(
        6, "2D tensor law", worst <= 1e-7,
        f"max multiset deviation {worst:.3e} at N=6,8 (tol 1e-7)", elapsed < limit, limit,
    )


def criterion_product_cdf(ctx: VerifyContext) -> CriterionResult:
    n = 8
    p = labyrinth.LabyrinthParams(1, 1.3, 1.5)
    dense = labyrinth.dense_eigs_2d(labyrinth.build_2d(p, n))
    hull = float(np.max(np.abs(dense.support))) * 1.05
    grid = np.linspace(-hull, hull, 401)
    got = labyrinth.dos2d_cdf(p, grid, n)
    err = float(np.max(np.abs(got - dense.cdf(grid))))
    tol = 1.0 / n**2 + 1e-9
    return CriterionResult(
        7, "2D counting measure product form", err <= tol,
        f"sup deviation {err:.3e} over 401 energies at N=8 (tol {tol:.3e})",
    )


def criterion_log_convolution(ctx: VerifyContext) -> CriterionResult:
    n, nbins = 1024, 1024
    a = _a_from_lambda(0.5)
    p = labyrinth.LabyrinthParams(1, a, a)
    prods = labyrinth.product_eigs(p, n)
    qs = np.quantile(prods.support, np.linspace(0.02, 0.98, 21))
    tol = 2.0 / nbins + 2.0 * (2 * n - 1) / n**2
    worst = 0.0
    for lo, hi in zip(qs, qs[1:]):
        direct = labyrinth.dos2d_cdf(p, float(hi), n) - labyrinth.dos2d_cdf(p, float(lo), n)
        conv = labyrinth.log_convolution_cdf(p, (float(lo), float(hi)), n, nbins)
        worst = max(worst, abs(conv - direct))
    return CriterionResult(
        8, "log-convolution identity", worst <= tol,
        f"max interval deviation {worst:.3e} over 20 intervals (tol {tol:.3e})",
    )


def criterion_small_coupling_interval(ctx: VerifyContext) -> CriterionResult:
    res = 1e-4
    a = _a_from_lambda(0.1)
    c1 = ctx.cover(1, a, 15, res)
    prod = bands.product_set(c1, c1)
    check = bands.is_interval(prod, 4.0 * res)
    biggest = max((g[1] - g[0] for g in check.offending_gaps), default=0.0)
    return CriterionResult(
        9, "small-coupling product interval", bool(check),
        f"{len(check.offending_gaps)} gaps above tol {4 * res:.1e} (largest {biggest:.3e})",
    )


def criterion_large_coupling_cantor(ctx: VerifyContext) -> CriterionResult:
    seq = ctx.cover_sequence(1, 4.0, (5, 10, 15), 1e-4)
    lengths = [bands.product_set(c, c).total_length for c in seq]
    decreasing = lengths[0] > lengths[1] > lengths[2]
    has_gaps = bands.product_set(seq[-1], seq[-1]).count > 1
    return CriterionResult(
        10, "large-coupling Cantor trend", decreasing and has_gaps,
        "product lengths " + " > ".join(f"{v:.4f}" for v in lengths)
        + f", gaps present: {has_gaps}",
    )


def criterion_zero_in_spectrum(ctx: VerifyContext) -> CriterionResult:
    survived = True
    for lam in (0.0, 0.5, 1.5, 3.75):
        p = ModelParams(1, _a_from_lambda(lam))
        v = tracemap.line_point(p, 0.0)
        if tracemap.escape_time(1, v, 10_000, tracemap.default_escape_radius(lam)) is not None:
            survived = False
    # make sure a representative family of covers exists, then check all of them
    ctx.cover(1, 1.0, 20, 1e-4)
    ctx.cover(1, _a_from_lambda(0.1), 15, 1e-4)
    ctx.cover_sequence(1, 4.0, (5, 10, 15), 1e-4)
    covers = ctx.all_covers()
    missing = [c for c in covers if not c.contains(0.0)]
    prod_ok = all(
        bands.product_set(c, c).contains(0.0) for c in covers if not c.is_empty
    )
    return CriterionResult(
        11, "zero belongs to every spectrum", survived and not missing and prod_ok,
        f"orbit of E=0 bounded for all couplings: {survived}; "
        f"{len(covers)} covers checked, {len(missing)} missing zero",
    )


def criterion_twins(ctx: VerifyContext) -> CriterionResult:
    cap = 10**7
    ok = True
    checked = 0
    for s in (1, 2, 3):
        expected = [1] * 12 if s % 2 == 0 else [1, 0, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1]
        if words.parity_pattern(s, 12) != expected:
            ok = False
        for k in range(1, 13):
            y = words.iterate(s, k, max_len=cap)
            x = words.twin_witness(s, k, max_len=cap)
            rep = words.find_twin(y, x, "odd")
            checked += 1
            if len(x) > 3 * len(y) or rep is None or not rep.check(y, x):
                ok = False
    return CriterionResult(
        12, "twin combinatorics", ok,
        f"{checked} witnesses verified for s in {{1,2,3}}, k <= 12; parity patterns match",
    )


def criterion_thickness_trend(ctx: VerifyContext) -> CriterionResult:
    lams = (1.0, 0.5, 0.2, 0.1)
    taus = [bands.thickness(ctx.cover(1, _a_from_lambda(lam), 15, 1e-4)) for lam in lams]
    inversions = []
    for i in range(len(taus) - 1):
        if taus[i + 1] < taus[i]:
            drop = (taus[i] - taus[i + 1]) / taus[i]
            inversions.append(drop)
    ok = len(inversions) == 0 or (len(inversions) == 1 and inversions[0] <= 0.05)
    shown = ", ".join("inf" if math.isinf(t) else f"{t:.3f}" for t in taus)
    return CriterionResult(
        13, "thickness trend in the coupling", ok,
        f"thickness at lambda {lams}: {shown}; inversions {len(inversions)}",
    )


_CRITERIA = [
    criterion_trace_conservation,
    criterion_semiconjugacy,
    criterion_free_spectrum,
    criterion_free_ids,
    criterion_spectral_symmetry,
    criterion_tensor_law,
    criterion_product_cdf,
    criterion_log_convolution,
    criterion_small_coupling_interval,
    criterion_large_coupling_cantor,
    criterion_zero_in_spectrum,
    criterion_twins,
    criterion_thickness_trend,
]


def run_criterion(number: int, ctx: VerifyContext | None = None) -> CriterionResult:
    if not 1 <= number <= len(_CRITERIA):
        raise ValueError(f"criterion number must be in 1..{len(_CRITERIA)}, got {number}")
    return _CRITERIA[number - 1](ctx if ctx is not None else VerifyContext())


def run_all(numbers=None) -> list[CriterionResult]:
    """Run the selected criteria (default: all measurement criteria) on a shared context."""
    ctx = VerifyContext()
    selected = range(1, len(_CRITERIA) + 1) if numbers is None else numbers
    return [run_criterion(n, ctx) for n in selected]


def format_table(results) -> str:
    lines = ["criterion                                 status  runtime  detail"]
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        if r.runtime_ok is None:
            runtime = "-"
        else:
            runtime = f"<{r.runtime_limit:.0f}s" if r.runtime_ok else "OVER"
        lines.append(f"{r.number:2d} {r.name:<38} {status:<6} {runtime:<8} {r.detail}")
    return "\n".join(lines) + "\n"


def run_determinism_check() -> tuple[CriterionResult, list[CriterionResult]]:
    """Criterion 14: run the full suite twice and compare the rendered tables."""
    first = run_all()
    second = run_all()
    identical = format_table(first) == format_table(second)
    result = CriterionResult(
        14, "determinism of the verification run", identical,
        "two fresh runs rendered byte-identical tables" if identical
        else "reruns differ: outputs are not deterministic",
    )
    return result, first
