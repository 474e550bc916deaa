import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasilab.bands import (
    BandCover,
    box_dimension_estimate,
    cantor_stats,
    gaps,
    is_interval,
    log_positive_part,
    merge_intervals,
    middle_thirds_cover,
    product_set,
    sum_set,
    thickness,
)
from quasilab.errors import ResourceLimitError


def sample_points(cover, per_band=5):
    pts = []
    for lo, hi in cover.intervals:
        pts.extend(np.linspace(lo, hi, per_band))
    return pts


# strategy for small well-formed covers
@st.composite
def covers(draw, max_bands=5, lo=-5.0, hi=5.0):
    edges = draw(
        st.lists(
            st.floats(min_value=lo, max_value=hi, allow_nan=False),
            min_size=2,
            max_size=2 * max_bands,
            unique=True,
        )
    )
    edges = sorted(edges)
    if len(edges) % 2:
        edges = edges[:-1]
    ivs = [(edges[i], edges[i + 1]) for i in range(0, len(edges), 2)]
    return BandCover(tuple(ivs))


class TestMergeIntervals:
    def test_merges_overlaps(self):
        assert merge_intervals([(0, 2), (1, 3), (5, 6)]) == ((0.0, 3.0), (5.0, 6.0))

    def test_merges_touching(self):
        assert merge_intervals([(0, 1), (1, 2)]) == ((0.0, 2.0),)

    def test_merge_tol(self):
        assert merge_intervals([(0, 1), (1.5, 2)], merge_tol=0.6) == ((0.0, 2.0),)
        assert merge_intervals([(0, 1), (1.5, 2)], merge_tol=0.4) == ((0.0, 1.0), (1.5, 2.0))

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            merge_intervals([(i, i + 0.4) for i in range(100)], cap=10)

    @given(st.lists(st.tuples(st.floats(-10, 10), st.floats(0, 3)), min_size=1, max_size=30))
    def test_output_sorted_disjoint_and_covers_inputs(self, raw):
        pairs = [(a, a + w) for a, w in raw]
        merged = merge_intervals(pairs)
        for (_, b), (c, _) in zip(merged, merged[1:]):
            assert c > b
        for a, w in raw:
            assert any(lo <= a and a + w <= hi for lo, hi in merged)


class TestBandCover:
    def test_validation(self):
        with pytest.raises(ValueError):
            BandCover(((0, 1), (0.5, 2)))
        with pytest.raises(ValueError):
            BandCover(((1, 0),))

    def test_basic_properties(self):
        c = BandCover(((0, 1), (2, 3)))
        assert c.hull == (0.0, 3.0)
        assert c.total_length == 2.0
        assert c.contains(0.5) and c.contains(2.0) and not c.contains(1.5)

    def test_covers_relation(self):
        big = BandCover(((0, 1), (2, 3)))
        small = BandCover(((0.2, 0.4), (2.5, 3.0)))
        assert big.covers(small)
        assert not small.covers(big)

    def test_json_shape(self):
        c = BandCover(((0, 1),), level=3, s=1, coupling=0.5, resolution=1e-4)
        assert c.to_json_obj() == {
            "s": 1, "lambda": 0.5, "level": 3, "resolution": 1e-4, "bands": [[0.0, 1.0]],
        }


class TestGapsAndThickness:
    def test_single_band_no_gaps(self):
        c = BandCover(((0, 1),))
        assert gaps(c) == []
        assert thickness(c) == math.inf

    def test_two_bands(self):
        c = BandCover(((0, 1), (2, 3)))
        assert gaps(c) == [(1.0, 2.0)]

    def test_middle_thirds_level_2_gaps(self):
        c = middle_thirds_cover(2)
        got = gaps(c)
        want = [(1 / 9, 2 / 9), (1 / 3, 2 / 3), (7 / 9, 8 / 9)]
        assert np.allclose(got, want)

    def test_thickness_example(self):
        # gap 0.5 flanked by bridges of length 1 on both sides
        c = BandCover(((0.0, 1.0), (1.5, 2.5)))
        assert thickness(c) == pytest.approx(2.0)

    @pytest.mark.parametrize("level", [1, 2, 3, 5, 8])
    def test_middle_thirds_thickness_is_one(self, level):
        # bridges equal gaps at every construction scale
        assert thickness(middle_thirds_cover(level)) == pytest.approx(1.0)

    def test_ordered_gap_bridges(self):
        # the bridge of the small gap stops at the neighbouring larger gap,
        # the bridge of the large gap runs to the hull boundary
        c = BandCover(((0.0, 4.0), (6.0, 7.0), (7.5, 11.5)))
        # gaps: (4,6) len 2, (7,7.5) len 0.5
        # large gap: bridges 4 (hull to 4) and 5.5... min(4, 11.5-6=5.5)/2 = 2
        # wait: right bridge of (4,6) extends to hull end since no gap >= 2 on right
        assert thickness(c) == pytest.approx(min(min(4.0, 5.5) / 2.0, min(1.0, 4.0) / 0.5))

    @given(covers(), st.sampled_from([0.5, 2.0, 4.0, 2.0**-10, 2.0**13]))
    def test_thickness_scale_invariant_exact_for_pow2(self, c, factor):
        # powers of two rescale every endpoint exactly, so the ratio set is identical
        t1 = thickness(c)
        t2 = thickness(c.scaled(factor))
        if math.isinf(t1):
            assert math.isinf(t2)
        else:
            assert t2 == t1

    @given(covers(), st.floats(min_value=0.1, max_value=7.0))
    def test_thickness_scale_invariant_generally(self, c, factor):
        t1, t2 = thickness(c), thickness(c.scaled(factor))
        if math.isinf(t1):
            assert math.isinf(t2)
        else:
            assert t2 == pytest.approx(t1, rel=1e-9)


class TestBoxDimension:
    def test_middle_thirds(self):
        seq = [middle_thirds_cover(k) for k in range(1, 9)]
        est = box_dimension_estimate(seq)
        assert est == pytest.approx(math.log(2) / math.log(3), abs=0.02)

    def test_uniformly_refined_interval(self):
        # an interval kept as ever finer touching-but-disjoint pieces has dimension 1
        seq = []
        for k in (2, 3, 4, 5, 6):
            n = 2**k
            eps = 2.0**-40
            ivs = tuple((i / n, (i + 1) / n - eps) for i in range(n))
            seq.append(BandCover(ivs))
        assert box_dimension_estimate(seq) == pytest.approx(1.0, abs=1e-6)

    def test_needs_three_levels(self):
        with pytest.raises(ValueError):
            box_dimension_estimate([middle_thirds_cover(1), middle_thirds_cover(2)])

    def test_degenerate_scales(self):
        seq = [middle_thirds_cover(k) for k in (1, 2, 3)]
        with pytest.raises(ValueError):
            box_dimension_estimate(seq, scales=[0.5, 0.5, 0.5])

    def test_cantor_stats_bundle(self):
        seq = [middle_thirds_cover(k) for k in range(1, 6)]
        stats = cantor_stats(seq)
        assert stats.thickness_estimate == pytest.approx(1.0)
        assert stats.box_dim_estimate == pytest.approx(math.log(2) / math.log(3), abs=0.02)
        assert stats.hull == (0.0, 1.0)
        obj = cantor_stats(BandCover(((0, 1),))).to_json_obj()
        assert obj["thickness_estimate"] == "inf" and obj["box_dim_estimate"] is None


class TestProductSet:
    def test_symmetric_squares(self):
        c = BandCover(((-2.0, 2.0),))
        assert product_set(c, c).intervals == ((-4.0, 4.0),)

    def test_positive_bands(self):
        a = BandCover(((1.0, 2.0),))
        b = BandCover(((3.0, 4.0),))
        assert product_set(a, b).intervals == ((3.0, 8.0),)

    def test_identity_band(self):
        a = BandCover(((-2.0, -1.0), (1.0, 2.0)))
        one = BandCover(((1.0, 1.0),))
        assert product_set(a, one).intervals == a.intervals

    @given(covers(max_bands=3), covers(max_bands=3))
    @settings(max_examples=60)
    def test_contains_pointwise_products(self, a, b):
        prod = product_set(a, b)
        for x in sample_points(a, 3):
            for y in sample_points(b, 3):
                assert prod.contains(x * y)


class TestSumSet:
    def test_unit_intervals(self):
        c = BandCover(((0.0, 1.0),))
        assert sum_set(c, c).intervals == ((0.0, 2.0),)

    def test_translated_bands(self):
        a = BandCover(((0.0, 1.0), (10.0, 11.0)))
        b = BandCover(((0.0, 1.0),))
        assert sum_set(a, b).intervals == ((0.0, 2.0), (10.0, 12.0))

    def test_middle_thirds_sum_fills_interval(self):
        # classical: C + C = [0, 2]; at level 10 the cover sum leaves only
        # float-rounding slivers, far below any geometric scale
        c = middle_thirds_cover(10)
        s = sum_set(c, c)
        assert s.hull == (0.0, 2.0)
        assert bool(is_interval(s, 1e-12))

    @given(covers(max_bands=3), covers(max_bands=3))
    @settings(max_examples=60)
    def test_contains_pointwise_sums(self, a, b):
        total = sum_set(a, b)
        for x in sample_points(a, 3):
            for y in sample_points(b, 3):
                assert total.contains(x + y)


class TestLogPositivePart:
    def test_log_of_unit_to_e(self):
        c = BandCover(((1.0, math.e),))
        out = log_positive_part(c)
        assert out.intervals[0][0] == pytest.approx(0.0)
        assert out.intervals[0][1] == pytest.approx(1.0)

    def test_clips_bands_crossing_zero(self):
        c = BandCover(((-2.0, 2.0),))
        out = log_positive_part(c, floor=1e-12)
        assert out.intervals[0][0] == pytest.approx(math.log(1e-12))
        assert out.intervals[0][1] == pytest.approx(math.log(2.0))

    def test_exp_band(self):
        c = BandCover(((math.e, math.e**2),))
        out = log_positive_part(c)
        assert np.allclose(out.intervals, [(1.0, 2.0)])

    def test_empty_positive_part_raises(self):
        with pytest.raises(ValueError):
            log_positive_part(BandCover(((-3.0, -1.0),)))

    def test_roundtrip_with_sum(self):
        # exp(log A + log B) recovers the product hull for positive covers
        a = BandCover(((1.0, 2.0),))
        b = BandCover(((3.0, 4.0),))
        s = sum_set(log_positive_part(a), log_positive_part(b))
        lo, hi = s.hull
        assert math.exp(lo) == pytest.approx(3.0)
        assert math.exp(hi) == pytest.approx(8.0)


class TestIsInterval:
    def test_single_band(self):
        assert bool(is_interval(BandCover(((0, 1),)), 0.0))

    def test_detects_gap(self):
        chk = is_interval(BandCover(((0, 1), (2, 3))), 0.5)
        assert not chk
        assert chk.offending_gaps == ((1.0, 2.0),)

    def test_tolerates_small_gaps(self):
        assert bool(is_interval(BandCover(((0, 1), (1.0001, 2))), 1e-3))
