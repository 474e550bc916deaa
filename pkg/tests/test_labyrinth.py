import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quasilab.errors import ResourceLimitError
from quasilab.labyrinth import (
    LabyrinthParams,
    build_2d,
    count_products_leq,
    dense_eigs_2d,
    dos2d_cdf,
    eigs_1d_axes,
    log_convolution_cdf,
    product_eigs,
    spectrum_2d,
    sublattice_dos_compare,
    zero_product_mass,
)
from quasilab.bands import is_interval
from quasilab.jacobi1d import build_window

FREE = LabyrinthParams(1, 1.0, 1.0)
GENERIC = LabyrinthParams(1, 1.3, 1.5)


class TestParams:
    def test_couplings(self):
        p = LabyrinthParams(1, 2.0, 1.0)
        assert p.couplings == pytest.approx((1.5, 0.0))
        assert p.axis1.a == 2.0 and p.axis2.a == 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            LabyrinthParams(0, 1.0, 1.0)
        with pytest.raises(ValueError):
            LabyrinthParams(1, -1.0, 1.0)


class TestBuild2D:
    def test_free_2x2_corners(self):
        op = build_2d(FREE, 2)
        # each corner couples only to the opposite corner, with weight 1
        assert op.entries[(0, 0, 1, 1)] == 1.0
        assert op.entries[(1, 1, -1, -1)] == 1.0
        assert (0, 0, 1, -1) not in op.entries  # would leave the box
        assert op.num_sites == 4

    def test_first_coupling_weights(self):
        p = LabyrinthParams(2, 3.0, 5.0)
        op = build_2d(p, 4)
        w1 = build_window(p.axis1, 3).weights  # omega1(1..3)
        w2 = build_window(p.axis2, 3).weights
        assert op.entries[(0, 0, 1, 1)] == w1[0] * w2[0]
        assert op.entries[(2, 1, 1, -1)] == w1[2] * w2[0]

    def test_symmetry_of_entries(self):
        op = build_2d(GENERIC, 5)
        for (m, n, dm, dn), w in op.entries.items():
            assert op.entries[(m + dm, n + dn, -dm, -dn)] == w

    def test_parity_split_partitions_sites(self):
        full = build_2d(GENERIC, 5)
        even = build_2d(GENERIC, 5, "even")
        odd = build_2d(GENERIC, 5, "odd")
        assert set(even.sites) | set(odd.sites) == set(full.sites)
        assert not set(even.sites) & set(odd.sites)
        assert all((m + n) % 2 == 0 for m, n in even.sites)

    def test_full_is_direct_sum_of_parities(self):
        # no coupling connects the two parity classes
        dense = build_2d(GENERIC, 4).to_dense()
        sites = build_2d(GENERIC, 4).sites
        for i, (m1, n1) in enumerate(sites):
            for j, (m2, n2) in enumerate(sites):
                if (m1 + n1) % 2 != (m2 + n2) % 2:
                    assert dense[i, j] == 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            build_2d(FREE, 1)
        with pytest.raises(ValueError):
            build_2d(FREE, 3, "diagonal")


class TestDenseEigs2D:
    def test_free_2x2(self):
        got = dense_eigs_2d(build_2d(FREE, 2)).support
        assert np.allclose(got, [-1.0, -1.0, 1.0, 1.0])

    def test_symmetric_multiset(self):
        e = dense_eigs_2d(build_2d(GENERIC, 6)).support
        assert np.max(np.abs(e + e[::-1])) < 1e-9

    def test_size_cap(self):
        with pytest.raises(ResourceLimitError):
            dense_eigs_2d(build_2d(FREE, 17))


class TestProductEigs:
    def test_free_3x3_multiset(self):
        got = np.sort(product_eigs(FREE, 3).support)
        want = np.sort([2.0, 0.0, -2.0, 0.0, 0.0, 0.0, -2.0, 0.0, 2.0])
        assert np.allclose(got, want, atol=1e-9)

    def test_count(self):
        assert product_eigs(GENERIC, 5).size == 25

    @pytest.mark.parametrize("n", [4, 6, 8])
    @pytest.mark.parametrize("params", [GENERIC, LabyrinthParams(2, 2.0, 2.0)])
    def test_tensor_law(self, n, params):
        dense = dense_eigs_2d(build_2d(params, n)).support
        prod = np.sort(product_eigs(params, n).support)
        assert np.max(np.abs(dense - prod)) < 1e-7

    def test_zero_mass_odd_n(self):
        n = 5
        assert zero_product_mass(GENERIC, n) == pytest.approx((2 * n - 1) / n**2)

    def test_zero_mass_even_n(self):
        assert zero_product_mass(GENERIC, 6) == 0.0

    def test_snapped_zero_for_odd_n(self):
        e1, e2 = eigs_1d_axes(GENERIC, 7)
        assert e1[3] == 0.0 and e2[3] == 0.0


class TestProductCounting:
    @given(
        st.lists(st.floats(min_value=-4, max_value=4), min_size=1, max_size=18),
        st.lists(st.floats(min_value=-4, max_value=4), min_size=1, max_size=18),
        st.floats(min_value=-17, max_value=17),
    )
    def test_sorted_matches_direct_exactly(self, e1, e2, bound):
        assert count_products_leq(e1, e2, bound, "sorted") == count_products_leq(
            e1, e2, bound, "direct"
        )

    @given(
        st.lists(st.sampled_from([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]), min_size=1, max_size=16),
        st.lists(st.sampled_from([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]), min_size=1, max_size=16),
        st.sampled_from([-4.0, -1.0, -0.0, 0.0, 0.25, 1.0, 4.0]),
    )
    def test_sorted_matches_direct_with_ties(self, e1, e2, bound):
        assert count_products_leq(e1, e2, bound, "sorted") == count_products_leq(
            e1, e2, bound, "direct"
        )

    def test_method_validation(self):
        with pytest.raises(ValueError):
            count_products_leq([1.0], [1.0], 0.0, "magic")


class TestDos2dCdf:
    def test_limits(self):
        assert dos2d_cdf(GENERIC, 1e9, 8) == 1.0
        assert dos2d_cdf(GENERIC, -1e9, 8) == 0.0

    def test_single_site_box(self):
        # the 1x1 restriction is the zero matrix; its only product is 0
        assert dos2d_cdf(GENERIC, 0.0, 1) == 1.0
        assert dos2d_cdf(GENERIC, -0.1, 1) == 0.0

    def test_half_at_zero_even_n(self):
        assert dos2d_cdf(GENERIC, 0.0, 8) == pytest.approx(0.5)
        assert dos2d_cdf(LabyrinthParams(2, 4.0, 1.7), 0.0, 12) == pytest.approx(0.5)

    def test_matches_dense_cdf(self):
        n = 8
        dense = dense_eigs_2d(build_2d(GENERIC, n))
        grid = np.linspace(-4.5, 4.5, 101)
        got = dos2d_cdf(GENERIC, grid, n)
        assert np.max(np.abs(got - dense.cdf(grid))) <= 1 / n**2 + 1e-9

    def test_monotone_right_continuous_step(self):
        grid = np.linspace(-6, 6, 241)
        vals = dos2d_cdf(GENERIC, grid, 12)
        assert np.all(np.diff(vals) >= 0)
        prods = product_eigs(GENERIC, 12).support
        # right continuity: value at an atom includes the atom
        e = float(prods[len(prods) // 3])
        assert dos2d_cdf(GENERIC, e, 12) > dos2d_cdf(GENERIC, e - 1e-9, 12)

    def test_symmetry_up_to_zero_mass(self):
        n = 9
        zm = zero_product_mass(GENERIC, n)
        for e in (0.3, 1.1, 2.7):
            lhs = dos2d_cdf(GENERIC, -e, n) + dos2d_cdf(GENERIC, e, n)
            # F(-E) + F(E^-) = 1 plus whatever sits exactly at the two endpoints
            assert abs(lhs - 1.0) <= zm + 2.0 / n**2 + 1e-12


class TestLogConvolution:
    def test_positive_halfline_is_half(self):
        val = log_convolution_cdf(LabyrinthParams(1, 1.2, 1.4), (0.0, math.inf), 64, 256)
        assert val == pytest.approx(0.5, abs=1e-12)

    def test_negative_interval_uses_minus_part_only(self):
        p = LabyrinthParams(1, 1.2, 1.4)
        whole_neg = log_convolution_cdf(p, (-math.inf, 0.0), 64, 256)
        assert whole_neg == pytest.approx(0.5, abs=1e-12)

    def test_agrees_with_direct_counting(self):
        p = LabyrinthParams(1, 1.6, 1.6)
        n, bins = 256, 512
        prods = product_eigs(p, n)
        qs = np.quantile(prods.support, np.linspace(0.05, 0.95, 13))
        tol = 2.0 / bins + 2.0 * (2 * n - 1) / n**2
        for lo, hi in zip(qs, qs[1:]):
            direct = dos2d_cdf(p, hi, n) - dos2d_cdf(p, lo, n)
            conv = log_convolution_cdf(p, (float(lo), float(hi)), n, bins)
            assert abs(conv - direct) <= tol

    def test_validation(self):
        with pytest.raises(ValueError):
            log_convolution_cdf(GENERIC, (0.0, 1.0), 16, 8)
        with pytest.raises(ValueError):
            log_convolution_cdf(GENERIC, (1.0, 0.0), 16, 256)


class TestSpectrum2D:
    def test_free_square(self):
        c = spectrum_2d(FREE, 16, 1e-3)
        assert c.count == 1
        lo, hi = c.intervals[0]
        assert lo == pytest.approx(-4.0, abs=5e-3)
        assert hi == pytest.approx(4.0, abs=5e-3)

    def test_small_coupling_interval(self):
        lam = 0.1
        a = (lam + math.sqrt(lam * lam + 4)) / 2
        c = spectrum_2d(LabyrinthParams(1, a, a), 15, 1e-4)
        assert bool(is_interval(c, 4e-4))

    def test_large_coupling_has_gaps(self):
        c = spectrum_2d(LabyrinthParams(1, 4.0, 4.0), 15, 1e-4)
        assert not bool(is_interval(c, 4e-4))

    def test_products_lie_in_cover_hull(self):
        p = LabyrinthParams(1, 2.0, 1.5)
        c = spectrum_2d(p, 10, 1e-3)
        prods = product_eigs(p, 32).support
        lo, hi = c.hull
        assert prods[0] >= lo - 1e-6 and prods[-1] <= hi + 1e-6


class TestSublattices:
    def test_full_equals_disjoint_union(self):
        n = 6
        full = dense_eigs_2d(build_2d(GENERIC, n)).support
        even = dense_eigs_2d(build_2d(GENERIC, n, "even")).support
        odd = dense_eigs_2d(build_2d(GENERIC, n, "odd")).support
        assert np.allclose(np.sort(np.concatenate([even, odd])), full, atol=1e-9)

    def test_free_distance_small(self):
        rep = sublattice_dos_compare(LabyrinthParams(1, 1.0, 1.0), 8)
        assert rep.even_odd_distance <= 0.15
        assert rep.sizes[0] == 64 and rep.sizes[1] + rep.sizes[2] == 64

    def test_distance_shrinks_with_n(self):
        p = GENERIC
        d8 = sublattice_dos_compare(p, 8).even_odd_distance
        d16 = sublattice_dos_compare(p, 16).even_odd_distance
        assert d16 <= d8

    def test_report_json(self):
        rep = sublattice_dos_compare(FREE, 4)
        obj = rep.to_json_obj()
        assert obj["n"] == 4 and obj["sites_full"] == 16
