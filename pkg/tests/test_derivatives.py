import math

import pytest

import neocalc as nc
from neocalc import ApproachMode as Mode


@pytest.fixture(scope="module")
def abs_at_zero():
    return nc.classify(nc.gallery("abs"), 0.0, r_values=(0.0, 0.5, 1.0, 1.5))


class TestQuotientSamples:
    def test_square_right_expansion(self):
        # ((x+h)^2 - x^2) / h = 2x + h
        samples = nc.quotient_samples(nc.gallery("square"), 3.0, Mode.RIGHT)
        assert samples
        for h, q in samples:
            assert q == pytest.approx(6.0 + h, abs=1e-9)

    def test_abs_left_exact(self):
        samples = nc.quotient_samples(nc.gallery("abs"), 0.0, Mode.LEFT)
        assert samples and all(q == -1.0 for _, q in samples)

    def test_linear_all_modes_exact(self):
        # raw secants of m*x + c carry roundoff of order eps * |f| / h
        f = nc.gallery("linear", 2.5, -1.0)
        for mode in Mode:
            samples = nc.quotient_samples(f, 0.5, mode)
            assert samples
            assert all(q == pytest.approx(2.5, abs=1e-8) for _, q in samples)

    def test_outside_domain_rejected(self):
        with pytest.raises(ValueError):
            nc.quotient_samples(nc.gallery("abs"), 50.0, Mode.LEFT)


class TestDiniBounds:
    def test_abs_at_zero_exact(self):
        bounds = nc.dini_bounds(nc.gallery("abs"), 0.0, Mode.CENTERED)
        assert bounds.d_lower == -1.0 and bounds.d_upper == 1.0
        assert bounds.bounded and bounds.stable
        assert bounds.left_cluster == nc.Interval(-1.0, -1.0)
        assert bounds.right_cluster == nc.Interval(1.0, 1.0)

    def test_skew_tent_kink(self):
        bounds = nc.dini_bounds(nc.gallery("skew_tent", 0.5, 0.0), 0.5,
                                Mode.CENTERED)
        assert bounds.d_lower == pytest.approx(-2.0, abs=1e-6)
        assert bounds.d_upper == pytest.approx(2.0, abs=1e-6)

    def test_square_classical(self):
        bounds = nc.dini_bounds(nc.gallery("square"), 3.0, Mode.CENTERED)
        assert bounds.d_lower == pytest.approx(6.0, abs=1e-4)
        assert bounds.d_upper == pytest.approx(6.0, abs=1e-4)
        assert bounds.stable

    def test_one_sided_modes(self):
        f = nc.gallery("abs")
        left = nc.dini_bounds(f, 0.0, Mode.LEFT)
        right = nc.dini_bounds(f, 0.0, Mode.RIGHT)
        assert left.d_lower == left.d_upper == -1.0
        assert right.d_lower == right.d_upper == 1.0

    def test_scale_diagnostics_present(self):
        bounds = nc.dini_bounds(nc.gallery("square"), 1.0, Mode.CENTERED)
        assert len(bounds.scale_diagnostics) >= 2
        for h, lo, hi in bounds.scale_diagnostics:
            assert h > 0 and lo <= hi


class TestStrongSets:
    def test_abs_examples(self, abs_at_zero):
        assert abs_at_zero.strong_sets[(Mode.CENTERED, 1.0)] == nc.Interval(0.0, 0.0)
        assert abs_at_zero.strong_sets[(Mode.TWO_SIDED, 1.0)] == nc.Interval(0.0, 0.0)
        assert abs_at_zero.strong_sets[(Mode.CENTERED, 0.5)].is_empty

    def test_abs_at_one(self):
        report = nc.classify(nc.gallery("abs"), 1.0, r_values=(0.0, 1.0))
        strong0 = report.strong_sets[(Mode.CENTERED, 0.0)]
        strong1 = report.strong_sets[(Mode.CENTERED, 1.0)]
        assert strong0.lo == pytest.approx(1.0, abs=1e-6)
        assert strong0.hi == pytest.approx(1.0, abs=1e-6)
        assert strong1.lo == pytest.approx(0.0, abs=1e-6)
        assert strong1.hi == pytest.approx(2.0, abs=1e-6)

    def test_unbounded_mode_empty(self):
        report = nc.classify(nc.gallery("spike33"), 0.0, r_values=(10.0,))
        assert report.strong_sets[(Mode.LEFT, 10.0)].is_empty


class TestWeakSets:
    def test_two_components_at_kink(self, abs_at_zero):
        weak0 = abs_at_zero.weak_sets[(Mode.CENTERED, 0.0)]
        assert weak0 == (nc.Interval(-1.0, -1.0), nc.Interval(1.0, 1.0))

    def test_merge_when_inflated(self, abs_at_zero):
        weak = abs_at_zero.weak_sets[(Mode.CENTERED, 1.5)]
        assert weak == (nc.Interval(-2.5, 2.5),)

    def test_two_sided_hull(self, abs_at_zero):
        assert abs_at_zero.weak_sets[(Mode.TWO_SIDED, 0.0)] == \
            (nc.Interval(-1.0, 1.0),)

    def test_strong_inside_weak_union(self, abs_at_zero):
        for (mode, r), strong in abs_at_zero.strong_sets.items():
            if strong.is_empty:
                continue
            union = abs_at_zero.weak_sets[(mode, r)]
            for z in (strong.lo, strong.midpoint, strong.hi):
                assert any(part.contains(z, tol=1e-9) for part in union)


class TestDefectAndMembership:
    def test_defects(self, abs_at_zero):
        assert abs_at_zero.defect == 1.0
        report = nc.classify(nc.gallery("skew_tent", 0.5, 0.0), 0.5)
        assert report.defect == pytest.approx(2.0, abs=1e-6)
        smooth = nc.classify(nc.gallery("square"), 2.0)
        assert smooth.defect == pytest.approx(0.0, abs=1e-4)

    def test_defect_is_minimal_radius(self, abs_at_zero):
        centered = abs_at_zero.per_mode[Mode.CENTERED]
        defect = nc.derivative_defect(centered)
        assert nc.strong_set(centered, defect) == nc.Interval(0.0, 0.0)
        assert nc.strong_set(centered, defect * 0.999).is_empty

    def test_membership(self, abs_at_zero):
        assert nc.membership_mu(abs_at_zero, Mode.CENTERED, 0.0) == 0.5
        smooth = nc.classify(nc.gallery("square"), 3.0)
        assert nc.membership_mu(smooth, Mode.CENTERED, 6.0) == \
            pytest.approx(1.0, abs=1e-3)
        at_one = nc.classify(nc.gallery("abs"), 1.0)
        assert nc.membership_mu(at_one, Mode.CENTERED, 2.0) == \
            pytest.approx(0.5, abs=1e-6)

    def test_membership_of_unbounded_mode_is_zero(self):
        report = nc.classify(nc.gallery("spike33"), 0.0)
        assert nc.membership_mu(report, Mode.LEFT, 1.0) == 0.0

    def test_membership_is_not_additive_under_cancellation(self):
        # kinks of f and -f cancel: the sum grades 0 with a full 1 while
        # each operand only grades it 1/2
        f = nc.gallery("abs")
        g = nc.combine_oracles(f, None, "scale", k=-1.0)
        total = nc.classify(nc.combine_oracles(f, g, "add"), 0.0)
        assert nc.membership_mu(total, Mode.CENTERED, 0.0) == 1.0
        assert nc.membership_mu(nc.classify(f, 0.0), Mode.CENTERED, 0.0) == 0.5
        assert nc.membership_mu(nc.classify(g, 0.0), Mode.CENTERED, 0.0) == 0.5

    def test_strong_sets_monotone_in_radius(self):
        for name, params, x in (("abs", (), 0.0), ("skew_tent", (0.7, 0.2), 0.7),
                                ("square", (), 1.5)):
            bounds = nc.dini_bounds(nc.gallery(name, *params), x, Mode.CENTERED)
            previous = nc.strong_set(bounds, 0.0)
            for r in (0.25, 0.5, 1.0, 2.0, 4.0):
                current = nc.strong_set(bounds, r)
                assert current.contains_interval(previous)
                previous = current

    def test_clusters_inside_envelope(self):
        for name, params, x in (("abs", (), 0.0), ("square", (), 2.0),
                                ("skew_tent", (0.5, 0.0), 0.5)):
            for mode in (Mode.CENTERED, Mode.LEFT, Mode.RIGHT, Mode.TWO_SIDED):
                b = nc.dini_bounds(nc.gallery(name, *params), x, mode)
                hull = nc.Interval(b.d_lower, b.d_upper)
                assert hull.contains_interval(b.left_cluster, tol=1e-12)
                assert hull.contains_interval(b.right_cluster, tol=1e-12)


class TestClassify:
    def test_square_classical(self):
        report = nc.classify(nc.gallery("square"), 3.0)
        assert report.classification is nc.Classification.CLASSICALLY_DIFFERENTIABLE
        assert report.derivative_estimate == pytest.approx(6.0, abs=1e-4)

    def test_abs_kink_fuzzy(self, abs_at_zero):
        assert abs_at_zero.classification is nc.Classification.FUZZY_DIFFERENTIABLE

    def test_spike(self):
        report = nc.classify(nc.gallery("spike33"), 0.0)
        assert report.classification is nc.Classification.NOT_FUZZY_DIFFERENTIABLE
        assert not report.per_mode[Mode.LEFT].bounded
        assert not report.per_mode[Mode.RIGHT].bounded
        two = report.per_mode[Mode.TWO_SIDED]
        assert two.bounded
        assert two.d_lower == pytest.approx(-1.0, abs=1e-3)
        assert two.d_upper == pytest.approx(1.0, abs=1e-3)
        assert report.continuity_defect == pytest.approx(1.0, abs=1e-3)
        assert math.isinf(report.defect)

    def test_boundary_degrades(self):
        tent = nc.gallery("skew_tent", 0.5, 0.0)
        at_left = nc.classify(tent, 0.0)
        assert Mode.LEFT not in at_left.per_mode
        assert "boundary_degraded" in at_left.flags
        assert at_left.derivative_estimate == pytest.approx(2.0, abs=1e-6)
        at_right = nc.classify(tent, 1.0)
        assert Mode.RIGHT not in at_right.per_mode
        assert at_right.derivative_estimate == pytest.approx(-2.0, abs=1e-6)

    def test_budget_exhaustion_flagged(self):
        small = nc.gallery("square", eval_budget=10)
        report = nc.classify(small, 1.0)
        assert "budget_exhausted" in report.flags

    def test_domain_clip_flagged(self):
        # close to the boundary the coarse scales fall outside the domain
        report = nc.classify(nc.gallery("skew_tent", 0.5, 0.0), 0.05)
        assert "domain_clipped" in report.flags
        assert report.classification is nc.Classification.CLASSICALLY_DIFFERENTIABLE

    def test_sampled_oracle_mesh_limited(self):
        xs = [i / 100 for i in range(-200, 201)]
        oracle = nc.oracle_from_samples(xs, [abs(x) for x in xs])
        report = nc.classify(oracle, 0.0)
        assert "mesh_limited" in report.flags
        # secant slopes of sampled |x| still give the kink envelope
        centered = report.per_mode[Mode.CENTERED]
        assert centered.d_lower == pytest.approx(-1.0, abs=1e-9)
        assert centered.d_upper == pytest.approx(1.0, abs=1e-9)


class TestCombineReports:
    def test_double_kink(self):
        f = nc.gallery("abs")
        rf = nc.classify(f, 0.0)
        pred = nc.combine_reports(rf, rf, "add")
        assert pred.defect_bound == 2.0
        direct = nc.classify(nc.combine_oracles(f, f, "add"), 0.0)
        assert direct.defect == pytest.approx(2.0, abs=1e-9)
        lo, hi, bounded = pred.per_mode[Mode.CENTERED]
        assert bounded and lo == -2.0 and hi == 2.0

    def test_cancellation_is_strict(self):
        f = nc.gallery("abs")
        g = nc.combine_oracles(f, None, "scale", k=-1.0)
        pred = nc.combine_reports(nc.classify(f, 0.0), nc.classify(g, 0.0), "add")
        direct = nc.classify(nc.combine_oracles(f, g, "add"), 0.0)
        assert direct.defect == 0.0
        assert pred.defect_bound == 2.0
        assert pred.predicted_strong(Mode.CENTERED, 2.0).contains_interval(
            nc.strong_set(direct.per_mode[Mode.CENTERED], 0.0))

    def test_scale(self):
        rf = nc.classify(nc.gallery("abs"), 0.0)
        pred = nc.combine_reports(rf, None, "scale", k=-3.0)
        assert pred.defect_bound == 3.0
        lo, hi, _ = pred.per_mode[Mode.CENTERED]
        assert (lo, hi) == (-3.0, 3.0)
        direct = nc.classify(
            nc.combine_oracles(nc.gallery("abs"), None, "scale", k=-3.0), 0.0)
        assert direct.defect == pytest.approx(3.0, abs=1e-9)

    def test_point_mismatch_rejected(self):
        f = nc.gallery("square")
        with pytest.raises(ValueError):
            nc.combine_reports(nc.classify(f, 0.0), nc.classify(f, 1.0), "add")


class TestGlobalProfile:
    def test_square_profile(self):
        rows = nc.global_profile(nc.gallery("square"), [-1.0, 0.0, 1.0], 0.1)
        for row, x in zip(rows, (-1.0, 0.0, 1.0)):
            assert row.error is None
            assert row.strong.lo == pytest.approx(2 * x - 0.1, abs=1e-4)
            assert row.strong.hi == pytest.approx(2 * x + 0.1, abs=1e-4)

    def test_abs_profile_r0(self):
        rows = nc.global_profile(nc.gallery("abs"), [-0.5, 0.0, 0.5], 0.0)
        assert rows[0].strong == nc.Interval(-1.0, -1.0)
        assert rows[1].strong.is_empty
        assert rows[2].strong == nc.Interval(1.0, 1.0)

    def test_tent_profile_kink_location(self):
        grid = [i / 100 for i in range(101)]
        rows = nc.global_profile(nc.gallery("skew_tent", 0.7, 0.2), grid, 0.0)
        empties = [row.x for row in rows if row.strong.is_empty]
        assert empties == [0.7]

    def test_mu_band_is_strong_one_set(self):
        rows = nc.global_profile(nc.gallery("abs"), [0.0], 0.0)
        assert rows[0].mu_band == nc.Interval(0.0, 0.0)

    def test_grid_outside_domain(self):
        with pytest.raises(ValueError):
            nc.global_profile(nc.gallery("skew_tent", 0.5, 0.0), [0.0, 2.0], 0.1)
