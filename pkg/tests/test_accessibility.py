import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from accesswalk.accessibility import (
    accessibility_field,
    diversity_entropy,
    field_from_walk_result,
    outward_accessibility,
    region_mean_curve,
    write_accessibility_csv,
    accessibility_geojson,
)
from accesswalk.errors import EstimationError
from accesswalk.oracle import exact_accessibility
from accesswalk.walks import WalkConfig, estimate_all, walk_entropy_field
from accesswalk import synth


class TestDiversityEntropy:
    def test_deterministic_outcome(self):
        assert diversity_entropy({5: 1.0}) == 0.0

    def test_two_way_uniform(self):
        assert diversity_entropy({0: 0.5, 1: 0.5}) == pytest.approx(math.log(2), abs=1e-15)

    def test_zero_mass_is_zero(self):
        assert diversity_entropy({}) == 0.0

    def test_half_quarter_quarter(self):
        # closed form: 0.5 ln 2 + 0.5 ln 4
        expected = 0.5 * math.log(2) + 0.5 * math.log(4)
        got = diversity_entropy({1: 0.5, 2: 0.25, 3: 0.25})
        assert got == pytest.approx(expected, abs=1e-15)
        assert got == pytest.approx(1.039720, abs=1e-6)

    def test_zero_entries_contribute_nothing(self):
        with_zero = diversity_entropy({1: 0.5, 2: 0.5, 3: 0.0})
        assert with_zero == diversity_entropy({1: 0.5, 2: 0.5})

    def test_negative_probability_rejected(self):
        with pytest.raises(EstimationError):
            diversity_entropy({0: -0.1})

    def test_probability_above_one_rejected(self):
        with pytest.raises(EstimationError):
            diversity_entropy({0: 1.5})

    def test_mass_above_one_rejected(self):
        with pytest.raises(EstimationError, match="mass"):
            diversity_entropy({0: 0.7, 1: 0.7})

    def test_float_dust_above_one_tolerated(self):
        assert diversity_entropy({0: 1.0 + 5e-16}) >= 0.0


class TestOutwardAccessibility:
    def test_star_center_is_maximal(self):
        # uniform over 3 leaves, N=4: exp(ln 3)/3 = 1
        e = diversity_entropy({1: 1 / 3, 2: 1 / 3, 3: 1 / 3})
        assert outward_accessibility(e, 4, survival=1.0) == pytest.approx(1.0, abs=1e-15)

    def test_forced_convergence(self):
        # C4 step 2: all mass on one node, N=4
        assert outward_accessibility(0.0, 4, survival=1.0) == pytest.approx(1 / 3, abs=1e-15)

    def test_zero_survival_is_zero(self):
        assert outward_accessibility(0.0, 4, survival=0.0) == 0.0

    def test_literal_mode_keeps_formula_value(self):
        v = outward_accessibility(0.0, 4, survival=0.0, literal_zero_survival=True)
        assert v == pytest.approx(1 / 3, abs=1e-15)

    def test_small_network_rejected(self):
        with pytest.raises(ValueError):
            outward_accessibility(0.5, 1, survival=1.0)

    def test_negative_entropy_rejected(self):
        with pytest.raises(EstimationError):
            outward_accessibility(-0.1, 4, survival=1.0)

    def test_monotone_in_entropy(self):
        values = [outward_accessibility(e, 10, 1.0) for e in (0.0, 0.5, 1.0, 2.0)]
        assert values == sorted(values)
        assert len(set(values)) == len(values)


class TestAccessibilityField:
    def test_c4_exact_values(self, c4):
        field = exact_accessibility(c4, 4)
        expected = np.array([2 / 3, 1 / 3, 2 / 3, 0.0])
        for u in range(4):
            assert np.allclose(field.oa_of(u), expected, atol=1e-12)
            assert field.mean_oa_of(u) == pytest.approx(5 / 12, abs=1e-12)

    def test_p3_end_node(self, p3):
        field = exact_accessibility(p3, 2)
        assert np.allclose(field.oa_of(0), [0.5, 0.5], atol=1e-12)
        assert field.mean_oa_of(0) == pytest.approx(0.5, abs=1e-12)

    def test_star_center_and_leaf(self, star3):
        field = exact_accessibility(star3, 2)
        assert np.allclose(field.oa_of(0), [1.0, 0.0], atol=1e-12)
        assert np.allclose(field.oa_of(1), [1 / 3, 2 / 3], atol=1e-12)

    def test_vertex_transitive_cycle_identical_rows(self):
        c6 = synth.cycle_network(6)
        field = exact_accessibility(c6, 6)
        for u in range(1, 6):
            assert np.array_equal(field.oa_of(u), field.oa_of(0))

    def test_monte_carlo_close_to_exact(self, c4):
        cfg = WalkConfig(max_steps=4, walks_per_source=10_000, master_seed=5)
        mc = accessibility_field(estimate_all(c4, cfg), c4.node_count)
        exact = exact_accessibility(c4, 4)
        assert np.allclose(mc.oa, exact.oa, atol=0.02)

    def test_inconsistent_steps_rejected(self, p3):
        e1 = estimate_all(p3, WalkConfig(max_steps=2, walks_per_source=10, master_seed=0))
        e2 = estimate_all(p3, WalkConfig(max_steps=3, walks_per_source=10, master_seed=0))
        with pytest.raises(ValueError, match="inconsistent max_steps"):
            accessibility_field([e1[0], e2[1]], p3.node_count)

    def test_step_range_mean(self, c4):
        field = exact_accessibility(c4, 4, step_range=(1, 2))
        assert field.mean_oa_of(0) == pytest.approx((2 / 3 + 1 / 3) / 2, abs=1e-12)

    def test_bad_step_range(self, c4):
        with pytest.raises(ValueError):
            exact_accessibility(c4, 4, step_range=(0, 4))
        with pytest.raises(ValueError):
            exact_accessibility(c4, 4, step_range=(3, 9))

    def test_step1_closed_form_on_grid(self, grid3):
        # Exact OA_1 = degree/(N-1) whenever degree >= 1.
        field = exact_accessibility(grid3, 1)
        for u in range(9):
            assert field.oa_of(u)[0] == pytest.approx(
                grid3.degree(u) / (grid3.node_count - 1), abs=1e-12
            )

    def test_mc_oa1_converges_to_closed_form(self, grid3):
        cfg = WalkConfig(max_steps=1, walks_per_source=40_000, master_seed=17)
        mc = accessibility_field(estimate_all(grid3, cfg), grid3.node_count)
        for u in range(9):
            target = grid3.degree(u) / 8
            assert mc.oa_of(u)[0] == pytest.approx(target, abs=0.01)


class TestRegionMeanCurve:
    def test_single_node_identity(self, c4):
        field = exact_accessibility(c4, 4)
        assert np.array_equal(region_mean_curve(field, {2}), field.oa_of(2))

    def test_whole_cycle_is_node_curve(self, c4):
        field = exact_accessibility(c4, 4)
        curve = region_mean_curve(field, range(4))
        assert np.allclose(curve, [2 / 3, 1 / 3, 2 / 3, 0.0], atol=1e-12)

    def test_empty_region_rejected(self, c4):
        field = exact_accessibility(c4, 4)
        with pytest.raises(ValueError, match="empty"):
            region_mean_curve(field, set())

    def test_region_must_be_covered(self, c4):
        field = exact_accessibility(c4, 4, sources=[0, 1])
        with pytest.raises(KeyError):
            region_mean_curve(field, {3})


class TestExports:
    def test_csv_layout(self, tmp_path, c4):
        field = exact_accessibility(c4, 4)
        out = tmp_path / "acc.csv"
        write_accessibility_csv(out, c4, field)
        lines = out.read_text().splitlines()
        assert lines[0] == "node_id,mean_oa,oa_1,oa_2,oa_3,oa_4"
        assert len(lines) == 5
        first = lines[1].split(",")
        assert first[0] == "0"
        assert float(first[1]) == pytest.approx(5 / 12, abs=1e-12)

    def test_geojson_mean_property(self, grid3):
        cfg = WalkConfig(max_steps=4, walks_per_source=100, master_seed=9)
        field = field_from_walk_result(walk_entropy_field(grid3, cfg), grid3.node_count)
        doc = accessibility_geojson(grid3, field)
        assert len(doc["features"]) == 9
        for feat in doc["features"]:
            assert "mean_oa" in feat["properties"]


@st.composite
def sparse_distributions(draw, normalized=True):
    size = draw(st.integers(min_value=0, max_value=12))
    ids = draw(st.lists(st.integers(0, 10**6), min_size=size, max_size=size, unique=True))
    weights = draw(
        st.lists(st.floats(1e-6, 1.0), min_size=size, max_size=size)
    )
    total = sum(weights)
    scale = 1.0 if normalized else draw(st.floats(0.05, 1.0))
    if total == 0:
        return {}
    return {i: w / total * scale for i, w in zip(ids, weights)}


@given(sparse_distributions(normalized=True))
@settings(max_examples=300, deadline=None)
def test_entropy_bounds_for_normalized_distributions(dist):
    e = diversity_entropy(dist)
    support = sum(1 for p in dist.values() if p > 0)
    assert e >= 0.0
    if support:
        assert e <= math.log(support) + 1e-9
    else:
        assert e == 0.0


@given(sparse_distributions(normalized=False))
@settings(max_examples=300, deadline=None)
def test_entropy_of_subnormalized_mass_matches_reference(dist):
    # Sub-normalized distributions (some walks already dead) may exceed
    # ln(support); the value itself must still match an independent sum.
    e = diversity_entropy(dist)
    ref = -math.fsum(p * math.log(p) for p in dist.values() if p > 0)
    assert e >= 0.0
    assert e == pytest.approx(max(ref, 0.0), abs=1e-12)


@given(st.integers(min_value=1, max_value=50), st.integers(min_value=2, max_value=10**4))
@settings(max_examples=120, deadline=None)
def test_uniform_maximality_and_oa_range(support, n_total):
    support = min(support, n_total - 1)
    uniform = {i: 1.0 / support for i in range(support)}
    e = diversity_entropy(uniform)
    assert e == pytest.approx(math.log(support), abs=1e-9)
    oa = outward_accessibility(e, n_total, survival=1.0)
    assert 0.0 <= oa <= 1.0 + 1e-12
