import warnings
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from accesswalk import _kernel
from accesswalk.network import build_network
from accesswalk.rng import WalkRng
from accesswalk.walks import (
    EXTREMITY_TAG,
    MAX_STEPS_TAG,
    TRAPPED_TAG,
    WalkConfig,
    estimate_all,
    estimate_transitions,
    sample_walk,
    walk_entropy_field,
    read_transition_dump,
)


class TestSampleWalk:
    def test_forced_route_on_path(self, p3):
        for seed in range(20):
            w = sample_walk(p3, 0, 10, WalkRng(seed, 0))
            assert w.nodes == (0, 1, 2)
            assert w.termination == EXTREMITY_TAG

    def test_cycle_always_traps_after_three_steps(self, c4):
        seen = Counter()
        for seed in range(200):
            w = sample_walk(c4, 0, 10, WalkRng(seed, 0))
            assert w.termination == TRAPPED_TAG
            assert len(w.nodes) == 4
            seen[w.nodes] += 1
        assert set(seen) == {(0, 1, 2, 3), (0, 3, 2, 1)}
        # both orientations occur with roughly equal frequency
        assert abs(seen[(0, 1, 2, 3)] - 100) < 50

    def test_star_from_leaf(self, star3):
        ends = Counter()
        for seed in range(100):
            w = sample_walk(star3, 1, 10, WalkRng(seed, 1))
            assert w.termination == EXTREMITY_TAG
            assert w.nodes[:2] == (1, 0)
            assert w.nodes[2] in (2, 3)
            ends[w.nodes[2]] += 1
        assert set(ends) == {2, 3}

    def test_max_steps_termination(self, grid15):
        w = sample_walk(grid15, 112, 3, WalkRng(0, 112))
        assert w.steps == 3
        assert w.termination == MAX_STEPS_TAG

    def test_degree_zero_source_trapped(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            net = build_network(["a", "b", "lone"], [("a", "b")])
        w = sample_walk(net, 2, 5, WalkRng(0, 2))
        assert w.nodes == (2,)
        assert w.termination == TRAPPED_TAG

    def test_degree_one_source_leaves_home(self, p3):
        # Starting at an extremity does not terminate; arriving at one does.
        w = sample_walk(p3, 2, 10, WalkRng(0, 2))
        assert w.nodes == (2, 1, 0)
        assert w.termination == EXTREMITY_TAG


@st.composite
def connected_nets(draw):
    n = draw(st.integers(min_value=2, max_value=14))
    extra = [(u, v) for u in range(n) for v in range(u + 1, n) if v != u + 1]
    chosen = draw(st.lists(st.sampled_from(extra), unique=True, max_size=len(extra))) if extra else []
    spine = [(i, i + 1) for i in range(n - 1)]
    labels = [str(i) for i in range(n)]
    edges = [(str(u), str(v)) for u, v in spine + chosen]
    return build_network(labels, edges)


@given(connected_nets(), st.integers(min_value=1, max_value=30), st.integers(min_value=0, max_value=10**6))
@settings(max_examples=80, deadline=None)
def test_sampled_paths_are_valid_saws(net, max_steps, seed):
    source = seed % net.node_count
    w = sample_walk(net, source, max_steps, WalkRng(seed, source))
    assert w.nodes[0] == source
    assert len(set(w.nodes)) == len(w.nodes)
    assert w.steps <= max_steps
    for a, b in zip(w.nodes, w.nodes[1:]):
        assert net.has_edge(a, b)
    last = w.nodes[-1]
    if w.termination == EXTREMITY_TAG:
        assert net.degree(last) == 1 and w.steps >= 1
    elif w.termination == MAX_STEPS_TAG:
        assert w.steps == max_steps
    else:
        unvisited = [v for v in net.neighbors(last) if v not in w.nodes]
        assert not unvisited


class TestKernelParity:
    """The compiled kernel, the pure-Python kernel, and repeated
    sample_walk calls must produce identical integer counts."""

    def counts_from_sample_walk(self, net, source, max_steps, walks, master):
        counts = np.zeros((max_steps, net.node_count), dtype=np.int64)
        rng = WalkRng(master, source)
        for _ in range(walks):
            w = sample_walk(net, source, max_steps, rng)
            for h, node in enumerate(w.nodes[1:], start=1):
                counts[h - 1, node] += 1
        return counts

    @pytest.mark.parametrize("master", [0, 1, 42, 2**63])
    def test_three_way_parity(self, grid3, master):
        source, max_steps, walks = 0, 8, 300
        fast = _kernel.walk_counts_for_source(
            grid3.indptr, grid3.indices, grid3.degrees, source, max_steps, walks, master
        )
        slow = np.zeros_like(fast)
        _kernel._run_walks_py(
            grid3.indptr, grid3.indices, grid3.degrees, source, max_steps, walks, master, slow
        )
        ref = self.counts_from_sample_walk(grid3, source, max_steps, walks, master)
        assert np.array_equal(fast, slow)
        assert np.array_equal(fast, ref)

    def test_parity_with_extremities(self, star3):
        fast = _kernel.walk_counts_for_source(
            star3.indptr, star3.indices, star3.degrees, 1, 5, 500, 9
        )
        ref = self.counts_from_sample_walk(star3, 1, 5, 500, 9)
        assert np.array_equal(fast, ref)

    def test_reduce_parity(self, grid3):
        counts = _kernel.walk_counts_for_source(
            grid3.indptr, grid3.indices, grid3.degrees, 4, 6, 400, 17
        )
        e_fast = np.zeros(6)
        s_fast = np.zeros(6)
        _kernel._reduce_counts(counts, np.int64(400), e_fast, s_fast)
        e_py = np.zeros(6)
        s_py = np.zeros(6)
        _kernel._reduce_counts_py(counts, 400, e_py, s_py)
        assert np.array_equal(e_fast, e_py)
        assert np.array_equal(s_fast, s_py)


class TestEstimateTransitions:
    def test_deterministic_path(self, p3):
        for walks in (1, 7, 100):
            est = estimate_transitions(
                p3, 0, WalkConfig(max_steps=2, walks_per_source=walks, master_seed=5)
            )
            assert est.per_step[0] == {1: 1.0}
            assert est.per_step[1] == {2: 1.0}

    def test_cycle_first_step_binomial_bound(self, c4):
        # 3 sigma binomial bound at p=0.5, M=10000.
        est = estimate_transitions(
            c4, 0, WalkConfig(max_steps=4, walks_per_source=10_000, master_seed=99)
        )
        assert abs(est.per_step[0][1] - 0.5) <= 0.015
        assert abs(est.per_step[0][3] - 0.5) <= 0.015

    def test_probabilities_are_multiples_of_inverse_m(self, grid3):
        m = 160
        est = estimate_transitions(
            grid3, 4, WalkConfig(max_steps=6, walks_per_source=m, master_seed=3)
        )
        for dist in est.per_step:
            for p in dist.values():
                assert abs(p * m - round(p * m)) < 1e-12

    def test_survival_non_increasing_and_bounded(self, grid3):
        est = estimate_transitions(
            grid3, 0, WalkConfig(max_steps=8, walks_per_source=500, master_seed=11)
        )
        s = est.survival
        assert np.all(s <= 1.0 + 1e-12)
        assert np.all(np.diff(s) <= 1e-12)
        assert s[0] == 1.0  # degree >= 1 source: every walk makes step 1

    def test_support_within_bfs_distance(self, grid3):
        est = estimate_transitions(
            grid3, 0, WalkConfig(max_steps=6, walks_per_source=400, master_seed=2)
        )
        for h in range(1, 7):
            for j in est.probabilities(h):
                assert grid3.bfs_distance(0, j) <= h

    def test_support_within_exact_oracle_support(self, grid3):
        from accesswalk.oracle import exact_transitions

        exact = exact_transitions(grid3, 0, 6)
        est = estimate_transitions(
            grid3, 0, WalkConfig(max_steps=6, walks_per_source=2000, master_seed=8)
        )
        for h in range(6):
            assert set(est.per_step[h]) <= set(exact.per_step[h])

    def test_probabilities_accessor_validates_step(self, p3):
        est = estimate_transitions(
            p3, 0, WalkConfig(max_steps=2, walks_per_source=10, master_seed=1)
        )
        with pytest.raises(ValueError):
            est.probabilities(0)
        with pytest.raises(ValueError):
            est.probabilities(3)


class TestEstimateAll:
    def test_path_graph_all_sources(self, p3):
        cfg = WalkConfig(max_steps=2, walks_per_source=50, master_seed=4)
        ests = estimate_all(p3, cfg)
        assert [e.source for e in ests] == [0, 1, 2]
        assert ests[0].per_step[0] == {1: 1.0}
        assert ests[2].per_step[0] == {1: 1.0}
        # middle node: both ends reached at step 1, nothing at step 2
        assert set(ests[1].per_step[0]) == {0, 2}
        assert ests[1].per_step[1] == {}

    def test_worker_count_invariance(self, grid15):
        cfg = WalkConfig(
            max_steps=10,
            walks_per_source=200,
            master_seed=123,
            sources=frozenset(range(0, 225, 5)),
        )
        a = estimate_all(grid15, cfg, threads=1)
        b = estimate_all(grid15, cfg, threads=8)
        assert len(a) == len(b) == 45
        for x, y in zip(a, b):
            assert x.source == y.source
            assert x.per_step == y.per_step
            assert np.array_equal(x.survival, y.survival)

    def test_seed_changes_results(self, grid15):
        base = WalkConfig(max_steps=8, walks_per_source=100, master_seed=1,
                          sources=frozenset({112}))
        other = WalkConfig(max_steps=8, walks_per_source=100, master_seed=2,
                           sources=frozenset({112}))
        a = estimate_all(grid15, base)[0]
        b = estimate_all(grid15, other)[0]
        assert a.per_step != b.per_step

    def test_sources_subset_validated(self, p3):
        cfg = WalkConfig(max_steps=2, walks_per_source=10, master_seed=0,
                         sources=frozenset({5}))
        with pytest.raises(Exception, match="out of range"):
            estimate_all(p3, cfg)


class TestWalkEntropyField:
    def test_matches_estimate_all_reduction(self, grid3):
        from accesswalk.accessibility import accessibility_field, field_from_walk_result

        cfg = WalkConfig(max_steps=6, walks_per_source=300, master_seed=21)
        fused = field_from_walk_result(
            walk_entropy_field(grid3, cfg), grid3.node_count
        )
        sparse = accessibility_field(estimate_all(grid3, cfg), grid3.node_count)
        assert np.array_equal(fused.survival, sparse.survival)
        assert np.allclose(fused.entropy, sparse.entropy, rtol=0, atol=1e-14)
        assert np.allclose(fused.oa, sparse.oa, rtol=0, atol=1e-14)

    def test_thread_invariance_bitwise(self, grid15):
        cfg = WalkConfig(max_steps=12, walks_per_source=300, master_seed=77)
        one = walk_entropy_field(grid15, cfg, threads=1)
        four = walk_entropy_field(grid15, cfg, threads=4)
        assert np.array_equal(one.entropy, four.entropy)
        assert np.array_equal(one.survival, four.survival)

    def test_progress_reported(self, grid3):
        calls = []
        cfg = WalkConfig(max_steps=4, walks_per_source=20, master_seed=6)
        walk_entropy_field(grid3, cfg, progress=lambda d, t: calls.append((d, t)))
        assert calls[-1] == (9, 9)
        assert [d for d, _ in calls] == sorted(d for d, _ in calls)

    def test_dump_round_trip(self, tmp_path, grid3):
        cfg = WalkConfig(max_steps=5, walks_per_source=200, master_seed=31)
        dump = tmp_path / "transitions.csv.gz"
        walk_entropy_field(grid3, cfg, dump_path=dump)
        comment, rows = read_transition_dump(dump)
        assert comment is None
        ests = estimate_all(grid3, cfg)
        expected = {}
        for est in ests:
            for h in range(1, cfg.max_steps + 1):
                for j, p in est.probabilities(h).items():
                    expected[(grid3.labels[est.source], h, grid3.labels[j])] = p
        got = {(src, h, tgt): p for src, h, tgt, p in rows}
        assert got == expected

    def test_dump_is_byte_stable(self, tmp_path, grid3):
        cfg = WalkConfig(max_steps=4, walks_per_source=100, master_seed=13)
        a = tmp_path / "a.csv.gz"
        b = tmp_path / "b.csv.gz"
        walk_entropy_field(grid3, cfg, dump_path=a)
        walk_entropy_field(grid3, cfg, threads=4, dump_path=b)
        assert a.read_bytes() == b.read_bytes()


class TestWalkConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            WalkConfig(max_steps=0, walks_per_source=1, master_seed=0)
        with pytest.raises(ValueError):
            WalkConfig(max_steps=1, walks_per_source=0, master_seed=0)
        with pytest.raises(ValueError):
            WalkConfig(max_steps=1, walks_per_source=2**31, master_seed=0)
