"""Orbit labels, the windowed graph, signed distance, and word search."""

import math

import numpy as np
import pytest

from foldmap import (ClassBoundaryError, OrbitLabel, PrecisionError,
                     PreconditionError, StructuralError, VertexClass,
                     WordNotFoundError, apply_theta_label, build_graph_window,
                     classify_vertex, is_singular, iterate_forward,
                     label_value, rho_chart, shrink_word, step,
                     structure_stats)

ALPHA = math.sqrt(0.5)


class TestLabels:
    def test_value_examples(self):
        assert label_value(ALPHA, 0.2, OrbitLabel(0, 1)) == 0.2
        assert abs(label_value(ALPHA, 0.2, OrbitLabel(1, 1))
                   - ((ALPHA + 0.2) % 1.0)) < 1e-15
        assert abs(label_value(ALPHA, 0.2, OrbitLabel(-2, -1))
                   - ((-2 * ALPHA - 0.2) % 1.0)) < 1e-15

    def test_label_validation(self):
        with pytest.raises(PreconditionError):
            OrbitLabel(0, 2)
        with pytest.raises(PrecisionError):
            label_value(ALPHA, 0.2, OrbitLabel(10 ** 6 + 1, 1))

    def test_str(self):
        assert str(OrbitLabel(3, 1)) == "(3,+1)"
        assert str(OrbitLabel(-2, -1)) == "(-2,-1)"

    def test_apply_full_fold(self):
        assert apply_theta_label(ALPHA, 0.2, OrbitLabel(3, 1), 1.0) \
            == OrbitLabel(-3, -1)

    def test_apply_alpha_fold_branches(self):
        x = 0.2
        # value of (1,+1) is ~.907 >= alpha: shift down
        assert apply_theta_label(ALPHA, x, OrbitLabel(1, 1), ALPHA) \
            == OrbitLabel(0, 1)
        # value of (0,+1) is .2 < alpha: fold through zero
        assert apply_theta_label(ALPHA, x, OrbitLabel(0, 1), ALPHA) \
            == OrbitLabel(1, -1)

    def test_bad_theta(self):
        with pytest.raises(PreconditionError):
            apply_theta_label(ALPHA, 0.2, OrbitLabel(0, 1), 0.5)

    def test_commutes_with_step(self):
        # tracking labels and tracking values give the same trajectory
        rng = np.random.default_rng(11)
        x = 0.2
        lab = OrbitLabel(0, 1)
        v = label_value(ALPHA, x, lab)
        for theta in rng.choice([ALPHA, 1.0], size=1000):
            lab = apply_theta_label(ALPHA, x, lab, float(theta))
            v = step(float(theta), v)
            assert abs(label_value(ALPHA, x, lab) - v) < 1e-9


class TestClassify:
    def test_above_half(self):
        # cuts at 1-alpha ~ .293 and alpha ~ .707
        assert classify_vertex(ALPHA, 0.1) == VertexClass.SMALL
        assert classify_vertex(ALPHA, 0.5) == VertexClass.MEDIUM
        assert classify_vertex(ALPHA, 0.9) == VertexClass.LARGE

    def test_below_half(self):
        assert classify_vertex(0.3, 0.2) == VertexClass.SMALL
        assert classify_vertex(0.3, 0.5) == VertexClass.MEDIUM
        assert classify_vertex(0.3, 0.8) == VertexClass.LARGE

    def test_boundary_rejected(self):
        with pytest.raises(ClassBoundaryError):
            classify_vertex(ALPHA, ALPHA)
        with pytest.raises(ClassBoundaryError):
            classify_vertex(ALPHA, 1.0 - ALPHA + 1e-14)


class TestSingular:
    def test_seed_points(self):
        for x in (0.0, 0.5, ALPHA / 2, (1 + ALPHA) / 2):
            assert is_singular(ALPHA, x, window=10)

    def test_orbit_of_seed(self):
        # <3 alpha + x> = 1/2 at x = <1/2 - 3 alpha>
        x = (0.5 - 3 * ALPHA) % 1.0
        assert is_singular(ALPHA, x, window=10)

    def test_generic_point(self):
        assert not is_singular(ALPHA, 0.2, window=10 ** 4)


class TestGraphWindow:
    def test_class_frequencies(self):
        g = build_graph_window(ALPHA, 0.2, 50)
        freqs = g.class_frequencies()
        assert abs(freqs["small"] - (1 - ALPHA)) < 0.1
        assert abs(freqs["medium"] - (2 * ALPHA - 1)) < 0.1
        assert abs(freqs["large"] - (1 - ALPHA)) < 0.1
        assert abs(sum(freqs.values()) - 1.0) < 1e-12

    def test_full_fold_is_involution(self):
        g = build_graph_window(ALPHA, 0.2, 50)
        idx = np.arange(g.size)
        assert np.array_equal(g.one_target[g.one_target], idx)

    def test_alpha_edge_in_window_except_lower_edge(self):
        g = build_graph_window(ALPHA, 0.2, 50)
        out = np.flatnonzero(g.alpha_target < 0)
        assert {g.label_at(int(i)).n for i in out} == {-50}

    def test_index_round_trip(self):
        g = build_graph_window(ALPHA, 0.2, 7)
        for n in range(-7, 8):
            for eps in (1, -1):
                lab = OrbitLabel(n, eps)
                assert g.label_at(g.index_of(lab)) == lab
        with pytest.raises(PreconditionError):
            g.index_of(OrbitLabel(8, 1))

    def test_out_edges(self):
        g = build_graph_window(ALPHA, 0.2, 7)
        edges = dict(g.out_edges(OrbitLabel(0, 1)))
        assert edges[1.0] == OrbitLabel(0, -1)
        assert edges[ALPHA] == OrbitLabel(1, -1)

    def test_edges_match_label_automaton(self):
        g = build_graph_window(ALPHA, 0.2, 30)
        for n in range(-29, 30):
            for eps in (1, -1):
                lab = OrbitLabel(n, eps)
                edges = dict(g.out_edges(lab))
                assert edges[1.0] == apply_theta_label(ALPHA, 0.2, lab, 1.0)
                assert edges[ALPHA] == apply_theta_label(ALPHA, 0.2, lab, ALPHA)

    def test_to_dot(self):
        dot = build_graph_window(ALPHA, 0.2, 2).to_dot()
        assert dot.startswith("digraph")
        assert '"(0,+1)" [label="(0,+1)/Small"];' in dot
        assert '[label="a"]' in dot and '[label="1"]' in dot

    def test_coincidences_on_singular_seed(self):
        # x = alpha/2 makes (n,+1) and (n+1,-1) share a value for every n
        g = build_graph_window(ALPHA, ALPHA / 2, 20)
        assert len(g.coincidences) >= 2 * 20
        pair = {g.coincidences[0][0].eps, g.coincidences[0][1].eps}
        assert pair == {1, -1}
        assert build_graph_window(ALPHA, 0.2, 20).coincidences == []

    def test_orbit_of_zero_hits_boundary(self):
        # x = 0 puts <-alpha> = 1 - alpha exactly on the cut
        with pytest.raises(ClassBoundaryError):
            build_graph_window(ALPHA, 0.0, 20)

    def test_rational_alpha_hits_boundary(self):
        with pytest.raises(ClassBoundaryError):
            build_graph_window(0.87, 0.2, 50)

    def test_validation(self):
        with pytest.raises(PreconditionError):
            build_graph_window(ALPHA, 0.2, 0)
        with pytest.raises(PrecisionError):
            build_graph_window(ALPHA, 0.2, 10 ** 6 + 1)


class TestRhoChart:
    def setup_method(self):
        self.graph = build_graph_window(ALPHA, 0.2, 50)
        self.base = OrbitLabel(0, 1)
        self.chart = rho_chart(self.graph, self.base)

    def test_base_and_orientation(self):
        assert self.chart.rho_of(self.graph, self.base) == 0
        assert self.chart.rho_of(self.graph, OrbitLabel(1, 1)) == 1

    def test_both_signs_present(self):
        g, rho = self.graph, self.chart.rho
        valid = rho != np.iinfo(np.int64).min
        assert rho[valid].min() < 0 < rho[valid].max()

    def test_unit_increments_along_edges(self):
        # any edge avoiding the base vertex moves rho by at most one and
        # never crosses zero; edges at the base land on rho = +-1
        g, rho = self.graph, self.chart.rho
        v0 = g.index_of(self.base)
        src = np.arange(g.size)
        for tgt in (g.one_target, np.where(g.alpha_target >= 0, g.alpha_target, src)):
            ru, rw = rho[src], rho[tgt]
            ok = (ru != np.iinfo(np.int64).min) & (rw != np.iinfo(np.int64).min)
            through = (src == v0) | (tgt == v0)
            inner = ok & ~through
            assert np.all(np.abs(ru[inner] - rw[inner]) <= 1)
            assert np.all(ru[inner] * rw[inner] > 0)
            assert np.all(np.abs(ru[ok & through] + rw[ok & through]) >= 1)

    def test_level_minima(self):
        lm = self.chart.level_min_value
        assert abs(lm[0] - 0.2) < 1e-15
        assert all(0.0 <= v < 1.0 for v in lm.values())

    def test_non_small_base_rejected(self):
        with pytest.raises(PreconditionError):
            rho_chart(self.graph, OrbitLabel(2, 1))  # value ~ .614

    def test_chart_domain_error(self):
        small = build_graph_window(ALPHA, 0.2, 3)
        chart = rho_chart(small, OrbitLabel(0, 1))
        rho = chart.rho
        if np.any(rho == np.iinfo(np.int64).min):
            idx = int(np.flatnonzero(rho == np.iinfo(np.int64).min)[0])
            with pytest.raises(StructuralError):
                chart.rho_of(small, small.label_at(idx))


class TestStructureStats:
    def test_inv_sqrt2(self):
        g = build_graph_window(ALPHA, 0.2, 10 ** 4)
        stats = structure_stats(g)
        assert stats["q"] == 2
        assert set(stats["run_histogram"]) == {2, 3}
        assert abs(stats["expected_ratio"] - math.sqrt(2)) < 1e-9
        assert abs(stats["measured_ratio"] - math.sqrt(2)) < 0.05

    def test_large_alpha(self):
        alpha = 0.87 + 1e-5 * math.sqrt(2)  # nudge off the rational grid
        stats = structure_stats(build_graph_window(alpha, 0.2, 2 * 10 ** 4))
        assert stats["q"] == 6
        assert set(stats["run_histogram"]) == {6, 7}
        assert abs(stats["measured_ratio"] - stats["expected_ratio"]) < 0.05

    def test_small_alpha(self):
        alpha = 0.29 + 1e-5 * math.sqrt(2)
        stats = structure_stats(build_graph_window(alpha, 0.2, 2 * 10 ** 4))
        assert stats["q"] == 2
        assert set(stats["run_histogram"]) == {2, 3}
        assert abs(stats["measured_ratio"] - stats["expected_ratio"]) < 0.05


class TestShrinkWord:
    def test_already_below(self):
        assert shrink_word(ALPHA, 1.0, 0.005, 0.01) == []

    def test_replay_lands_below(self):
        word = shrink_word(ALPHA, 1.0, 0.5, 0.01)
        assert 0 < len(word) <= 256
        assert iterate_forward(word, 0.5)[-1] < 0.01

    def test_frozen_deep_search(self):
        word = shrink_word(ALPHA, 1.0, 0.9, 0.01)
        assert len(word) == 23
        final = iterate_forward(word, 0.9)[-1]
        assert abs(final - 0.000505) < 5e-5

    def test_rational_closure(self):
        # alpha = 1/3, beta = 1, m = 1/2: reachable values are {1/2, 1/6, 5/6}
        word = shrink_word(1 / 3, 1.0, 0.5, 0.34)
        assert iterate_forward(word, 0.5)[-1] < 0.34
        with pytest.raises(WordNotFoundError):
            shrink_word(1 / 3, 1.0, 0.5, 0.1)

    def test_validation(self):
        with pytest.raises(PreconditionError):
            shrink_word(1.0, 0.5, 0.5, 0.01)
        with pytest.raises(PreconditionError):
            shrink_word(0.5, 1.0, 0.5, 0.0)
        with pytest.raises(PreconditionError):
            shrink_word(0.5, 1.0, -0.1, 0.01)
