import numpy as np
import pytest

from taxihyp.curves import PolyCurve, batch_length, is_doubly_monotonic, l_shaped, length
from taxihyp.metric import ORIGIN, Point, distance, radius_of, sample_disk
from taxihyp.oracle import (CASES, GridSpec, OracleError, _lattice, grid_shortest_path,
                            minimizer_profile, perturbation_search, random_curves)

LN3 = 1.0986122886681098


def snapped_pairs(n, seed, g=GridSpec()):
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < n:
        a, b = (g.node_point(g.snap(Point(*x))) for x in sample_disk(rng, 2, 0.9))
        if a != b:
            pairs.append((a, b))
    return pairs


class TestGridSpec:
    def test_margin_rule(self):
        with pytest.raises(OracleError):
            GridSpec(step=0.01, margin=0.05)
        with pytest.raises(OracleError):
            GridSpec(step=0.0)

    def test_snap_outside_extent(self):
        with pytest.raises(OracleError):
            GridSpec().snap(Point(0.97, 0.0))

    def test_edge_weights_match_quadrature(self):
        # the lattice weights are the only closed form the oracle uses
        from taxihyp.curves import length_quadrature
        lat = _lattice(GridSpec(step=0.05, margin=0.5))
        coo = lat.graph.tocoo()
        rng = np.random.default_rng(0)
        for k in rng.choice(len(coo.data), 40, replace=False):
            a, b = lat.coords[coo.row[k]], lat.coords[coo.col[k]]
            c = PolyCurve([tuple(a), tuple(b)])
            assert coo.data[k] == pytest.approx(length_quadrature(c), abs=1e-10)


class TestGridShortestPath:
    def test_opposite_axes(self):
        rep = grid_shortest_path(Point(0.5, 0), Point(0, 0.5))
        assert rep.dp_value == pytest.approx(LN3, rel=0.01)
        assert rep.dp_value >= LN3 - 1e-9

    def test_beyond_on_axis(self):
        p, q = Point(0.6, 0), Point(0.2, 0)
        rep = grid_shortest_path(p, q)
        assert rep.dp_value == pytest.approx(radius_of(p) - radius_of(q), rel=0.01)
        assert is_doubly_monotonic(rep.path)

    def test_same_node(self):
        rep = grid_shortest_path(Point(0.3, 0.3), Point(0.3001, 0.2999))
        assert rep.dp_value == 0.0
        assert length(rep.path) == 0.0

    def test_outside_extent(self):
        with pytest.raises(OracleError):
            grid_shortest_path(Point(0.98, 0.0), ORIGIN)

    def test_report_json(self):
        d = grid_shortest_path(Point(0.3, 0.4), Point(0.5, 0.2)).to_json()
        assert set(d) == {"query", "dp_value", "closed_form", "rel_error", "h", "seed"}

    def test_random_pairs_within_one_percent(self):
        for p, q in snapped_pairs(20, 1):
            rep = grid_shortest_path(p, q)
            assert rep.rel_error < 0.01
            assert rep.dp_value >= rep.closed_form - 1e-9
            assert rep.path.start == p and rep.path.end == q

    def test_opposite_quadrants_pass_origin(self):
        g = GridSpec()
        rep = grid_shortest_path(Point(0.3, 0.4), Point(-0.2, -0.1), g)
        V = rep.path.as_array()
        assert np.abs(V).sum(axis=1).min() <= g.step + 1e-12

    def test_refinement_never_worse(self):
        coarse, fine = GridSpec(0.005), GridSpec(0.0025)
        for p, q in snapped_pairs(4, 2):
            a = grid_shortest_path(p, q, coarse).dp_value
            b = grid_shortest_path(p, q, fine).dp_value
            assert b <= a + 1e-12


class TestPerturbationSearch:
    @pytest.mark.parametrize("p,q,case", [
        ((0.5, 0.4), (0.2, 0.1), "case1"),
        ((0.3, 0.4), (0.5, 0.2), "case2"),
        ((0.3, 0.4), (-0.2, -0.1), "case3"),
        ((-0.2, 0.3), (0.4, 0.1), "case4"),
    ])
    def test_minimum_is_distance(self, p, q, case):
        p, q = Point(*p), Point(*q)
        assert minimizer_profile(p, q) == case
        res = perturbation_search(p, q, trials=2000, seed=3)
        d = distance(p, q)
        assert res.random_min >= d - 1e-9
        assert abs(res.min_length - d) < 1e-9
        assert abs(res.staircase_max - d) < 1e-9

    def test_single_trial_is_l_shape(self):
        p, q = Point(0.3, -0.4), Point(-0.1, -0.2)
        res = perturbation_search(p, q, trials=1)
        assert res.best == l_shaped(p, q)
        assert res.min_length == pytest.approx(distance(p, q), abs=1e-15)

    def test_deterministic(self):
        p, q = Point(0.1, 0.6), Point(-0.4, 0.2)
        a = perturbation_search(p, q, trials=500, seed=9)
        b = perturbation_search(p, q, trials=500, seed=9)
        assert a.random_min == b.random_min and a.best == b.best

    def test_bad_trials(self):
        with pytest.raises(OracleError):
            perturbation_search(ORIGIN, Point(0.1, 0), trials=0)

    def test_random_curves_endpoints(self):
        p, q = Point(0.2, 0.1), Point(-0.3, 0.5)
        V = random_curves(p, q, 50, np.random.default_rng(0))
        assert (V[:, 0] == [0.2, 0.1]).all() and (V[:, -1] == [-0.3, 0.5]).all()
        assert (np.abs(V).sum(axis=-1) < 1).all()
        assert (batch_length(V) >= distance(p, q) - 1e-9).all()


class TestProfile:
    def test_axis_conventions(self):
        # shared coordinate line in a closed quadrant counts as case 1
        assert minimizer_profile(Point(0.5, 0.0), Point(0.2, 0.0)) == "case1"
        assert minimizer_profile(Point(0.5, 0.1), Point(0.2, 0.1)) == "case1"
        assert minimizer_profile(Point(0.0, 0.4), Point(0.3, 0.0)) == "case2"

    def test_same_point(self):
        with pytest.raises(OracleError):
            minimizer_profile(ORIGIN, ORIGIN)

    def test_labels(self):
        assert CASES == ("case1", "case2", "case3", "case4")
