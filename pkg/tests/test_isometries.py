import itertools

import numpy as np
import pytest

from taxihyp.circles import CircleSpec, boundary, membership_array
from taxihyp.curves import l_shaped
from taxihyp.isometries import (Isometry, apply, apply_array, cayley_table, compose, inverse,
                                is_isometry_witness, map_deviation, pinning_roots)
from taxihyp.metric import Point, minimal_point, sample_disk


class TestAction:
    def test_examples(self):
        assert apply(Isometry.ROT90, Point(0.3, 0.1)) == Point(-0.1, 0.3)
        assert apply(Isometry.REFLECT_X1, Point(0.3, 0.1)) == Point(0.3, -0.1)
        p = Point(-0.2, 0.6)
        assert apply(Isometry.IDENTITY, p) == p
        assert Isometry.REFLECT_DIAG(Point(0.3, 0.1)) == Point(0.1, 0.3)
        assert Isometry.REFLECT_ANTIDIAG(Point(0.3, 0.1)) == Point(-0.1, -0.3)

    def test_array_matches_scalar(self):
        X = sample_disk(np.random.default_rng(0), 50)
        for g in Isometry:
            assert np.array_equal(apply_array(g, X), [np.asarray(apply(g, Point(*x))) for x in X])

    def test_matrix_round_trip(self):
        for g in Isometry:
            assert Isometry.from_matrix(g.matrix) is g


class TestGroup:
    def test_examples(self):
        assert compose(Isometry.ROT90, Isometry.ROT90) is Isometry.ROT180
        assert compose(Isometry.REFLECT_X1, Isometry.REFLECT_X2) is Isometry.ROT180
        assert compose(Isometry.REFLECT_DIAG, Isometry.REFLECT_DIAG) is Isometry.IDENTITY

    def test_eight_distinct(self):
        assert len({g.value for g in Isometry}) == 8

    def test_axioms(self):
        table = cayley_table()
        assert len(table) == 64
        for g in Isometry:
            assert table[(g, Isometry.IDENTITY)] is g and table[(Isometry.IDENTITY, g)] is g
            assert compose(g, inverse(g)) is Isometry.IDENTITY
            # each row of the table is a permutation
            assert len({table[(g, h)] for h in Isometry}) == 8
        for g, h, k in itertools.product(Isometry, repeat=3):
            assert compose(compose(g, h), k) is compose(g, compose(h, k))

    def test_composition_is_function_composition(self):
        x = Point(0.3, -0.15)
        for g, h in itertools.product(Isometry, repeat=2):
            assert compose(g, h)(x) == g(h(x))

    def test_dihedral_structure(self):
        # rotation subgroup is cyclic of order 4; reflections have order 2
        r = Isometry.ROT90
        powers = [Isometry.IDENTITY]
        for _ in range(4):
            powers.append(compose(r, powers[-1]))
        assert powers[4] is Isometry.IDENTITY and len(set(powers[:4])) == 4
        for s in (Isometry.REFLECT_X1, Isometry.REFLECT_X2, Isometry.REFLECT_DIAG,
                  Isometry.REFLECT_ANTIDIAG):
            assert compose(s, s) is Isometry.IDENTITY
            # s r s = r^-1
            assert compose(s, compose(r, s)) is inverse(r)


class TestInvariance:
    @pytest.mark.parametrize("g", list(Isometry))
    def test_distance_preserved(self, g):
        assert is_isometry_witness(g, 10_000, seed=1) < 1e-12

    def test_identity_exact(self):
        assert is_isometry_witness(Isometry.IDENTITY, 1000) == 0.0

    def test_harness_catches_a_non_isometry(self):
        assert map_deviation(lambda P: 0.5 * P, 10_000, seed=0) > 0.1

    def test_bad_trials(self):
        with pytest.raises(ValueError):
            is_isometry_witness(Isometry.ROT90, 0)

    def test_minimal_point_equivariant(self):
        rng = np.random.default_rng(2)
        P, Q = sample_disk(rng, 2000), sample_disk(rng, 2000)
        for g in Isometry:
            for a, b in zip(P, Q):
                p, q = Point(*a), Point(*b)
                assert minimal_point(g(p), g(q)) == g(minimal_point(p, q))

    def test_l_shaped_equivariant(self):
        rng = np.random.default_rng(3)
        for a, b in zip(sample_disk(rng, 200), sample_disk(rng, 200)):
            p, q = Point(*a), Point(*b)
            for g in Isometry:
                assert l_shaped(g(p), g(q)).as_array().tolist() == \
                    apply_array(g, l_shaped(p, q).as_array()).tolist()

    def test_circle_equivariant(self):
        rng = np.random.default_rng(4)
        for c in sample_disk(rng, 10, 0.9):
            p = Point(*c)
            r = float(rng.uniform(0.1, 2.0))
            X = boundary(CircleSpec(p, r), 64).points()
            for g in Isometry:
                image = CircleSpec(g(p), r)
                assert np.abs(membership_array(image, apply_array(g, X))).max() < 1e-9
                Y = boundary(image, 64).points()
                back = apply_array(inverse(g), Y)
                assert np.abs(membership_array(CircleSpec(p, r), back)).max() < 1e-9


class TestPinning:
    def test_three_circles_meet_once(self):
        rng = np.random.default_rng(5)
        for x in np.abs(sample_disk(rng, 40, 0.95)):
            p = Point(*x)
            if min(p.x1, p.x2) < 1e-3:
                continue
            roots = pinning_roots(p)
            assert len(roots) == 1
            assert np.allclose(np.asarray(roots[0]), np.asarray(p), atol=1e-9)
