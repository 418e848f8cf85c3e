import math

import numpy as np
import pytest

from oracles import grid_min_width_2d, hull2d
from plankbound.geometry import (DegenerateBody, DimensionMismatch, GeometryError, Polytope,
                                 SymmetricBody, cube, difference_body, min_width, prune_to_hull,
                                 regular_polygon, support, support_point, support_raw,
                                 width_in_direction, widths)
from plankbound.sphere import sphere_points

R2 = 1 / math.sqrt(2)


class TestSupport:
    def test_square_axis(self, square):
        assert support(square, [1, 0]) == 1.0

    def test_square_corner(self, square):
        assert support(square, [R2, R2]) == pytest.approx(math.sqrt(2), abs=1e-15)

    def test_simplex_negative_axis(self, triangle):
        assert support(triangle, [-1, 0]) == 0.0

    def test_first_vertex_wins_ties(self, square):
        i, v = support_point(square, [1, 0])
        assert (i, v) == (1, 1.0)

    def test_dimension_mismatch(self, square):
        with pytest.raises(DimensionMismatch):
            support(square, [1, 0, 0])

    def test_rejects_non_unit(self, square):
        with pytest.raises(GeometryError):
            support(square, [2, 0])


class TestWidth:
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_cube_axis(self, d):
        e = np.zeros(d)
        e[0] = 1
        assert width_in_direction(cube(d), e) == 2.0

    def test_square_diagonal(self, square):
        assert width_in_direction(square, [R2, R2]) == pytest.approx(2 * math.sqrt(2), abs=1e-15)

    def test_triangle_axis(self, triangle):
        assert width_in_direction(triangle, [1, 0]) == 1.0

    def test_vectorised_matches_scalar(self, rng):
        K = Polytope(rng.normal(size=(12, 3)))
        U = sphere_points(3, 20)
        assert np.allclose(widths(K, U), [width_in_direction(K, u) for u in U], atol=1e-15)


class TestValidation:
    def test_rank_deficient(self):
        with pytest.raises(DegenerateBody, match="not full-dimensional"):
            Polytope([[0, 0], [1, 1], [2, 2]])

    def test_nonfinite(self):
        with pytest.raises(GeometryError):
            Polytope([[0, 0], [1, 0], [0, np.inf]])

    def test_one_dimensional(self):
        with pytest.raises(GeometryError):
            Polytope([[0.0], [1.0]])

    def test_dedupe(self):
        K = Polytope([[0, 0], [1, 0], [0, 1], [1e-13, 0]])
        assert len(K) == 3

    def test_immutable(self, square):
        with pytest.raises(ValueError):
            square.vertices[0, 0] = 5.0

    def test_symmetric_requires_negation_closure(self):
        with pytest.raises(GeometryError, match="negation"):
            SymmetricBody([[1, 0], [-1, 0], [0, 1]])


class TestDifferenceBody:
    def test_negation_closed_exactly(self, rng):
        L = difference_body(Polytope(rng.normal(size=(15, 4))))
        V = {tuple(v) for v in L.vertices}
        assert all(tuple(-np.array(v)) in V for v in V)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_unit_cube(self, d):
        L = prune_to_hull(difference_body(cube(d, 0.0, 1.0)))
        expected = {tuple(v) for v in cube(d, -0.5, 0.5).vertices}
        assert {tuple(v) for v in L.vertices} == expected

    def test_triangle_hexagon(self, triangle):
        # oracle: halve all 9 ordered differences, hull by monotone chain
        V = triangle.vertices
        D = [(a - b) / 2 for a in V for b in V]
        oracle = {tuple(p) for p in hull2d(D)}
        assert len(oracle) == 6
        assert oracle == {(0.5, 0), (-0.5, 0), (0, 0.5), (0, -0.5), (0.5, -0.5), (-0.5, 0.5)}
        L = prune_to_hull(difference_body(triangle))
        assert {tuple(v) for v in np.round(L.vertices, 15) + 0.0} == oracle

    def test_width_invariance_random_directions(self, triangle, rng):
        L = difference_body(triangle)
        for u in sphere_points(2, 100):
            assert width_in_direction(L, u) == pytest.approx(width_in_direction(triangle, u), abs=1e-10)


class TestProperties:
    def test_positive_homogeneity(self, rng):
        K = Polytope(rng.normal(size=(20, 3)))
        for c in (0.1, 2.5, 1e3):
            cK = Polytope(c * K.vertices)
            for u in sphere_points(3, 10):
                assert support(cK, u) == pytest.approx(c * support(K, u), rel=1e-12, abs=1e-300)

    def test_subadditivity_raw(self, rng):
        K = Polytope(rng.normal(size=(20, 4)))
        for _ in range(50):
            x, y = rng.normal(size=4), rng.normal(size=4)
            assert support_raw(K, x + y) <= support_raw(K, x) + support_raw(K, y) + 1e-12

    def test_translation_invariance(self, rng):
        K = Polytope(rng.normal(size=(20, 3)))
        for u in sphere_points(3, 20):
            c = rng.normal(size=3) * 10
            assert width_in_direction(K.transformed(np.eye(3), c), u) == pytest.approx(
                width_in_direction(K, u), abs=1e-10)


class TestMinWidth:
    def test_square(self, square):
        u, w = min_width(square)
        assert w == pytest.approx(2.0, abs=1e-6)
        assert np.abs(u).max() == pytest.approx(1.0, abs=1e-6)

    def test_triangle_matches_grid_oracle(self, triangle):
        # smallest height of the right triangle, confirmed on a 10^5 grid
        oracle = grid_min_width_2d(triangle.vertices)
        assert oracle == pytest.approx(R2, abs=1e-4)
        _, w = min_width(triangle)
        assert w == pytest.approx(R2, abs=1e-6)

    def test_polygon64(self, polygon64):
        _, w = min_width(polygon64)
        assert w == pytest.approx(2 * math.cos(math.pi / 64), abs=1e-6)

    def test_self_consistent(self, rng):
        K = Polytope(rng.normal(size=(10, 3)))
        u, w = min_width(K)
        assert w == width_in_direction(K, u)
        assert abs(np.linalg.norm(u) - 1) <= 1e-12

    def test_deterministic(self, triangle):
        a, b = min_width(triangle), min_width(triangle)
        assert np.array_equal(a[0], b[0]) and a[1] == b[1]


def test_polygon_helpers():
    P = regular_polygon(64)
    assert isinstance(P, SymmetricBody)
    assert np.linalg.norm(P.vertices, axis=1) == pytest.approx(np.ones(64), abs=1e-15)
