import math

import numpy as np
import pytest

from oracles import chord_2d
from plankbound import lp
from plankbound.geometry import Polytope, cube, cross_polytope, difference_body, width_in_direction
from plankbound.lp import (LpIterationLimit, LpProblem, chord_length, membership, radial,
                           solve_lp)
from plankbound.sphere import sphere_points

R2 = 1 / math.sqrt(2)


class TestSolveLp:
    def test_slack_form(self):
        sol = solve_lp(LpProblem([1, 0], [[1, 1]], [1]))
        assert sol.status == "optimal"
        assert sol.value == 1.0
        assert sol.x.tolist() == [1.0, 0.0]

    def test_infeasible(self):
        assert solve_lp(LpProblem([0], [[1]], [-1])).status == "infeasible"

    def test_unbounded(self):
        assert solve_lp(LpProblem([1, 0], [[1, -1]], [0])).status == "unbounded"

    def test_degenerate_face(self):
        prob = LpProblem([1, 1, 0], [[1, 1, 1]], [1])
        sol = solve_lp(prob)
        assert sol.value == 1.0
        assert sol.x[2] == 0.0 and sol.x[:2].sum() == 1.0
        again = solve_lp(prob)
        assert np.array_equal(sol.x, again.x)

    def test_redundant_rows(self):
        sol = solve_lp(LpProblem([1, 0], [[1, 1], [2, 2]], [1, 2]))
        assert sol.status == "optimal" and sol.value == 1.0

    def test_bad_shape(self):
        with pytest.raises(ValueError):
            LpProblem([1, 0], [[1, 1, 1]], [1])

    def test_nonfinite(self):
        with pytest.raises(ValueError):
            LpProblem([np.nan], [[1]], [1])

    def test_iteration_limit_is_reported(self, monkeypatch):
        A = np.array([[1.0, 1.0, 1.0, 0.0], [1.0, -1.0, 0.0, 1.0]])
        status, *_ = lp._two_phase(A, np.array([2.0, 1.0]), np.array([1.0, 0.0, 0.0, 0.0]), 1)
        assert status == lp._LIMIT
        real = lp._two_phase
        monkeypatch.setattr(lp, "_two_phase", lambda A, b, c, budget: real(A, b, c, 1))
        with pytest.raises(LpIterationLimit):
            solve_lp(LpProblem([1, 0, 0, 0], A, [2, 1]))

    def test_random_feasible_solutions(self, rng):
        for _ in range(30):
            m, n = 4, 9
            A = rng.normal(size=(m, n))
            x0 = rng.uniform(0, 1, size=n)
            b = A @ x0
            c = -np.abs(rng.normal(size=n))
            sol = solve_lp(LpProblem(c, A, b))
            assert sol.status == "optimal"
            assert np.abs(A @ sol.x - b).max() <= 1e-9 * max(1, np.abs(b).max())
            assert sol.x.min() >= -1e-12
            assert sol.value >= c @ x0 - 1e-9

    def test_determinism(self, rng):
        A = rng.normal(size=(5, 12))
        b = A @ rng.uniform(size=12)
        prob = LpProblem(rng.normal(size=12) - 2, A, b)
        a, b2 = solve_lp(prob), solve_lp(prob)
        assert a.status == b2.status and a.value == b2.value


class TestMembership:
    def test_centroid(self, square):
        res = membership(square, [0, 0])
        assert res.inside
        assert np.abs(res.weights @ square.vertices).max() <= 1e-9

    def test_outside(self, square):
        assert not membership(square, [2, 0]).inside

    def test_hexagon_vertex(self, triangle):
        assert membership(difference_body(triangle), [0.5, -0.5]).inside

    def test_boundary(self, square):
        assert membership(square, [1, 0.3]).inside
        assert not membership(square, [1 + 1e-6, 0.3]).inside

    def test_witness_validity(self, rng):
        K = Polytope(rng.normal(size=(20, 4)))
        for _ in range(50):
            lam = rng.dirichlet(np.ones(len(K)))
            p = lam @ K.vertices
            res = membership(K, p)
            assert res.inside
            w = res.weights
            assert np.linalg.norm(w @ K.vertices - p) <= 1e-9
            assert abs(w.sum() - 1) <= 1e-12
            assert w.min() >= -1e-12


class TestRadial:
    def test_square_axis(self, square):
        assert radial(cube(2), [1, 0]) == pytest.approx(1.0, abs=1e-12)

    def test_square_corner(self):
        assert radial(cube(2), [R2, R2]) == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_hexagon_axis(self, triangle):
        # oracle: ray exit from the 2D hull of the halved difference set
        assert chord_2d(triangle.vertices, [1, 0]) / 2 == pytest.approx(0.5, abs=1e-15)
        assert radial(difference_body(triangle), [1, 0]) == pytest.approx(0.5, abs=1e-12)

    def test_symmetry(self, rng):
        L = difference_body(Polytope(rng.normal(size=(12, 3))))
        for u in sphere_points(3, 50):
            assert radial(L, u) == pytest.approx(radial(L, -u), abs=1e-10)

    def test_bounded_by_vertex_norm(self, rng):
        L = cross_polytope(4)
        for u in sphere_points(4, 30):
            t = radial(L, u)
            assert 0 <= t <= 1 + 1e-12


class TestChord:
    def test_square_diagonal(self, square):
        assert chord_length(square, [R2, R2]) == pytest.approx(2 * math.sqrt(2), abs=1e-12)

    def test_triangle_edge(self, triangle):
        assert chord_length(triangle, [1, 0]) == pytest.approx(1.0, abs=1e-12)

    def test_matches_planar_oracle(self, rng):
        for _ in range(10):
            V = rng.normal(size=(int(rng.integers(3, 15)), 2))
            K = Polytope(V)
            for u in sphere_points(2, 20):
                assert chord_length(K, u) == pytest.approx(chord_2d(V, u), abs=1e-9)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_chord_equals_twice_radial(self, rng, d):
        K = Polytope(rng.normal(size=(15, d)))
        L = difference_body(K)
        for u in sphere_points(d, 40, seed=d):
            ell = chord_length(K, u)
            assert abs(ell - 2 * radial(L, u)) <= 1e-9 * max(1.0, ell)
            assert ell <= width_in_direction(K, u) + 1e-9
