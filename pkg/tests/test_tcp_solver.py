import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_poly_map
from tcq.classify import NotR0Case, NotR0Form, detect_not_r0_form
from tcq.decomp import DependentGenerators, canonical_from_vectors
from tcq.io import load_fixture
from tcq.tcp_solver import (
    UnsupportedDimension, find_q_without_solution, simplex_poly_coeffs, singleton_solutions,
    solve_tcp_decomp_exact, solve_tcp_n2, solve_tcp_zero_n2, verify_solution,
)
from tcq.tensor_core import DenseTensor, DimensionMismatch, SymOuterDecomp, sym_rank_one

QNR = load_fixture("q_not_r0")


def test_verify_solution_examples():
    sol = verify_solution(QNR, np.zeros(2), np.array([1.0, 2.0]))
    assert sol is not None and sol.w.tolist() == [0.0, 0.0]
    q = np.array([0.5, 2.0])
    sol = verify_solution(QNR, q, np.zeros(2))
    assert sol.w.tolist() == q.tolist() and sol.support == ()
    assert verify_solution(QNR, np.zeros(2), np.array([1.0, 1.0])) is None
    with pytest.raises(DimensionMismatch):
        verify_solution(QNR, np.zeros(3), np.zeros(2))


def test_q_not_r0_is_solvable_for_negative_q():
    out = solve_tcp_n2(QNR, np.array([-1.0, -1.0]))
    assert out.has_solution and out.exhaustive
    for s in out.solutions:
        assert verify_solution(QNR, np.array([-1.0, -1.0]), s.u, tol=1e-8) is not None
    # singleton supports from a111 t^2 = 1 and a222 t^2 = 1
    assert out.distance([0.5, 0.0]) <= 1e-12
    assert out.distance([0.0, 1.0]) <= 1e-12
    # q2 g1 - q1 g2 vanishes identically: full-support solutions form curves
    assert out.curves
    curve = out.curves[0]
    theta = 0.5 * (curve.lo + curve.hi)
    assert verify_solution(QNR, np.array([-1.0, -1.0]), curve.point(theta)) is not None


def test_nonnegative_q_admits_zero():
    rng = np.random.default_rng(5)
    for _ in range(20):
        A = DenseTensor(rng.integers(-3, 4, size=(2, 2, 2, 2)).astype(float))
        out = solve_tcp_n2(A, np.array([1.0, 1.0]))
        assert out.distance([0.0, 0.0]) == 0.0


def test_rank_one_singleton_root():
    A = sym_rank_one(np.array([1.0, 1.0]), 3)
    out = solve_tcp_n2(A, np.array([-1.0, -1.0]))
    hit = [s for s in out.solutions if s.support == (0,)]
    assert hit and np.allclose(hit[0].u, [1.0, 0.0]) and np.allclose(hit[0].w, [0.0, 0.0])


def test_zero_problem_examples():
    rays = solve_tcp_zero_n2(QNR)
    assert rays.exhaustive and len(rays.solutions) == 1
    u = rays.solutions[0].u
    assert abs(u[0] / u.sum() - 1 / 3) <= 1e-9
    assert solve_tcp_zero_n2(sym_rank_one(np.array([1.0, 1.0]), 3)).solutions == ()
    rays = solve_tcp_zero_n2(sym_rank_one(np.array([1.0, -1.0]), 3))
    assert [s.u.tolist() for s in rays.solutions] == [[0.5, 0.5]]
    assert verify_solution(sym_rank_one(np.array([1.0, -1.0]), 3), np.zeros(2),
                           np.array([1.0, 1.0])) is not None


def test_zero_problem_axis_rays():
    # a111 = 0 and a211 >= 0 make e1 a ray
    a = np.zeros((2, 2, 2))
    a[1, 0, 0] = 2.0
    a[1, 1, 1] = 1.0
    rays = solve_tcp_zero_n2(DenseTensor(a)).solutions
    assert [s.u.tolist() for s in rays] == [[1.0, 0.0]]
    a[1, 0, 0] = -2.0
    # e1 is gone; with the first row zero, -2 t^2 + (1 - t)^2 = 0 gives an interior ray
    rays = solve_tcp_zero_n2(DenseTensor(a)).solutions
    assert len(rays) == 1 and rays[0].u[0] == pytest.approx(np.sqrt(2) - 1, abs=1e-12)


def test_zero_map_is_flagged_not_exhaustive():
    out = solve_tcp_zero_n2(DenseTensor(np.zeros((2, 2, 2))))
    assert not out.exhaustive and out.solutions


def test_singleton_segment_family():
    # a111 = 0 = q1: t e1 solves while a211 t^2 + q2 >= 0
    a = np.zeros((2, 2, 2))
    a[1, 0, 0] = -1.0
    a[1, 1, 1] = 1.0
    q = np.array([0.0, 4.0])
    (sol,) = singleton_solutions(DenseTensor(a), q, 0)
    lo, hi = sol.family
    assert lo == 0.0 and hi * sol.u[0] == pytest.approx(2.0)
    assert sol.distance([1.0, 0.0]) <= 1e-12
    assert sol.distance([3.0, 0.0]) == pytest.approx(1.0)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3, 4, 5]))
def test_every_returned_solution_verifies(seed, m):
    rng = np.random.default_rng(seed)
    A = DenseTensor(rng.integers(-3, 4, size=(2,) * m).astype(float))
    q = rng.integers(-3, 4, size=2).astype(float)
    out = solve_tcp_n2(A, q)
    for s in out.solutions:
        assert verify_solution(A, q, s.u, tol=1e-8) is not None
        w = naive_poly_map(A.array, s.u) + q
        assert np.all(w >= -1e-8) and abs(s.u @ w) <= 1e-8 * max(1, np.max(np.abs(s.u)) ** m)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3, 4, 5]))
def test_rays_scale(seed, m):
    rng = np.random.default_rng(seed)
    A = DenseTensor(rng.integers(-2, 3, size=(2,) * m).astype(float))
    out = solve_tcp_zero_n2(A)
    for s in out.solutions:
        for t in (0.5, 2.0, 10.0):
            assert verify_solution(A, np.zeros(2), t * s.u, tol=1e-8 * t ** m) is not None


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3, 4, 5, 6]))
def test_sym2_rays_have_one_nonzero_component(seed, m):
    rng = np.random.default_rng(seed)
    x, y = rng.integers(-3, 4, size=2), rng.integers(-3, 4, size=2)
    if abs(x[0] * y[1] - x[1] * y[0]) == 0:
        return
    mus = rng.choice([-2, -1, 1, 2], size=2)
    D = SymOuterDecomp.from_pairs(m, [(mus[0], x), (mus[1], y)])
    for s in solve_tcp_zero_n2(D).solutions:
        assert len(s.support) == 1


def test_decomp_exact_examples():
    D = SymOuterDecomp.from_pairs(3, [(1, [1, 1]), (1, [-1, 2])])
    out = solve_tcp_decomp_exact(D, np.array([-1.0, 3.0]))
    assert out.exhaustive and not out.has_solution
    D = SymOuterDecomp.from_pairs(3, [(1, [1, 0]), (1, [0, 1])])
    out = solve_tcp_decomp_exact(D, np.array([-1.0, -1.0]))
    hit = [s for s in out.solutions if s.support == (0, 1)]
    assert len(hit) == 1 and np.allclose(hit[0].u, [1, 1]) and np.allclose(hit[0].w, [0, 0])
    out = solve_tcp_decomp_exact(D, np.array([2.0, 0.0]))
    assert out.distance([0.0, 0.0]) == 0.0


def test_decomp_exact_errors():
    with pytest.raises(DependentGenerators):
        solve_tcp_decomp_exact(SymOuterDecomp.from_pairs(3, [(1, [1, 1]), (2, [2, 2])]), np.zeros(2))
    with pytest.raises(DependentGenerators):
        solve_tcp_decomp_exact(SymOuterDecomp.from_pairs(3, [(1, [1, 1])]), np.zeros(2))
    with pytest.raises(UnsupportedDimension):
        solve_tcp_n2(sym_rank_one(np.ones(3), 3), np.zeros(3))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3, 4, 5]))
def test_exact_and_dense_paths_agree(seed, m):
    rng = np.random.default_rng(seed)
    x, y = rng.integers(-3, 4, size=2), rng.integers(-3, 4, size=2)
    if x[0] * y[1] - x[1] * y[0] == 0:
        return
    D = SymOuterDecomp.from_pairs(m, [(rng.choice([-1, 1, 2]), x), (rng.choice([-2, -1, 1]), y)])
    q = rng.integers(-3, 4, size=2).astype(float)
    if not np.any(q):
        return
    exact = solve_tcp_decomp_exact(D, q)
    dense = solve_tcp_n2(DenseTensor(np.asarray(_dense(D))), q)
    for s in exact.solutions:
        assert dense.distance(s.u) <= 1e-7
    for s in dense.solutions:
        assert exact.distance(s.u) <= 1e-7


def _dense(D):
    from tcq.tensor_core import materialize
    return materialize(D).array


def test_simplex_coefficients():
    g = simplex_poly_coeffs(QNR)
    # (A v^2)_1 = (A v^2)_2 = (3 theta - 1)^2 for v = (theta, 1 - theta)
    np.testing.assert_allclose(g, [[1, -6, 9], [1, -6, 9]], atol=1e-12)


def test_find_q_odd_case_i():
    C = canonical_from_vectors(3, "PLUS_PLUS", [1, 1], [-1, 2])
    q = find_q_without_solution(C)
    assert q.tolist() == [-1.0, 3.0]
    assert not solve_tcp_decomp_exact(C.decomposition(), q).has_solution


def test_find_q_odd_case_ii_is_swapped():
    C = canonical_from_vectors(3, "PLUS_PLUS", [1, 1], [2, -1])
    q = find_q_without_solution(C)
    assert q.tolist() == [3.0, -1.0]
    assert not solve_tcp_decomp_exact(C.decomposition(), q).has_solution


def test_find_q_even_case_c2():
    C = canonical_from_vectors(4, "PLUS_MINUS", [1, 1], [1, -2])
    form = detect_not_r0_form(C)
    assert form.case is NotR0Case.EVEN_I and form.alpha == 1.0
    q = find_q_without_solution(C, form)
    assert q.tolist() == [1.0, -1.0]
    assert not solve_tcp_decomp_exact(C.decomposition(), q).has_solution


def test_find_q_even_instance_without_form():
    # x1 (x2 - y2) < 0, so no not-R0 pattern applies
    C = canonical_from_vectors(4, "PLUS_MINUS", [1, 1], [1, 2])
    assert detect_not_r0_form(C) is None
    assert find_q_without_solution(C) is None
    with pytest.raises(ValueError):
        find_q_without_solution(C, NotR0Form(NotR0Case.EVEN_I, C.matrix, 1.0))


def test_find_q_even_case_c1_defers():
    C = canonical_from_vectors(4, "PLUS_MINUS", [1, 2], [1, 1])
    assert detect_not_r0_form(C).case is NotR0Case.EVEN_I
    assert find_q_without_solution(C) is None


def test_solution_json_shape():
    out = solve_tcp_n2(QNR, np.zeros(2))
    doc = out.to_json()
    assert doc["exhaustive"] is True
    ray = [s for s in doc["solutions"] if s["support"] == [0, 1]][0]
    assert ray["family"] == [0.0, None]
