"""Tensor complementarity problems TCP(A, q) in dimension two.

Find ``u >= 0`` with ``w = A u^(m-1) + q >= 0`` and ``u . w = 0``.

Supports are enumerated one at a time.  On a singleton support the problem
is a single power equation.  On the full support the map is homogeneous of
degree ``m - 1``, so writing ``u = s (theta, 1 - theta)`` reduces the two
equations to one polynomial in ``theta`` of degree at most ``m - 1``:

    q2 g1(theta) - q1 g2(theta) = 0,    g_i(theta) = (A v(theta)^(m-1))_i,

whose roots on ``(0, 1)`` are isolated exactly; the scale ``s`` then follows
from ``s^(m-1) = -q_i / g_i(theta)``.
"""
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from numpy.polynomial import polynomial as P

from .config import get_tolerances
from .decomp import DependentGenerators, check_linear_independence
from .roots import real_root, real_roots, sign_intervals, trim
from .tensor_core import (
    DimensionMismatch, SymOuterDecomp, as_dense, eval_poly_map, poly_map_jacobian,
)


class UnsupportedDimension(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TcpSolution:
    """A verified solution.

    ``family`` is ``None`` for an isolated solution.  Otherwise it is the
    range ``(lo, hi)`` of multipliers ``t`` for which ``t * u`` is also a
    solution; ``lo == 0`` means the range is open at zero and ``hi`` may be
    ``inf``.  Rays of TCP(A, 0) have family ``(0, inf)``.
    """

    u: np.ndarray
    w: np.ndarray
    residual: float
    family: tuple = None

    @property
    def support(self):
        scale = max(1.0, float(np.max(np.abs(self.u))))
        return tuple(int(i) for i in np.nonzero(self.u > 1e-12 * scale)[0])

    @property
    def is_ray(self):
        return self.family is not None and self.family[0] == 0 and np.isinf(self.family[1])

    def distance(self, v):
        """Infinity-norm distance from ``v`` to this solution (or its family segment)."""
        v = np.asarray(v, dtype=float)
        if self.family is None:
            return float(np.max(np.abs(v - self.u)))
        lo, hi = self.family
        uu = float(self.u @ self.u)
        t = float(np.clip((v @ self.u) / uu, lo, hi)) if uu > 0 else 0.0
        return float(np.max(np.abs(v - t * self.u)))

    def to_json(self):
        d = {
            "u": self.u.tolist(),
            "w": self.w.tolist(),
            "support": list(self.support),
            "residual": self.residual,
        }
        if self.family is not None:
            lo, hi = self.family
            d["family"] = [lo, None if np.isinf(hi) else hi]
        return d


@dataclass(frozen=True, eq=False)
class SolutionCurve:
    """A one-parameter set of full-support solutions.

    Arises when ``q2 g1 - q1 g2`` vanishes identically; the solutions are
    ``(-q_i / g_i(theta))^(1/(m-1)) * (theta, 1 - theta)`` for ``theta`` in
    ``(lo, hi)``.
    """

    order: int
    component: int
    q_value: float
    g_coeffs: np.ndarray
    lo: float
    hi: float

    def point(self, theta):
        g = P.polyval(theta, self.g_coeffs)
        s = real_root(-self.q_value / g, self.order - 1)
        return s * np.array([theta, 1.0 - theta])

    def distance(self, v):
        v = np.asarray(v, dtype=float)
        total = v.sum()
        if total <= 0 or np.any(v <= 0):
            return np.inf
        theta = v[0] / total
        if not self.lo < theta < self.hi:
            return np.inf
        return float(np.max(np.abs(self.point(theta) - v)))

    def to_json(self):
        return {"theta": [self.lo, self.hi], "component": self.component}


@dataclass(frozen=True, eq=False)
class SolveOutcome:
    solutions: tuple
    exhaustive: bool
    curves: tuple = ()
    notes: tuple = field(default=())

    @property
    def has_solution(self):
        return bool(self.solutions) or bool(self.curves)

    def distance(self, v):
        cands = [s.distance(v) for s in self.solutions] + [c.distance(v) for c in self.curves]
        return min(cands, default=np.inf)

    def to_json(self):
        d = {
            "solutions": [s.to_json() for s in self.solutions],
            "exhaustive": self.exhaustive,
        }
        if self.curves:
            d["curves"] = [c.to_json() for c in self.curves]
        if self.notes:
            d["notes"] = list(self.notes)
        return d


def _check_dims(A, q):
    q = np.asarray(q, dtype=float)
    if q.ndim != 1 or q.shape[0] != A.dim:
        raise DimensionMismatch(f"q has shape {q.shape}, tensor dimension is {A.dim}")
    return q


def complementarity_residual(A, q, u):
    """Return ``(w, residual)`` for a candidate ``u``."""
    q = _check_dims(A, q)
    u = np.asarray(u, dtype=float)
    w = eval_poly_map(A, u) + q
    residual = max(
        float(np.max(np.abs(np.minimum(u, 0.0)))),
        float(np.max(np.abs(np.minimum(w, 0.0)))),
        abs(float(u @ w)),
    )
    return w, residual


def verify_solution(A, q, u, tol=None, family=None):
    """Return a :class:`TcpSolution` if ``u`` solves TCP(A, q) within ``tol``, else ``None``."""
    tol = get_tolerances().solution if tol is None else tol
    u = np.asarray(u, dtype=float)
    w, residual = complementarity_residual(A, q, u)
    if residual > tol:
        return None
    return TcpSolution(u=u, w=w, residual=residual, family=family)


def _dedupe(solutions, tol):
    kept = []
    for s in sorted(solutions, key=lambda s: (s.family is None, s.residual)):
        if any(float(np.max(np.abs(s.u - k.u))) <= tol for k in kept):
            continue
        kept.append(s)
    return tuple(sorted(kept, key=lambda s: tuple(s.u)))


def _newton_polish(A, q, u):
    """Damped Newton on ``A u^(m-1) + q = 0`` (all coordinates free)."""
    t = get_tolerances()
    best = np.asarray(u, dtype=float)
    fbest = float(np.max(np.abs(eval_poly_map(A, best) + q)))
    for _ in range(t.newton_iterations):
        if fbest == 0.0:
            break
        J = poly_map_jacobian(A, best)
        F = eval_poly_map(A, best) + q
        try:
            step = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            break
        lam = 1.0
        improved = False
        for _ in range(20):
            cand = best - lam * step
            fc = float(np.max(np.abs(eval_poly_map(A, cand) + q)))
            if fc < fbest:
                best, fbest, improved = cand, fc, True
                break
            lam *= t.damping
        if not improved:
            break
    return best


def singleton_solutions(A, q, i):
    """Solutions of TCP(A, q) supported exactly on coordinate ``i``."""
    tol = get_tolerances()
    m = A.order
    e = np.zeros(A.dim)
    e[i] = 1.0
    col = eval_poly_map(A, e)
    scale = max(1.0, float(np.max(np.abs(col))), float(np.max(np.abs(q))))
    a = col[i]
    others = [j for j in range(A.dim) if j != i]
    if abs(a) > tol.atol * scale:
        val = -q[i] / a
        if val <= 0:
            return []
        u = real_root(val, m - 1) * e
        sol = verify_solution(A, q, u)
        return [sol] if sol is not None else []
    if abs(q[i]) > tol.atol * scale:
        return []
    # a_{i...i} == 0 == q_i: every t e_i with admissible off-support slack works
    lo, hi, lo_closed = 0.0, np.inf, False
    for j in others:
        c, qj = col[j], q[j]
        if abs(c) <= tol.atol * scale:
            if qj < -tol.atol * scale:
                return []
        elif c > 0:
            if qj < 0:
                lo, lo_closed = max(lo, real_root(-qj / c, m - 1)), True
        else:
            if qj <= tol.atol * scale:
                return []
            hi = min(hi, real_root(qj / -c, m - 1))
    if lo > hi:
        return []
    if lo_closed:
        rep = lo
    elif np.isfinite(hi):
        rep = hi
    else:
        rep = 1.0
    family = (lo / rep if lo_closed else 0.0, hi / rep)
    sol = verify_solution(A, q, rep * e, family=family)
    return [sol] if sol is not None else []


def _boundary_solutions(A, q):
    out = []
    if np.all(q >= -get_tolerances().atol):
        out.append(verify_solution(A, q, np.zeros(A.dim)))
    for i in range(A.dim):
        out.extend(singleton_solutions(A, q, i))
    return [s for s in out if s is not None]


def simplex_poly_coeffs(A):
    """Coefficients (ascending in theta) of ``(A v^(m-1))_i`` with ``v = (theta, 1 - theta)``.

    Returns an array of shape ``(2, m)``.
    """
    A = as_dense(A)
    if A.dim != 2:
        raise UnsupportedDimension("simplex parametrisation needs dimension 2")
    base = np.array([0.0, 1.0])
    direction = np.array([1.0, -1.0])
    T = A.array[..., np.newaxis]
    for _ in range(A.order - 1):
        axis = T.ndim - 2
        Tb = np.tensordot(T, base, axes=([axis], [0]))
        Td = np.tensordot(T, direction, axes=([axis], [0]))
        out = np.zeros(Tb.shape[:-1] + (Tb.shape[-1] + 1,))
        out[..., :-1] += Tb
        out[..., 1:] += Td
        T = out
    return T


def _simplex_point(theta):
    return np.array([theta, 1.0 - theta])


def _identically_zero(c, ref):
    return bool(np.all(np.abs(c) <= 1e-12 * max(1.0, ref)))


def _full_support_dense(A, q):
    """Full-support solutions of TCP(A, q) for q != 0 (dimension two)."""
    tol = get_tolerances()
    m = A.order
    g = simplex_poly_coeffs(A)
    ref = float(np.max(np.abs(g))) * max(1.0, float(np.max(np.abs(q))))
    h = q[1] * g[0] - q[0] * g[1]
    sols, curves = [], []
    if _identically_zero(h, ref):
        i = int(np.argmax(np.abs(q)))
        for lo, hi in sign_intervals([g[i]]):
            mid = 0.5 * (lo + hi)
            gv = P.polyval(mid, g[i])
            if gv == 0 or -q[i] / gv <= 0:
                continue
            curve = SolutionCurve(m, i, float(q[i]), g[i].copy(), lo, hi)
            rep = verify_solution(A, q, curve.point(mid))
            if rep is not None:
                curves.append(curve)
                sols.append(rep)
        return sols, curves
    for theta in real_roots(h, 0.0, 1.0):
        if not 0.0 < theta < 1.0:
            continue
        gv = np.array([P.polyval(theta, g[0]), P.polyval(theta, g[1])])
        i = int(np.argmax(np.abs(gv)))
        if abs(gv[i]) <= tol.atol * max(1.0, ref):
            continue
        val = -q[i] / gv[i]
        if val <= 0:
            continue
        u = real_root(val, m - 1) * _simplex_point(theta)
        sol = verify_solution(A, q, u)
        if sol is None:
            u = _newton_polish(A, q, u)
            if np.any(u <= 0):
                continue
            sol = verify_solution(A, q, u)
        if sol is not None:
            sols.append(sol)
    return sols, curves


def _require_dim2(A):
    if A.dim != 2:
        raise UnsupportedDimension(f"dimension-two solver got dimension {A.dim}")


def _independent_pair(A):
    return (isinstance(A, SymOuterDecomp) and len(A.terms) == 2
            and check_linear_independence(A.terms[0].w, A.terms[1].w))


def solve_tcp_n2(A, q):
    """All solutions of TCP(A, q) for a dimension-two tensor."""
    _require_dim2(A)
    q = _check_dims(A, q)
    tol = get_tolerances()
    if _independent_pair(A):
        return solve_tcp_decomp_exact(A, q)
    dense = as_dense(A)
    if np.all(np.abs(q) <= tol.atol):
        rays = solve_tcp_zero_n2(dense)
        zero = verify_solution(dense, q, np.zeros(2))
        return SolveOutcome(_dedupe([zero, *rays.solutions], tol.dedupe),
                            rays.exhaustive, notes=rays.notes)
    sols = _boundary_solutions(dense, q)
    full, curves = _full_support_dense(dense, q)
    notes = ("full-support solutions form a curve",) if curves else ()
    return SolveOutcome(_dedupe(sols + full, tol.dedupe), True, tuple(curves), notes)


def solve_tcp_zero_n2(A):
    """Nonzero solution rays of TCP(A, 0), as points on the simplex ``u1 + u2 = 1``."""
    _require_dim2(A)
    tol = get_tolerances()
    A = as_dense(A)
    q = np.zeros(2)
    rays = []
    for i in range(2):
        for s in singleton_solutions(A, q, i):
            if s.is_ray:
                rays.append(s)
    g = simplex_poly_coeffs(A)
    ref = float(np.max(np.abs(g)))
    zero = [_identically_zero(c, ref) for c in g]
    if all(zero):
        # A u^(m-1) vanishes identically: every nonnegative vector solves
        mid = verify_solution(A, q, _simplex_point(0.5), family=(0.0, np.inf))
        return SolveOutcome(_dedupe(rays + [mid], tol.dedupe), False,
                            notes=("polynomial map vanishes identically",))
    k = 0 if not zero[0] else 1
    other = g[1 - k]
    other_scale = float(np.sum(np.abs(other)))
    for theta in real_roots(g[k], 0.0, 1.0):
        if not 0.0 < theta < 1.0:
            continue
        if abs(P.polyval(theta, other)) > 1e-9 * max(1.0, other_scale):
            continue
        sol = verify_solution(A, q, _simplex_point(theta), family=(0.0, np.inf))
        if sol is not None:
            rays.append(sol)
    return SolveOutcome(_dedupe(rays, tol.dedupe), True)


def solve_tcp_decomp_exact(D, q):
    """All solutions of TCP(D, q) for two independent generators in dimension two.

    On the full support ``A u^(m-1) + q = M p + q`` with ``M = [mu_j w_j]`` and
    ``p_j = (w_j . u)^(m-1)``.  Solving ``M p = -q`` and inverting each power
    (both signs when ``m - 1`` is even) leaves a linear system for ``u``.
    """
    if not isinstance(D, SymOuterDecomp):
        raise TypeError("solve_tcp_decomp_exact needs a SymOuterDecomp")
    _require_dim2(D)
    q = _check_dims(D, q)
    if len(D.terms) != 2:
        raise DependentGenerators(f"need exactly two generators, got {len(D.terms)}")
    W = D.generators
    if not check_linear_independence(W[0], W[1]):
        raise DependentGenerators("generators are linearly dependent")
    tol = get_tolerances()
    m = D.order
    sols = _boundary_solutions(D, q)
    M = W.T * D.mus
    p = np.linalg.solve(M, -q)
    pscale = max(1.0, float(np.max(np.abs(p))))
    branches = []
    for pj in p:
        if abs(pj) <= tol.atol * pscale:
            branches.append([0.0])
        elif (m - 1) % 2 == 0:
            if pj < 0:
                branches.append([])
            else:
                r = real_root(pj, m - 1)
                branches.append([r, -r])
        else:
            branches.append([real_root(pj, m - 1)])
    for r in product(*branches):
        u = np.linalg.solve(W, np.array(r))
        if np.all(u > tol.atol * max(1.0, float(np.max(np.abs(u))))):
            sol = verify_solution(D, q, u)
            if sol is None:
                sol = verify_solution(D, q, _newton_polish(D, q, u))
            if sol is not None:
                sols.append(sol)
    return SolveOutcome(_dedupe(sols, tol.dedupe), True)


def find_q_without_solution(C, form=None):
    """The explicit ``q`` for which TCP(C, q) has no solution, if the structure gives one.

    ``form`` is the structural not-R0 form of ``C`` (detected when omitted).
    Returns ``None`` when no form applies, or in the even-order case where
    ``|x2| >= |y2|`` (after orienting to case i) and the tensor is instead
    nonnegative with a vanishing diagonal entry.
    """
    from .classify import NotR0Case, detect_not_r0_form, validate_not_r0_form

    if form is None:
        form = detect_not_r0_form(C)
        if form is None:
            return None
    else:
        validate_not_r0_form(C, form)
    x, y = C.x, C.y
    if form.case is NotR0Case.ODD_I:
        return np.array([-abs(x[0]), abs(x[1]) + abs(y[1])])
    if form.case is NotR0Case.ODD_II:
        # swap coordinates to reach case i, then map q back
        return np.array([abs(x[0]) + abs(y[0]), -abs(x[1])])
    if form.case is NotR0Case.EVEN_I:
        if abs(x[1]) >= abs(y[1]):
            return None
        return np.array([abs(x[0]), -1.0])
    if abs(x[0]) >= abs(y[0]):
        return None
    return np.array([-1.0, abs(x[1])])
