"""Class membership verdicts (positive, nonnegative, S, R0, Q) with witnesses.

Every ``Yes``/``No`` verdict carries evidence that can be re-checked with
:func:`verify_solution`, :func:`eval_poly_map` or by reading entries.  Q is
only semi-decidable here, so ``Unknown`` appears whenever no rule fires.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P

from .config import get_tolerances
from .decomp import (
    NotRankOneSymmetric, Sym2Form, canonicalize_sym2, check_linear_independence,
    extract_generator, is_unisigned,
)
from .roots import sign_intervals
from .tcp_solver import (
    find_q_without_solution, simplex_poly_coeffs, solve_tcp_decomp_exact,
    solve_tcp_n2, solve_tcp_zero_n2, verify_solution,
)
from .tensor_core import (
    SymOuterDecomp, as_dense, diagonal, eval_poly_map, is_symmetric, sym_rank_one,
)


class TheoremViolation(AssertionError):
    """A computed verdict contradicts one of the structural results relied on."""


class Answer(str, Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    klass: str
    value: Answer
    method: str
    witness: dict = None
    note: str = None

    @property
    def decided(self):
        return self.value is not Answer.UNKNOWN

    def to_json(self):
        d = {"class": self.klass, "verdict": self.value.value, "method": self.method}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.note:
            d["note"] = self.note
        return d


def _index(ix):
    return [int(i) for i in ix]


def _entry_scale_tol(A):
    t = get_tolerances()
    return t.atol + t.rtol * float(np.max(np.abs(A.array)))


def is_positive(A):
    A = as_dense(A)
    bad = np.argwhere(A.array <= 0)
    if bad.size:
        ix = tuple(bad[0])
        return Verdict("positive", Answer.NO, "entry-scan",
                       {"index": _index(ix), "entry": float(A.array[ix])})
    return Verdict("positive", Answer.YES, "entry-scan",
                   {"min_entry": float(A.array.min())})


def is_nonnegative(A):
    A = as_dense(A)
    bad = np.argwhere(A.array < 0)
    if bad.size:
        ix = tuple(bad[0])
        return Verdict("nonnegative", Answer.NO, "entry-scan",
                       {"index": _index(ix), "entry": float(A.array[ix])})
    return Verdict("nonnegative", Answer.YES, "entry-scan",
                   {"min_entry": float(A.array.min())})


def q_by_slice_criterion(A):
    """Q certificate from coinciding leading slices and Q principal subtensors.

    Any pair of leading indices may play the role of (1, 2), since relabelling
    all indices simultaneously preserves the Q property.
    """
    A = as_dense(A)
    a = A.array
    m, n = A.order, A.dim
    tol = _entry_scale_tol(A)
    if n == 1:
        entry = float(a.flat[0])
        if entry > tol:
            return Verdict("Q", Answer.YES, "single-positive-entry", {"entry": entry})
        return Verdict("Q", Answer.NO, "single-nonpositive-entry",
                       {"entry": entry, "q": [-1.0]})

    @lru_cache(maxsize=None)
    def certify(S):
        if len(S) == 1:
            entry = float(a[(S[0],) * m])
            return {"index": S[0], "entry": entry} if entry > tol else None
        sub = a[np.ix_(*[list(S)] * m)]
        for i in range(len(S)):
            for j in range(i + 1, len(S)):
                if np.max(np.abs(sub[i] - sub[j])) > tol:
                    continue
                left = certify(S[:i] + S[i + 1:])
                if left is None:
                    continue
                right = certify(S[:j] + S[j + 1:])
                if right is not None:
                    return {"pair": [S[i], S[j]], "drop_first": left, "drop_second": right}
        return None

    trace = certify(tuple(range(n)))
    if trace is None:
        return Verdict("Q", Answer.UNKNOWN, "slice-criterion")
    return Verdict("Q", Answer.YES, "slice-criterion", {"trace": trace})


def q_by_nonnegativity(A):
    """Positive tensors are Q; a nonnegative tensor is Q iff its diagonal is positive."""
    A = as_dense(A)
    tol = _entry_scale_tol(A)
    if np.all(A.array > 0):
        return Verdict("Q", Answer.YES, "positive-tensor",
                       {"min_entry": float(A.array.min())})
    if np.any(A.array < 0):
        return Verdict("Q", Answer.UNKNOWN, "nonnegativity")
    diag = diagonal(A)
    zero = np.nonzero(diag <= tol)[0]
    if zero.size:
        i = int(zero[0])
        # q_i < 0 < q_j forces u = t e_i, and then w_i = -1
        q = np.ones(A.dim)
        q[i] = -1.0
        return Verdict("Q", Answer.NO, "nonnegative-zero-diagonal",
                       {"index": i, "q": q.tolist()})
    return Verdict("Q", Answer.YES, "nonnegative-positive-diagonal", {"diagonal": diag.tolist()})


def _simplex(theta):
    return np.array([theta, 1.0 - theta])


def is_s_tensor_n2(A):
    """Is there ``u > 0`` with ``A u^(m-1) > 0``?  Exact for dimension two.

    By homogeneity it suffices to look at ``u = (theta, 1 - theta)``.  Both
    components are polynomials in ``theta``; between consecutive roots their
    signs are constant, so testing one point per piece decides the question.
    """
    A = as_dense(A)
    if A.dim != 2:
        raise ValueError("is_s_tensor_n2 needs dimension 2")
    g = simplex_poly_coeffs(A)
    tol = get_tolerances().atol
    best = None
    for lo, hi in sign_intervals(list(g)):
        mid = 0.5 * (lo + hi)
        vals = np.array([P.polyval(mid, g[0]), P.polyval(mid, g[1])])
        if np.all(vals > tol) and (best is None or vals.min() > best[1]):
            best = (mid, vals.min())
    if best is None:
        return Verdict("S", Answer.NO, "simplex-sign-analysis",
                       {"pieces": [list(p) for p in sign_intervals(list(g))]})
    u = _simplex(best[0])
    return Verdict("S", Answer.YES, "simplex-sign-analysis",
                   {"u": u.tolist(), "Au": eval_poly_map(A, u).tolist()})


def s_verdict(A):
    A = as_dense(A)
    if A.dim == 2:
        return is_s_tensor_n2(A)
    ones = np.ones(A.dim)
    val = eval_poly_map(A, ones)
    if A.dim == 1:
        ans = Answer.YES if val[0] > 0 else Answer.NO
        return Verdict("S", ans, "single-entry", {"entry": float(val[0])})
    if np.all(val > 0):
        return Verdict("S", Answer.YES, "ones-vector", {"u": ones.tolist(), "Au": val.tolist()})
    return Verdict("S", Answer.UNKNOWN, "ones-vector")


def r0_verdict(A):
    A = as_dense(A)
    if A.dim == 1:
        entry = float(A.array.flat[0])
        if abs(entry) > _entry_scale_tol(A):
            return Verdict("R0", Answer.YES, "single-entry", {"entry": entry})
        return Verdict("R0", Answer.NO, "single-entry", {"u": [1.0]})
    if A.dim != 2:
        return Verdict("R0", Answer.UNKNOWN, "ray-search")
    out = solve_tcp_zero_n2(A)
    if out.solutions:
        return Verdict("R0", Answer.NO, "ray-search", {"u": out.solutions[0].u.tolist()})
    if out.exhaustive:
        return Verdict("R0", Answer.YES, "ray-search", {"rays_found": 0, "exhaustive": True})
    return Verdict("R0", Answer.UNKNOWN, "ray-search")


def certify_no_solution(A, q):
    """True iff the exhaustive dimension-two solver finds TCP(A, q) infeasible."""
    if isinstance(A, SymOuterDecomp) and len(A.terms) == 2:
        out = solve_tcp_decomp_exact(A, q)
    else:
        out = solve_tcp_n2(A, q)
    return out.exhaustive and not out.has_solution


# rank-one symmetric tensors

@dataclass(frozen=True)
class RankOneReport:
    w: tuple
    order: int
    positive: Verdict
    s: Verdict
    r0: Verdict
    q: Verdict
    r0_witness: tuple = None

    @property
    def verdicts(self):
        return {"positive": self.positive, "S": self.s, "R0": self.r0, "Q": self.q}

    @property
    def agree(self):
        return len({v.value for v in self.verdicts.values()}) == 1


def _mixed_sign_witness(w):
    """Nonnegative ``u`` on two coordinates of opposite sign with ``w . u = 0``."""
    pos = np.nonzero(w > 0)[0]
    neg = np.nonzero(w < 0)[0]
    if not (pos.size and neg.size):
        return None
    i, j = int(neg[0]), int(pos[0])
    u = np.zeros_like(w)
    u[i], u[j] = abs(w[j]), abs(w[i])
    return u


def rank_one_r0_witness(w):
    """A nonzero solution of TCP([w]^m, 0) when one exists by construction."""
    w = np.asarray(w, dtype=float)
    zero = np.nonzero(w == 0)[0]
    if zero.size:
        u = np.zeros_like(w)
        u[zero[0]] = 1.0
        return u
    return _mixed_sign_witness(w)


def _s_by_generator(w, m):
    # (A u^(m-1))_i = w_i (w . u)^(m-1)
    ones = np.ones_like(w)
    val = eval_poly_map(sym_rank_one(w, m), ones)
    ok = bool(np.all(w > 0)) if m % 2 == 1 else is_unisigned(w)
    if ok:
        return Verdict("S", Answer.YES, "generator-sign", {"u": ones.tolist(), "Au": val.tolist()})
    return Verdict("S", Answer.NO, "generator-sign", {"generator": w.tolist()})


def _r0_by_generator(w, m):
    u = rank_one_r0_witness(w)
    if u is not None:
        return Verdict("R0", Answer.NO, "generator-sign", {"u": u.tolist()})
    # unisigned: w . u != 0 for nonzero u >= 0, so A u^(m-1) = w (w.u)^(m-1) has no zero
    return Verdict("R0", Answer.YES, "generator-sign", {"generator": w.tolist()})


def rank_one_equivalence(w, m):
    """Compute positivity, S, R0 and Q for ``[w]^(x)m`` by independent routes."""
    w = np.asarray(w, dtype=float)
    A = sym_rank_one(w, m)
    n = w.shape[0]
    positive = is_positive(A)
    if n <= 2:
        s = s_verdict(A)
        r0 = r0_verdict(A)
    else:
        s = _s_by_generator(w, m)
        r0 = _r0_by_generator(w, m)
    q = q_by_nonnegativity(A)
    if not q.decided:
        probe = -np.ones(n)
        if n <= 2:
            if certify_no_solution(A, probe):
                q = Verdict("Q", Answer.NO, "exhaustive-refutation", {"q": probe.tolist()})
        else:
            # w_i (w.u)^(m-1) >= 1 for all i needs every w_i to share the sign of (w.u)^(m-1)
            q = Verdict("Q", Answer.NO, "generator-sign-refutation", {"q": probe.tolist()})
    witness = rank_one_r0_witness(w)
    if witness is not None and verify_solution(A, np.zeros(n), witness) is None:
        raise TheoremViolation(f"constructed ray {witness} does not solve TCP(A, 0)")
    return RankOneReport(tuple(w.tolist()), m, positive, s, r0, q,
                         None if witness is None else tuple(witness.tolist()))


# symmetric rank two, dimension two

class NotR0Case(str, Enum):
    ODD_I = "ODD_I"
    ODD_II = "ODD_II"
    EVEN_I = "EVEN_I"
    EVEN_II = "EVEN_II"


@dataclass(frozen=True, eq=False)
class NotR0Form:
    case: NotR0Case
    matrix: np.ndarray
    alpha: float = None

    @property
    def ray(self):
        """The singleton-support solution of TCP(A, 0) the form guarantees."""
        e = np.zeros(2)
        e[0 if self.case in (NotR0Case.ODD_I, NotR0Case.EVEN_I) else 1] = 1.0
        return e

    def to_json(self):
        d = {"case": self.case.value, "matrix": self.matrix.tolist()}
        if self.alpha is not None:
            d["alpha"] = self.alpha
        return d


def _form_conditions(C, case, alpha=None):
    x, y = C.x, C.y
    if case is NotR0Case.ODD_I:
        return y[0] + x[0], x[0], x[1] + y[1]
    if case is NotR0Case.ODD_II:
        return y[1] + x[1], x[1], x[0] + y[0]
    if case is NotR0Case.EVEN_I:
        return y[0] - alpha * x[0], x[0], x[0] * (x[1] - alpha * y[1])
    return y[1] - alpha * x[1], x[1], x[1] * (x[0] - alpha * y[0])


def _matches(C, case, alpha=None):
    tol = get_tolerances().structural
    eq, nonzero, positive = _form_conditions(C, case, alpha)
    return abs(eq) <= tol and abs(nonzero) > tol and positive > tol


def detect_not_r0_form(C):
    """Match the generator matrix ``[x y]`` against the four not-R0 patterns."""
    if C.order % 2 == 1:
        if C.form is not Sym2Form.PLUS_PLUS:
            raise ValueError("odd-order canonical forms must be PLUS_PLUS")
        for case in (NotR0Case.ODD_I, NotR0Case.ODD_II):
            if _matches(C, case):
                return NotR0Form(case, C.matrix)
        return None
    if C.form is not Sym2Form.PLUS_MINUS:
        return None
    for case in (NotR0Case.EVEN_I, NotR0Case.EVEN_II):
        for alpha in (1.0, -1.0):
            if _matches(C, case, alpha):
                return NotR0Form(case, C.matrix, alpha)
    return None


def validate_not_r0_form(C, form):
    odd = form.case in (NotR0Case.ODD_I, NotR0Case.ODD_II)
    if odd != (C.order % 2 == 1):
        raise ValueError(f"{form.case.value} does not apply to order {C.order}")
    if not odd and C.form is not Sym2Form.PLUS_MINUS:
        raise ValueError("even-order forms need a PLUS_MINUS canonical decomposition")
    if not _matches(C, form.case, form.alpha):
        raise ValueError(f"generators do not satisfy the {form.case.value} conditions")


def _probe_qs():
    qs = [np.array(s, dtype=float) for s in ((1, 1), (1, -1), (-1, 1), (-1, -1))]
    for t in (2.0, 10.0):
        qs += [np.array([-1.0, -t]), np.array([-t, -1.0])]
    return qs


@dataclass(frozen=True)
class PipelineResult:
    q: Verdict
    r0: Verdict
    form: NotR0Form = None


def q_implies_r0_pipeline(C):
    """Q and R0 verdicts for a canonical symmetric-rank-two tensor in dimension two."""
    A = C.materialize()
    D = C.decomposition()
    m = C.order
    rays = solve_tcp_zero_n2(A)
    form = None
    if m % 2 == 0 and C.form is Sym2Form.PLUS_PLUS:
        r0 = Verdict("R0", Answer.YES, "positive-definite", {"rays_found": len(rays.solutions)})
        q = Verdict("Q", Answer.YES, "positive-definite",
                    {"criterion": "u . A u^(m-1) > 0 for u != 0 gives a unique solution for every q"})
    elif C.form is Sym2Form.MINUS_MINUS:
        r0 = Verdict("R0", Answer.YES, "negative-definite", {"rays_found": len(rays.solutions)})
        probe = -np.ones(2)
        if not certify_no_solution(D, probe):
            raise TheoremViolation("TCP(-(x^m + y^m), q < 0) turned out solvable")
        q = Verdict("Q", Answer.NO, "negative-q-refutation", {"q": probe.tolist()})
    else:
        form = detect_not_r0_form(C)
        if form is not None:
            ray = form.ray
            if verify_solution(A, np.zeros(2), ray) is None:
                raise TheoremViolation(f"{form.case.value} ray {ray} does not solve TCP(A, 0)")
            r0 = Verdict("R0", Answer.NO, "structural-form",
                         {"u": ray.tolist(), "form": form.to_json()})
            q = _refute_q(C, D, A, form)
        else:
            r0 = Verdict("R0", Answer.YES, "structural-form",
                         {"rays_found": len(rays.solutions)})
            q = _probe_q(D, A)
    # the structural forms must agree with the direct ray search
    if (r0.value is Answer.NO) != bool(rays.solutions):
        raise TheoremViolation(
            f"R0={r0.value.value} by structure but ray search found {len(rays.solutions)} rays")
    if q.value is Answer.YES and r0.value is Answer.NO:
        raise TheoremViolation("Q tensor that is not R0")
    return PipelineResult(q, r0, form)


def _refute_q(C, D, A, form):
    odd = C.order % 2 == 1
    q = find_q_without_solution(C, form)
    if q is not None:
        method = "odd-form-witness" if odd else "even-form-witness"
        if certify_no_solution(D, q):
            return Verdict("Q", Answer.NO, method, {"q": q.tolist()})
        return Verdict("Q", Answer.UNKNOWN, method, {"q": q.tolist()},
                       note="constructed q admits a solution")
    nn = q_by_nonnegativity(A)
    if nn.value is Answer.NO and certify_no_solution(D, np.array(nn.witness["q"])):
        return nn
    return Verdict("Q", Answer.UNKNOWN, "nonnegative-zero-diagonal",
                   note="expected a nonnegative tensor with a zero diagonal entry")


def _probe_q(D, A):
    for rule in (q_by_slice_criterion, q_by_nonnegativity):
        v = rule(A)
        if v.decided:
            return v
    for q in _probe_qs():
        if certify_no_solution(D, q):
            return Verdict("Q", Answer.NO, "probe-refutation", {"q": q.tolist()})
    return Verdict("Q", Answer.UNKNOWN, "probe-set",
                   note="every probe q was solvable; this does not prove Q")


# whole-tensor report

@dataclass(frozen=True)
class ClassReport:
    verdicts: tuple
    metadata: dict = field(default_factory=dict)

    def get(self, klass):
        for v in self.verdicts:
            if v.klass == klass:
                return v
        raise KeyError(klass)

    def to_json(self):
        return {"verdicts": [v.to_json() for v in self.verdicts], "metadata": self.metadata}


def _q_general(A):
    for rule in (q_by_slice_criterion, q_by_nonnegativity):
        v = rule(A)
        if v.decided:
            return v
    if A.dim == 2:
        for q in _probe_qs():
            if certify_no_solution(A, q):
                return Verdict("Q", Answer.NO, "probe-refutation", {"q": q.tolist()})
        return Verdict("Q", Answer.UNKNOWN, "probe-set",
                       note="every probe q was solvable; this does not prove Q")
    return Verdict("Q", Answer.UNKNOWN, "no-criterion")


def classify(A):
    """Verdicts for positive, nonnegative, S, R0 and Q, plus structure metadata."""
    dense = as_dense(A)
    meta = {"order": dense.order, "dim": dense.dim}
    positive, nonneg = is_positive(dense), is_nonnegative(dense)
    s = s_verdict(dense)
    r0 = r0_verdict(dense)
    q = None
    if (isinstance(A, SymOuterDecomp) and len(A.terms) == 2 and A.dim == 2
            and check_linear_independence(A.terms[0].w, A.terms[1].w)):
        C = canonicalize_sym2(A)
        res = q_implies_r0_pipeline(C)
        meta["canonical"] = {"form": C.form.value, "x": C.x.tolist(), "y": C.y.tolist()}
        if res.form is not None:
            meta["not_r0_form"] = res.form.to_json()
        r0 = res.r0 if not r0.decided else r0
        q = res.q
    elif is_symmetric(dense):
        try:
            gen = extract_generator(dense)
        except NotRankOneSymmetric:
            gen = None
        if gen is not None:
            meta["generator"] = gen.w.tolist()
            q = rank_one_equivalence(gen.w, dense.order).q
    if q is None or not q.decided:
        general = _q_general(dense)
        if q is None or general.decided:
            q = general
    if q.value is Answer.YES and r0.value is Answer.NO and dense.dim == 2 and "canonical" in meta:
        raise TheoremViolation("Q tensor that is not R0")
    return ClassReport((positive, nonneg, s, r0, q), meta)
