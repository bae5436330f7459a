"""Seeded random instances and the randomized property checks.

Each case draws from its own generator ``default_rng([seed, property, case])``
so a single failing case can be replayed from its printed coordinates.
"""
from dataclasses import dataclass

import numpy as np

from .classify import (
    Answer, TheoremViolation, detect_not_r0_form, q_implies_r0_pipeline, rank_one_equivalence,
)
from .decomp import (
    DependentGenerators, Sym2Form, canonical_from_vectors, check_linear_independence,
    extract_generator,
)
from .io import tensor_to_dict
from .tcp_solver import solve_tcp_n2, solve_tcp_zero_n2, verify_solution
from .tensor_core import (
    DenseTensor, Permutation, SymOuterDecomp, Term, eval_poly_map, materialize,
    permute_decomp, sym_rank_one,
)


@dataclass(frozen=True)
class CaseResult:
    ok: bool
    message: str = ""
    instance: dict = None


def case_rng(seed, prop, case):
    return np.random.default_rng([seed, prop, case])


def random_int_vector(rng, n, lo=-3, hi=3, nonzero=False):
    while True:
        v = rng.integers(lo, hi + 1, size=n).astype(float)
        if np.any(v) and (not nonzero or np.all(v)):
            return v


def random_generator(rng, n):
    """Entries in [-3, 3] without zeros, then a planted zero a quarter of the time."""
    w = random_int_vector(rng, n, nonzero=True)
    if n > 1 and rng.random() < 0.25:
        w[rng.integers(n)] = 0.0
    return w


def random_decomp(rng, n=2, k=2, orders=(2, 3, 4, 5)):
    m = int(rng.choice(orders))
    terms = []
    for _ in range(k):
        mu = float(rng.choice([-3, -2, -1, 1, 2, 3]))
        terms.append(Term(mu, random_int_vector(rng, n)))
    return SymOuterDecomp(m, tuple(terms))


def random_dense(rng, n, m, lo=-3, hi=3):
    return DenseTensor(rng.integers(lo, hi + 1, size=(n,) * m).astype(float))


def _planted_pair(rng, m):
    x = random_int_vector(rng, 2)
    y = random_int_vector(rng, 2)
    i = int(rng.integers(2))
    j = 1 - i
    if m % 2 == 1:
        # y_i = -x_i with x_i != 0 and x_j + y_j > 0
        x[i] = float(rng.choice([-3, -2, -1, 1, 2, 3]))
        y[i] = -x[i]
        s = int(rng.integers(1, 4))
        x[j] = float(rng.integers(-3, 4))
        y[j] = float(s - x[j])
    else:
        alpha = float(rng.choice([-1.0, 1.0]))
        x[i] = float(rng.choice([-3, -2, -1, 1, 2, 3]))
        y[i] = alpha * x[i]
        # x_i (x_j - alpha y_j) > 0
        d = float(rng.integers(1, 4)) * np.sign(x[i])
        y[j] = float(rng.integers(-3, 4))
        x[j] = d + alpha * y[j]
    return x, y


def random_canonical_sym2(rng, orders=(3, 4, 5, 6)):
    """Canonical symmetric-rank-two tensors in dimension two; about half have a planted not-R0 form."""
    m = int(rng.choice(orders))
    while True:
        if m % 2 == 1:
            form = Sym2Form.PLUS_PLUS
        else:
            form = Sym2Form(rng.choice(["PLUS_PLUS", "PLUS_MINUS", "PLUS_MINUS", "MINUS_MINUS"]))
        if rng.random() < 0.5 and (m % 2 == 1 or form is Sym2Form.PLUS_MINUS):
            x, y = _planted_pair(rng, m)
        else:
            x, y = random_int_vector(rng, 2), random_int_vector(rng, 2)
        if np.max(np.abs(np.concatenate([x, y]))) > 6 or not check_linear_independence(x, y):
            continue
        try:
            return canonical_from_vectors(m, form, x, y)
        except DependentGenerators:
            continue


def canonical_to_dict(C):
    return {"order": C.order, "form": C.form.value, "x": C.x.tolist(), "y": C.y.tolist()}


# property checks: each takes a per-case rng and returns a CaseResult

def prop_evaluation_consistency(rng):
    n = int(rng.integers(1, 4))
    D = random_decomp(rng, n=n, k=int(rng.integers(1, 4)), orders=(2, 3, 4, 5, 6))
    u = rng.normal(size=n)
    a, b = eval_poly_map(D, u), eval_poly_map(materialize(D), u)
    err = float(np.max(np.abs(a - b)))
    ok = err <= 1e-9 * max(1.0, float(np.max(np.abs(b))))
    return CaseResult(ok, f"max deviation {err:.3e}", {"tensor": tensor_to_dict(D), "u": u.tolist()})


def prop_homogeneity(rng):
    n, m = int(rng.integers(1, 4)), int(rng.integers(2, 6))
    A = random_dense(rng, n, m)
    u = rng.random(n) * 2
    t = float(rng.random() * 4)
    lhs, rhs = eval_poly_map(A, t * u), t ** (m - 1) * eval_poly_map(A, u)
    err = float(np.max(np.abs(lhs - rhs)))
    ok = err <= 1e-9 * max(1.0, float(np.max(np.abs(rhs))))
    return CaseResult(ok, f"max deviation {err:.3e}",
                      {"tensor": tensor_to_dict(A), "u": u.tolist(), "t": t})


def prop_permutation_covariance(rng):
    """Solutions of the relabelled instance are exactly the relabelled solutions."""
    D = random_decomp(rng)
    q = rng.integers(-3, 4, size=2).astype(float)
    P = Permutation.swap()
    Dp = permute_decomp(D, P)
    qp = P.apply(q)
    inst = {"tensor": tensor_to_dict(D), "q": q.tolist()}
    u_eval = rng.normal(size=2)
    lhs = P.apply(eval_poly_map(D, u_eval))
    rhs = eval_poly_map(Dp, P.apply(u_eval))
    if np.max(np.abs(lhs - rhs)) > 1e-9 * max(1.0, float(np.max(np.abs(lhs)))):
        return CaseResult(False, "map covariance fails", inst)
    out, outp = solve_tcp_n2(D, q), solve_tcp_n2(Dp, qp)
    for s in out.solutions:
        if outp.distance(P.apply(s.u)) > 1e-8:
            return CaseResult(False, f"P u unmatched for u={s.u.tolist()}", inst)
    inv = P.inverse()
    for s in outp.solutions:
        if out.distance(inv.apply(s.u)) > 1e-8:
            return CaseResult(False, f"P^-1 v unmatched for v={s.u.tolist()}", inst)
    if bool(out.curves) != bool(outp.curves):
        return CaseResult(False, "solution curve present on one side only", inst)
    return CaseResult(True, f"{len(out.solutions)} solutions matched", inst)


def prop_generator_round_trip(rng):
    n, m = int(rng.integers(1, 4)), int(rng.integers(2, 7))
    w = rng.normal(size=n)
    if rng.random() < 0.25 and n > 1:
        w[rng.integers(n)] = 0.0
    got = extract_generator(sym_rank_one(w, m)).w
    ref = w
    if m % 2 == 0 and w[np.nonzero(w)[0][0]] < 0:
        ref = -w
    err = float(np.max(np.abs(got - ref)))
    return CaseResult(err <= 1e-9 * max(1.0, float(np.max(np.abs(w)))), f"max deviation {err:.3e}",
                      {"w": w.tolist(), "m": m})


def prop_four_way(rng, dims=(2, 3), orders=(3, 4)):
    n, m = int(rng.choice(dims)), int(rng.choice(orders))
    w = random_generator(rng, n)
    rep = rank_one_equivalence(w, m)
    inst = {"w": w.tolist(), "m": m}
    decided = [v for v in rep.verdicts.values() if v.decided]
    summary = ", ".join(f"{k}={v.value.value}" for k, v in rep.verdicts.items())
    if n == 2 and len(decided) != 4:
        return CaseResult(False, f"undecided verdict in dimension two: {summary}", inst)
    if len(decided) == 4 and not rep.agree:
        return CaseResult(False, f"verdicts disagree: {summary}", inst)
    return CaseResult(True, summary, inst)


def prop_four_way_n2(rng):
    return prop_four_way(rng, dims=(2,), orders=(3, 4, 5))


def prop_structural_soundness(rng):
    C = random_canonical_sym2(rng)
    inst = canonical_to_dict(C)
    form = detect_not_r0_form(C)
    rays = solve_tcp_zero_n2(C.materialize())
    if not rays.exhaustive:
        return CaseResult(False, "ray search not exhaustive", inst)
    if (form is not None) != bool(rays.solutions):
        name = form.case.value if form else "none"
        return CaseResult(False, f"form {name} but {len(rays.solutions)} rays", inst)
    for s in rays.solutions:
        if len(s.support) != 1:
            return CaseResult(False, f"ray {s.u.tolist()} has support {s.support}", inst)
    return CaseResult(True, form.case.value if form else "no form", inst)


def prop_q_implies_r0(rng):
    C = random_canonical_sym2(rng)
    inst = canonical_to_dict(C)
    try:
        res = q_implies_r0_pipeline(C)
    except TheoremViolation as exc:
        return CaseResult(False, f"theorem violation: {exc}", inst)
    if res.form is not None:
        if res.q.value is not Answer.NO:
            return CaseResult(False, f"not-R0 form {res.form.case.value} without certified Q refutation "
                                     f"({res.q.method}: {res.q.note})", inst)
        q = np.array(res.q.witness["q"])
        if verify_solution(C.decomposition(), q, np.zeros(2)) is not None:
            return CaseResult(False, "witness q admits the zero solution", inst)
    return CaseResult(True, f"Q={res.q.value.value} R0={res.r0.value.value}", inst)


PROPERTIES = {
    "evaluation-consistency": prop_evaluation_consistency,
    "homogeneity": prop_homogeneity,
    "permutation-covariance": prop_permutation_covariance,
    "generator-round-trip": prop_generator_round_trip,
    "four-way-equivalence": prop_four_way,
    "structural-soundness": prop_structural_soundness,
    "q-implies-r0": prop_q_implies_r0,
}


@dataclass(frozen=True)
class Failure:
    prop: str
    case: int
    message: str
    instance: dict


def run_property(name, seed, cases, check=None):
    """Run ``cases`` instances of one property; returns the list of failures."""
    check = check or PROPERTIES[name]
    index = list(PROPERTIES).index(name) if name in PROPERTIES else 0
    failures = []
    for case in range(cases):
        try:
            res = check(case_rng(seed, index, case))
        except Exception as exc:  # an exception is a failed case, not a crash
            res = CaseResult(False, f"{type(exc).__name__}: {exc}")
        if not res.ok:
            failures.append(Failure(name, case, res.message, res.instance))
    return failures
