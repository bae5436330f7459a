"""The fixed reproduction suite: every worked example and structural result as a named row."""
import time
from dataclasses import dataclass

import numpy as np

from . import campaign as cp
from .classify import (
    Answer, TheoremViolation, certify_no_solution, classify, detect_not_r0_form,
    q_implies_r0_pipeline,
)
from .decomp import (
    DependentGenerators, canonical_from_vectors, canonicalize_sym2, check_generator_proposition,
    merge_dependent,
)
from .io import load_fixture
from .tcp_solver import solve_tcp_zero_n2
from .tensor_core import SymOuterDecomp, Term, eval_poly_map, materialize, outer_rank_one

SEED = 20240917


@dataclass(frozen=True)
class Row:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def to_json(self):
        return {"name": self.name, "status": "PASS" if self.passed else "FAIL",
                "detail": self.detail, "seconds": round(self.seconds, 3)}


def _verdicts(A):
    rep = classify(A)
    return {v.klass: v for v in rep.verdicts}


def _outer_example(fixture, factors):
    A = load_fixture(fixture)
    built = outer_rank_one([np.array(f, dtype=float) for f in factors])
    exact = bool(np.array_equal(built.array, A.array))
    v = _verdicts(A)
    ok = (exact and v["positive"].value is Answer.NO
          and v["Q"].value is Answer.YES and v["Q"].method == "slice-criterion")
    return ok, (f"entries match: {exact}; positive={v['positive'].value.value}; "
                f"Q={v['Q'].value.value} via {v['Q'].method}")


def row_rank_one_order3():
    return _outer_example("rank_one_order3", [(-1, -1), (1, -1), (-1, 1)])


def row_rank_one_order4():
    return _outer_example("rank_one_order4", [(1, 1), (1, -1), (-1, -1), (-1, 1)])


def row_q_not_r0():
    A = load_fixture("q_not_r0")
    zero = bool(np.array_equal(eval_poly_map(A, np.array([1.0, 2.0])), np.zeros(2)))
    rays = solve_tcp_zero_n2(A).solutions
    thetas = [float(s.u[0] / s.u.sum()) for s in rays]
    ray_ok = any(abs(t - 1.0 / 3.0) <= 1e-9 for t in thetas)
    v = _verdicts(A)
    ok = zero and ray_ok and v["Q"].value is Answer.YES and v["R0"].value is Answer.NO
    shown = [(s.u / s.u[0]).round(9).tolist() for s in rays if s.u[0] > 0]
    return ok, (f"A(1,2)^2 = 0: {zero}; rays {shown}; Q={v['Q'].value.value}, "
                f"R0={v['R0'].value.value}")


def _generator_cases(cases, seed=SEED):
    fixed = [((1, 2), 3), ((-1, -2), 3), ((1, -1), 2), ((2, 3, 1), 4), ((-1, -5), 4), ((1, 0), 3)]
    for w, m in fixed:
        yield np.array(w, dtype=float), m
    for case in range(cases):
        rng = cp.case_rng(seed, 100, case)
        n = int(rng.integers(1, 5))
        yield cp.random_generator(rng, n), int(rng.integers(2, 7))


def row_proposition():
    bad = [(w.tolist(), m) for w, m in _generator_cases(1000)
           if not check_generator_proposition(w, m).holds]
    return not bad, f"{len(bad)} violations over 1006 generators" + (f"; first {bad[0]}" if bad else "")


def row_rank_one_equivalence(cases=500):
    bad = cp.run_property("four-way-n2", SEED, cases, cp.prop_four_way_n2)
    detail = f"{len(bad)} disagreements over {cases} generators (n=2, m in 3..5)"
    if bad:
        detail += f"; first {bad[0].instance}: {bad[0].message}"
    return not bad, detail


def _campaign_row(name, cases):
    bad = cp.run_property(name, SEED, cases)
    detail = f"{len(bad)} failures over {cases} cases"
    if bad:
        detail += f"; first case {bad[0].case} {bad[0].instance}: {bad[0].message}"
    return not bad, detail


def row_permutation_covariance():
    return _campaign_row("permutation-covariance", 200)


def row_sym2_independence(cases=300):
    bad = 0
    for case in range(cases):
        rng = cp.case_rng(SEED, 200, case)
        m = int(rng.integers(2, 7))
        x = cp.random_int_vector(rng, 2)
        alpha = float(rng.choice([-2, -1, 1, 2, 0.5]))
        mu1, mu2 = (float(rng.choice([-2, -1, 1, 3])) for _ in range(2))
        D = SymOuterDecomp(m, (Term(mu1, x), Term(mu2, alpha * x)))
        try:
            canonicalize_sym2(D)
            bad += 1
            continue
        except DependentGenerators:
            pass
        merged = merge_dependent(D)
        full = materialize(D).array
        if merged is None:
            bad += int(np.max(np.abs(full)) > 1e-9)
        else:
            bad += int(np.max(np.abs(materialize(merged).array - full)) > 1e-8)
        C = cp.random_canonical_sym2(rng, orders=(m,))
        src = SymOuterDecomp(m, (Term(mu1, C.x), Term(mu2, C.y)))
        back = canonicalize_sym2(src).materialize().array
        bad += int(np.max(np.abs(back - materialize(src).array)) > 1e-8)
    return bad == 0, f"{bad} violations over {cases} dependent/independent pairs"


def row_singleton_support(cases=500):
    bad, rays = 0, 0
    for case in range(cases):
        C = cp.random_canonical_sym2(cp.case_rng(SEED, 300, case))
        for s in solve_tcp_zero_n2(C.materialize()).solutions:
            rays += 1
            bad += int(len(s.support) != 1)
    return bad == 0, f"{rays} rays found, {bad} with more than one nonzero component"


def _parity_rows(parity, cases, check):
    orders = (3, 5) if parity == "odd" else (4, 6)
    bad, fired = [], 0
    for case in range(cases):
        rng = cp.case_rng(SEED, 400 if parity == "odd" else 500, case)
        C = cp.random_canonical_sym2(rng, orders=orders)
        res = check(C)
        fired += int(res[1])
        if not res[0]:
            bad.append(cp.canonical_to_dict(C))
    detail = f"form fired on {fired}/{cases}; {len(bad)} violations"
    return not bad, detail + (f"; first {bad[0]}" if bad else "")


def _structural(C):
    form = detect_not_r0_form(C)
    rays = solve_tcp_zero_n2(C.materialize())
    ok = rays.exhaustive and (form is not None) == bool(rays.solutions)
    ok = ok and all(len(s.support) == 1 for s in rays.solutions)
    return ok, form is not None


def _theorem(C):
    try:
        res = q_implies_r0_pipeline(C)
    except TheoremViolation:
        return False, True
    if res.form is None:
        return res.q.value is not Answer.YES or res.r0.value is Answer.YES, False
    return res.q.value is Answer.NO and res.r0.value is Answer.NO, True


def row_odd_forms():
    return _parity_rows("odd", 250, _structural)


def row_even_forms():
    return _parity_rows("even", 250, _structural)


def row_odd_theorem():
    return _parity_rows("odd", 250, _theorem)


def row_even_theorem():
    ok, detail = _parity_rows("even", 250, _theorem)
    # the positive-definite and negative-definite even forms
    pd = q_implies_r0_pipeline(canonical_from_vectors(4, "PLUS_PLUS", [1, 0], [0, 1]))
    nd = q_implies_r0_pipeline(canonical_from_vectors(4, "MINUS_MINUS", [1, 2], [2, -1]))
    extra = pd.q.value is Answer.YES and pd.r0.value is Answer.YES and nd.q.value is Answer.NO
    return ok and extra, detail + f"; definite forms ok: {extra}"


def row_minus_identity():
    A = load_fixture("minus_identity")
    v = _verdicts(A)
    q = np.array([-1.0, -1.0])
    certified = certify_no_solution(A, q)
    ok = (v["R0"].value is Answer.YES and v["Q"].value is Answer.NO
          and v["Q"].witness == {"q": q.tolist()} and certified)
    return ok, (f"R0={v['R0'].value.value}, Q={v['Q'].value.value} "
                f"with q={v['Q'].witness}; unsolvable certified: {certified}")


ROWS = {
    "rank-one-order3-Q": row_rank_one_order3,
    "rank-one-order4-Q": row_rank_one_order4,
    "q-but-not-R0": row_q_not_r0,
    "positive-generator": row_proposition,
    "rank-one-equivalence": row_rank_one_equivalence,
    "permutation-covariance-solutions": row_permutation_covariance,
    "sym2-independence": row_sym2_independence,
    "nonzero-singleton-support": row_singleton_support,
    "odd-not-R0-forms": row_odd_forms,
    "even-not-R0-forms": row_even_forms,
    "odd-Q-implies-R0": row_odd_theorem,
    "even-Q-implies-R0": row_even_theorem,
    "minus-identity-converse": row_minus_identity,
}


def run(only=None):
    names = list(ROWS) if only is None else [only]
    out = []
    for name in names:
        if name not in ROWS:
            raise KeyError(name)
        t0 = time.perf_counter()
        try:
            ok, detail = ROWS[name]()
        except Exception as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(Row(name, bool(ok), detail, time.perf_counter() - t0))
    return out


def format_table(rows):
    width = max(len(r.name) for r in rows)
    lines = [f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}" for r in rows]
    passed = sum(r.passed for r in rows)
    lines.append(f"{passed}/{len(rows)} rows passed")
    return "\n".join(lines)
