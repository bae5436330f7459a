"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line that
is printed in the terminal summary (and to stdout when run as a script)."""
import time

import numpy as np
import pytest

from conftest import CRITERIA
from oracles import grid_oracle
from tcq import campaign as cp
from tcq.classify import (
    Answer, TheoremViolation, classify, detect_not_r0_form, q_implies_r0_pipeline,
    rank_one_equivalence,
)
from tcq.io import load_fixture
from tcq.tcp_solver import solve_tcp_decomp_exact, solve_tcp_n2, solve_tcp_zero_n2
from tcq.tensor_core import (
    DenseTensor, Permutation, eval_poly_map, materialize, outer_rank_one, permute_decomp,
)

SEED = 7340
THETA_TOL = 1e-9          # criterion 3
MATCH_TOL = 1e-8          # criterion 5
ORACLE_MATCH_TOL = 1e-3   # criterion 9
FAST = 1.0                # seconds, criteria 1-3 and 8
CAMPAIGN_BUDGET = 60.0    # seconds, criterion 7
N_EQUIV, N_PERM, N_STRUCT, N_ORACLE = 500, 200, 500, 100

EX31 = {"111": 1, "112": -1, "121": -1, "122": 1, "222": 1, "211": 1, "212": -1, "221": -1}
EX32 = {"1111": 1, "2222": 1, "1112": -1, "2112": -1, "1121": 1, "2121": 1, "1211": -1,
        "2211": -1, "1122": -1, "2122": -1, "1222": 1, "2111": 1, "1212": 1, "2212": 1,
        "1221": -1, "2221": -1}


def report(number, title, ok, detail):
    line = f"CRITERION {number} {title}: {'PASS' if ok else 'FAIL'} - {detail}"
    CRITERIA.append(line)
    print(line)
    if not ok:
        pytest.fail(line, pytrace=False)


def entries(A, table):
    return {k: A[[int(c) - 1 for c in k]] for k in table}


def test_criterion_1_example_outer_order_three():
    t0 = time.perf_counter()
    A = outer_rank_one([np.array([-1, -1]), np.array([1, -1]), np.array([-1, 1])])
    exact = entries(A, EX31) == EX31 and A.array.size == 8
    rep = classify(A)
    q, pos = rep.get("Q"), rep.get("positive")
    dt = time.perf_counter() - t0
    ok = (exact and pos.value is Answer.NO and q.value is Answer.YES
          and q.method == "slice-criterion" and dt < FAST)
    report(1, "order-3 outer product", ok,
                  f"8 entries exact={exact}, positive={pos.value.value}, Q={q.value.value} "
                  f"({q.method}), {dt:.3f}s")


def test_criterion_2_example_outer_order_four():
    t0 = time.perf_counter()
    A = outer_rank_one([np.array(v) for v in ((1, 1), (1, -1), (-1, -1), (-1, 1))])
    exact = entries(A, EX32) == EX32 and len(EX32) == A.array.size == 16
    q = classify(A).get("Q")
    dt = time.perf_counter() - t0
    ok = exact and q.value is Answer.YES and q.method == "slice-criterion" and dt < FAST
    report(2, "order-4 outer product", ok,
                  f"16 entries exact={exact}, Q={q.value.value} ({q.method}), {dt:.3f}s")


def test_criterion_3_q_but_not_r0_example():
    t0 = time.perf_counter()
    A = load_fixture("q_not_r0")
    zero = bool(np.array_equal(eval_poly_map(A, np.array([1.0, 2.0])), [0.0, 0.0]))
    thetas = [float(s.u[0] / s.u.sum()) for s in solve_tcp_zero_n2(A).solutions]
    ray = any(abs(t - 1 / 3) <= THETA_TOL for t in thetas)
    rep = classify(A)
    q, r0 = rep.get("Q").value, rep.get("R0").value
    dt = time.perf_counter() - t0
    ok = zero and ray and q is Answer.YES and r0 is Answer.NO and dt < FAST
    report(3, "Q but not R0 example", ok,
                  f"A(1,2)^2=0 {zero}, ray thetas {thetas}, Q={q.value}, R0={r0.value}, {dt:.3f}s")


def test_criterion_4_rank_one_equivalence():
    disagreements = []
    for case in range(N_EQUIV):
        rng = cp.case_rng(SEED, 4, case)
        m = int(rng.choice([3, 4, 5]))
        w = cp.random_generator(rng, 2)
        rep = rank_one_equivalence(w, m)
        if not rep.agree:
            disagreements.append((w.tolist(), m, {k: v.value.value for k, v in rep.verdicts.items()}))
    odd_negative = sum(1 for w, m, _ in disagreements if m % 2 == 1 and all(x < 0 for x in w))
    detail = (f"{len(disagreements)} disagreements over {N_EQUIV} generators "
              f"({odd_negative} are odd-order negative generators)")
    if disagreements:
        detail += f"; first {disagreements[0]}"
    report(4, "rank-one four-way equivalence", not disagreements, detail)


def test_criterion_5_permutation_covariance():
    P = Permutation.swap()
    unmatched, total = [], 0
    for case in range(N_PERM):
        rng = cp.case_rng(SEED, 5, case)
        D = cp.random_decomp(rng)
        q = rng.integers(-3, 4, size=2).astype(float)
        out = solve_tcp_n2(D, q)
        outp = solve_tcp_n2(permute_decomp(D, P), P.apply(q))
        for s in out.solutions:
            total += 1
            if outp.distance(P.apply(s.u)) > MATCH_TOL:
                unmatched.append((case, s.u.tolist()))
    report(5, "permutation covariance", not unmatched and total > 0,
                  f"{total} solutions over {N_PERM} instances, {len(unmatched)} unmatched")


def _canonical_cases():
    return [cp.random_canonical_sym2(cp.case_rng(SEED, 6, case)) for case in range(N_STRUCT)]


def test_criterion_6_structural_forms():
    violations, fired, parities = [], 0, set()
    for C in _canonical_cases():
        parities.add(C.order % 2)
        form = detect_not_r0_form(C)
        rays = solve_tcp_zero_n2(C.materialize())
        fired += form is not None
        if (form is not None) != bool(rays.solutions) or not rays.exhaustive:
            violations.append(cp.canonical_to_dict(C))
        elif any(len(s.support) != 1 for s in rays.solutions):
            violations.append(cp.canonical_to_dict(C))
    ok = not violations and parities == {0, 1}
    report(6, "not-R0 forms match nonzero rays", ok,
                  f"form fired on {fired}/{N_STRUCT}, {len(violations)} violations")


def test_criterion_7_q_implies_r0():
    t0 = time.perf_counter()
    violations, certified = [], 0
    for C in _canonical_cases():
        try:
            res = q_implies_r0_pipeline(C)
        except TheoremViolation as exc:
            violations.append((cp.canonical_to_dict(C), str(exc)))
            continue
        if res.q.value is Answer.YES and res.r0.value is Answer.NO:
            violations.append((cp.canonical_to_dict(C), "Q=Yes with R0=No"))
        if res.form is None:
            continue
        witness = res.q.witness or {}
        if res.q.value is not Answer.NO or "q" not in witness:
            violations.append((cp.canonical_to_dict(C), f"uncertified {res.q.method}"))
            continue
        q = np.array(witness["q"])
        # certify twice: closed-form decomposed solver and the dense solver
        exact = solve_tcp_decomp_exact(C.decomposition(), q)
        dense = solve_tcp_n2(DenseTensor(materialize(C.decomposition()).array), q)
        if exact.has_solution or not exact.exhaustive or dense.has_solution:
            violations.append((cp.canonical_to_dict(C), f"q={q.tolist()} is solvable"))
        else:
            certified += 1
    dt = time.perf_counter() - t0
    ok = not violations and dt < CAMPAIGN_BUDGET
    report(7, "Q implies R0 via certified witnesses", ok,
                  f"{certified} witnesses certified, {len(violations)} violations, {dt:.2f}s")


def test_criterion_8_minus_identity():
    t0 = time.perf_counter()
    A = load_fixture("minus_identity")
    rep = classify(A)
    r0, q = rep.get("R0"), rep.get("Q")
    witness = np.array((q.witness or {}).get("q", [np.nan, np.nan]))
    out = solve_tcp_n2(A, np.array([-1.0, -1.0]))
    certified = out.exhaustive and not out.has_solution
    dt = time.perf_counter() - t0
    ok = (r0.value is Answer.YES and q.value is Answer.NO and witness.tolist() == [-1.0, -1.0]
          and certified and dt < FAST)
    report(8, "R0 does not imply Q", ok,
                  f"R0={r0.value.value}, Q={q.value.value}, q={witness.tolist()}, "
                  f"certified={certified}, {dt:.3f}s")


def test_criterion_9_grid_oracle():
    missed, hits = [], 0
    for case in range(N_ORACLE):
        rng = cp.case_rng(SEED, 9, case)
        m = int(rng.choice([3, 4]))
        A = cp.random_dense(rng, 2, m)
        q = rng.integers(-3, 4, size=2).astype(float)
        oracle_hits, _ = grid_oracle(A.array, q)
        out = solve_tcp_n2(A, q)
        for h in oracle_hits:
            hits += 1
            if out.distance(h) > ORACLE_MATCH_TOL:
                missed.append((case, A.entries.tolist(), q.tolist(), h.tolist()))
    report(9, "grid oracle agreement", not missed and hits > 0,
                  f"{hits} oracle solutions over {N_ORACLE} instances, {len(missed)} missed")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
