"""Tensor complementarity problems on small dense tensors."""
from .classify import (
    Answer, NotR0Case, NotR0Form, Verdict, classify, detect_not_r0_form, is_nonnegative,
    is_positive, is_s_tensor_n2, q_by_nonnegativity, q_by_slice_criterion,
    q_implies_r0_pipeline, rank_one_equivalence,
)
from .decomp import (
    CanonicalSym2, NotRankOneSymmetric, Sym2Form, canonicalize_sym2, check_generator_proposition,
    check_linear_independence, extract_generator, is_unisigned,
)
from .tcp_solver import (
    SolveOutcome, TcpSolution, find_q_without_solution, solve_tcp_decomp_exact, solve_tcp_n2,
    solve_tcp_zero_n2, verify_solution,
)
from .tensor_core import (
    DenseTensor, Permutation, SymOuterDecomp, Term, diagonal, eval_poly_map, is_symmetric,
    materialize, outer_rank_one, permute_decomp, principal_subtensor, sym_rank_one,
)

__version__ = "0.1.0"
