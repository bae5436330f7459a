"""Rank-one symmetric recognition and canonical two-term decompositions."""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import get_tolerances
from .roots import real_root
from .tensor_core import SymOuterDecomp, Term, as_dense, materialize, sym_rank_one


class NotRankOneSymmetric(ValueError):
    """The tensor is not of the form [w]^(x)m for a nonzero w."""


class DependentGenerators(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GeneratorResult:
    w: np.ndarray
    # for even order, -w generates the same tensor
    sign_ambiguous: bool


class Sym2Form(str, Enum):
    PLUS_PLUS = "PLUS_PLUS"
    PLUS_MINUS = "PLUS_MINUS"
    MINUS_MINUS = "MINUS_MINUS"


_FORM_SIGNS = {
    Sym2Form.PLUS_PLUS: (1.0, 1.0),
    Sym2Form.PLUS_MINUS: (1.0, -1.0),
    Sym2Form.MINUS_MINUS: (-1.0, -1.0),
}


@dataclass(frozen=True, eq=False)
class CanonicalSym2:
    """``s1 x^(x)m + s2 y^(x)m`` with the signs fixed by ``form``."""

    order: int
    form: Sym2Form
    x: np.ndarray
    y: np.ndarray

    @property
    def signs(self):
        return _FORM_SIGNS[self.form]

    @property
    def matrix(self):
        """The generator matrix ``[x y]`` (generators as columns)."""
        return np.column_stack([self.x, self.y])

    def decomposition(self):
        s1, s2 = self.signs
        return SymOuterDecomp(self.order, (Term(s1, self.x), Term(s2, self.y)))

    def materialize(self):
        return materialize(self.decomposition())


def extract_generator(A, tol=None):
    """Recover ``w`` with ``A == [w]^(x)m``.

    The pivot is the diagonal entry of largest magnitude.  For even order the
    returned generator has its first nonzero component positive.  Raises
    :class:`NotRankOneSymmetric` when no such ``w`` exists.
    """
    A = as_dense(A)
    m = A.order
    diag = np.array([A.array[(i,) * m] for i in range(A.dim)])
    p = int(np.argmax(np.abs(diag)))
    a = diag[p]
    if a == 0:
        raise NotRankOneSymmetric("all diagonal entries vanish")
    if m % 2 == 0 and a < 0:
        raise NotRankOneSymmetric("even order with a negative diagonal pivot")
    wp = real_root(a, m)
    column = np.array([A.array[(i,) + (p,) * (m - 1)] for i in range(A.dim)])
    w = column / wp ** (m - 1)
    w[p] = wp
    if m % 2 == 0:
        first = w[np.nonzero(w)[0][0]]
        if first < 0:
            w = -w
    t = get_tolerances()
    scale = float(np.max(np.abs(A.array)))
    limit = (t.atol + t.rtol * scale) if tol is None else tol
    if np.max(np.abs(sym_rank_one(w, m).array - A.array)) > limit:
        raise NotRankOneSymmetric("reconstruction from the pivot fiber does not match")
    return GeneratorResult(w=w, sign_ambiguous=(m % 2 == 0))


def is_unisigned(w):
    w = np.asarray(w, dtype=float)
    return bool(np.all(w > 0) or np.all(w < 0))


@dataclass(frozen=True)
class GeneratorPropositionReport:
    a_positive: bool
    neg_a_positive: bool
    unisigned: bool

    @property
    def holds(self):
        forward = (not self.a_positive) or self.unisigned
        backward = (not self.unisigned) or self.a_positive or self.neg_a_positive
        return forward and backward


def check_generator_proposition(w, m):
    """Check positivity of ``[w]^(x)m`` against unisignedness of ``w``."""
    A = sym_rank_one(w, m)
    return GeneratorPropositionReport(
        a_positive=bool(np.all(A.array > 0)),
        neg_a_positive=bool(np.all(A.array < 0)),
        unisigned=is_unisigned(w),
    )


def check_linear_independence(x, y, rel=None):
    """True iff the columns of ``[x y]`` have full rank two."""
    rel = get_tolerances().independence if rel is None else rel
    M = np.column_stack([np.asarray(x, float), np.asarray(y, float)])
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return False
    return bool(s[-1] > rel * s[0])


def merge_dependent(D):
    """Collapse ``mu1 x^m + mu2 (alpha x)^m`` into ``(mu1 + mu2 alpha^m) x^m``.

    Returns ``None`` when the merged coefficient vanishes (zero tensor).
    """
    if len(D.terms) != 2:
        raise ValueError("expected a two-term decomposition")
    (mu1, x), (mu2, y) = D.terms
    if check_linear_independence(x, y):
        raise ValueError("generators are linearly independent")
    alpha = float(x @ y) / float(x @ x)
    beta = mu1 + mu2 * alpha ** D.order
    if abs(beta) <= get_tolerances().atol:
        return None
    return SymOuterDecomp(D.order, (Term(beta, x),))


def canonicalize_sym2(D):
    """Absorb coefficient magnitudes (and for odd order, signs) into the generators."""
    if not isinstance(D, SymOuterDecomp) or len(D.terms) != 2:
        raise ValueError("canonicalize_sym2 needs a two-term decomposition")
    (mu1, w1), (mu2, w2) = D.terms
    if not check_linear_independence(w1, w2):
        raise DependentGenerators("generators are linearly dependent")
    m = D.order
    if m % 2 == 1:
        return CanonicalSym2(m, Sym2Form.PLUS_PLUS,
                             real_root(mu1, m) * w1, real_root(mu2, m) * w2)
    x = real_root(abs(mu1), m) * w1
    y = real_root(abs(mu2), m) * w2
    if mu1 > 0 and mu2 > 0:
        return CanonicalSym2(m, Sym2Form.PLUS_PLUS, x, y)
    if mu1 < 0 and mu2 < 0:
        return CanonicalSym2(m, Sym2Form.MINUS_MINUS, x, y)
    if mu1 < 0:
        x, y = y, x
    return CanonicalSym2(m, Sym2Form.PLUS_MINUS, x, y)


def canonical_from_vectors(order, form, x, y):
    """Build a canonical form directly; checks independence and parity."""
    form = Sym2Form(form)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not check_linear_independence(x, y):
        raise DependentGenerators("generators are linearly dependent")
    if order % 2 == 1 and form is not Sym2Form.PLUS_PLUS:
        raise ValueError("odd order canonical forms are always PLUS_PLUS")
    return CanonicalSym2(order, form, x, y)

