"""Dense tensors, symmetric outer-product decompositions and the map u -> A u^(m-1).

Indices are 0-based throughout the Python API.  A tensor of order ``m`` and
dimension ``n`` is stored as an ``(n,)*m`` float array; its flat form is the
row-major ravel, so the first index varies slowest.
"""
from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple, Union

import numpy as np

from .config import get_tolerances


class DimensionMismatch(ValueError):
    pass


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _as_vector(u, n=None, name="vector"):
    u = np.asarray(u, dtype=float)
    if u.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {u.shape}")
    if n is not None and u.shape[0] != n:
        raise DimensionMismatch(f"{name} has length {u.shape[0]}, expected {n}")
    return u


@dataclass(frozen=True, eq=False)
class DenseTensor:
    """An order-m, dimension-n real tensor."""

    array: np.ndarray

    def __post_init__(self):
        a = np.array(self.array, dtype=float)
        if a.ndim < 2:
            raise ValueError(f"tensor order must be at least 2, got {a.ndim}")
        if len(set(a.shape)) != 1 or a.shape[0] < 1:
            raise ValueError(f"tensor must be cubical, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("tensor entries must be finite")
        object.__setattr__(self, "array", _frozen(a))

    @classmethod
    def from_flat(cls, order, dim, entries):
        entries = np.asarray(entries, dtype=float)
        if entries.size != dim ** order:
            raise ValueError(
                f"expected {dim ** order} entries for order {order}, dim {dim}; "
                f"got {entries.size}")
        return cls(entries.reshape((dim,) * order))

    @property
    def order(self):
        return self.array.ndim

    @property
    def dim(self):
        return self.array.shape[0]

    @property
    def entries(self):
        """Flat row-major entries."""
        return self.array.ravel()

    def __getitem__(self, index):
        return float(self.array[tuple(index)])

    def __neg__(self):
        return DenseTensor(-self.array)

    def __eq__(self, other):
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self.array.shape == other.array.shape and bool(
            np.array_equal(self.array, other.array))

    def allclose(self, other, atol=None):
        atol = get_tolerances().atol if atol is None else atol
        return self.array.shape == other.array.shape and bool(
            np.allclose(self.array, other.array, atol=atol, rtol=0))

    def __repr__(self):
        return f"DenseTensor(order={self.order}, dim={self.dim})"


class Term(NamedTuple):
    mu: float
    w: np.ndarray


@dataclass(frozen=True, eq=False)
class SymOuterDecomp:
    """The symmetric tensor ``sum_j mu_j [w_j]^(x)m``."""

    order: int
    terms: tuple

    def __post_init__(self):
        if self.order < 2:
            raise ValueError(f"order must be at least 2, got {self.order}")
        if not self.terms:
            raise ValueError("a decomposition needs at least one term")
        terms = []
        for mu, w in self.terms:
            mu = float(mu)
            w = _frozen(_as_vector(w, name="generator"))
            if mu == 0 or not np.isfinite(mu):
                raise ValueError(f"coefficient must be finite and nonzero, got {mu}")
            if not np.any(w) or not np.all(np.isfinite(w)):
                raise ValueError("generators must be finite nonzero vectors")
            terms.append(Term(mu, w))
        dims = {t.w.shape[0] for t in terms}
        if len(dims) != 1:
            raise DimensionMismatch(f"generators have differing lengths {sorted(dims)}")
        object.__setattr__(self, "terms", tuple(terms))

    @classmethod
    def from_pairs(cls, order, pairs):
        return cls(order, tuple(Term(mu, w) for mu, w in pairs))

    @property
    def dim(self):
        return self.terms[0].w.shape[0]

    @property
    def mus(self):
        return np.array([t.mu for t in self.terms])

    @property
    def generators(self):
        """Generators stacked as rows, shape (k, n)."""
        return np.array([t.w for t in self.terms])

    def __repr__(self):
        body = ", ".join(f"({t.mu:g}, {t.w.tolist()})" for t in self.terms)
        return f"SymOuterDecomp(order={self.order}, terms=[{body}])"


Tensor = Union[DenseTensor, SymOuterDecomp]


@dataclass(frozen=True)
class Permutation:
    """Permutation P with P e_i = e_{map[i]}."""

    map: tuple

    def __post_init__(self):
        m = tuple(int(i) for i in self.map)
        if sorted(m) != list(range(len(m))):
            raise ValueError(f"{self.map} is not a permutation of 0..{len(m) - 1}")
        object.__setattr__(self, "map", m)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    @classmethod
    def swap(cls, n=2, i=0, j=1):
        m = list(range(n))
        m[i], m[j] = m[j], m[i]
        return cls(tuple(m))

    @property
    def dim(self):
        return len(self.map)

    def matrix(self):
        P = np.zeros((self.dim, self.dim))
        P[list(self.map), list(range(self.dim))] = 1.0
        return P

    def inverse(self):
        return Permutation(tuple(int(i) for i in np.argsort(self.map)))

    def apply(self, v):
        v = _as_vector(v, self.dim)
        out = np.empty_like(v)
        out[list(self.map)] = v
        return out


def eval_poly_map(A, u):
    """Return the vector ``A u^(m-1)``.

    For a decomposition this is ``sum_j mu_j w_j (w_j . u)^(m-1)`` and never
    materializes the dense tensor.
    """
    u = _as_vector(u, A.dim, "u")
    if isinstance(A, SymOuterDecomp):
        W = A.generators
        return (A.mus * (W @ u) ** (A.order - 1)) @ W
    out = A.array
    for _ in range(A.order - 1):
        out = out @ u
    return np.asarray(out, dtype=float)


def poly_map_jacobian(A, u):
    """Jacobian of ``u -> A u^(m-1)`` at ``u``."""
    u = _as_vector(u, A.dim, "u")
    m = A.order
    if isinstance(A, SymOuterDecomp):
        W = A.generators
        scale = A.mus * (m - 1) * (W @ u) ** (m - 2)
        return (W.T * scale) @ W
    J = np.zeros((A.dim, A.dim))
    for p in range(1, m):
        M = np.moveaxis(A.array, p, 1)
        for _ in range(m - 2):
            M = M @ u
        J += M
    return J


def outer_rank_one(xs):
    """Return ``x1 (x) x2 (x) ... (x) xm`` for nonzero vectors of equal length."""
    xs = [_as_vector(x) for x in xs]
    if len(xs) < 2:
        raise ValueError("need at least two factors")
    if len({x.shape[0] for x in xs}) != 1:
        raise DimensionMismatch("factors must all have the same length")
    if any(not np.any(x) for x in xs):
        raise ValueError("factors must be nonzero vectors")
    return DenseTensor(reduce(np.multiply.outer, xs))


def sym_rank_one(w, m):
    """Return the rank-one symmetric tensor ``[w]^(x)m``."""
    w = _as_vector(w, name="generator")
    if not np.any(w):
        raise ValueError("generator must be a nonzero vector")
    return outer_rank_one([w] * m)


def materialize(D):
    total = np.zeros((D.dim,) * D.order)
    for mu, w in D.terms:
        total += mu * reduce(np.multiply.outer, [w] * D.order)
    return DenseTensor(total)


def as_dense(A):
    return materialize(A) if isinstance(A, SymOuterDecomp) else A


def permute_decomp(D, P):
    """Replace every generator ``w`` by ``P w``."""
    if P.dim != D.dim:
        raise DimensionMismatch(f"permutation acts on {P.dim} coordinates, tensor has {D.dim}")
    return SymOuterDecomp(D.order, tuple(Term(mu, P.apply(w)) for mu, w in D.terms))


def permute_tensor(A, P):
    """Relabel all indices of a dense tensor simultaneously by ``P``."""
    if isinstance(A, SymOuterDecomp):
        return permute_decomp(A, P)
    if P.dim != A.dim:
        raise DimensionMismatch(f"permutation acts on {P.dim} coordinates, tensor has {A.dim}")
    inv = list(P.inverse().map)
    return DenseTensor(A.array[np.ix_(*[inv] * A.order)])


def symmetry_defect(A):
    """Max |a_I - a_sort(I)| over all multi-indices I."""
    a = A.array
    idx = np.indices(a.shape).reshape(a.ndim, -1)
    canon = np.ravel_multi_index(np.sort(idx, axis=0), a.shape)
    flat = a.ravel()
    return float(np.max(np.abs(flat - flat[canon])))


def is_symmetric(A, tol=None):
    if isinstance(A, SymOuterDecomp):
        return True
    t = get_tolerances()
    scale = float(np.max(np.abs(A.array)))
    limit = (t.atol + t.rtol * scale) if tol is None else tol
    return symmetry_defect(A) <= limit


def principal_subtensor(A, keep):
    """Restrict every index of ``A`` to ``keep`` (relabelled in increasing order)."""
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise ValueError("keep must be a nonempty index set")
    if keep[0] < 0 or keep[-1] >= A.dim:
        raise IndexError(f"indices {keep} out of range for dimension {A.dim}")
    return DenseTensor(A.array[np.ix_(*[keep] * A.order)])


def diagonal(A):
    """The diagonal entries ``a_{i...i}``."""
    if isinstance(A, SymOuterDecomp):
        return A.mus @ A.generators ** A.order
    n = A.dim
    return np.array([A.array[(i,) * A.order] for i in range(n)])

