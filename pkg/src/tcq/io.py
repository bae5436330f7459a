"""JSON tensor documents.

Dense: ``{"kind": "dense", "order": m, "dim": n, "entries": [...]}`` with row-major
entries (first index slowest).  Decomposed: ``{"kind": "decomp", "order": m,
"dim": n, "terms": [{"mu": r, "w": [...]}, ...]}``.
"""
import json
from importlib import resources

import numpy as np

from .tensor_core import DenseTensor, SymOuterDecomp, Term


class TensorParseError(ValueError):
    pass


def tensor_from_dict(doc):
    if not isinstance(doc, dict):
        raise TensorParseError("tensor document must be a JSON object")
    try:
        kind = doc["kind"]
        order, dim = int(doc["order"]), int(doc["dim"])
        if kind == "dense":
            return DenseTensor.from_flat(order, dim, doc["entries"])
        if kind == "decomp":
            terms = tuple(Term(float(t["mu"]), np.asarray(t["w"], dtype=float))
                          for t in doc["terms"])
            D = SymOuterDecomp(order, terms)
            if D.dim != dim:
                raise TensorParseError(f"generators have length {D.dim}, document says dim {dim}")
            return D
    except TensorParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise TensorParseError(str(exc)) from exc
    raise TensorParseError(f"unknown tensor kind {kind!r}")


def tensor_to_dict(A):
    if isinstance(A, SymOuterDecomp):
        return {"kind": "decomp", "order": A.order, "dim": A.dim,
                "terms": [{"mu": t.mu, "w": t.w.tolist()} for t in A.terms]}
    return {"kind": "dense", "order": A.order, "dim": A.dim, "entries": A.entries.tolist()}


def load_tensor(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise TensorParseError(f"{path}: {exc}") from exc
    return tensor_from_dict(doc)


def parse_vector(text):
    try:
        v = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorParseError(f"cannot parse vector {text!r}: {exc}") from exc
    if not isinstance(v, list) or not all(isinstance(x, (int, float)) for x in v):
        raise TensorParseError(f"vector must be a JSON list of numbers, got {text!r}")
    return np.asarray(v, dtype=float)


def dumps(obj):
    """Stable JSON: sorted keys, no trailing whitespace."""
    return json.dumps(obj, sort_keys=True, allow_nan=False, default=_default)


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, float) and np.isinf(o):
        return None
    raise TypeError(f"{type(o).__name__} is not JSON serialisable")


FIXTURES = ("rank_one_order3", "rank_one_order4", "q_not_r0", "minus_identity")


def load_fixture(name):
    """One of the example tensors shipped with the package."""
    if name not in FIXTURES:
        raise KeyError(name)
    text = resources.files("tcq").joinpath("fixtures", f"{name}.json").read_text()
    return tensor_from_dict(json.loads(text))
