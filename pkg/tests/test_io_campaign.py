import json

import numpy as np
import pytest

from tcq import campaign as cp
from tcq.decomp import Sym2Form, check_linear_independence
from tcq.io import (
    FIXTURES, TensorParseError, dumps, load_fixture, parse_vector, tensor_from_dict, tensor_to_dict,
)
from tcq.reproduce import ROWS
from tcq.tensor_core import SymOuterDecomp, materialize


def test_fixtures_load_with_expected_shapes():
    shapes = {name: (load_fixture(name).order, load_fixture(name).dim) for name in FIXTURES}
    assert shapes == {"rank_one_order3": (3, 2), "rank_one_order4": (4, 2), "q_not_r0": (3, 2),
                      "minus_identity": (2, 2)}
    with pytest.raises(KeyError):
        load_fixture("nope")


def test_round_trip_documents():
    D = SymOuterDecomp.from_pairs(3, [(1.5, [1, 2]), (-1, [0, 1])])
    assert materialize(tensor_from_dict(tensor_to_dict(D))).allclose(materialize(D))
    A = materialize(D)
    assert tensor_from_dict(json.loads(dumps(tensor_to_dict(A)))) == A


def test_rejects_bad_documents():
    for doc in ([], {"kind": "dense"}, {"kind": "dense", "order": 2, "dim": 2, "entries": [1]},
                {"kind": "decomp", "order": 2, "dim": 3, "terms": [{"mu": 1, "w": [1, 0]}]},
                {"kind": "decomp", "order": 2, "dim": 2, "terms": [{"mu": 0, "w": [1, 0]}]}):
        with pytest.raises(TensorParseError):
            tensor_from_dict(doc)
    with pytest.raises(TensorParseError):
        parse_vector('["a"]')
    assert parse_vector("[-1, 3]").tolist() == [-1.0, 3.0]


def test_canonical_generator_covers_forms_and_parities():
    forms, parities = set(), set()
    for case in range(200):
        C = cp.random_canonical_sym2(cp.case_rng(1, 0, case))
        assert check_linear_independence(C.x, C.y)
        if C.order % 2:
            assert C.form is Sym2Form.PLUS_PLUS
        forms.add(C.form)
        parities.add(C.order % 2)
    assert forms == set(Sym2Form) and parities == {0, 1}


def test_case_streams_are_deterministic():
    a = [cp.random_generator(cp.case_rng(9, 3, k), 3).tolist() for k in range(20)]
    b = [cp.random_generator(cp.case_rng(9, 3, k), 3).tolist() for k in range(20)]
    assert a == b
    assert any(0.0 in w for w in a)


def test_reproduce_has_thirteen_rows():
    assert len(ROWS) == 13
    assert "q-but-not-R0" in ROWS and "minus-identity-converse" in ROWS
