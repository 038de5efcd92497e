import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cc4 import serialize
from cc4.nonzero_multiplier import solve_nonzero
from cc4.zero_multiplier import solve_zero

finite = st.floats(allow_nan=False, allow_infinity=False)
documents = st.recursive(
    st.none() | st.booleans() | st.integers(-10**6, 10**6) | finite | st.text(max_size=8),
    lambda inner: st.lists(inner, max_size=4) | st.dictionaries(st.text(max_size=5), inner, max_size=4),
    max_leaves=20,
)


@given(finite)
def test_float_round_trip(x):
    text = serialize.format_float(x)
    back = json.loads(text)
    assert isinstance(back, float)
    assert back == x and math.copysign(1, back) == math.copysign(1, x)


@given(documents)
def test_document_round_trip(doc):
    assert serialize.loads(serialize.dumps(doc)) == doc


def test_seventeen_significant_digits():
    assert serialize.format_float(0.1) == "0.10000000000000001"
    assert serialize.format_float(2.0) == "2.0"
    assert serialize.format_float(1 / 3) == "0.33333333333333331"
    assert serialize.format_float(1e-300) == "1e-300"


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_rejected(bad):
    with pytest.raises(ValueError):
        serialize.dumps({"a": bad})


def test_numpy_scalars():
    doc = {"a": np.float64(1.5), "b": np.int64(3), "c": np.bool_(True), "d": np.array([1.0, 2.0])}
    assert serialize.loads(serialize.dumps(doc)) == {"a": 1.5, "b": 3, "c": True, "d": [1.0, 2.0]}


def test_solver_documents_round_trip_exactly():
    for sol in (solve_zero(1.0, 2.0),) + solve_nonzero(1.0, 2.0):
        doc = sol.to_dict()
        text = serialize.dumps(doc)
        assert serialize.loads(text) == json.loads(json.dumps(doc))
        assert serialize.dumps(serialize.loads(text)) == text


def test_csv_layout():
    text = serialize.csv_text(("a", "b", "c"), [(1.0, "x", 2), (0.1, "", 3)])
    assert text == "a,b,c\n1.0,x,2\n0.10000000000000001,,3\n"
