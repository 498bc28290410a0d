import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seedsmith.textkernel import IMPLEMENTATION, _pykernel

try:
    from seedsmith.textkernel import _ckernel
except ImportError:
    _ckernel = None

IMPLS = [_pykernel] + ([_ckernel] if _ckernel else [])


@pytest.fixture(params=IMPLS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def kernel(request):
    return request.param


def test_token_counts_basic(kernel):
    assert kernel.token_counts("The cat, the CAT!") == {"the": 2, "cat": 2}


def test_token_counts_drops_short_and_stopwords(kernel):
    counts = kernel.token_counts("a cat on the mat", frozenset({"the", "on"}))
    assert counts == {"cat": 1, "mat": 1}


def test_token_counts_splits_on_underscore_and_punctuation(kernel):
    assert kernel.token_counts("snake_case-kebab") == {"snake": 1, "case": 1, "kebab": 1}


def test_token_counts_unicode(kernel):
    assert kernel.token_counts("Čaj čaj ČAJ") == {"čaj": 3}


def test_token_counts_digits(kernel):
    assert kernel.token_counts("win 2018 draw 2018") == {"win": 1, "2018": 2, "draw": 1}


def test_merge_counts(kernel):
    dst = {"cat": 1}
    out = kernel.merge_counts(dst, {"cat": 2, "dog": 1})
    assert out is dst
    assert dst == {"cat": 3, "dog": 1}


def test_sparse_cosine_identical(kernel):
    v = {"a": 0.2, "b": 0.8}
    assert kernel.sparse_cosine(v, v) == pytest.approx(1.0, abs=1e-12)


def test_sparse_cosine_disjoint_and_empty(kernel):
    assert kernel.sparse_cosine({"a": 1.0}, {"b": 1.0}) == 0.0
    assert kernel.sparse_cosine({}, {"b": 1.0}) == 0.0
    assert kernel.sparse_cosine({}, {}) == 0.0


def test_sparse_cosine_hand_value(kernel):
    got = kernel.sparse_cosine({"a": 0.5, "b": 0.5}, {"a": 1.0})
    assert got == pytest.approx(1 / math.sqrt(2), abs=1e-12)


@pytest.mark.skipif(_ckernel is None, reason="compiled kernel not built")
class TestImplementationParity:
    @given(st.text(max_size=400))
    @settings(max_examples=300, deadline=None)
    def test_token_counts_parity(self, text):
        stop = frozenset({"the", "of", "και"})
        assert _pykernel.token_counts(text, stop) == _ckernel.token_counts(text, stop)

    @given(
        st.dictionaries(st.text(min_size=1, max_size=6), st.floats(0.001, 10.0), max_size=30),
        st.dictionaries(st.text(min_size=1, max_size=6), st.floats(0.001, 10.0), max_size=30),
    )
    @settings(max_examples=200, deadline=None)
    def test_cosine_parity(self, a, b):
        assert _pykernel.sparse_cosine(a, b) == pytest.approx(
            _ckernel.sparse_cosine(a, b), abs=1e-12
        )


def test_selected_implementation_is_reported():
    assert IMPLEMENTATION in ("c", "python")
