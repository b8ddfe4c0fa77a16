"""
Unit tests for documents, combinators and the answer codecs
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.errors import EmptyReduce, InvalidSplit, OutOfBounds, ParseFailure
from app.runtime import (
    Document,
    concat_op,
    cross_op,
    filter_op,
    keywords,
    map_op,
    peek,
    reduce_op,
    split,
    split_delta,
)
from app.runtime.combinators import preview, relevant
from app.runtime.compose import (
    combine,
    merge_counts,
    parse_counts,
    parse_label_line,
    parse_labels,
    render_counts,
)
from app.schema import TaskType


def _doc(n: int) -> Document:
    return Document.of(f"t{i}" for i in range(n))


def test_split_takes_ceiling_sized_chunks():
    """The first chunks hold ⌈n/k⌉ tokens, the last the remainder"""
    parts = split(_doc(7), 3)
    assert [len(p) for p in parts] == [3, 3, 1]
    assert concat_op(parts) == _doc(7)


def test_split_pads_with_empty_chunks():
    """(k−1)·⌈n/k⌉ ≥ n leaves trailing chunks empty"""
    assert [len(p) for p in split(_doc(4), 3)] == [2, 2, 0]
    assert [len(p) for p in split(_doc(0), 2)] == [0, 0]


def test_split_rejects_zero_chunks():
    with pytest.raises(InvalidSplit):
        split(_doc(5), 0)


@given(st.integers(0, 300), st.integers(1, 40))
def test_split_is_an_exact_partition(n, k):
    """Exactly k chunks, order-preserving, no chunk above ⌈n/k⌉"""
    parts = split(_doc(n), k)
    assert len(parts) == k
    assert concat_op(parts) == _doc(n)
    assert max(len(p) for p in parts) <= -(-n // k)


def test_peek_bounds():
    doc = _doc(5)
    assert peek(doc, 1, 3).tokens == ("t1", "t2")
    assert peek(doc, 5, 5).tokens == ()
    with pytest.raises(OutOfBounds):
        peek(doc, 3, 2)
    with pytest.raises(OutOfBounds):
        peek(doc, 0, 6)


def test_preview_clamps_to_document():
    assert preview(_doc(3), 10) == _doc(3)
    assert len(preview(_doc(30), 10)) == 10


def test_split_delta_keeps_delimiters():
    doc = Document.from_text("<doc> a b <doc> c")
    assert [p.tokens for p in split_delta(doc)] == [("<doc>", "a", "b"), ("<doc>", "c")]


def test_split_delta_keeps_leading_text():
    doc = Document.from_text("x <doc> y")
    assert [p.tokens for p in split_delta(doc)] == [("x",), ("<doc>", "y")]
    assert split_delta(Document()) == []


def test_reduce_folds_left_in_order():
    assert reduce_op(lambda a, b: a + b, ["a", "b", "c"]) == "abc"
    with pytest.raises(EmptyReduce):
        reduce_op(lambda a, b: a + b, [])


def test_map_filter_cross():
    assert map_op(len, ["ab", "c"]) == [2, 1]
    assert filter_op(lambda x: x > 1, [1, 2, 3]) == [2, 3]
    assert cross_op([1, 2], ["a"]) == [(1, "a"), (2, "a")]


def test_keywords_keep_identifier_parts():
    doc = Document.from_text("lorem key-0042=123456 cat:loc")
    assert keywords(doc) == {"key-0042", "123456"}


def test_relevant_matches_shared_keywords():
    is_relevant = relevant({"key-0042"})
    assert is_relevant(Document.from_text("x key-0042=1"))
    assert not is_relevant(Document.from_text("x key-0043=1"))


def test_char_tokenizer_keeps_length_additive():
    doc = Document.from_text("abc", tokenizer="char")
    assert doc.tokens == ("a", "b", "c")
    assert doc.text == "abc"
    assert concat_op(split(doc, 2)).text == "abc"


def test_counts_codec():
    assert parse_counts("loc=2 num=1 junk loc=3") == {"loc": 5, "num": 1}
    assert render_counts({"num": 1, "loc": 2}) == "loc=2 num=1"
    assert merge_counts({"a": 1}, {"a": 2, "b": 1}) == {"a": 3, "b": 1}


def test_label_records_drop_malformed_lines():
    records, errors = parse_labels("1\tred\nnot a record\n2\tblue\n")
    assert records == [(1, "red"), (2, "blue")]
    assert errors == 1
    with pytest.raises(ParseFailure):
        parse_label_line("x\tred")


def test_symbolic_composition_per_task():
    assert combine(TaskType.SEARCH, [None, "42", "7"]) == "42"
    assert combine(TaskType.SEARCH, [None, None]) is None
    assert combine(TaskType.AGGREGATE, [{"a": 1}, {}, {"a": 2}]) == {"a": 3}
    assert combine(TaskType.CLASSIFY, [[(1, "red")], [(2, "blue")]]) == [(1, "red"), (2, "blue")]
    assert combine(TaskType.AGGREGATE, []) == {}
