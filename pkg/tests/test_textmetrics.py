import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocrkit.errors import EmptyCorpus, EmptyReference
from ocrkit.textmetrics import (
    DEFAULT_POLICY,
    MAX_FULL_MATRIX_UNITS,
    Alignment,
    EditOp,
    NormalizationPolicy,
    _align_linear,
    _align_matrix,
    _distance_py,
    _np_final_row,
    _to_ids,
    align,
    cer,
    corpus_cer,
    edit_distance,
    normalize,
    replay,
)

from oracles import distance_exponential, distance_memo


# -- normalization -----------------------------------------------------


def test_normalize_defaults_code_points():
    assert normalize("abc") == ["a", "b", "c"]


def test_normalize_nfc_composes():
    assert normalize("á") == ["á"]


def test_normalize_form_none_keeps_decomposed():
    policy = NormalizationPolicy(unicode_form="none")
    assert normalize("á", policy) == ["a", "́"]


def test_normalize_collapse_runs():
    policy = NormalizationPolicy(whitespace="collapse_runs")
    assert normalize("a \t\n b", policy) == ["a", " ", "b"]


def test_normalize_whitespace_preserved_by_default():
    assert normalize("a  b") == ["a", " ", " ", "b"]


def test_normalize_grapheme_clusters():
    # x + combining acute has no precomposed form, so NFC keeps 2 points
    policy = NormalizationPolicy(unit="grapheme_cluster")
    assert normalize("x́y", policy) == ["x́", "y"]
    assert len(normalize("x́y")) == 3


def test_policy_validation():
    with pytest.raises(ValueError):
        NormalizationPolicy(unicode_form="nfd")
    with pytest.raises(ValueError):
        NormalizationPolicy(unit="word")
    with pytest.raises(ValueError):
        NormalizationPolicy(whitespace="strip")


# -- edit ops ----------------------------------------------------------


def test_edit_op_invariants():
    EditOp("match", "a", "a", 0)
    EditOp("substitute", "a", "b", 0)
    EditOp("insert", None, "b", 0)
    EditOp("delete", "a", None, 0)
    with pytest.raises(ValueError):
        EditOp("match", "a", "b", 0)
    with pytest.raises(ValueError):
        EditOp("substitute", "a", "a", 0)
    with pytest.raises(ValueError):
        EditOp("insert", "a", "b", 0)
    with pytest.raises(ValueError):
        EditOp("delete", "a", "b", 0)
    with pytest.raises(ValueError):
        EditOp("transpose", "a", "b", 0)


# -- distance ----------------------------------------------------------


def test_distance_examples():
    assert edit_distance(list("abc"), list("abc")) == 0
    assert edit_distance([], list("ab")) == 2
    assert edit_distance(list("kitten"), list("sitting")) == 3


def test_distance_exhaustive_small_vs_memo_oracle():
    alphabet = "abc "
    strings = [""]
    for n in (1, 2, 3):
        strings += ["".join(p) for p in itertools.product(alphabet, repeat=n)]
    for a in strings:
        for b in strings:
            assert edit_distance(list(a), list(b)) == distance_memo(a, b), (a, b)


def test_distance_vs_exponential_oracle():
    alphabet = "abc "
    strings = [""]
    for n in (1, 2):
        strings += ["".join(p) for p in itertools.product(alphabet, repeat=n)]
    for a in strings:
        for b in strings:
            assert edit_distance(list(a), list(b)) == distance_exponential(a, b)
    rng = random.Random(11)
    for _ in range(100):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 4)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 4)))
        assert edit_distance(list(a), list(b)) == distance_exponential(a, b)


def test_distance_random_len12_vs_memo_oracle():
    rng = random.Random(5)
    alphabet = "abc "
    for _ in range(300):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        assert edit_distance(list(a), list(b)) == distance_memo(a, b), (a, b)


def test_python_and_numpy_rows_agree():
    rng = random.Random(19)
    alphabet = "abcde"
    for _ in range(50):
        a = [rng.choice(alphabet) for _ in range(rng.randint(1, 60))]
        b = [rng.choice(alphabet) for _ in range(rng.randint(1, 60))]
        ra, rb = _to_ids((a, b))
        assert _distance_py(a, b) == int(_np_final_row(ra, rb)[-1])


@given(
    st.text(alphabet="abc ", max_size=12),
    st.text(alphabet="abc ", max_size=12),
)
@settings(max_examples=150, deadline=None)
def test_distance_symmetry(a, b):
    assert edit_distance(list(a), list(b)) == edit_distance(list(b), list(a))


@given(st.text(alphabet="abc ", max_size=12))
@settings(max_examples=60, deadline=None)
def test_distance_identity(a):
    assert edit_distance(list(a), list(a)) == 0


@given(
    st.text(alphabet="ab ", max_size=8),
    st.text(alphabet="ab ", max_size=8),
    st.text(alphabet="ab ", max_size=8),
)
@settings(max_examples=150, deadline=None)
def test_distance_triangle_inequality(x, y, z):
    assert edit_distance(list(x), list(z)) <= (
        edit_distance(list(x), list(y)) + edit_distance(list(y), list(z))
    )


# -- alignment ---------------------------------------------------------


def _kinds(alignment: Alignment):
    return [(op.kind, op.ref_char, op.hyp_char, op.ref_index) for op in alignment.ops]


def test_align_identity():
    a = align(list("ab"), list("ab"))
    assert a.distance == 0
    assert _kinds(a) == [("match", "a", "a", 0), ("match", "b", "b", 1)]


def test_align_substitution():
    a = align(list("abc"), list("adc"))
    assert a.distance == 1
    assert _kinds(a) == [
        ("match", "a", "a", 0),
        ("substitute", "b", "d", 1),
        ("match", "c", "c", 2),
    ]


def test_align_tie_break_prefers_trailing_match():
    a = align(list("ab"), list("b"))
    assert _kinds(a) == [("delete", "a", None, 0), ("match", "b", "b", 1)]


def test_align_insert_gap_indices():
    a = align(list("abc"), list("xabc"))
    assert _kinds(a)[0] == ("insert", None, "x", 0)
    a = align(list("abc"), list("abcx"))
    assert _kinds(a)[-1] == ("insert", None, "x", 3)


def test_alignment_soundness_random():
    rng = random.Random(7)
    alphabet = "abcd "
    for _ in range(200):
        ref = [rng.choice(alphabet) for _ in range(rng.randint(0, 20))]
        hyp = [rng.choice(alphabet) for _ in range(rng.randint(0, 20))]
        a = align(ref, hyp)
        assert replay(a, ref) == hyp
        assert a.distance == sum(1 for op in a.ops if op.kind != "match")
        assert a.distance == edit_distance(ref, hyp)


def test_linear_path_matches_full_matrix_on_1000_pairs():
    rng = random.Random(23)
    alphabet = "abc"
    for _ in range(1000):
        ref = [rng.choice(alphabet) for _ in range(rng.randint(1, 30))]
        hyp = [rng.choice(alphabet) for _ in range(rng.randint(1, 30))]
        linear_ops = _align_linear(ref, hyp)
        full_ops = _align_matrix(ref, hyp)
        d_linear = sum(1 for op in linear_ops if op.kind != "match")
        d_full = sum(1 for op in full_ops if op.kind != "match")
        assert d_linear == d_full
        assert replay(Alignment(tuple(linear_ops), d_linear), ref) == hyp


def test_align_dispatches_linear_for_long_inputs():
    rng = random.Random(3)
    n = MAX_FULL_MATRIX_UNITS + 500
    ref = [rng.choice("abcdef") for _ in range(n)]
    hyp = list(ref)
    for _ in range(200):
        k = rng.randrange(len(hyp))
        hyp[k] = rng.choice("abcdef")
    a = align(ref, hyp)
    assert replay(a, ref) == hyp
    assert a.distance == edit_distance(ref, hyp)


# -- cer ---------------------------------------------------------------


def test_cer_examples():
    assert cer("abcd", "abcd").cer == 0.0
    r = cer("abcd", "abed")
    assert r.distance == 1 and r.cer == 25.0
    r = cer("ab", "abcdef")
    assert r.distance == 4 and r.cer == 200.0


def test_cer_counts():
    r = cer("abcd", "abed")
    assert r.counts == {"match": 3, "substitute": 1, "insert": 0, "delete": 0}


def test_cer_empty_reference():
    with pytest.raises(EmptyReference):
        cer("", "abc")
    # collapse_runs squeezes runs to one space; it never empties text
    r = cer("   ", " ", NormalizationPolicy(whitespace="collapse_runs"))
    assert r.ref_len == 1 and r.cer == 0.0


def test_corpus_cer_single_pair():
    r = corpus_cer([("abcd", "abed")])
    assert r.micro_cer == r.macro_cer == 25.0


def test_corpus_cer_micro_macro():
    r = corpus_cer([("aaaa", "aaaa"), ("ab", "bb")])
    assert [rep.cer for _, rep in r.per_article] == [0.0, 50.0]
    assert r.macro_cer == 25.0
    assert r.micro_cer == pytest.approx(100.0 / 6.0)


def test_corpus_cer_empty():
    with pytest.raises(EmptyCorpus):
        corpus_cer([])


def test_corpus_cer_propagates_empty_reference_with_id():
    with pytest.raises(EmptyReference) as exc:
        corpus_cer([("ab", "ab"), ("", "x")], ids=["one", "two"])
    assert "two" in str(exc.value)


def test_corpus_duplication_keeps_micro_cer():
    ref, hyp = "abcabc", "axcabb"
    single = cer(ref, hyp).cer
    for k in (2, 3):
        assert corpus_cer([(ref, hyp)] * k).micro_cer == pytest.approx(single)


def test_replay_rejects_foreign_reference():
    a = align(list("abc"), list("abd"))
    with pytest.raises(ValueError):
        replay(a, list("abcd"))
