import csv
import statistics

import pytest

from ocrkit.corpus import load_manifest
from ocrkit.errors import GroupTooSmall
from ocrkit.validation import (
    AnomalyFlag,
    ValidationConfig,
    flag_anomalies,
    manifest_cers,
    revalidation_loop,
    write_flags_csv,
)


def rows(values, lang="pol"):
    return [(f"a{i}", lang, v) for i, v in enumerate(values)]


def flagged_ids(flags):
    return [f.article_id for f in flags if f.flagged]


def test_config_validation():
    with pytest.raises(ValueError):
        ValidationConfig(sigma_multiplier=0)
    with pytest.raises(ValueError):
        ValidationConfig(side="both")
    with pytest.raises(ValueError):
        ValidationConfig(grouping="per_script")


def test_zero_variance_flags_nothing():
    flags = flag_anomalies(rows([3, 3, 3, 3]))
    assert flagged_ids(flags) == []
    assert all(f.stddev == 0 for f in flags)


def test_hand_computed_population_example():
    flags = flag_anomalies(rows([0] * 9 + [30]))
    assert flagged_ids(flags) == ["a9"]
    assert flags[0].mean == pytest.approx(3.0)
    assert flags[0].stddev == pytest.approx(9.0)


def test_one_record_per_input_in_order():
    flags = flag_anomalies(rows([1.0, 2.0, 3.0]))
    assert [f.article_id for f in flags] == ["a0", "a1", "a2"]
    assert [f.cer for f in flags] == [1.0, 2.0, 3.0]


def test_single_article_group_raises():
    with pytest.raises(GroupTooSmall):
        flag_anomalies(rows([1.0]))
    with pytest.raises(GroupTooSmall):
        flag_anomalies(rows([1.0, 2.0]) + [("b0", "tur", 5.0)])


def test_global_grouping_pools_languages():
    data = rows([1.0], "pol") + rows([2.0], "tur")
    config = ValidationConfig(grouping="global")
    flags = flag_anomalies(data, config)
    assert len(flags) == 2 and not any(f.flagged for f in flags)


def test_high_only_ignores_low_outliers():
    values = [10.0] * 10 + [0.0]
    mean = statistics.fmean(values)
    sd = statistics.pstdev(values)
    assert mean - 0.0 > 2 * sd
    two = flag_anomalies(rows(values))
    high = flag_anomalies(rows(values), ValidationConfig(side="high_only"))
    assert flagged_ids(two) == ["a10"]
    assert flagged_ids(high) == []


def test_scale_and_shift_equivariance():
    base = [1.0, 2.0, 2.5, 3.0, 9.0]
    reference = flagged_ids(flag_anomalies(rows(base)))
    for c in (0.5, 3.0, 100.0):
        assert flagged_ids(flag_anomalies(rows([v * c for v in base]))) == reference
    for c in (-1.0, 5.0, 40.0):
        assert flagged_ids(flag_anomalies(rows([v + c for v in base]))) == reference


def test_huge_multiplier_flags_nothing():
    config = ValidationConfig(sigma_multiplier=1e9)
    assert flagged_ids(flag_anomalies(rows([0, 0, 0, 1000]), config)) == []


def test_non_finite_cer_rejected():
    with pytest.raises(ValueError):
        flag_anomalies(rows([1.0, float("nan")]))
    with pytest.raises(ValueError):
        flag_anomalies(rows([1.0, float("inf")]))


def test_manifest_cers_scores_hypothesized_entries(make_manifest):
    path = make_manifest(
        [
            {"id": "a", "lang": "pol", "ref_text": "abcd", "hyp_text": "abcd"},
            {"id": "b", "lang": "pol", "ref_text": "abcd", "hyp_text": "abed"},
            {"id": "c", "lang": "pol", "ref_text": "abcd"},
        ]
    )
    scores = manifest_cers(load_manifest(path))
    assert scores == [("a", "pol", 0.0), ("b", "pol", 25.0)]


def test_manifest_cers_overlay_overrides(make_manifest):
    path = make_manifest(
        [{"id": "a", "lang": "pol", "ref_text": "abcd", "hyp_text": "xxxx"}]
    )
    scores = manifest_cers(load_manifest(path), hypotheses={"a": "abcd"})
    assert scores == [("a", "pol", 0.0)]


def _loop_manifest(make_manifest):
    # ten clean articles plus one badly annotated one
    rows_ = [
        {"id": f"a{i}", "lang": "pol", "ref_text": "abcdefghij", "hyp_text": "abcdefghij"}
        for i in range(10)
    ]
    rows_.append({"id": "bad", "lang": "pol", "ref_text": "abcdefghij", "hyp_text": "xxxxxxxxxx"})
    return load_manifest(make_manifest(rows_))


def test_revalidation_loop_clean_first_round(make_manifest):
    manifest = load_manifest(
        make_manifest(
            [
                {"id": "a", "lang": "pol", "ref_text": "abcd", "hyp_text": "abcd"},
                {"id": "b", "lang": "pol", "ref_text": "abcd", "hyp_text": "abcd"},
            ]
        )
    )
    rounds = revalidation_loop(manifest, [{}])
    assert rounds == [[]]


def test_revalidation_loop_fixes_outlier(make_manifest):
    manifest = _loop_manifest(make_manifest)
    rounds = revalidation_loop(manifest, [{}, {"bad": "abcdefghij"}, {}])
    assert len(rounds) == 2
    assert [f.article_id for f in rounds[0]] == ["bad"]
    assert rounds[1] == []


def test_revalidation_loop_stops_after_clean_round(make_manifest):
    manifest = _loop_manifest(make_manifest)
    consumed = []

    def generator():
        for k, updates in enumerate([{}, {"bad": "abcdefghij"}, {}, {}]):
            consumed.append(k)
            yield updates

    rounds = revalidation_loop(manifest, generator())
    assert len(rounds) == 2
    assert consumed == [0, 1]


def test_write_flags_csv(tmp_path):
    flags = [
        AnomalyFlag("a", "pol", 1.0, 2.0, 0.5, False),
        AnomalyFlag("b", "pol", 9.0, 2.0, 0.5, True),
    ]
    path = tmp_path / "flags.csv"
    write_flags_csv(flags, str(path))
    with open(path, newline="", encoding="utf-8") as fh:
        rows_ = list(csv.reader(fh))
    assert rows_[0] == ["article_id", "language", "cer", "mean", "stddev", "flagged"]
    assert rows_[1][0] == "a" and rows_[1][5] == "False"
    assert rows_[2][0] == "b" and rows_[2][5] == "True"
