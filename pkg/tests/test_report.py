import pytest

from ocrkit.corpus import load_manifest
from ocrkit.engines import OcrResult
from ocrkit.errors import UnknownGroup
from ocrkit.languages import UNKNOWN_GROUP
from ocrkit.report import (
    AVERAGE,
    GOOD,
    POOR,
    LanguageReport,
    benchmark_reports,
    classify,
    emit,
    group_averages,
    load_benchmark_table,
    load_reports,
    make_report,
    reports_from_manifest_results,
    reports_from_pairs,
    round1,
    summarize,
)


# -- banding -----------------------------------------------------------------


def test_classify_examples():
    assert classify(0.0) == GOOD
    assert classify(1.9) == GOOD
    assert classify(5.0) == AVERAGE
    assert classify(47.3) == POOR


def test_classify_boundaries_fall_low():
    assert classify(2.0) == GOOD
    assert classify(2.0000001) == AVERAGE
    assert classify(10.0) == AVERAGE
    assert classify(10.0000001) == POOR


def test_classify_rejects_negative():
    with pytest.raises(ValueError):
        classify(-0.1)


def test_classify_is_a_step_function():
    previous = GOOD
    order = {GOOD: 0, AVERAGE: 1, POOR: 2}
    for i in range(0, 1500):
        band = classify(i / 100)
        assert order[band] >= order[previous]
        previous = band


def test_round1_decimal_half_up():
    assert round1(13.15) == 13.2
    assert round1(2.25) == 2.3
    assert round1(2.24) == 2.2
    assert round1(0.05) == 0.1


# -- report rows ----------------------------------------------------------------


def test_language_report_checks_consistency():
    LanguageReport("khm", "Khmer", "SEA", "d", "e", 1.5, GOOD)
    with pytest.raises(ValueError):
        LanguageReport("khm", "Khmer", "SEA", "d", "e", 1.5, POOR)


def test_make_report_fills_script_and_group():
    report = make_report("khm", 3.4, "tesseract", "news")
    assert report.script == "Khmer"
    assert report.group == "SEA"
    assert report.accuracy_class == AVERAGE


def test_make_report_unknown_language():
    report = make_report("zzz", 1.0, "e", "d")
    assert report.script == ""
    assert report.group == UNKNOWN_GROUP


def test_reports_from_pairs_micro_vs_macro():
    rows = [("a1", "khm", "aaaa", "aaaa"), ("a2", "khm", "ab", "bb")]
    micro = reports_from_pairs(rows, "e", "d", aggregate="micro")
    macro = reports_from_pairs(rows, "e", "d", aggregate="macro")
    assert micro[0].cer == pytest.approx(100.0 / 6)
    assert macro[0].cer == pytest.approx(25.0)
    with pytest.raises(ValueError):
        reports_from_pairs(rows, "e", "d", aggregate="pooled")


# -- aggregation -------------------------------------------------------------------


def test_summarize_band_shares_and_mean():
    reports = [
        make_report("khm", 1.0, "e", "d"),
        make_report("mya", 5.0, "e", "d"),
        make_report("hin", 50.0, "e", "d"),
    ]
    summary = summarize(reports)[("e", "d")]
    assert summary["good_pct"] == 33.3
    assert summary["average_pct"] == 33.3
    assert summary["poor_pct"] == 33.3
    assert abs(summary["good_pct"] + summary["average_pct"] + summary["poor_pct"] - 100) <= 0.2
    assert summary["average_cer"] == 18.7
    assert summary["language_count"] == 3


def test_summarize_single_language():
    summary = summarize([make_report("eng", 0.0, "e", "d")])[("e", "d")]
    assert summary == {
        "good_pct": 100.0, "average_pct": 0.0, "poor_pct": 0.0,
        "average_cer": 0.0, "language_count": 1,
    }


def test_summarize_splits_engine_dataset():
    reports = [make_report("eng", 1.0, "e1", "d"), make_report("eng", 30.0, "e2", "d")]
    summary = summarize(reports)
    assert summary[("e1", "d")]["good_pct"] == 100.0
    assert summary[("e2", "d")]["poor_pct"] == 100.0


def test_summarize_empty_is_an_error():
    with pytest.raises(ValueError):
        summarize([])


def test_group_averages_rounds_per_group():
    reports = [
        make_report("khm", 13.1, "e", "d"),
        make_report("mya", 13.2, "e", "d"),
        make_report("eng", 4.0, "e", "d"),
    ]
    averages = group_averages(reports)[("e", "d")]
    # (13.1 + 13.2) / 2 = 13.15, which must round up
    assert averages["SEA"] == 13.2
    assert averages["Latin"] == 4.0


def test_group_averages_rejects_unknown_group():
    with pytest.raises(UnknownGroup):
        group_averages([make_report("zzz", 1.0, "e", "d")])


# -- emission ------------------------------------------------------------------------


def sample_reports():
    return [
        make_report("khm", 3.0, "e", "d"),
        make_report("eng", 1.0, "e", "d"),
        make_report("hin", 12.0, "e", "d"),
    ]


def test_emit_csv_sorted_by_script_then_language():
    text = emit(sample_reports(), "csv")
    lines = text.splitlines()
    assert lines[0] == "language,script,group,engine,dataset,cer,class"
    assert [line.split(",")[0] for line in lines[1:]] == ["hin", "khm", "eng"]


def test_emit_csv_empty_is_header_only():
    assert emit([], "csv") == "language,script,group,engine,dataset,cer,class\n"


def test_emit_json_round_trips(tmp_path):
    path = tmp_path / "reports.json"
    emit(sample_reports(), "json", str(path))
    assert load_reports(str(path)) == sorted(
        sample_reports(), key=lambda r: (r.script, r.language)
    )


def test_emit_markdown_table():
    text = emit(sample_reports(), "markdown")
    lines = text.splitlines()
    assert lines[0].startswith("| language | script |")
    assert set(lines[1].replace("|", "").split()) == {"---"}
    assert len(lines) == 2 + 3


def test_emit_markdown_rounds_cer_half_up():
    text = emit([make_report("khm", 13.15, "e", "d")], "markdown")
    assert "| 13.2 |" in text
    # csv keeps full precision for round-tripping
    assert "13.15" in emit([make_report("khm", 13.15, "e", "d")], "csv")


def test_emit_rejects_unknown_format():
    with pytest.raises(ValueError):
        emit(sample_reports(), "xml")


# -- shipped benchmark table -----------------------------------------------------------


def test_benchmark_table_shape():
    table = load_benchmark_table()
    assert table["engines"] == ["tesseract", "google-vision"]
    assert table["datasets"] == ["flores101", "udhr"]
    assert len(table["rows"]) == 60


def test_benchmark_reports_column():
    reports = benchmark_reports("tesseract", "flores101")
    assert len(reports) == 60
    assert {r.engine for r in reports} == {"tesseract"}
    assert {r.dataset_label for r in reports} == {"flores101"}
    with pytest.raises(ValueError):
        benchmark_reports("abbyy", "flores101")
    with pytest.raises(ValueError):
        benchmark_reports("tesseract", "wikipedia")


# -- joining engine results --------------------------------------------------------------


def test_reports_from_manifest_results(make_manifest):
    manifest = load_manifest(make_manifest([
        {"id": "a1", "lang": "khm", "ref_text": "abcd"},
        {"id": "a2", "lang": "eng", "ref_text": "wxyz"},
    ]))
    results = [
        OcrResult(engine="mock", language="khm", article_id="a1",
                  hypothesis_text="abcd", latency_ms=1),
        OcrResult(engine="mock", language="eng", article_id="a2",
                  hypothesis_text="wxyQ", latency_ms=1),
    ]
    reports = reports_from_manifest_results(manifest, results, dataset_label="toy")
    by_lang = {r.language: r for r in reports}
    assert by_lang["khm"].cer == 0.0
    assert by_lang["eng"].cer == 25.0
    assert {r.dataset_label for r in reports} == {"toy"}
