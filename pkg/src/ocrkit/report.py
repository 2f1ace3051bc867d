"""Accuracy-band classification, script-group aggregation, and summary
table emission.

Bands follow the convention used for historical-newspaper digitization
benchmarks: Good means CER at or below 2, Poor means CER above 10, and
Average covers the rest. Both boundary values land in the band whose
published counts they reproduce: a CER of exactly 2 is Good, exactly
10 is Average.

All presented numbers are rounded half-up to one decimal via Decimal,
because binary floats mis-round values like 13.15.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from importlib.resources import files
from typing import Iterable, Sequence

from .corpus import Manifest
from .errors import UnknownGroup
from .languages import GROUPS, UNKNOWN_GROUP, group_of, lookup
from .textmetrics import DEFAULT_POLICY, NormalizationPolicy, cer

GOOD = "Good"
AVERAGE = "Average"
POOR = "Poor"

_COLUMNS = ("language", "script", "group", "engine", "dataset", "cer", "class")


def round1(value: float) -> float:
    """Half-up rounding to 1 decimal, immune to float representation."""
    return float(Decimal(str(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def classify(cer_value: float) -> str:
    """Band for a CER percentage: Good (<= 2), Average (2-10], Poor (> 10)."""
    if cer_value < 0:
        raise ValueError(f"cer must be >= 0, got {cer_value}")
    if cer_value <= 2:
        return GOOD
    if cer_value <= 10:
        return AVERAGE
    return POOR


@dataclass(frozen=True)
class LanguageReport:
    language: str  # ISO 639-3 code
    script: str
    group: str
    dataset_label: str
    engine: str
    cer: float
    accuracy_class: str

    def __post_init__(self):
        if self.accuracy_class != classify(self.cer):
            raise ValueError(
                f"class {self.accuracy_class!r} inconsistent with cer {self.cer}"
            )


def make_report(language: str, cer_value: float, engine: str, dataset_label: str) -> LanguageReport:
    """Build a LanguageReport, filling script/group from the embedded
    language table (unknown languages get an empty script and the
    unknown-group marker)."""
    info = lookup(language)
    return LanguageReport(
        language=language,
        script=info.script if info else "",
        group=group_of(language),
        dataset_label=dataset_label,
        engine=engine,
        cer=cer_value,
        accuracy_class=classify(cer_value),
    )


def reports_from_pairs(
    rows: Sequence[tuple[str, str, str, str]],
    engine: str,
    dataset_label: str,
    policy: NormalizationPolicy = DEFAULT_POLICY,
    aggregate: str = "micro",
) -> list[LanguageReport]:
    """Per-language reports from (article_id, language, reference,
    hypothesis) rows. micro (default) pools edit counts over a
    language's articles; macro averages per-article CER."""
    if aggregate not in ("micro", "macro"):
        raise ValueError(f"aggregate must be 'micro' or 'macro', got {aggregate!r}")
    by_lang: dict[str, list[tuple[str, str, str]]] = {}
    for article_id, language, ref, hyp in rows:
        by_lang.setdefault(language, []).append((article_id, ref, hyp))
    reports = []
    for language in sorted(by_lang):
        total_distance = 0
        total_len = 0
        per_article = []
        for article_id, ref, hyp in by_lang[language]:
            r = cer(ref, hyp, policy, article_id=article_id)
            total_distance += r.distance
            total_len += r.ref_len
            per_article.append(r.cer)
        if aggregate == "micro":
            value = 100.0 * total_distance / total_len
        else:
            value = sum(per_article) / len(per_article)
        reports.append(make_report(language, value, engine, dataset_label))
    return reports


def summarize(reports: Sequence[LanguageReport]) -> dict[tuple[str, str], dict[str, float]]:
    """Per (engine, dataset): share of languages in each band (percent)
    and the mean CER over languages, all rounded to 1 decimal."""
    if not reports:
        raise ValueError("no reports to summarize")
    grouped: dict[tuple[str, str], list[LanguageReport]] = {}
    for r in reports:
        grouped.setdefault((r.engine, r.dataset_label), []).append(r)
    out = {}
    for key in sorted(grouped):
        rows = grouped[key]
        n = len(rows)
        bands = {GOOD: 0, AVERAGE: 0, POOR: 0}
        total = Decimal(0)
        for r in rows:
            bands[r.accuracy_class] += 1
            total += Decimal(str(r.cer))
        out[key] = {
            "good_pct": round1(100.0 * bands[GOOD] / n),
            "average_pct": round1(100.0 * bands[AVERAGE] / n),
            "poor_pct": round1(100.0 * bands[POOR] / n),
            "average_cer": float(
                (total / n).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)
            ),
            "language_count": n,
        }
    return out


def group_averages(
    reports: Sequence[LanguageReport],
) -> dict[tuple[str, str], dict[str, float]]:
    """Mean CER per script group per (engine, dataset), rounded to 1
    decimal. A report whose language has no known group is an error."""
    sums: dict[tuple[str, str], dict[str, list[Decimal]]] = {}
    for r in reports:
        if r.group == UNKNOWN_GROUP or r.group not in GROUPS:
            raise UnknownGroup(r.language)
        sums.setdefault((r.engine, r.dataset_label), {}).setdefault(r.group, []).append(
            Decimal(str(r.cer))
        )
    out = {}
    for key in sorted(sums):
        out[key] = {
            group: float(
                (sum(values) / len(values)).quantize(
                    Decimal("0.1"), rounding=ROUND_HALF_UP
                )
            )
            for group, values in sorted(sums[key].items())
        }
    return out


def _sorted_rows(reports: Iterable[LanguageReport]) -> list[LanguageReport]:
    return sorted(reports, key=lambda r: (r.script, r.language, r.engine, r.dataset_label))


def _as_record(r: LanguageReport) -> dict:
    return {
        "language": r.language,
        "script": r.script,
        "group": r.group,
        "engine": r.engine,
        "dataset": r.dataset_label,
        "cer": r.cer,
        "class": r.accuracy_class,
    }


def emit(reports: Sequence[LanguageReport], fmt: str, path: str | None = None) -> str:
    """Render reports as csv, json, or markdown, sorted by (script,
    language). Returns the rendered text; writes it to path when given.
    csv and json keep full CER precision so they round-trip; markdown is
    presentation and rounds to 1 decimal."""
    rows = _sorted_rows(reports)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_COLUMNS)
        for r in rows:
            rec = _as_record(r)
            writer.writerow([rec[c] for c in _COLUMNS])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps([_as_record(r) for r in rows], ensure_ascii=True, indent=2) + "\n"
    elif fmt == "markdown":
        lines = [
            "| " + " | ".join(_COLUMNS) + " |",
            "|" + "|".join(" --- " for _ in _COLUMNS) + "|",
        ]
        for r in rows:
            rec = _as_record(r)
            rec["cer"] = round1(rec["cer"])
            lines.append("| " + " | ".join(str(rec[c]) for c in _COLUMNS) + " |")
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"format must be csv/json/markdown, got {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def load_reports(path: str) -> list[LanguageReport]:
    """Read back a JSON report file written by emit."""
    with open(path, encoding="utf-8") as fh:
        records = json.load(fh)
    return [
        LanguageReport(
            language=rec["language"],
            script=rec["script"],
            group=rec["group"],
            dataset_label=rec["dataset"],
            engine=rec["engine"],
            cer=rec["cer"],
            accuracy_class=rec["class"],
        )
        for rec in records
    ]


def load_benchmark_table() -> dict:
    """The shipped per-language benchmark CER table (60 languages, two
    engines, two datasets). Test input and demo data, not recomputed."""
    text = files("ocrkit").joinpath("data/benchmark_cer.json").read_text(encoding="utf-8")
    return json.loads(text)


def benchmark_reports(engine: str, dataset: str) -> list[LanguageReport]:
    """LanguageReports for one (engine, dataset) column of the shipped
    benchmark table. engine: tesseract or google-vision; dataset:
    flores101 or udhr."""
    table = load_benchmark_table()
    if engine not in table["engines"]:
        raise ValueError(f"engine must be one of {table['engines']}, got {engine!r}")
    if dataset not in table["datasets"]:
        raise ValueError(f"dataset must be one of {table['datasets']}, got {dataset!r}")
    column = f"{engine.replace('-', '_')}_{dataset}"
    return [
        LanguageReport(
            language=row["code"],
            script=row["script"],
            group=row["group"],
            dataset_label=dataset,
            engine=engine,
            cer=row[column],
            accuracy_class=classify(row[column]),
        )
        for row in table["rows"]
    ]


def reports_from_manifest_results(
    manifest: Manifest,
    results,
    dataset_label: str = "corpus",
    policy: NormalizationPolicy = DEFAULT_POLICY,
    aggregate: str = "micro",
) -> list[LanguageReport]:
    """Join OCR results back onto the manifest's references and build
    per-language reports. results are OcrResult-like objects carrying
    article_id, engine, and hypothesis_text."""
    by_id = {e.article_id: e for e in manifest}
    by_engine: dict[str, list[tuple[str, str, str, str]]] = {}
    for result in results:
        entry = by_id[result.article_id]
        by_engine.setdefault(result.engine, []).append(
            (entry.article_id, entry.language, manifest.reference(entry), result.hypothesis_text)
        )
    reports: list[LanguageReport] = []
    for engine in sorted(by_engine):
        reports.extend(
            reports_from_pairs(by_engine[engine], engine, dataset_label, policy, aggregate)
        )
    return reports
