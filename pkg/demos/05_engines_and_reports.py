"""Run a mock engine over a manifest, cache its output, and roll up reports."""

import argparse
import json
import os
import tempfile

from ocrkit.corpus import load_manifest
from ocrkit.engines import CachedAdapter, MockAdapter, ReplayCache, run_evaluation
from ocrkit.errormodel import ErrorEntry, ErrorModel
from ocrkit.report import emit, group_averages, reports_from_manifest_results, summarize

SENTENCES = {
    "khm": "the provincial archive digitized forty thousand pages last year",
    "hin": "the river rose two meters after a week of steady monsoon rain",
    "eng": "volunteers proofread every page against the printed original",
}


def write_fixture(out_dir):
    # the mock engine reads the page image path and returns its transcript,
    # so each manifest row points at a transcript file standing in for a scan
    manifest_path = os.path.join(out_dir, "manifest.jsonl")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        for lang, sentence in SENTENCES.items():
            image_path = os.path.join(out_dir, f"{lang}_page.txt")
            with open(image_path, "w", encoding="utf-8") as img:
                img.write(sentence)
            row = {
                "id": f"{lang}-001",
                "lang": lang,
                "ref_text": sentence,
                "image_path": image_path,
            }
            fh.write(json.dumps(row) + "\n")
    return manifest_path


def degradation_model():
    # a small confusion table applied on top of the transcript to imitate
    # a weak engine: vowel substitutions plus dropped spaces
    entries = (
        ErrorEntry(kind="substitute", source="e", target="c", count=4, freq=0.4),
        ErrorEntry(kind="substitute", source="o", target="0", count=3, freq=0.3),
        ErrorEntry(kind="delete", source=" ", target=None, count=3, freq=0.3),
    )
    return ErrorModel(language="und", entries=entries, total_error_count=10)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=None)
    parser.add_argument("--noise-rate", type=float, default=6.0)
    args = parser.parse_args()

    out_dir = args.out_dir or tempfile.mkdtemp(prefix="engine_demo_")
    os.makedirs(out_dir, exist_ok=True)
    manifest = load_manifest(write_fixture(out_dir))

    engine = MockAdapter(
        noise_model=degradation_model(),
        noise_target_cer=args.noise_rate,
        noise_seed=21,
    )

    # first pass records every response; the adapter only reaches the real
    # engine on a cache miss, so the second pass is pure replay
    cache = ReplayCache(os.path.join(out_dir, "cache"))
    recorded = run_evaluation(manifest, CachedAdapter(engine, cache, mode="record"))
    replayed = run_evaluation(manifest, CachedAdapter(engine, cache, mode="replay"))
    assert [r.hypothesis_text for r in recorded] == [r.hypothesis_text for r in replayed]
    print(f"evaluated {len(recorded)} pages, replay matches record")

    reports = reports_from_manifest_results(manifest, recorded, dataset_label="demo")
    for rep in reports:
        print(f"  {rep.language}: CER {rep.cer:.2f} ({rep.accuracy_class})")

    rollup = summarize(reports)
    for (engine_name, dataset), stats in rollup.items():
        print(
            f"\n{engine_name} on {dataset}: "
            f"good {stats['good_pct']}% average {stats['average_pct']}% poor {stats['poor_pct']}%, "
            f"mean CER {stats['average_cer']}"
        )

    for (engine_name, dataset), groups in sorted(group_averages(reports).items()):
        for group, mean_cer in sorted(groups.items()):
            print(f"  {group or 'unknown script group'}: mean CER {mean_cer}")

    table_path = os.path.join(out_dir, "report.md")
    emit(reports, "markdown", table_path)
    print(f"\nmarkdown report written to {table_path}")


if __name__ == "__main__":
    main()
