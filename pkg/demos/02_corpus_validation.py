"""Build a small manifest, score it, and flag articles whose CER looks suspicious."""

import argparse
import json
import os
import tempfile

from ocrkit.corpus import load_manifest, validate_manifest
from ocrkit.validation import ValidationConfig, flag_anomalies, manifest_cers, write_flags_csv


def make_rows():
    # nine reasonable transcriptions plus one where the hypothesis is a
    # different sentence entirely, the kind of pairing mistake that slips
    # into scraped ground truth
    rows = []
    for i in range(9):
        ref = f"article {i}: the museum opens at nine and closes at five."
        hyp = ref.replace("nine", "n1ne") if i % 3 == 0 else ref
        rows.append(
            {
                "id": f"km-{i:03d}",
                "lang": "khm",
                "ref_text": ref,
                "hyp_text": hyp,
            }
        )
    rows.append(
        {
            "id": "km-999",
            "lang": "khm",
            "ref_text": "article 999: the museum opens at nine and closes at five.",
            "hyp_text": "completely unrelated text that matches nothing in the reference",
        }
    )
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=None, help="where to leave the manifest and flags csv")
    args = parser.parse_args()

    out_dir = args.out_dir or tempfile.mkdtemp(prefix="corpus_demo_")
    os.makedirs(out_dir, exist_ok=True)
    manifest_path = os.path.join(out_dir, "manifest.jsonl")

    with open(manifest_path, "w", encoding="utf-8") as fh:
        for row in make_rows():
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")

    manifest = load_manifest(manifest_path)
    print(f"loaded {len(manifest.entries)} entries from {manifest_path}")

    for warning in validate_manifest(manifest):
        print(f"  warning: {warning}")

    cers = manifest_cers(manifest)
    for article_id, language, value in cers:
        print(f"  {article_id}  {language}  CER {value:6.2f}")

    # two-sided two-sigma outlier test within each language
    flags = flag_anomalies(cers, ValidationConfig(sigma_multiplier=2.0))
    flagged = [f for f in flags if f.flagged]
    print(f"\n{len(flagged)} of {len(flags)} articles flagged")
    for f in flagged:
        print(f"  {f.article_id}: CER {f.cer:.2f} vs language mean {f.mean:.2f} (sigma {f.stddev:.2f})")

    flags_path = os.path.join(out_dir, "flags.csv")
    write_flags_csv(flags, flags_path)
    print(f"\nwrote {flags_path}")


if __name__ == "__main__":
    main()
