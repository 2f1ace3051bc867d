"""Mine an error model from noisy transcriptions, then reuse it to corrupt clean text."""

import argparse
import os
import tempfile

from ocrkit.errormodel import load_model, mine, save_model, top_k
from ocrkit.inject import EDIT_KINDS, InjectionConfig, inject, sweep

# hand-made "engine output" with the classic confusions: rn -> m style
# substitutions, dropped spaces, stray marks
PAIRS = [
    ("the morning train arrives at dawn", "the moming train arrives at dawn"),
    ("her uniform was turned inward", "her unifom was tumed inward"),
    ("a modern corner furnace", "a modem comer furnace"),
    ("burning wood in the barn", "buming wood in the bam"),
    ("the concert hall was full", "the concert hallwas full"),
    ("light rain over the valley", "light rain over the valley."),
]

CLEAN = (
    "the environment ministry confirmed that the northernternminal "
    "reopened after morning maintenance and the returning trains are "
    "running on their normal turnaround times for the winter term"
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=None)
    parser.add_argument("--rate", type=float, default=8.0, help="target CER for injection")
    args = parser.parse_args()

    out_dir = args.out_dir or tempfile.mkdtemp(prefix="inject_demo_")
    os.makedirs(out_dir, exist_ok=True)

    model = mine(PAIRS, language="eng")
    print(f"mined {model.total_error_count} errors, {len(model.entries)} distinct keys")
    for entry in model.entries:
        src = entry.source or "-"
        tgt = entry.target or "-"
        print(f"  {entry.kind:10s} {src!r:6s} -> {tgt!r:6s} count {entry.count:2d} freq {entry.freq:.3f}")

    # keep the head of the distribution; freqs renormalize over what is kept
    model = top_k(model, 5)
    model_path = os.path.join(out_dir, "model.json")
    save_model(model, model_path)
    model = load_model(model_path)
    print(f"\nkept top {len(model.entries)} keys, saved to {model_path}")

    result = inject(CLEAN, model, InjectionConfig(target_cer=args.rate, seed=13))
    print(f"\ntarget CER {args.rate}, achieved {result.achieved_cer:.2f} with {len(result.plan.edits)} edits")
    print(f"noisy: {result.noisy_text!r}")

    # a sweep writes one corrupted copy of the corpus per (rate, kinds) cell
    # plus a metrics sidecar recording what was actually achieved
    written = sweep(
        corpus=[CLEAN, "a second shorter line for the sweep"],
        model=model,
        rates=[2.5, 5.0, 10.0],
        kind_sets=[EDIT_KINDS, ("substitute",)],
        seed=99,
        out_dir=out_dir,
    )
    print(f"\nsweep wrote {len(written)} files:")
    for path in written:
        print(f"  {path}")


if __name__ == "__main__":
    main()
