"""Walk through character error rate scoring and edit alignment on small strings."""

from ocrkit.textmetrics import NormalizationPolicy, align, cer, corpus_cer, normalize

ref = "the quick brown fox"
hyp = "the qu1ck brwon fox"

report = cer(ref, hyp)
print(f"ref: {ref!r}")
print(f"hyp: {hyp!r}")
print(f"edit distance {report.distance} over {report.ref_len} units -> CER {report.cer:.2f}")

# the alignment explains where the distance comes from
alignment = align(normalize(ref), normalize(hyp))
for op in alignment.ops:
    if op.kind == "match":
        continue
    print(f"  {op.kind:10s} ref[{op.ref_index}] {op.ref_char!r} -> {op.hyp_char!r}")

# CER is a percentage of the reference length, so a hypothesis much longer
# than the reference can push it past 100
flood = cer("ab", "abababab")
print(f"\nshort ref, long hyp -> CER {flood.cer:.1f} (can exceed 100)")

# normalization policy controls the unit of comparison; combining marks
# count separately as code points but fuse into one unit as graphemes
ref_marked = "কম্বোডিয়া"
hyp_marked = "কম্বোডিয়"
by_cp = cer(ref_marked, hyp_marked)
by_grapheme = cer(
    ref_marked,
    hyp_marked,
    policy=NormalizationPolicy(unit="grapheme_cluster"),
)
print(f"\ncode points: distance {by_cp.distance} of {by_cp.ref_len} -> {by_cp.cer:.2f}")
print(f"graphemes:   distance {by_grapheme.distance} of {by_grapheme.ref_len} -> {by_grapheme.cer:.2f}")

# corpus-level CER: micro pools edits over pooled length, macro averages
# the per-article rates, so one long clean article drags them apart
pairs = [
    ("a" * 98, "a" * 98),
    ("bb", "cc"),
]
summary = corpus_cer(pairs)
print(f"\nmicro {summary.micro_cer:.2f} vs macro {summary.macro_cer:.2f} on the same two articles")
