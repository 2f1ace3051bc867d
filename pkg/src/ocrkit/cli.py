"""Command-line interface: one binary, pipeline-stage subcommands.

Exit codes: 0 success, 1 I/O failure (missing or unreadable files),
2 domain error (empty reference, unreachable injection target, bad
manifest line), 3 OCR engine failure. All randomness flows from the
--seed flag; no subcommand uses a hidden entropy source.

CER is always in percent: 100 * edit_distance / reference_length, and
can exceed 100 under heavy insertion. Accuracy bands: Good (CER <= 2),
Average (2 < CER <= 10), Poor (CER > 10).
"""

from __future__ import annotations

import argparse
import csv
import json
import shlex
import sys

from . import augment as aug
from . import corpus, engines, errormodel, report, validation
from .errors import EmptyCorpus, EngineError, ToolkitError
from .inject import InjectionConfig, inject, sweep
from .textmetrics import (
    DELETE,
    EDIT_KINDS,
    INSERT,
    SUBSTITUTE,
    NormalizationPolicy,
    cer,
    corpus_cer,
)

BANDS_HELP = (
    "CER is in percent (100 x edit distance / reference length; may exceed "
    "100). Accuracy bands: Good (CER <= 2), Average (2 < CER <= 10), Poor "
    "(CER > 10)."
)

_KIND_NAMES = {
    "sub": SUBSTITUTE,
    "ins": INSERT,
    "del": DELETE,
    "substitute": SUBSTITUTE,
    "insert": INSERT,
    "delete": DELETE,
}


def _policy(args) -> NormalizationPolicy:
    return NormalizationPolicy(
        unicode_form=args.unicode_form,
        unit=args.unit,
        whitespace=args.whitespace,
    )


def _parse_kinds(spec: str) -> tuple[str, ...]:
    if spec == "all":
        return EDIT_KINDS
    kinds = []
    for name in spec.split(","):
        name = name.strip()
        if name not in _KIND_NAMES:
            raise ValueError(f"unknown error kind {name!r} (use sub/ins/del or all)")
        kinds.append(_KIND_NAMES[name])
    return tuple(dict.fromkeys(kinds))


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _out_stream(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def cmd_cer(args) -> int:
    policy = _policy(args)
    if not args.manifest and not (args.ref and args.hyp):
        raise ValueError("give --manifest, or both --ref and --hyp")
    stream, owned = _out_stream(args.out)
    try:
        if args.manifest:
            manifest = corpus.load_manifest(args.manifest)
            rows = manifest.pairs()
            scored = [(i, l, r, h) for i, l, r, h in rows if h is not None]
            if not scored:
                raise EmptyCorpus("manifest has no hypotheses to score")
            result = corpus_cer(
                [(r, h) for _, _, r, h in scored],
                policy,
                ids=[i for i, _, _, _ in scored],
            )
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(["article_id", "language", "distance", "ref_len", "cer"])
            langs = {i: l for i, l, _, _ in scored}
            for article_id, rep in result.per_article:
                writer.writerow(
                    [article_id, langs[article_id], rep.distance, rep.ref_len, f"{rep.cer:.6g}"]
                )
            writer.writerow(["micro", "", "", "", f"{result.micro_cer:.6g}"])
            writer.writerow(["macro", "", "", "", f"{result.macro_cer:.6g}"])
        else:
            rep = cer(_read_text(args.ref), _read_text(args.hyp), policy)
            print(f"{rep.cer:.6g}", file=stream)
    finally:
        if owned:
            stream.close()
    return 0


def cmd_validate(args) -> int:
    policy = _policy(args)
    manifest = corpus.load_manifest(args.manifest)
    config = validation.ValidationConfig(
        sigma_multiplier=args.sigma, side=args.side, grouping=args.grouping
    )
    flags = validation.flag_anomalies(validation.manifest_cers(manifest, policy), config)
    stream, owned = _out_stream(args.out)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["article_id", "language", "cer", "mean", "stddev", "flagged"])
        for f in flags:
            writer.writerow(
                [f.article_id, f.language, f"{f.cer:.6g}", f"{f.mean:.6g}",
                 f"{f.stddev:.6g}", f.flagged]
            )
    finally:
        if owned:
            stream.close()
    return 0


def cmd_mine(args) -> int:
    policy = _policy(args)
    manifest = corpus.load_manifest(args.manifest)
    pairs = []
    for article_id, language, ref, hyp in manifest.pairs():
        if hyp is None:
            print(f"skipping {article_id}: no hypothesis", file=sys.stderr)
            continue
        pairs.append((ref, hyp))
    if not pairs:
        raise EmptyCorpus("manifest has no hypotheses to mine")
    languages = manifest.languages()
    label = args.language or (languages[0] if len(languages) == 1 else "und")
    model = errormodel.mine(pairs, policy, language=label)
    if args.top_k:
        model = errormodel.top_k(model, args.top_k)
    errormodel.save_model(model, args.out)
    print(
        f"mined {model.total_error_count} errors, kept {len(model.entries)} entries "
        f"-> {args.out}",
        file=sys.stderr,
    )
    return 0


def cmd_inject(args) -> int:
    policy = _policy(args)
    model = errormodel.load_model(args.model)
    config = InjectionConfig(
        target_cer=args.rate,
        kinds=_parse_kinds(args.kinds),
        seed=args.seed,
        tolerance=args.tolerance,
    )
    result = inject(_read_text(args.infile), model, config, policy)
    stream, owned = _out_stream(args.out)
    try:
        stream.write(result.noisy_text)
    finally:
        if owned:
            stream.close()
    status = " (missed tolerance)" if result.warning else ""
    print(
        f"target {args.rate:g} achieved {result.achieved_cer:.3f}"
        f" with {len(result.plan.edits)} edits{status}",
        file=sys.stderr,
    )
    return 0


def cmd_sweep(args) -> int:
    policy = _policy(args)
    model = errormodel.load_model(args.model)
    texts = [line for line in _read_text(args.corpus).splitlines() if line]
    if not texts:
        raise EmptyCorpus("corpus file has no non-empty lines")
    rates = [float(r) for r in args.rates.split(",")]
    kind_sets = [_parse_kinds(s) for s in args.kind_sets.split(";")]
    written = sweep(
        texts,
        model,
        rates,
        kind_sets,
        seed=args.seed,
        out_dir=args.out_dir,
        tolerance=args.tolerance,
        policy=policy,
        parallelism=args.parallelism,
    )
    for path in written:
        print(path)
    return 0


def cmd_augment(args) -> int:
    if args.op == "style":
        style = aug.StyleSpec(
            font_family=args.font_family,
            font_size=args.font_size,
            bold=args.bold,
            italic=args.italic,
            letter_spacing=args.letter_spacing,
            opacity=args.style_opacity,
        )
        html_text = aug.emit_styled_document(_read_text(args.infile), style, script=args.script)
        stream, owned = _out_stream(args.out)
        try:
            stream.write(html_text)
        finally:
            if owned:
                stream.close()
        return 0
    img = aug.read_image(args.infile)
    if args.op == "saltpepper":
        out = aug.salt_pepper(img, args.density, args.seed)
    elif args.op == "skew":
        out = aug.skew(img, args.angle, fill=args.fill)
    else:
        out = aug.opacity(img, args.alpha)
    aug.write_image(out, args.out)
    return 0


def _build_adapter(args) -> engines.EngineAdapter:
    if args.engine == "mock":
        noise_model = errormodel.load_model(args.noise_model) if args.noise_model else None
        adapter: engines.EngineAdapter = engines.MockAdapter(
            noise_model=noise_model,
            noise_target_cer=args.noise_rate,
            noise_kinds=_parse_kinds(args.noise_kinds),
            noise_seed=args.seed,
        )
    elif args.engine == "command":
        if not args.command:
            raise ValueError("--command is required for --engine command")
        adapter = engines.ExternalCommandAdapter(
            name=args.engine_name or "command",
            argv_template=shlex.split(args.command),
            timeout_s=args.timeout,
            code_table=args.code_table,
        )
    elif args.engine == "http":
        if not args.url or not args.api_key_env:
            raise ValueError("--url and --api-key-env are required for --engine http")
        adapter = engines.HttpAdapter(
            name=args.engine_name or "http",
            url=args.url,
            api_key_env=args.api_key_env,
            json_path=args.json_path,
            timeout_s=args.timeout,
            code_table=args.code_table,
        )
    else:
        raise ValueError(f"unknown engine {args.engine!r}")
    if args.cache_dir:
        cache = engines.ReplayCache(args.cache_dir)
        return engines.CachedAdapter(adapter, cache, mode=args.cache_mode)
    return adapter


def cmd_evaluate(args) -> int:
    policy = _policy(args)
    manifest = corpus.load_manifest(args.manifest)
    if len(manifest) == 0:
        raise EmptyCorpus("manifest is empty")
    adapter = _build_adapter(args)
    results = engines.run_evaluation(manifest, adapter, parallelism=args.parallelism)
    reports = report.reports_from_manifest_results(
        manifest, results, dataset_label=args.dataset_label, policy=policy,
        aggregate=args.aggregate,
    )
    text = report.emit(reports, "json", args.out if args.out != "-" else None)
    if args.out == "-" or args.out is None:
        sys.stdout.write(text)
    return 0


def cmd_report(args) -> int:
    if args.benchmark:
        engine, _, dataset = args.benchmark.partition("/")
        reports = report.benchmark_reports(engine, dataset)
    elif args.infile:
        reports = report.load_reports(args.infile)
    else:
        raise ValueError("give --in report.json or --benchmark engine/dataset")
    stream, owned = _out_stream(args.out)
    try:
        if args.summary:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(
                ["engine", "dataset", "good_pct", "average_pct", "poor_pct",
                 "average_cer", "languages"]
            )
            for (engine, dataset), s in report.summarize(reports).items():
                writer.writerow(
                    [engine, dataset, s["good_pct"], s["average_pct"], s["poor_pct"],
                     s["average_cer"], s["language_count"]]
                )
        elif args.groups:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(["engine", "dataset", "group", "mean_cer"])
            for (engine, dataset), groups in report.group_averages(reports).items():
                for group, value in groups.items():
                    writer.writerow([engine, dataset, group, value])
        else:
            stream.write(report.emit(reports, args.format))
    finally:
        if owned:
            stream.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocrkit",
        description="OCR quality evaluation, error mining, noise injection, "
        "and page augmentation. " + BANDS_HELP,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="global random seed")
    common.add_argument("--parallelism", type=int, default=1,
                        help="worker threads; outputs do not depend on this")
    common.add_argument("--unicode-form", choices=["nfc", "none"], default="nfc",
                        help="Unicode normalization applied before comparison")
    common.add_argument("--unit", choices=["code_point", "grapheme_cluster"],
                        default="code_point", help="comparison unit")
    common.add_argument("--whitespace", choices=["preserve", "collapse_runs"],
                        default="preserve", help="whitespace handling")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cer", parents=[common], epilog=BANDS_HELP,
                       help="score hypothesis text against a reference")
    p.add_argument("--ref", help="reference text file")
    p.add_argument("--hyp", help="hypothesis text file")
    p.add_argument("--manifest", help="JSONL manifest with references and hypotheses")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_cer)

    p = sub.add_parser("validate", parents=[common], epilog=BANDS_HELP,
                       help="flag articles whose CER deviates from their group")
    p.add_argument("--manifest", required=True)
    p.add_argument("--sigma", type=float, default=2.0,
                   help="standard-deviation multiplier (default 2)")
    p.add_argument("--side", choices=validation.SIDES, default="two_sided")
    p.add_argument("--grouping", choices=validation.GROUPINGS, default="per_language")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("mine", parents=[common], epilog=BANDS_HELP,
                       help="mine an error model from reference/hypothesis pairs")
    p.add_argument("--manifest", required=True)
    p.add_argument("--top-k", type=int, default=10,
                   help="keep the k most frequent errors (default 10; 0 keeps all)")
    p.add_argument("--language", help="language label for the model")
    p.add_argument("--out", required=True, help="model JSON path")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("inject", parents=[common], epilog=BANDS_HELP,
                       help="corrupt clean text to a target CER")
    p.add_argument("--model", required=True, help="error model JSON")
    p.add_argument("--rate", type=float, required=True, help="target CER in percent")
    p.add_argument("--kinds", default="all", help="sub/ins/del list or 'all'")
    p.add_argument("--tolerance", type=float, default=0.5,
                   help="warn when |achieved - target| exceeds this (percent)")
    p.add_argument("--in", dest="infile", required=True, help="clean text file")
    p.add_argument("--out", help="noisy text output (default stdout)")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("sweep", parents=[common], epilog=BANDS_HELP,
                       help="generate noisy corpora over a rate/kind grid")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True, help="text file, one text per line")
    p.add_argument("--rates", required=True, help="comma list, e.g. 0,2,4,...,20")
    p.add_argument("--kind-sets", default="all",
                   help="semicolon-separated kind lists, e.g. 'sub;ins;del;all'")
    p.add_argument("--tolerance", type=float, default=0.5)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("augment", parents=[common], epilog=BANDS_HELP,
                       help="corrupt page images or emit styled documents")
    p.add_argument("--op", choices=["saltpepper", "skew", "opacity", "style"],
                   required=True)
    p.add_argument("--in", dest="infile", required=True,
                   help="input image (or text file for --op style)")
    p.add_argument("--out", required=True)
    p.add_argument("--density", type=float, default=0.05,
                   help="saltpepper corruption probability per pixel")
    p.add_argument("--angle", type=float, default=5.0,
                   help="skew angle in degrees (|angle| <= 45, or a multiple of 90)")
    p.add_argument("--fill", type=int, default=255, help="skew canvas fill value")
    p.add_argument("--alpha", type=float, default=0.5, help="opacity factor in (0, 1]")
    p.add_argument("--script", help="script tag for the per-script font table")
    p.add_argument("--font-family", default="Times New Roman")
    p.add_argument("--font-size", type=float, default=12.0)
    p.add_argument("--bold", action="store_true")
    p.add_argument("--italic", action="store_true")
    p.add_argument("--letter-spacing", type=float, default=0.0, help="em units")
    p.add_argument("--style-opacity", type=float, default=1.0)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("evaluate", parents=[common], epilog=BANDS_HELP,
                       help="run an OCR engine over a manifest and report per-language CER")
    p.add_argument("--manifest", required=True)
    p.add_argument("--engine", choices=["mock", "command", "http"], default="mock")
    p.add_argument("--engine-name", help="name used in reports and cache keys")
    p.add_argument("--noise-model", help="mock: error model JSON to corrupt transcripts")
    p.add_argument("--noise-rate", type=float, default=0.0, help="mock: target CER")
    p.add_argument("--noise-kinds", default="all", help="mock: sub/ins/del list or 'all'")
    p.add_argument("--command", help="command: argv template with {image} {lang}")
    p.add_argument("--url", help="http: endpoint URL")
    p.add_argument("--api-key-env",
                   help="http: environment variable holding the API key")
    p.add_argument("--json-path", default="text",
                   help="http: dotted path to the text field in the response")
    p.add_argument("--code-table", help="map ISO codes via this engine column")
    p.add_argument("--timeout", type=float, default=120.0, help="per-page seconds")
    p.add_argument("--cache-dir", help="record/replay cache directory")
    p.add_argument("--cache-mode", choices=["auto", "record", "replay"], default="auto")
    p.add_argument("--dataset-label", default="corpus")
    p.add_argument("--aggregate", choices=["micro", "macro"], default="micro")
    p.add_argument("--out", help="report JSON output (default stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", parents=[common], epilog=BANDS_HELP,
                       help="render, summarize, or group-average report files")
    p.add_argument("--in", dest="infile", help="report JSON from evaluate")
    p.add_argument("--benchmark",
                   help="use the shipped benchmark table: engine/dataset, "
                   "e.g. tesseract/flores101")
    p.add_argument("--format", choices=["csv", "json", "markdown"], default="csv")
    p.add_argument("--summary", action="store_true",
                   help="per-band percentages and mean CER per (engine, dataset)")
    p.add_argument("--groups", action="store_true",
                   help="mean CER per script group per (engine, dataset)")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.parallelism < 1:
        parser.error("--parallelism must be >= 1")
    try:
        return args.func(args)
    except EngineError as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    except (ToolkitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
