"""Corpus-scale OCR quality evaluation, character-level error mining,
controlled noise injection, and page-image augmentation."""

from .textmetrics import (
    DEFAULT_POLICY,
    Alignment,
    CerReport,
    CorpusCerReport,
    EditOp,
    NormalizationPolicy,
    align,
    cer,
    corpus_cer,
    edit_distance,
    normalize,
)
from .corpus import ArticlePair, Manifest, ManifestWarning, load_manifest, save_manifest, validate_manifest
from .validation import AnomalyFlag, ValidationConfig, flag_anomalies, revalidation_loop
from .errormodel import ErrorEntry, ErrorModel, filter_kinds, load_model, mine, save_model, top_k
from .inject import EditPlan, InjectionConfig, InjectionResult, apply_plan, inject, plan_edits, sweep
from .augment import PageImage, StyleSpec, emit_styled_document, opacity, salt_pepper, skew
from .engines import (
    CachedAdapter,
    EngineAdapter,
    ExternalCommandAdapter,
    HttpAdapter,
    MockAdapter,
    OcrResult,
    ReplayCache,
    run_evaluation,
)
from .languages import LanguageInfo, group_of, lookup, map_language_code
from .report import (
    LanguageReport,
    benchmark_reports,
    classify,
    emit,
    group_averages,
    load_benchmark_table,
    summarize,
)
from . import errors

__version__ = "0.1.0"
