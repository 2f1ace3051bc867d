"""Mine single-character OCR error statistics from (reference, hypothesis)
pairs and select the most frequent ones.

The model's unit of observation is a single Levenshtein edit op: an
insertion, deletion, or substitution of one text unit. Multi-character
confusions show up as several single-unit entries. Frequencies are
relative to the total number of errors in the model, so they form a
sampling distribution for the injection stage.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import EmptyModel, EmptyReference
from .textmetrics import (
    DEFAULT_POLICY,
    DELETE,
    EDIT_KINDS,
    INSERT,
    MATCH,
    SUBSTITUTE,
    NormalizationPolicy,
    align,
    normalize,
)


@dataclass(frozen=True)
class ErrorEntry:
    """One error type. source is the reference unit (delete/substitute),
    target the hypothesis unit (insert/substitute)."""

    kind: str
    source: str | None
    target: str | None
    count: int
    freq: float

    def __post_init__(self):
        if self.kind == SUBSTITUTE:
            ok = self.source is not None and self.target is not None and self.source != self.target
        elif self.kind == INSERT:
            ok = self.source is None and self.target is not None
        elif self.kind == DELETE:
            ok = self.source is not None and self.target is None
        else:
            raise ValueError(f"unknown error kind {self.kind!r}")
        if not ok:
            raise ValueError(f"inconsistent {self.kind} entry: {self.source!r} -> {self.target!r}")
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if not 0 < self.freq <= 1:
            raise ValueError(f"freq must be in (0, 1], got {self.freq}")

    def key(self) -> tuple[str, str, str]:
        return (self.kind, self.source or "", self.target or "")


@dataclass(frozen=True)
class ErrorModel:
    """Entries sorted by count descending, ties broken by
    (kind, source, target) code-point order. total_error_count is the
    number of errors observed at mining time and survives truncation."""

    language: str
    entries: tuple[ErrorEntry, ...]
    total_error_count: int


def _sorted_entries(entries: Iterable[ErrorEntry]) -> tuple[ErrorEntry, ...]:
    return tuple(sorted(entries, key=lambda e: (-e.count, e.key())))


def _renormalized(entries: Sequence[ErrorEntry]) -> tuple[ErrorEntry, ...]:
    kept_total = sum(e.count for e in entries)
    return tuple(replace(e, freq=e.count / kept_total) for e in entries)


def mine(
    pairs: Sequence[tuple[str, str]],
    policy: NormalizationPolicy = DEFAULT_POLICY,
    language: str = "und",
) -> ErrorModel:
    """Aggregate error counts over the deterministic alignments of all
    pairs. Identical pairs contribute nothing; a corpus of identical
    pairs yields an empty model."""
    counts: dict[tuple[str, str | None, str | None], int] = {}
    for k, (ref, hyp) in enumerate(pairs):
        ref_units = normalize(ref, policy)
        hyp_units = normalize(hyp, policy)
        if not ref_units:
            raise EmptyReference(str(k))
        if ref_units == hyp_units:
            continue
        for op in align(ref_units, hyp_units).ops:
            if op.kind == MATCH:
                continue
            key = (op.kind, op.ref_char, op.hyp_char)
            counts[key] = counts.get(key, 0) + 1
    total = sum(counts.values())
    entries = [
        ErrorEntry(kind=kind, source=source, target=target, count=count, freq=count / total)
        for (kind, source, target), count in counts.items()
    ]
    return ErrorModel(language=language, entries=_sorted_entries(entries), total_error_count=total)


def top_k(model: ErrorModel, k: int) -> ErrorModel:
    """First k entries in the model's sort order, frequencies
    re-normalized over the kept entries. k beyond the entry count keeps
    everything. total_error_count is preserved for provenance."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    kept = model.entries[:k]
    if not kept:
        return model
    return replace(model, entries=_renormalized(kept))


def filter_kinds(model: ErrorModel, kinds: Iterable[str]) -> ErrorModel:
    """Restrict the model to a subset of {insert, delete, substitute},
    re-normalizing frequencies. Raises EmptyModel if nothing survives."""
    wanted = set(kinds)
    unknown = wanted - set(EDIT_KINDS)
    if unknown:
        raise ValueError(f"unknown error kinds {sorted(unknown)}")
    if not wanted:
        raise ValueError("kinds must be non-empty")
    kept = [e for e in model.entries if e.kind in wanted]
    if not kept:
        raise EmptyModel(f"no {'/'.join(sorted(wanted))} entries in model for {model.language!r}")
    return replace(model, entries=_renormalized(kept))


def save_model(model: ErrorModel, path: str) -> None:
    """Write the model as JSON with non-ASCII units escaped, so files for
    any script diff cleanly in ASCII tooling."""
    payload = {
        "language": model.language,
        "total_error_count": model.total_error_count,
        "entries": [
            {
                "kind": e.kind,
                "source": e.source,
                "target": e.target,
                "count": e.count,
                "freq": e.freq,
            }
            for e in model.entries
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=True, indent=2)
        fh.write("\n")


def load_model(path: str) -> ErrorModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    entries = tuple(
        ErrorEntry(
            kind=item["kind"],
            source=item["source"],
            target=item["target"],
            count=item["count"],
            freq=item["freq"],
        )
        for item in payload["entries"]
    )
    return ErrorModel(
        language=payload["language"],
        entries=entries,
        total_error_count=payload["total_error_count"],
    )
