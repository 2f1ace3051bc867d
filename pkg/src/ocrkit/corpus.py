"""Corpus manifests: JSON-lines files tying article ids to reference text,
page images, and optional OCR hypotheses.

One JSON object per line. Required fields: "id" and "lang", plus exactly
one of "ref_text" (inline) or "ref_path" (relative to the manifest file).
Optional: "hyp_text" or "hyp_path" (at most one), and "image_path".
Blank lines are allowed and skipped; ids must be unique per manifest.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from typing import Iterator

from .errors import DuplicateId, MalformedLine, MissingFile
from .languages import UNKNOWN_GROUP, group_of

_TEXT_OR_PATH = (("ref_text", "ref_path"), ("hyp_text", "hyp_path"))
_KNOWN_FIELDS = {"id", "lang", "ref_text", "ref_path", "hyp_text", "hyp_path", "image_path"}


@dataclass(frozen=True)
class ArticlePair:
    """One manifest row. Text fields hold inline content; *_path fields
    hold manifest-relative paths to be resolved against base_dir."""

    article_id: str
    language: str
    ref_text: str | None = None
    ref_path: str | None = None
    hyp_text: str | None = None
    hyp_path: str | None = None
    image_path: str | None = None


@dataclass(frozen=True)
class Manifest:
    """An immutable sequence of article pairs plus the directory their
    relative paths resolve against."""

    entries: tuple[ArticlePair, ...]
    base_dir: str = "."

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ArticlePair]:
        return iter(self.entries)

    def resolve(self, rel_path: str) -> str:
        return os.path.normpath(os.path.join(self.base_dir, rel_path))

    def reference(self, entry: ArticlePair) -> str:
        if entry.ref_text is not None:
            return entry.ref_text
        return self._read(entry.ref_path, entry.article_id)

    def hypothesis(self, entry: ArticlePair) -> str | None:
        if entry.hyp_text is not None:
            return entry.hyp_text
        if entry.hyp_path is None:
            return None
        return self._read(entry.hyp_path, entry.article_id)

    def _read(self, rel_path: str, article_id: str) -> str:
        path = self.resolve(rel_path)
        try:
            with open(path, encoding="utf-8") as fh:
                return fh.read()
        except FileNotFoundError:
            raise MissingFile(path, article_id) from None

    def languages(self) -> list[str]:
        seen = dict.fromkeys(e.language for e in self.entries)
        return list(seen)

    def pairs(self) -> list[tuple[str, str, str, str | None]]:
        """Materialize (article_id, language, reference, hypothesis) rows."""
        return [
            (e.article_id, e.language, self.reference(e), self.hypothesis(e))
            for e in self.entries
        ]

    def with_hypotheses(self, by_id: dict[str, str]) -> "Manifest":
        """A copy where listed articles carry the given inline hypotheses."""
        entries = []
        for e in self.entries:
            if e.article_id in by_id:
                e = replace(e, hyp_text=by_id[e.article_id], hyp_path=None)
            entries.append(e)
        return Manifest(entries=tuple(entries), base_dir=self.base_dir)


def _parse_line(raw: str, path: str, line_no: int) -> ArticlePair:
    try:
        record = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedLine(path, line_no, f"invalid JSON: {exc.msg}") from None
    if not isinstance(record, dict):
        raise MalformedLine(path, line_no, "line is not a JSON object")
    for key in ("id", "lang"):
        if not isinstance(record.get(key), str) or not record[key]:
            raise MalformedLine(path, line_no, f"missing or empty {key!r}")
    unknown = set(record) - _KNOWN_FIELDS
    if unknown:
        raise MalformedLine(path, line_no, f"unknown fields {sorted(unknown)}")
    for text_key, path_key in _TEXT_OR_PATH:
        if record.get(text_key) is not None and record.get(path_key) is not None:
            raise MalformedLine(path, line_no, f"both {text_key!r} and {path_key!r} given")
    if record.get("ref_text") is None and record.get("ref_path") is None:
        raise MalformedLine(path, line_no, "need one of 'ref_text' or 'ref_path'")
    for key in _KNOWN_FIELDS - {"id", "lang"}:
        value = record.get(key)
        if value is not None and not isinstance(value, str):
            raise MalformedLine(path, line_no, f"{key!r} must be a string")
    return ArticlePair(
        article_id=record["id"],
        language=record["lang"],
        ref_text=record.get("ref_text"),
        ref_path=record.get("ref_path"),
        hyp_text=record.get("hyp_text"),
        hyp_path=record.get("hyp_path"),
        image_path=record.get("image_path"),
    )


def load_manifest(path: str) -> Manifest:
    """Parse a JSON-lines manifest. Malformed lines and duplicate ids
    raise immediately with the offending line number."""
    entries: list[ArticlePair] = []
    seen: set[str] = set()
    try:
        fh = open(path, encoding="utf-8")
    except FileNotFoundError:
        raise MissingFile(path) from None
    with fh:
        for line_no, raw in enumerate(fh, 1):
            if not raw.strip():
                continue
            entry = _parse_line(raw, path, line_no)
            if entry.article_id in seen:
                raise DuplicateId(entry.article_id, path, line_no)
            seen.add(entry.article_id)
            entries.append(entry)
    return Manifest(entries=tuple(entries), base_dir=os.path.dirname(os.path.abspath(path)))


def save_manifest(manifest: Manifest, path: str) -> None:
    """Write a manifest back out in canonical form: one compact JSON
    object per line, fields in a fixed order, None fields omitted.
    Loading the result yields equal entries."""
    order = ("id", "lang", "ref_text", "ref_path", "hyp_text", "hyp_path", "image_path")
    with open(path, "w", encoding="utf-8") as fh:
        for e in manifest.entries:
            record = {
                "id": e.article_id,
                "lang": e.language,
                "ref_text": e.ref_text,
                "ref_path": e.ref_path,
                "hyp_text": e.hyp_text,
                "hyp_path": e.hyp_path,
                "image_path": e.image_path,
            }
            slim = {k: record[k] for k in order if record[k] is not None}
            fh.write(json.dumps(slim, ensure_ascii=False, separators=(", ", ": ")) + "\n")


@dataclass(frozen=True)
class ManifestWarning:
    code: str  # "unknown-group" | "empty-reference" | "empty-hypothesis"
    article_id: str
    language: str
    detail: str


def validate_manifest(manifest: Manifest) -> list[ManifestWarning]:
    """Non-fatal checks: languages outside the known table, references
    that are empty after stripping, hypotheses present but empty.
    Referenced files are read here, so MissingFile can surface too."""
    warnings: list[ManifestWarning] = []
    for e in manifest.entries:
        if group_of(e.language) == UNKNOWN_GROUP:
            warnings.append(
                ManifestWarning(
                    code="unknown-group",
                    article_id=e.article_id,
                    language=e.language,
                    detail=f"language {e.language!r} is not in the known table",
                )
            )
        if not manifest.reference(e).strip():
            warnings.append(
                ManifestWarning(
                    code="empty-reference",
                    article_id=e.article_id,
                    language=e.language,
                    detail="reference text is empty",
                )
            )
        hyp = manifest.hypothesis(e)
        if hyp is not None and not hyp.strip():
            warnings.append(
                ManifestWarning(
                    code="empty-hypothesis",
                    article_id=e.article_id,
                    language=e.language,
                    detail="hypothesis present but empty",
                )
            )
    return warnings
