"""Unicode-aware edit distance, alignment traces, and character error rate.

CER is reported in percent: 100 * edit_distance / reference_length. It can
exceed 100 when the hypothesis inserts heavily. All costs are unit costs
(insert = delete = substitute = 1).

Two alignment paths share one contract: a full O(n*m) matrix with
backtrace for inputs up to MAX_FULL_MATRIX_UNITS units, and a
divide-and-conquer linear-space alignment above that. Backtrace ties are
broken by preferring match > substitute > delete > insert, which keeps
error mining deterministic.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import regex as _regex

from .errors import EmptyCorpus, EmptyReference

MATCH = "match"
SUBSTITUTE = "substitute"
INSERT = "insert"
DELETE = "delete"

EDIT_KINDS = (INSERT, DELETE, SUBSTITUTE)

#: largest input (in units) aligned with the full-matrix path
MAX_FULL_MATRIX_UNITS = 4096

# cell-count thresholds for switching between pure-Python and numpy DP
_NUMPY_CELLS = 40_000
_LINEAR_BASE_CELLS = 4096

_GRAPHEME = _regex.compile(r"\X")
_WS_RUN = re.compile(r"\s+")


@dataclass(frozen=True)
class NormalizationPolicy:
    """How raw text is turned into a sequence of comparable units.

    unicode_form: "nfc" (default) or "none"
    unit: "code_point" (default) or "grapheme_cluster"
    whitespace: "preserve" (default) or "collapse_runs"

    The same policy must be applied to reference and hypothesis.
    """

    unicode_form: str = "nfc"
    unit: str = "code_point"
    whitespace: str = "preserve"

    def __post_init__(self):
        if self.unicode_form not in ("nfc", "none"):
            raise ValueError(f"unicode_form must be 'nfc' or 'none', got {self.unicode_form!r}")
        if self.unit not in ("code_point", "grapheme_cluster"):
            raise ValueError(f"unit must be 'code_point' or 'grapheme_cluster', got {self.unit!r}")
        if self.whitespace not in ("preserve", "collapse_runs"):
            raise ValueError(
                f"whitespace must be 'preserve' or 'collapse_runs', got {self.whitespace!r}"
            )


DEFAULT_POLICY = NormalizationPolicy()


@dataclass(frozen=True)
class EditOp:
    """One step of an alignment.

    ref_index is the position in the reference unit sequence: the consumed
    unit for match/substitute/delete, and the insertion gap (0..N) for
    insert.
    """

    kind: str
    ref_char: str | None
    hyp_char: str | None
    ref_index: int

    def __post_init__(self):
        if self.kind == MATCH:
            ok = self.ref_char is not None and self.ref_char == self.hyp_char
        elif self.kind == SUBSTITUTE:
            ok = (
                self.ref_char is not None
                and self.hyp_char is not None
                and self.ref_char != self.hyp_char
            )
        elif self.kind == INSERT:
            ok = self.ref_char is None and self.hyp_char is not None
        elif self.kind == DELETE:
            ok = self.ref_char is not None and self.hyp_char is None
        else:
            raise ValueError(f"unknown edit kind {self.kind!r}")
        if not ok:
            raise ValueError(f"inconsistent {self.kind} op: {self.ref_char!r} -> {self.hyp_char!r}")


@dataclass(frozen=True)
class Alignment:
    ops: tuple[EditOp, ...]
    distance: int


@dataclass(frozen=True)
class CerReport:
    distance: int
    ref_len: int
    cer: float  # percent; may exceed 100
    counts: dict[str, int]


@dataclass(frozen=True)
class CorpusCerReport:
    micro_cer: float  # 100 * total distance / total reference length
    macro_cer: float  # arithmetic mean of per-article CER
    per_article: tuple[tuple[str, CerReport], ...]


def normalize(text: str, policy: NormalizationPolicy = DEFAULT_POLICY) -> list[str]:
    """Apply a normalization policy and split text into units."""
    if policy.unicode_form == "nfc":
        text = unicodedata.normalize("NFC", text)
    if policy.whitespace == "collapse_runs":
        text = _WS_RUN.sub(" ", text)
    if policy.unit == "grapheme_cluster":
        return _GRAPHEME.findall(text)
    return list(text)


def _strip_common(a: Sequence[str], b: Sequence[str]):
    lo = 0
    hi_a, hi_b = len(a), len(b)
    while lo < hi_a and lo < hi_b and a[lo] == b[lo]:
        lo += 1
    while hi_a > lo and hi_b > lo and a[hi_a - 1] == b[hi_b - 1]:
        hi_a -= 1
        hi_b -= 1
    return a[lo:hi_a], b[lo:hi_b]


def _to_ids(seqs: Iterable[Sequence[str]]) -> list[np.ndarray]:
    table: dict[str, int] = {}
    out = []
    for seq in seqs:
        arr = np.empty(len(seq), dtype=np.int64)
        for k, unit in enumerate(seq):
            arr[k] = table.setdefault(unit, len(table))
        out.append(arr)
    return out


def _distance_py(a: Sequence[str], b: Sequence[str]) -> int:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb))
        prev = cur
    return prev[-1]


def _np_final_row(ref_ids: np.ndarray, hyp_ids: np.ndarray) -> np.ndarray:
    """Last DP row of Levenshtein(ref, hyp), computed in O(m) space.

    The in-row dependency cur[j] = min(cand[j], cur[j-1] + 1) is resolved
    as a prefix minimum of (cand[j] - j), which vectorizes.
    """
    m = hyp_ids.size
    idx = np.arange(m + 1, dtype=np.int32)
    row = idx.copy()
    ext = np.empty(m + 1, dtype=np.int32)
    for i in range(1, ref_ids.size + 1):
        cost = (hyp_ids != ref_ids[i - 1]).astype(np.int32)
        ext[0] = i
        np.minimum(row[1:] + 1, row[:-1] + cost, out=ext[1:])
        row = np.minimum.accumulate(ext - idx) + idx
    return row


def edit_distance(ref: Sequence[str], hyp: Sequence[str]) -> int:
    """Levenshtein distance between two unit sequences, unit costs."""
    a, b = _strip_common(ref, hyp)
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) * len(b) <= _NUMPY_CELLS:
        return _distance_py(a, b)
    ra, rb = _to_ids((a, b))
    return int(_np_final_row(ra, rb)[-1])


def _matrix_py(ref: Sequence[str], hyp: Sequence[str]):
    n, m = len(ref), len(hyp)
    d = [list(range(m + 1))]
    for i in range(1, n + 1):
        prev = d[-1]
        cur = [i] + [0] * m
        ca = ref[i - 1]
        for j in range(1, m + 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != hyp[j - 1]))
        d.append(cur)
    return d


def _matrix_np(ref: Sequence[str], hyp: Sequence[str]) -> np.ndarray:
    rid, hid = _to_ids((ref, hyp))
    n, m = rid.size, hid.size
    idx = np.arange(m + 1, dtype=np.int32)
    d = np.empty((n + 1, m + 1), dtype=np.int32)
    d[0] = idx
    ext = np.empty(m + 1, dtype=np.int32)
    for i in range(1, n + 1):
        prev = d[i - 1]
        cost = (hid != rid[i - 1]).astype(np.int32)
        ext[0] = i
        np.minimum(prev[1:] + 1, prev[:-1] + cost, out=ext[1:])
        d[i] = np.minimum.accumulate(ext - idx) + idx
    return d


def _backtrace(d, ref: Sequence[str], hyp: Sequence[str]) -> list[EditOp]:
    """Walk a finished cost matrix from the corner, preferring
    match > substitute > delete > insert on cost ties."""
    ops: list[EditOp] = []
    i, j = len(ref), len(hyp)
    while i > 0 or j > 0:
        here = d[i][j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and d[i - 1][j - 1] == here:
            ops.append(EditOp(MATCH, ref[i - 1], hyp[j - 1], i - 1))
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and d[i - 1][j - 1] + 1 == here:
            ops.append(EditOp(SUBSTITUTE, ref[i - 1], hyp[j - 1], i - 1))
            i -= 1
            j -= 1
        elif i > 0 and d[i - 1][j] + 1 == here:
            ops.append(EditOp(DELETE, ref[i - 1], None, i - 1))
            i -= 1
        else:
            ops.append(EditOp(INSERT, None, hyp[j - 1], i))
            j -= 1
    ops.reverse()
    return ops


def _align_matrix(ref: Sequence[str], hyp: Sequence[str]) -> list[EditOp]:
    if len(ref) * len(hyp) <= _NUMPY_CELLS:
        d = _matrix_py(ref, hyp)
    else:
        d = _matrix_np(ref, hyp)
    return _backtrace(d, ref, hyp)


def _align_linear(ref: Sequence[str], hyp: Sequence[str]) -> list[EditOp]:
    """Divide-and-conquer alignment in linear space (Hirschberg split)."""
    rid, hid = _to_ids((ref, hyp))
    ops: list[EditOp] = []

    def rec(r0: int, r1: int, h0: int, h1: int) -> None:
        n, m = r1 - r0, h1 - h0
        if n == 0:
            for j in range(h0, h1):
                ops.append(EditOp(INSERT, None, hyp[j], r0))
            return
        if m == 0:
            for i in range(r0, r1):
                ops.append(EditOp(DELETE, ref[i], None, i))
            return
        if n == 1 or m == 1 or n * m <= _LINEAR_BASE_CELLS:
            for op in _align_matrix(ref[r0:r1], hyp[h0:h1]):
                ops.append(EditOp(op.kind, op.ref_char, op.hyp_char, op.ref_index + r0))
            return
        mid = r0 + n // 2
        fwd = _np_final_row(rid[r0:mid], hid[h0:h1])
        bwd = _np_final_row(rid[mid:r1][::-1], hid[h0:h1][::-1])
        split = h0 + int(np.argmin(fwd + bwd[::-1]))
        rec(r0, mid, h0, split)
        rec(mid, r1, split, h1)

    rec(0, len(ref), 0, len(hyp))
    return ops


def align(ref: Sequence[str], hyp: Sequence[str]) -> Alignment:
    """Optimal edit alignment between two unit sequences.

    The returned trace replays the reference into the hypothesis, and its
    non-match op count equals edit_distance(ref, hyp).
    """
    if max(len(ref), len(hyp)) <= MAX_FULL_MATRIX_UNITS:
        ops = _align_matrix(ref, hyp)
    else:
        ops = _align_linear(ref, hyp)
    distance = sum(1 for op in ops if op.kind != MATCH)
    return Alignment(ops=tuple(ops), distance=distance)


def replay(alignment: Alignment, ref: Sequence[str]) -> list[str]:
    """Apply an alignment's ops to the reference, reconstructing the
    hypothesis. Used by tests and by error-model sanity checks."""
    out: list[str] = []
    consumed = 0
    for op in alignment.ops:
        if op.kind == MATCH:
            out.append(ref[consumed])
            consumed += 1
        elif op.kind == SUBSTITUTE:
            out.append(op.hyp_char)
            consumed += 1
        elif op.kind == DELETE:
            consumed += 1
        else:
            out.append(op.hyp_char)
    if consumed != len(ref):
        raise ValueError("alignment does not span the reference")
    return out


def _op_counts(ops: Iterable[EditOp]) -> dict[str, int]:
    counts = {MATCH: 0, SUBSTITUTE: 0, INSERT: 0, DELETE: 0}
    for op in ops:
        counts[op.kind] += 1
    return counts


def cer(
    ref: str,
    hyp: str,
    policy: NormalizationPolicy = DEFAULT_POLICY,
    article_id: str | None = None,
) -> CerReport:
    """Character error rate of hypothesis against reference, in percent.

    Raises EmptyReference when the reference normalizes to zero units.
    """
    ref_units = normalize(ref, policy)
    hyp_units = normalize(hyp, policy)
    if not ref_units:
        raise EmptyReference(article_id)
    alignment = align(ref_units, hyp_units)
    return CerReport(
        distance=alignment.distance,
        ref_len=len(ref_units),
        cer=100.0 * alignment.distance / len(ref_units),
        counts=_op_counts(alignment.ops),
    )


def corpus_cer(
    pairs: Sequence[tuple[str, str]],
    policy: NormalizationPolicy = DEFAULT_POLICY,
    ids: Sequence[str] | None = None,
) -> CorpusCerReport:
    """Micro and macro CER over (reference, hypothesis) pairs.

    micro = 100 * sum(distance) / sum(ref_len); macro = mean per-article CER.
    """
    if not pairs:
        raise EmptyCorpus("corpus")
    if ids is None:
        ids = [str(k) for k in range(len(pairs))]
    per_article = []
    total_distance = 0
    total_len = 0
    for article_id, (ref, hyp) in zip(ids, pairs):
        report = cer(ref, hyp, policy, article_id=article_id)
        per_article.append((article_id, report))
        total_distance += report.distance
        total_len += report.ref_len
    macro = sum(r.cer for _, r in per_article) / len(per_article)
    return CorpusCerReport(
        micro_cer=100.0 * total_distance / total_len,
        macro_cer=macro,
        per_article=tuple(per_article),
    )
