"""Controlled noise injection: apply a mined error model to clean text
until a target CER is reached, and build rate/kind sweep datasets.

A target rate of R percent over N reference units means E = round(R/100
* N) planned edits (half rounds up). Each edit first draws an error
entry with probability proportional to its frequency among the entries
that still have an eligible site, then draws the site uniformly: an
unused occurrence of the source unit for delete/substitute, an unused
gap (0..N) for insert. At most one edit lands on any position and one
insertion in any gap, so planned edits never cancel each other out.

Positions index the normalized unit sequence of the original text.
Application walks the text once, equivalent to applying edits at
descending original indices; earlier edits never shift later positions.
The achieved CER is then measured, not assumed: adjacent edits can
admit a cheaper alignment, and a warning flag records misses beyond the
configured tolerance.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errormodel import ErrorEntry, ErrorModel, filter_kinds
from .errors import PlanMismatch, Unreachable
from .textmetrics import (
    DEFAULT_POLICY,
    DELETE,
    EDIT_KINDS,
    INSERT,
    SUBSTITUTE,
    NormalizationPolicy,
    cer,
    normalize,
)

_KIND_SHORT = {DELETE: "del", INSERT: "ins", SUBSTITUTE: "sub"}


@dataclass(frozen=True)
class InjectionConfig:
    target_cer: float
    kinds: tuple[str, ...] = EDIT_KINDS
    seed: int = 0
    tolerance: float = 0.5

    def __post_init__(self):
        if not 0 <= self.target_cer <= 100:
            raise ValueError(f"target_cer must be in [0, 100], got {self.target_cer}")
        unknown = set(self.kinds) - set(EDIT_KINDS)
        if unknown:
            raise ValueError(f"unknown kinds {sorted(unknown)}")
        if not self.kinds:
            raise ValueError("kinds must be non-empty")
        if self.tolerance < 0:
            raise ValueError(f"tolerance must be >= 0, got {self.tolerance}")


@dataclass(frozen=True)
class PlannedEdit:
    """position is an index into the original normalized units for
    delete/substitute, and a gap index 0..N for insert."""

    position: int
    entry: ErrorEntry


@dataclass(frozen=True)
class EditPlan:
    edits: tuple[PlannedEdit, ...]
    n_units: int


@dataclass(frozen=True)
class InjectionResult:
    noisy_text: str
    achieved_cer: float
    plan: EditPlan
    seed: int
    warning: bool  # set when |achieved - target| exceeded the tolerance


def edit_count(target_cer: float, n_units: int) -> int:
    """Planned number of edits: round(target/100 * N), half away from zero."""
    return math.floor(target_cer * n_units / 100.0 + 0.5)


def kinds_label(kinds: Iterable[str]) -> str:
    return "-".join(sorted(_KIND_SHORT[k] for k in set(kinds)))


def plan_edits(
    text: str,
    model: ErrorModel,
    config: InjectionConfig,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> EditPlan:
    """Sample an edit plan for one text. Deterministic given config.seed.

    Raises Unreachable when the text cannot host E edits: every
    delete/substitute needs a distinct occurrence of its source unit and
    every insert a distinct gap.
    """
    units = normalize(text, policy)
    if not units:
        raise ValueError("text is empty after normalization")
    n = len(units)
    target_e = edit_count(config.target_cer, n)
    if target_e == 0:
        return EditPlan(edits=(), n_units=n)

    entries = filter_kinds(model, config.kinds).entries

    source_units = {e.source for e in entries if e.kind != INSERT}
    pools: dict[str, list[int]] = {u: [] for u in source_units}
    for pos, unit in enumerate(units):
        if unit in pools:
            pools[unit].append(pos)
    has_inserts = any(e.kind == INSERT for e in entries)
    gaps = list(range(n + 1)) if has_inserts else []

    capacity = sum(len(p) for p in pools.values()) + len(gaps)
    if target_e > capacity:
        raise Unreachable(target_e, capacity)

    rng = random.Random(config.seed)
    edits: list[PlannedEdit] = []

    def pop_uniform(pool: list[int]) -> int:
        k = rng.randrange(len(pool))
        pool[k], pool[-1] = pool[-1], pool[k]
        return pool.pop()

    for _ in range(target_e):
        eligible = [
            e
            for e in entries
            if (gaps if e.kind == INSERT else pools[e.source])
        ]
        total = sum(e.freq for e in eligible)
        r = rng.random() * total
        acc = 0.0
        chosen = eligible[-1]
        for e in eligible:
            acc += e.freq
            if r < acc:
                chosen = e
                break
        pool = gaps if chosen.kind == INSERT else pools[chosen.source]
        edits.append(PlannedEdit(position=pop_uniform(pool), entry=chosen))

    return EditPlan(edits=tuple(edits), n_units=n)


def apply_plan(
    text: str,
    plan: EditPlan,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> str:
    """Apply a plan to the text it was made for. Raises PlanMismatch when
    a position falls outside the text or its unit no longer matches the
    planned source."""
    units = normalize(text, policy)
    n = len(units)
    if n != plan.n_units:
        raise PlanMismatch(f"plan built for {plan.n_units} units, text has {n}")

    inserts: dict[int, str] = {}
    replacements: dict[int, tuple[str, str | None]] = {}
    for edit in plan.edits:
        entry = edit.entry
        if entry.kind == INSERT:
            if not 0 <= edit.position <= n or edit.position in inserts:
                raise PlanMismatch(f"bad insert gap {edit.position}")
            inserts[edit.position] = entry.target
        else:
            if not 0 <= edit.position < n or edit.position in replacements:
                raise PlanMismatch(f"bad edit position {edit.position}")
            if units[edit.position] != entry.source:
                raise PlanMismatch(
                    f"position {edit.position} holds {units[edit.position]!r}, "
                    f"plan expects {entry.source!r}"
                )
            replacements[edit.position] = (entry.kind, entry.target)

    out: list[str] = []
    for i in range(n + 1):
        if i in inserts:
            out.append(inserts[i])
        if i == n:
            break
        action = replacements.get(i)
        if action is None:
            out.append(units[i])
        elif action[0] == SUBSTITUTE:
            out.append(action[1])
        # delete: emit nothing
    return "".join(out)


def inject(
    text: str,
    model: ErrorModel,
    config: InjectionConfig,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> InjectionResult:
    """Plan, apply, then measure. The reported CER comes from a fresh
    alignment against the original, so interacting edits are priced at
    their true (possibly cheaper) cost."""
    plan = plan_edits(text, model, config, policy)
    noisy = apply_plan(text, plan, policy)
    report = cer(text, noisy, policy)
    achieved = report.cer
    warning = abs(achieved - config.target_cer) > config.tolerance
    return InjectionResult(
        noisy_text=noisy,
        achieved_cer=achieved,
        plan=plan,
        seed=config.seed,
        warning=warning,
    )


def derive_seed(base_seed: int, rate: float, kinds: Iterable[str], index: int) -> int:
    """Per-text sweep seed: base XOR a hash of (rate, kind set, index).

    Texts become independent of execution order, so parallel sweeps are
    byte-identical to serial ones."""
    label = f"{rate:g}|{kinds_label(kinds)}|{index}"
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return (base_seed ^ int.from_bytes(digest[:8], "big")) & 0xFFFFFFFFFFFFFFFF


def _rate_label(rate: float) -> str:
    return f"{rate:g}".replace(".", "p")


def _sweep_one(
    text: str,
    model: ErrorModel,
    rate: float,
    kinds: tuple[str, ...],
    seed: int,
    index: int,
    tolerance: float,
    policy: NormalizationPolicy,
):
    config = InjectionConfig(
        target_cer=rate,
        kinds=kinds,
        seed=derive_seed(seed, rate, kinds, index),
        tolerance=tolerance,
    )
    units = normalize(text, policy)
    try:
        result = inject(text, model, config, policy)
    except Unreachable as exc:
        record = {
            "index": index,
            "error": "unreachable",
            "requested_edits": exc.requested,
            "max_achievable": exc.max_achievable,
            "achieved_cer": 0.0,
        }
        return "".join(units), record, 0, len(units)
    record = {
        "index": index,
        "achieved_cer": result.achieved_cer,
        "edits": len(result.plan.edits),
        "warning": result.warning,
    }
    distance = round(result.achieved_cer * len(units) / 100.0)
    return result.noisy_text, record, distance, len(units)


def sweep(
    corpus: Sequence[str],
    model: ErrorModel,
    rates: Sequence[float],
    kind_sets: Sequence[Sequence[str]],
    seed: int,
    out_dir: str,
    tolerance: float = 0.5,
    policy: NormalizationPolicy = DEFAULT_POLICY,
    parallelism: int = 1,
) -> list[str]:
    """Write one noisy corpus file per (rate, kind set), one text per
    line, plus a .metrics.json sidecar with per-text achieved CER and
    the corpus micro CER. Texts that cannot reach their edit count are
    emitted unchanged and recorded in the sidecar instead of aborting.

    Returns the sorted list of written file paths. Output bytes depend
    only on (corpus, model, rates, kind_sets, seed), not on parallelism.
    """
    os.makedirs(out_dir, exist_ok=True)
    written: list[str] = []
    for rate in rates:
        for kinds in kind_sets:
            kinds = tuple(kinds)
            jobs = [
                (text, model, rate, kinds, seed, index, tolerance, policy)
                for index, text in enumerate(corpus)
            ]
            if parallelism > 1:
                with ThreadPoolExecutor(max_workers=parallelism) as pool:
                    results = list(pool.map(lambda args: _sweep_one(*args), jobs))
            else:
                results = [_sweep_one(*args) for args in jobs]

            stem = f"noisy_cer{_rate_label(rate)}_{kinds_label(kinds)}"
            txt_path = os.path.join(out_dir, stem + ".txt")
            metrics_path = os.path.join(out_dir, stem + ".metrics.json")
            total_distance = sum(r[2] for r in results)
            total_len = sum(r[3] for r in results)
            sidecar = {
                "rate": rate,
                "kinds": sorted(kinds),
                "seed": seed,
                "rate_scope": "per_text",
                "micro_cer": 100.0 * total_distance / total_len if total_len else 0.0,
                "texts": [r[1] for r in results],
            }
            with open(txt_path, "w", encoding="utf-8") as fh:
                for noisy, _, _, _ in results:
                    fh.write(noisy + "\n")
            with open(metrics_path, "w", encoding="utf-8") as fh:
                json.dump(sidecar, fh, ensure_ascii=True, indent=2, sort_keys=True)
                fh.write("\n")
            written.extend([txt_path, metrics_path])
    return sorted(written)


def export_mt_pairs(
    pairs: Sequence[tuple[str, str]],
    src_path: str,
    tgt_path: str,
) -> None:
    """Write (noisy, clean) pairs as line-aligned source/target files for
    downstream translation tooling. pairs hold (clean, noisy)."""
    with open(src_path, "w", encoding="utf-8") as src, open(tgt_path, "w", encoding="utf-8") as tgt:
        for clean, noisy in pairs:
            src.write(noisy + "\n")
            tgt.write(clean + "\n")
