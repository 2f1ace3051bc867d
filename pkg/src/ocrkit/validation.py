"""Quality gates for annotated corpora: flag articles whose CER sits
unusually far from the rest of their group.

An article is anomalous when its CER deviates from the group mean by
strictly more than sigma_multiplier population standard deviations
(default 2). Groups are per-language by default since CER distributions
differ wildly across scripts.
"""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Manifest
from .errors import GroupTooSmall
from .textmetrics import DEFAULT_POLICY, NormalizationPolicy, cer

SIDES = ("two_sided", "high_only")
GROUPINGS = ("per_language", "global")


@dataclass(frozen=True)
class ValidationConfig:
    sigma_multiplier: float = 2.0
    side: str = "two_sided"
    grouping: str = "per_language"

    def __post_init__(self):
        if not self.sigma_multiplier > 0:
            raise ValueError(f"sigma_multiplier must be > 0, got {self.sigma_multiplier}")
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.grouping not in GROUPINGS:
            raise ValueError(f"grouping must be one of {GROUPINGS}, got {self.grouping!r}")


@dataclass(frozen=True)
class AnomalyFlag:
    article_id: str
    language: str
    cer: float
    mean: float
    stddev: float
    flagged: bool


def flag_anomalies(
    cers: Sequence[tuple[str, str, float]],
    config: ValidationConfig = ValidationConfig(),
) -> list[AnomalyFlag]:
    """One flag record per (article_id, language, cer) input row.

    Statistics use the population standard deviation of each group, so a
    zero-variance group flags nothing. Raises GroupTooSmall for groups
    with fewer than two articles.
    """
    groups: dict[str, list[float]] = {}
    for article_id, language, value in cers:
        if not math.isfinite(value):
            raise ValueError(f"non-finite cer for article {article_id!r}: {value}")
        key = language if config.grouping == "per_language" else "all"
        groups.setdefault(key, []).append(value)

    stats: dict[str, tuple[float, float]] = {}
    for key, values in groups.items():
        if len(values) < 2:
            raise GroupTooSmall(key, len(values))
        stats[key] = (statistics.fmean(values), statistics.pstdev(values))

    flags = []
    for article_id, language, value in cers:
        key = language if config.grouping == "per_language" else "all"
        mean, stddev = stats[key]
        deviation = value - mean
        if config.side == "two_sided":
            deviation = abs(deviation)
        flagged = deviation > config.sigma_multiplier * stddev
        flags.append(
            AnomalyFlag(
                article_id=article_id,
                language=language,
                cer=value,
                mean=mean,
                stddev=stddev,
                flagged=flagged,
            )
        )
    return flags


def manifest_cers(
    manifest: Manifest,
    policy: NormalizationPolicy = DEFAULT_POLICY,
    hypotheses: dict[str, str] | None = None,
) -> list[tuple[str, str, float]]:
    """Score every manifest article that has a hypothesis.

    hypotheses, when given, override the manifest's own hypothesis fields
    by article id (used between re-annotation rounds)."""
    rows = []
    for entry in manifest:
        if hypotheses is not None and entry.article_id in hypotheses:
            hyp = hypotheses[entry.article_id]
        else:
            hyp = manifest.hypothesis(entry)
        if hyp is None:
            continue
        report = cer(manifest.reference(entry), hyp, policy, article_id=entry.article_id)
        rows.append((entry.article_id, entry.language, report.cer))
    return rows


def revalidation_loop(
    manifest: Manifest,
    hypothesis_rounds: Iterable[dict[str, str]],
    config: ValidationConfig = ValidationConfig(),
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> list[list[AnomalyFlag]]:
    """Run the flagging pass over successive re-annotation rounds.

    Each round is a dict of article_id -> updated hypothesis, layered on
    top of the manifest. Returns the anomalous records found in each
    round, stopping after the first clean round. Re-annotation itself
    happens outside this function; callers feed the corrected texts back
    in as the next round.
    """
    rounds: list[list[AnomalyFlag]] = []
    overlay: dict[str, str] = {}
    for updates in hypothesis_rounds:
        overlay.update(updates)
        flags = flag_anomalies(manifest_cers(manifest, policy, overlay), config)
        anomalous = [f for f in flags if f.flagged]
        rounds.append(anomalous)
        if not anomalous:
            break
    return rounds


def write_flags_csv(flags: Sequence[AnomalyFlag], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["article_id", "language", "cer", "mean", "stddev", "flagged"])
        for f in flags:
            writer.writerow(
                [f.article_id, f.language, f"{f.cer:.6g}", f"{f.mean:.6g}", f"{f.stddev:.6g}", f.flagged]
            )
