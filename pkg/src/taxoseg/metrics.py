"""Pk and WindowDiff scoring of hypothesis segmentations.

Both metrics slide a probe window of width k across the document and
count, per position, whether the hypothesis disagrees with the reference:
Pk compares only "same segment or not" at the window ends, WindowDiff
compares the number of boundaries inside the window, so WindowDiff also
penalises near-misses that Pk's indicator cannot see. Scores are error
rates in [0, 1]; 0 means the probed structure agrees everywhere.

The window width defaults to half the mean reference segment length
(rounded, minimum 1), computed per document; a fixed k can be forced for
cross-corpus comparability.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import FormatError
from .segmentation import Segmentation

K_POLICIES = ("half-mean-segment", "fixed")


@dataclass(frozen=True)
class EvalConfig:
    k: int | None = None
    k_policy: str = "half-mean-segment"

    def __post_init__(self):
        if self.k_policy not in K_POLICIES:
            raise ValueError(f"k_policy must be one of {K_POLICIES}, got {self.k_policy!r}")
        if self.k_policy == "fixed" and (self.k is None or self.k < 1):
            raise ValueError("fixed k_policy requires k >= 1")


def choose_k(ref_set: list[Segmentation]) -> int:
    """Half the mean segment length over all reference segments, min 1."""
    if not ref_set:
        raise ValueError("choose_k needs at least one reference segmentation")
    total_sentences = sum(r.sentence_count for r in ref_set)
    total_segments = sum(len(r.boundaries) + 1 for r in ref_set)
    return max(1, round(total_sentences / total_segments / 2.0))


def _resolve_k(ref: Segmentation, cfg: EvalConfig) -> int:
    k = cfg.k if cfg.k_policy == "fixed" else choose_k([ref])
    if not 1 <= k < ref.sentence_count:
        raise ValueError(
            f"window width k={k} invalid for a {ref.sentence_count}-sentence document"
        )
    return k


def pk_score(ref: Segmentation, hyp: Segmentation, cfg: EvalConfig) -> float:
    """Probability that a width-k probe disagrees about end-sentence co-segmentation."""
    K = ref.sentence_count
    if hyp.sentence_count != K:
        raise FormatError(
            f"sentence count mismatch: ref has {K}, hyp has {hyp.sentence_count}"
        )
    k = _resolve_k(ref, cfg)
    pr = ref._prefix
    if pr is None:
        pr = ref.prefix_counts()
    ph = hyp._prefix
    if ph is None:
        ph = hyp.prefix_counts()
    err = 0
    for i in range(K - k):
        if ((pr[i + k] - pr[i]) == 0) != ((ph[i + k] - ph[i]) == 0):
            err += 1
    return err / (K - k)


def window_diff_score(ref: Segmentation, hyp: Segmentation, cfg: EvalConfig) -> float:
    """Fraction of width-k probes whose boundary counts differ."""
    K = ref.sentence_count
    if hyp.sentence_count != K:
        raise FormatError(
            f"sentence count mismatch: ref has {K}, hyp has {hyp.sentence_count}"
        )
    k = _resolve_k(ref, cfg)
    pr = ref._prefix
    if pr is None:
        pr = ref.prefix_counts()
    ph = hyp._prefix
    if ph is None:
        ph = hyp.prefix_counts()
    err = 0
    for i in range(K - k):
        if (pr[i + k] - pr[i]) != (ph[i + k] - ph[i]):
            err += 1
    return err / (K - k)


@dataclass(frozen=True)
class DocScore:
    doc_id: str
    pk: float
    window_diff: float
    k: int


@dataclass(frozen=True)
class EvalReport:
    pk: float
    window_diff: float
    k_used: int
    per_document: tuple[DocScore, ...] = field(default_factory=tuple)


def evaluate_documents(
    refs: Mapping[str, Segmentation],
    hyps: Mapping[str, Segmentation],
    cfg: EvalConfig,
) -> EvalReport:
    """Score every matched document and aggregate by unweighted mean."""
    missing = sorted(set(refs) - set(hyps))
    if missing:
        raise FormatError(f"no hypothesis for document {missing[0]!r}")
    extra = sorted(set(hyps) - set(refs))
    if extra:
        raise FormatError(f"no reference for document {extra[0]!r}")
    if not refs:
        raise FormatError("no documents to evaluate")
    scores = []
    for doc_id in sorted(refs):
        ref, hyp = refs[doc_id], hyps[doc_id]
        k = _resolve_k(ref, cfg)
        per_doc = EvalConfig(k=k, k_policy="fixed")
        scores.append(
            DocScore(
                doc_id=doc_id,
                pk=pk_score(ref, hyp, per_doc),
                window_diff=window_diff_score(ref, hyp, per_doc),
                k=k,
            )
        )
    n = len(scores)
    mean_k = sum(s.k for s in scores) / n
    return EvalReport(
        pk=sum(s.pk for s in scores) / n,
        window_diff=sum(s.window_diff for s in scores) / n,
        k_used=cfg.k if cfg.k_policy == "fixed" else int(round(mean_k)),
        per_document=tuple(scores),
    )


def render_report(report: EvalReport) -> str:
    """Tab-separated rows (doc_id, pk, wd, k) plus an aggregate line."""
    lines = ["doc_id\tpk\twindow_diff\tk"]
    for s in report.per_document:
        lines.append(f"{s.doc_id}\t{s.pk:.6f}\t{s.window_diff:.6f}\t{s.k}")
    lines.append(f"MEAN\t{report.pk:.6f}\t{report.window_diff:.6f}\t{report.k_used}")
    return "\n".join(lines) + "\n"
