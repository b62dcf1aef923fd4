"""Segmented-document files and synthetic benchmark generation.

The on-disk format is the classic concatenation benchmark layout: one
sentence per line, segments separated by a marker line of ten '='
characters, with a marker opening and closing the file. The generator
builds each sample by concatenating the first n sentences of
``num_segments`` distinct source documents, n drawn uniformly per segment.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .errors import FormatError
from .segmentation import Segmentation

BOUNDARY_MARKER = "=========="


@dataclass(frozen=True)
class SegmentedDocument:
    doc_id: str
    segments: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.segments:
            raise FormatError(f"document {self.doc_id!r} has no segments")
        if any(not seg for seg in self.segments):
            raise FormatError(f"document {self.doc_id!r} has an empty segment")

    @property
    def sentences(self) -> list[str]:
        return [s for seg in self.segments for s in seg]

    @property
    def sentence_count(self) -> int:
        return sum(len(seg) for seg in self.segments)


@dataclass(frozen=True)
class GenSpec:
    """Parameters for one synthetic subset: segment count, n range, size."""

    corpus_dir: str
    samples: int
    n_low: int = 3
    n_high: int = 11
    num_segments: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.n_low < 1 or self.n_low > self.n_high:
            raise ValueError(f"bad n range [{self.n_low}, {self.n_high}]")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.num_segments < 1:
            raise ValueError("num_segments must be >= 1")


def read_choi(path: str | Path) -> SegmentedDocument:
    """Parse a marker-delimited file into segments of sentences."""
    path = Path(path)
    lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines()]
    lines = [ln for ln in lines if ln]
    if lines and lines[0] == BOUNDARY_MARKER:
        lines = lines[1:]
    if lines and lines[-1] == BOUNDARY_MARKER:
        lines = lines[:-1]
    if not lines:
        raise FormatError(f"{path}: no sentences (empty or marker-only file)")
    segments: list[tuple[str, ...]] = []
    current: list[str] = []
    for ln in lines:
        if ln == BOUNDARY_MARKER:
            if not current:
                raise FormatError(f"{path}: empty segment")
            segments.append(tuple(current))
            current = []
        else:
            current.append(ln)
    if not current:
        raise FormatError(f"{path}: empty segment")
    segments.append(tuple(current))
    return SegmentedDocument(doc_id=path.stem, segments=tuple(segments))


def write_choi(doc: SegmentedDocument, path: str | Path) -> None:
    """Write marker-delimited form; read_choi(write_choi(doc)) == doc."""
    lines = [BOUNDARY_MARKER]
    for seg in doc.segments:
        lines.extend(seg)
        lines.append(BOUNDARY_MARKER)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def reference_segmentation(doc: SegmentedDocument) -> Segmentation:
    """Boundary positions at the cumulative segment lengths."""
    boundaries = []
    acc = 0
    for seg in doc.segments[:-1]:
        acc += len(seg)
        boundaries.append(acc)
    return Segmentation(doc.sentence_count, boundaries)


def read_corpus_dir(corpus_dir: str | Path) -> list[tuple[str, list[str]]]:
    """Source documents: one file per document, one sentence per line."""
    root = Path(corpus_dir)
    if not root.is_dir():
        raise FormatError(f"corpus directory {root} does not exist")
    docs = []
    for path in sorted(root.iterdir()):
        if path.is_file():
            sentences = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
            docs.append((path.name, sentences))
    if not docs:
        raise FormatError(f"corpus directory {root} holds no documents")
    return docs


def generate(spec: GenSpec) -> list[SegmentedDocument]:
    """Deterministically build `spec.samples` concatenated documents.

    Each sample draws ``num_segments`` distinct source documents (uniform,
    without replacement) and takes the first n sentences of each, n drawn
    uniformly from [n_low, n_high]. Sample i uses its own seed derived from
    (spec.seed, i), so samples can be regenerated independently.
    """
    corpus = read_corpus_dir(spec.corpus_dir)
    if len(corpus) < spec.num_segments:
        raise FormatError(
            f"corpus too small: {len(corpus)} documents, need {spec.num_segments}"
        )
    out = []
    for i in range(spec.samples):
        rng = random.Random(spec.seed * 1_000_003 + i)
        chosen = rng.sample(range(len(corpus)), spec.num_segments)
        segments = []
        for doc_index in chosen:
            name, sentences = corpus[doc_index]
            n = rng.randint(spec.n_low, spec.n_high)
            if len(sentences) < n:
                raise FormatError(
                    f"source document {name!r} has {len(sentences)} sentences, needs {n}"
                )
            segments.append(tuple(sentences[:n]))
        out.append(SegmentedDocument(doc_id=f"doc-{i:04d}", segments=tuple(segments)))
    return out
