"""Order-preserving agglomerative clustering of text blocks.

Blocks are windows of w consecutive sentences. The clustering repeatedly
merges the *adjacent* pair with the highest hybrid similarity (ties go to
the leftmost pair), so the linear order of the text is preserved and every
tree node covers a contiguous sentence range. One merge happens per
iteration, which yields a binary dendrogram with exactly N-1 merges; after
a merge only the new node's at-most-two neighbour similarities are
recomputed, keeping the whole run at O(N) similarity evaluations.

Flattening walks a frontier down from the root, always splitting the node
that covers the most elementary blocks, until exactly k segments remain.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Optional

from .annotation import AnnotatedDocument
from .errors import FormatError
from .similarity import Block, SimilarityWeights, hybrid_sim, multiset_osim
from .taxonomy import Taxonomy
from .textprep import TermVector, add_term_vectors, build_term_vector, cosine, default_stopwords, tokenize


class Segmentation:
    """Sorted boundary positions over a K-sentence document.

    A boundary at position p means "a segment ends after sentence p-1";
    valid positions lie strictly between 0 and K. A document with b
    boundaries has b+1 segments.
    """

    __slots__ = ("sentence_count", "boundaries", "_prefix")

    def __init__(self, sentence_count: int, boundaries=()):
        if sentence_count < 1:
            raise ValueError("sentence_count must be >= 1")
        bounds = tuple(boundaries)
        prev = 0
        for p in bounds:
            if not isinstance(p, int) or not 0 < p < sentence_count:
                raise ValueError(f"boundary {p!r} outside (0, {sentence_count})")
            if p <= prev:
                raise ValueError("boundaries must be strictly increasing")
            prev = p
        self.sentence_count = sentence_count
        self.boundaries = bounds
        self._prefix: Optional[list[int]] = None

    def prefix_counts(self) -> list[int]:
        """prefix_counts()[s] = number of boundaries at positions <= s."""
        p = self._prefix
        if p is None:
            p = [0] * (self.sentence_count + 1)
            for b in self.boundaries:
                p[b] = 1
            acc = 0
            for i in range(len(p)):
                acc += p[i]
                p[i] = acc
            self._prefix = p
        return p

    def segment_lengths(self) -> list[int]:
        edges = [0, *self.boundaries, self.sentence_count]
        return [edges[i + 1] - edges[i] for i in range(len(edges) - 1)]

    def __eq__(self, other):
        return (
            isinstance(other, Segmentation)
            and self.sentence_count == other.sentence_count
            and self.boundaries == other.boundaries
        )

    def __hash__(self):
        return hash((self.sentence_count, self.boundaries))

    def __repr__(self):
        return f"Segmentation(sentence_count={self.sentence_count}, boundaries={self.boundaries})"


@dataclass(frozen=True)
class WindowConfig:
    """Elementary block size in sentences."""

    window_size: int = 1

    def __post_init__(self):
        if self.window_size < 1:
            raise ValueError(f"window_size must be >= 1, got {self.window_size}")


@dataclass(frozen=True)
class MergeRecord:
    left: int
    right: int
    node: int
    similarity: float
    step: int


class ClusterNode:
    """Aggregate state of one dendrogram node during clustering."""

    __slots__ = ("start", "end", "blocks", "classes", "term_vector")

    def __init__(self, start: int, end: int, blocks: int, classes: Counter, term_vector: TermVector):
        self.start = start
        self.end = end
        self.blocks = blocks
        self.classes = classes
        self.term_vector = term_vector


SimFn = Callable[[ClusterNode, ClusterNode], float]


class Dendrogram:
    """Binary merge tree over blocks; node ids follow the linkage convention:
    leaves are 0..N-1 in text order, merge i creates node N+i."""

    def __init__(self, leaves: list[Block], merges: list[MergeRecord], sentence_count: int, window_size: int = 1):
        self.leaves = list(leaves)
        self.merges = list(merges)
        self.sentence_count = sentence_count
        self.window_size = window_size
        self.spans: dict[int, tuple[int, int]] = {i: b.span for i, b in enumerate(self.leaves)}
        self.block_counts: dict[int, int] = {i: 1 for i in range(len(self.leaves))}
        self.children: dict[int, tuple[int, int]] = {}
        for m in self.merges:
            self.spans[m.node] = (self.spans[m.left][0], self.spans[m.right][1])
            self.block_counts[m.node] = self.block_counts[m.left] + self.block_counts[m.right]
            self.children[m.node] = (m.left, m.right)
        self.root = self.merges[-1].node if self.merges else 0

    def to_json(self) -> str:
        """Deterministic serialization: enough to re-run flatten."""
        payload = {
            "sentence_count": self.sentence_count,
            "window_size": self.window_size,
            "leaves": [[b.start, b.end] for b in self.leaves],
            "merges": [
                {"left": m.left, "right": m.right, "node": m.node, "similarity": m.similarity, "step": m.step}
                for m in self.merges
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Dendrogram":
        try:
            payload = json.loads(text)
            leaves = [Block(start=s, end=e) for s, e in payload["leaves"]]
            merges = [MergeRecord(**m) for m in payload["merges"]]
            return cls(leaves, merges, payload["sentence_count"], payload.get("window_size", 1))
        except (ValueError, KeyError, TypeError) as exc:
            raise FormatError(f"malformed dendrogram file: {exc}") from exc


def make_blocks(
    doc: AnnotatedDocument,
    cfg: WindowConfig,
    stopwords: frozenset[str] | None = None,
) -> list[Block]:
    """Group sentences into consecutive windows of cfg.window_size.

    The last block keeps the remainder (1..w sentences). Entities are
    concatenated in sentence order; term vectors are summed.
    """
    w = cfg.window_size
    n = len(doc.sentences)
    if w > n:
        raise ValueError(f"window_size {w} exceeds sentence count {n}")
    if stopwords is None:
        stopwords = default_stopwords()
    blocks = []
    for start in range(0, n, w):
        end = min(start + w, n)
        entities = []
        tv: TermVector = {}
        for s in doc.sentences[start:end]:
            entities.extend(s.entities)
            tv = add_term_vectors(tv, build_term_vector(tokenize(s.text), stopwords))
        blocks.append(Block(start=start, end=end, entities=tuple(entities), term_vector=tv))
    return blocks


def _default_sim(t: Taxonomy, weights: SimilarityWeights) -> SimFn:
    alpha = weights.alpha

    def sim(a: ClusterNode, b: ClusterNode) -> float:
        if alpha >= 1.0:
            osim = 0.0
        else:
            osim = multiset_osim(t, a.classes, b.classes)
        lsim = cosine(a.term_vector, b.term_vector) if alpha > 0.0 else 0.0
        return hybrid_sim(osim, lsim, weights)

    return sim


def build_dendrogram(
    blocks: list[Block],
    t: Taxonomy,
    weights: SimilarityWeights,
    sim_fn: SimFn | None = None,
) -> Dendrogram:
    """Cluster adjacent blocks bottom-up into a binary merge tree.

    Each iteration merges the adjacent pair with the maximum similarity
    (leftmost on ties); the merged node's entities and term vector are
    recomputed from its children's, and only the similarities to its
    at-most-two neighbours are re-evaluated.
    """
    if not blocks:
        raise ValueError("at least one block required")
    if sim_fn is None:
        sim_fn = _default_sim(t, weights)

    nodes = [
        ClusterNode(b.start, b.end, 1, b.class_multiset(), b.term_vector) for b in blocks
    ]
    ids = list(range(len(blocks)))
    sims = [sim_fn(nodes[i], nodes[i + 1]) for i in range(len(nodes) - 1)]

    sentence_count = blocks[-1].end
    merges: list[MergeRecord] = []
    next_id = len(blocks)
    step = 0
    while len(nodes) > 1:
        best = 0
        best_sim = sims[0]
        for i in range(1, len(sims)):
            if sims[i] > best_sim:
                best_sim = sims[i]
                best = i
        left, right = nodes[best], nodes[best + 1]
        merged = ClusterNode(
            left.start,
            right.end,
            left.blocks + right.blocks,
            left.classes + right.classes,
            add_term_vectors(left.term_vector, right.term_vector),
        )
        merges.append(MergeRecord(ids[best], ids[best + 1], next_id, best_sim, step))
        nodes[best : best + 2] = [merged]
        ids[best : best + 2] = [next_id]
        next_id += 1
        step += 1
        del sims[best]
        if best > 0:
            sims[best - 1] = sim_fn(nodes[best - 1], nodes[best])
        if best < len(sims):
            sims[best] = sim_fn(nodes[best], nodes[best + 1])
    return Dendrogram(blocks, merges, sentence_count)


def flatten(d: Dendrogram, k: int) -> Segmentation:
    """Cut the dendrogram into exactly k contiguous segments.

    Starting from the root, the frontier node covering the most elementary
    blocks (leftmost on ties) is repeatedly replaced by its children until
    k frontier nodes remain; their span starts become the boundaries.
    """
    if not 1 <= k <= len(d.leaves):
        raise ValueError(f"segment count {k} out of range 1..{len(d.leaves)}")
    frontier = [d.root]
    while len(frontier) < k:
        best_idx = 0
        best_blocks = d.block_counts[frontier[0]]
        for i in range(1, len(frontier)):
            n = d.block_counts[frontier[i]]
            if n > best_blocks:
                best_blocks = n
                best_idx = i
        left, right = d.children[frontier[best_idx]]
        frontier[best_idx : best_idx + 1] = [left, right]
    boundaries = [d.spans[node][0] for node in frontier[1:]]
    return Segmentation(d.sentence_count, boundaries)


def segment_document(
    doc: AnnotatedDocument,
    t: Taxonomy,
    weights: SimilarityWeights,
    cfg: WindowConfig,
    k: int,
    stopwords: frozenset[str] | None = None,
) -> tuple[Dendrogram, Segmentation]:
    """Full pipeline: window -> cluster -> flatten into k segments."""
    blocks = make_blocks(doc, cfg, stopwords)
    dendrogram = build_dendrogram(blocks, t, weights)
    return dendrogram, flatten(dendrogram, k)
