"""Entity-level, block-level and hybrid similarities between text blocks.

An entity pair scores the mean class-pair similarity over the cross
product of their class sets; a block pair scores the mean entity-pair
similarity over the cross product of their class-bearing entities. The
hybrid score blends the ontological and lexical signals with one weight:

    alpha * lexical + (1 - alpha) * ontological

Entity-pair values are memoised per (class set, class set) on the active
taxonomy; blocks aggregate identical class sets before looping, which
keeps repeated comparisons of large merged blocks cheap.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .annotation import Entity
from .taxonomy import Taxonomy
from .textprep import TermVector, cosine


@dataclass(frozen=True)
class SimilarityWeights:
    """Blend weight: 0 is purely ontological, 1 purely lexical."""

    alpha: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class Block:
    """A contiguous sentence window [start, end) with its aggregates."""

    start: int
    end: int
    entities: tuple[Entity, ...] = ()
    term_vector: TermVector = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"empty or inverted block span [{self.start}, {self.end})")

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def class_multiset(self) -> Counter:
        """Class-set multiset of the class-bearing entities."""
        return Counter(e.classes for e in self.entities if e.has_classes)


def _classes_sim(t: Taxonomy, classes1: tuple[str, ...], classes2: tuple[str, ...]) -> float:
    key = (classes1, classes2) if classes1 <= classes2 else (classes2, classes1)
    cache = t._entity_sim_cache
    cached = cache.get(key)
    if cached is not None:
        return cached
    con_sim = t.con_sim
    total = 0.0
    for c1 in classes1:
        for c2 in classes2:
            total += con_sim(c1, c2)
    value = total / (len(classes1) * len(classes2))
    cache[key] = value
    return value


def ent_sim(t: Taxonomy, e1: Entity, e2: Entity) -> float:
    """Mean class-pair similarity over the two entities' class sets.

    Both entities must carry at least one class; callers are expected to
    filter class-less entities out before comparing.
    """
    if not e1.has_classes or not e2.has_classes:
        raise ValueError("ent_sim requires entities with non-empty class sets")
    return _classes_sim(t, e1.classes, e2.classes)


def multiset_osim(t: Taxonomy, ms1: Counter, ms2: Counter) -> float:
    """Block-level ontological similarity from class-set multisets.

    ``ms1``/``ms2`` map class tuples to entity counts (see
    Block.class_multiset). Returns 0 when either multiset is empty.
    """
    a = sum(ms1.values())
    b = sum(ms2.values())
    if a == 0 or b == 0:
        return 0.0
    total = 0.0
    for classes1, n1 in ms1.items():
        for classes2, n2 in ms2.items():
            total += n1 * n2 * _classes_sim(t, classes1, classes2)
    return total / (a * b)


def block_osim(t: Taxonomy, b1: Block, b2: Block) -> float:
    """Mean entity-pair similarity across two blocks, in [0, 1].

    Only class-bearing entities participate; a block without any yields 0
    (no ontological evidence), never an error.
    """
    return multiset_osim(t, b1.class_multiset(), b2.class_multiset())


def block_lsim(b1: Block, b2: Block) -> float:
    """Lexical cohesion between blocks: term-vector cosine."""
    return cosine(b1.term_vector, b2.term_vector)


def hybrid_sim(osim: float, lsim: float, weights: SimilarityWeights) -> float:
    """Convex combination of the two signals under ``weights.alpha``."""
    a = weights.alpha
    return a * lsim + (1.0 - a) * osim
