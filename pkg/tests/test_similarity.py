import random

import pytest

from taxoseg.annotation import Entity
from taxoseg.similarity import Block, SimilarityWeights, block_lsim, block_osim, ent_sim, hybrid_sim
from taxoseg.taxonomy import from_edges

from oracles import oracle_block_osim, oracle_ent_sim, random_taxonomy

OBAMA = Entity("Barack Obama", ("Person", "Agent", "OfficeHolder"))
BUSH = Entity("George Bush", ("Person", "Agent", "OfficeHolder"))
JACKSON = Entity("Michael Jackson", ("Person", "Agent", "Artist", "MusicalArtist"))

# Hand-expanded pairwise means on the six-node fixture hierarchy.
V_OB = 803 / 945
V_OJ = 3942 / 5040


def test_ent_sim_identical_single_class(people_taxonomy):
    e = Entity("x", ("Person",))
    assert ent_sim(people_taxonomy, e, e) == 1.0


def test_ent_sim_obama_bush(people_taxonomy):
    assert ent_sim(people_taxonomy, OBAMA, BUSH) == pytest.approx(V_OB, abs=1e-12)


def test_ent_sim_obama_jackson(people_taxonomy):
    v = ent_sim(people_taxonomy, OBAMA, JACKSON)
    assert v == pytest.approx(V_OJ, abs=1e-12)
    assert v < ent_sim(people_taxonomy, OBAMA, BUSH)


def test_ent_sim_requires_classes(people_taxonomy):
    with pytest.raises(ValueError, match="non-empty class sets"):
        ent_sim(people_taxonomy, OBAMA, Entity("nothing", ()))


def test_ent_sim_symmetric(people_taxonomy):
    assert ent_sim(people_taxonomy, OBAMA, JACKSON) == ent_sim(people_taxonomy, JACKSON, OBAMA)


def test_block_osim_trivial_and_derived(people_taxonomy):
    one = Block(0, 1, (Entity("a", ("Person",)),))
    other = Block(1, 2, (Entity("b", ("Person",)),))
    assert block_osim(people_taxonomy, one, other) == 1.0

    empty = Block(1, 2, ())
    assert block_osim(people_taxonomy, one, empty) == 0.0
    unmapped = Block(1, 2, (Entity("b", ()),))
    assert block_osim(people_taxonomy, one, unmapped) == 0.0

    b1 = Block(0, 1, (OBAMA,))
    b2 = Block(1, 2, (BUSH, JACKSON))
    assert block_osim(people_taxonomy, b1, b2) == pytest.approx((V_OB + V_OJ) / 2, abs=1e-12)


def test_block_osim_ignores_entity_order(people_taxonomy):
    b1 = Block(0, 1, (OBAMA, JACKSON, BUSH))
    b2 = Block(1, 2, (BUSH, OBAMA))
    shuffled = Block(0, 1, (BUSH, JACKSON, OBAMA))
    assert block_osim(people_taxonomy, b1, b2) == pytest.approx(
        block_osim(people_taxonomy, shuffled, b2), abs=1e-15
    )


def test_block_osim_skips_classless_entities(people_taxonomy):
    plain = Block(0, 1, (OBAMA,))
    noisy = Block(0, 1, (OBAMA, Entity("???", ())))
    b2 = Block(1, 2, (BUSH,))
    assert block_osim(people_taxonomy, noisy, b2) == block_osim(people_taxonomy, plain, b2)


def test_hybrid_sim():
    assert hybrid_sim(0.9, 0.5, SimilarityWeights(0.0)) == 0.9
    assert hybrid_sim(0.9, 0.5, SimilarityWeights(1.0)) == 0.5
    assert hybrid_sim(0.9, 0.5, SimilarityWeights(0.3)) == pytest.approx(0.78)


def test_hybrid_sim_monotone_and_affine():
    w = SimilarityWeights(0.4)
    assert hybrid_sim(0.5, 0.5, w) < hybrid_sim(0.8, 0.5, w)
    assert hybrid_sim(0.5, 0.5, w) < hybrid_sim(0.5, 0.8, w)
    # affine in alpha: midpoint weight gives midpoint score
    lo = hybrid_sim(0.9, 0.1, SimilarityWeights(0.2))
    hi = hybrid_sim(0.9, 0.1, SimilarityWeights(0.6))
    mid = hybrid_sim(0.9, 0.1, SimilarityWeights(0.4))
    assert mid == pytest.approx((lo + hi) / 2, abs=1e-12)


def test_weights_validate_alpha():
    with pytest.raises(ValueError):
        SimilarityWeights(1.2)
    with pytest.raises(ValueError):
        SimilarityWeights(-0.1)


def test_block_lsim_is_term_vector_cosine():
    b1 = Block(0, 1, (), {"a": 1, "b": 1})
    b2 = Block(1, 2, (), {"a": 1})
    assert block_lsim(b1, b2) == pytest.approx(2 ** -0.5)


def test_block_osim_matches_quadruple_loop_oracle():
    rng = random.Random(7151)
    for _ in range(200):
        parents = random_taxonomy(rng, max_nodes=20)
        root = next(c for c, ps in parents.items() if not ps)
        t = from_edges(root, parents)
        names = sorted(parents)

        def rand_entities():
            ents = []
            for i in range(rng.randint(0, 5)):
                k = rng.randint(0, min(4, len(names)))
                classes = tuple(rng.sample(names, k))
                ents.append(Entity(f"e{i}", classes))
            return tuple(ents)

        ea, eb = rand_entities(), rand_entities()
        b1, b2 = Block(0, 1, ea), Block(1, 2, eb)
        expected = oracle_block_osim(parents, [e.classes for e in ea], [e.classes for e in eb])
        assert block_osim(t, b1, b2) == pytest.approx(expected, abs=1e-12)
        classed_a = [e for e in ea if e.has_classes]
        classed_b = [e for e in eb if e.has_classes]
        if classed_a and classed_b:
            e1, e2 = classed_a[0], classed_b[0]
            assert ent_sim(t, e1, e2) == pytest.approx(
                oracle_ent_sim(parents, e1.classes, e2.classes), abs=1e-12
            )
