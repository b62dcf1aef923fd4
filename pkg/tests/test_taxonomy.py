import json
import random

import pytest

from taxoseg.errors import FormatError
from taxoseg.taxonomy import Taxonomy, from_edges, load_taxonomy

from oracles import oracle_con_sim, random_taxonomy


def write_taxonomy(tmp_path, root, nodes):
    path = tmp_path / "taxonomy.json"
    path.write_text(json.dumps({"root": root, "nodes": nodes}))
    return path


def test_load_people_fixture(people_taxonomy):
    assert len(people_taxonomy) == 6
    assert people_taxonomy.root == "Thing"
    assert people_taxonomy.parents("MusicalArtist") == ("Artist",)


def test_load_rejects_cycle(tmp_path):
    path = write_taxonomy(tmp_path, "A", [
        {"id": "A", "parents": ["B"]},
        {"id": "B", "parents": ["A"]},
    ])
    with pytest.raises(FormatError, match="cycle"):
        load_taxonomy(path)


def test_load_rejects_multiple_roots(tmp_path):
    path = write_taxonomy(tmp_path, "A", [
        {"id": "A", "parents": []},
        {"id": "B", "parents": []},
    ])
    with pytest.raises(FormatError, match="multiple roots.*'B'"):
        load_taxonomy(path)


def test_load_rejects_undeclared_parent(tmp_path):
    path = write_taxonomy(tmp_path, "A", [
        {"id": "A", "parents": []},
        {"id": "B", "parents": ["Ghost"]},
    ])
    with pytest.raises(FormatError, match="'B' references undeclared parent 'Ghost'"):
        load_taxonomy(path)


def test_load_rejects_duplicate_id(tmp_path):
    path = write_taxonomy(tmp_path, "A", [
        {"id": "A", "parents": []},
        {"id": "B", "parents": ["A"]},
        {"id": "B", "parents": ["A"]},
    ])
    with pytest.raises(FormatError, match="duplicate node id: 'B'"):
        load_taxonomy(path)


def test_load_rejects_missing_root_declaration(tmp_path):
    path = write_taxonomy(tmp_path, "Nope", [{"id": "A", "parents": []}])
    with pytest.raises(FormatError, match="'Nope'"):
        load_taxonomy(path)


def test_depths(people_taxonomy):
    t = people_taxonomy
    assert t.depth("Thing") == 1
    assert t.depth("Person") == 3
    assert t.depth("MusicalArtist") == 5
    with pytest.raises(FormatError, match="unknown class id"):
        t.depth("Unicorn")


def test_lca(people_taxonomy):
    t = people_taxonomy
    assert t.lca("Person", "Person") == "Person"
    assert t.lca("OfficeHolder", "MusicalArtist") == "Person"
    assert t.lca("OfficeHolder", "Thing") == "Thing"


def test_con_sim_values(people_taxonomy):
    t = people_taxonomy
    assert t.con_sim("Person", "Person") == 1.0
    assert t.con_sim("OfficeHolder", "MusicalArtist") == pytest.approx(2 * 3 / (4 + 5), abs=1e-9)
    assert t.con_sim("Thing", "MusicalArtist") == pytest.approx(2 * 1 / (1 + 5), abs=1e-9)


def test_con_sim_symmetry_identity_range(people_taxonomy):
    t = people_taxonomy
    nodes = sorted(t.nodes)
    for a in nodes:
        assert t.con_sim(a, a) == 1.0
        for b in nodes:
            assert t.con_sim(a, b) == t.con_sim(b, a)
            assert 0.0 < t.con_sim(a, b) <= 1.0


def test_chain_monotonicity():
    # On a pure chain, similarity to a fixed endpoint shrinks with distance.
    chain = {"n0": []}
    for i in range(1, 8):
        chain[f"n{i}"] = [f"n{i-1}"]
    t = from_edges("n0", chain)
    sims = [t.con_sim("n0", f"n{j}") for j in range(8)]
    assert all(sims[j] >= sims[j + 1] for j in range(7))
    sims_from_mid = [t.con_sim("n3", f"n{3+d}") for d in range(5)]
    assert all(sims_from_mid[j] >= sims_from_mid[j + 1] for j in range(4))


def test_diamond_uses_shortest_root_path():
    # d is reachable through a long arm and a short arm; depth must take
    # the short one, and the lca of the two arms is the root.
    edges = {
        "root": [],
        "long1": ["root"],
        "long2": ["long1"],
        "short": ["root"],
        "d": ["long2", "short"],
    }
    t = from_edges("root", edges)
    assert t.depth("d") == 3
    assert t.con_sim("d", "short") == pytest.approx(2 * 2 / (3 + 2))


def test_lca_tie_breaks_lexicographically():
    # Two common ancestors at equal depth: pick the smaller id.
    edges = {
        "root": [],
        "alpha": ["root"],
        "beta": ["root"],
        "x": ["alpha", "beta"],
        "y": ["alpha", "beta"],
    }
    t = from_edges("root", edges)
    assert t.lca("x", "y") == "alpha"


def test_con_sim_matches_bruteforce_on_random_dags():
    rng = random.Random(20240817)
    for _ in range(60):
        parents = random_taxonomy(rng, max_nodes=30)
        root = next(c for c, ps in parents.items() if not ps)
        t = from_edges(root, parents)
        names = sorted(parents)
        for _ in range(40):
            a, b = rng.choice(names), rng.choice(names)
            assert t.con_sim(a, b) == pytest.approx(
                oracle_con_sim(parents, a, b), abs=1e-12
            )


def test_shared_cache_is_consistent(people_taxonomy):
    t = people_taxonomy
    first = t.con_sim("OfficeHolder", "MusicalArtist")
    again = t.con_sim("MusicalArtist", "OfficeHolder")
    assert first is not None and first == again


def test_from_edges_dedupes_parent_lists():
    t = from_edges("r", {"r": [], "a": ["r", "r"]})
    assert t.parents("a") == ("r",)
