"""Independent brute-force oracles written straight from the definitions.

Everything here deliberately avoids the library's own data structures and
algorithms: depths come from enumerating root paths, similarities from
nested loops, metric scores from explicit segment-id arrays. Unit and
acceptance tests compare the real implementations against these.
"""

from __future__ import annotations

import random


# ---------------------------------------------------------------------------
# Taxonomy / similarity oracles over a plain child->parents dict
# ---------------------------------------------------------------------------


def oracle_root_paths(parents: dict[str, list[str]], node: str) -> list[list[str]]:
    """All root->node paths, found by walking parent links upward."""
    if not parents[node]:
        return [[node]]
    paths = []
    for p in parents[node]:
        for path in oracle_root_paths(parents, p):
            paths.append(path + [node])
    return paths


def oracle_depth(parents: dict[str, list[str]], node: str) -> int:
    return min(len(path) for path in oracle_root_paths(parents, node))


def oracle_ancestors(parents: dict[str, list[str]], node: str) -> set[str]:
    seen = {node}
    stack = [node]
    while stack:
        for p in parents[stack.pop()]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def oracle_lca_depth(parents: dict[str, list[str]], a: str, b: str) -> int:
    common = oracle_ancestors(parents, a) & oracle_ancestors(parents, b)
    return max(oracle_depth(parents, c) for c in common)


def oracle_con_sim(parents: dict[str, list[str]], a: str, b: str) -> float:
    n = oracle_lca_depth(parents, a, b)
    return 2.0 * n / (oracle_depth(parents, a) + oracle_depth(parents, b))


def oracle_ent_sim(parents, classes_a: tuple[str, ...], classes_b: tuple[str, ...]) -> float:
    total = 0.0
    for ca in classes_a:
        for cb in classes_b:
            total += oracle_con_sim(parents, ca, cb)
    return total / (len(classes_a) * len(classes_b))


def oracle_block_osim(parents, entities_a, entities_b) -> float:
    """Quadruple loop over class-bearing entities' class pairs."""
    ea = [e for e in entities_a if e]
    eb = [e for e in entities_b if e]
    if not ea or not eb:
        return 0.0
    total = 0.0
    for ca in ea:
        for cb in eb:
            total += oracle_ent_sim(parents, ca, cb)
    return total / (len(ea) * len(eb))


def random_taxonomy(rng: random.Random, max_nodes: int = 20) -> dict[str, list[str]]:
    """Random rooted DAG as child->parents; node 0 is the root."""
    n = rng.randint(1, max_nodes)
    names = [f"c{i:02d}" for i in range(n)]
    rng.shuffle(names)
    parents: dict[str, list[str]] = {names[0]: []}
    for i in range(1, n):
        count = min(i, rng.choice((1, 1, 1, 2)))
        parents[names[i]] = rng.sample(names[:i], count)
    return parents


# ---------------------------------------------------------------------------
# Metric oracles from explicit segment-id arrays
# ---------------------------------------------------------------------------


def segment_ids(sentence_count: int, boundaries) -> list[int]:
    ids = []
    seg = 0
    cuts = set(boundaries)
    for s in range(sentence_count):
        if s in cuts:
            seg += 1
        ids.append(seg)
    return ids


def oracle_pk(sentence_count: int, ref_bounds, hyp_bounds, k: int) -> float:
    ref_ids = segment_ids(sentence_count, ref_bounds)
    hyp_ids = segment_ids(sentence_count, hyp_bounds)
    errors = 0
    probes = 0
    for i in range(sentence_count - k):
        same_ref = ref_ids[i] == ref_ids[i + k]
        same_hyp = hyp_ids[i] == hyp_ids[i + k]
        probes += 1
        if same_ref != same_hyp:
            errors += 1
    return errors / probes


def oracle_window_diff(sentence_count: int, ref_bounds, hyp_bounds, k: int) -> float:
    def boundaries_between(bounds, i, j):
        # boundaries strictly between sentence i and sentence j
        return sum(1 for b in bounds if i < b <= j)

    errors = 0
    probes = 0
    for i in range(sentence_count - k):
        probes += 1
        if boundaries_between(ref_bounds, i, i + k) != boundaries_between(hyp_bounds, i, i + k):
            errors += 1
    return errors / probes
