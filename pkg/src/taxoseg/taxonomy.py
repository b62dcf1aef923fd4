"""Rooted is-a class hierarchy with depth, ancestor and similarity queries.

The hierarchy is a DAG: a class may have several parents (cross-domain
ontologies routinely multi-classify), but there is exactly one root. Depth
is counted in *nodes* along a shortest root path, so depth(root) == 1 and
the similarity of two classes,

    2 * depth(lca) / (depth(a) + depth(b)),

is always defined and strictly positive. All query state is precomputed at
load time; a Taxonomy never mutates afterwards, which makes it safe to
share across threads and worker processes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping

from .errors import FormatError

ClassId = str


class Taxonomy:
    """Immutable class hierarchy supporting depth/LCA/similarity queries.

    Build instances through :func:`load_taxonomy` or :func:`from_edges`;
    the constructor assumes already-validated input.
    """

    def __init__(self, root: ClassId, parents: Mapping[ClassId, tuple[ClassId, ...]]):
        self.root = root
        self._parents = dict(parents)
        self._children: dict[ClassId, list[ClassId]] = {c: [] for c in self._parents}
        for child, ps in self._parents.items():
            for p in ps:
                self._children[p].append(child)
        self._depth = self._compute_depths()
        self._ancestors = self._compute_ancestors()
        # Unordered-pair similarity cache. Concurrent readers are fine:
        # inserts are idempotent (same key -> same value).
        self._sim_cache: dict[tuple[ClassId, ClassId], float] = {}
        self._entity_sim_cache: dict[tuple, float] = {}

    # -- construction helpers ------------------------------------------------

    def _compute_depths(self) -> dict[ClassId, int]:
        # BFS over child edges gives the minimum edge count from the root,
        # i.e. the shortest root path even with multiple parents.
        depth = {self.root: 1}
        frontier = [self.root]
        while frontier:
            nxt = []
            for node in frontier:
                d = depth[node] + 1
                for child in self._children[node]:
                    if child not in depth:
                        depth[child] = d
                        nxt.append(child)
            frontier = nxt
        return depth

    def _compute_ancestors(self) -> dict[ClassId, frozenset[ClassId]]:
        # Every node is an ancestor of itself. Nodes are resolved by upward
        # traversal with memoisation; cheap for hierarchies up to ~1e5 nodes.
        anc: dict[ClassId, frozenset[ClassId]] = {}

        def resolve(node: ClassId) -> frozenset[ClassId]:
            got = anc.get(node)
            if got is not None:
                return got
            acc = {node}
            for p in self._parents[node]:
                acc.update(resolve(p))
            result = frozenset(acc)
            anc[node] = result
            return result

        for node in self._parents:
            resolve(node)
        return anc

    # -- queries -------------------------------------------------------------

    @property
    def nodes(self) -> frozenset[ClassId]:
        return frozenset(self._parents)

    def __len__(self) -> int:
        return len(self._parents)

    def __contains__(self, class_id: ClassId) -> bool:
        return class_id in self._parents

    def parents(self, class_id: ClassId) -> tuple[ClassId, ...]:
        self._require(class_id)
        return self._parents[class_id]

    def depth(self, class_id: ClassId) -> int:
        """Number of nodes on a shortest root path, both endpoints included."""
        self._require(class_id)
        return self._depth[class_id]

    def ancestors(self, class_id: ClassId) -> frozenset[ClassId]:
        """All ancestors of ``class_id``, including itself."""
        self._require(class_id)
        return self._ancestors[class_id]

    def lca(self, c1: ClassId, c2: ClassId) -> ClassId:
        """Deepest common ancestor; depth ties broken by smallest id."""
        self._require(c1)
        self._require(c2)
        common = self._ancestors[c1] & self._ancestors[c2]
        depth = self._depth
        return min(common, key=lambda c: (-depth[c], c))

    def con_sim(self, c1: ClassId, c2: ClassId) -> float:
        """Class similarity in (0, 1]: 2*depth(lca) / (depth(c1)+depth(c2)).

        Results are memoised per unordered pair; repeated entity/block
        comparisons hit the cache and cost one dict lookup.
        """
        key = (c1, c2) if c1 <= c2 else (c2, c1)
        cached = self._sim_cache.get(key)
        if cached is not None:
            return cached
        n = self._depth[self.lca(c1, c2)]
        value = 2.0 * n / (self._depth[c1] + self._depth[c2])
        self._sim_cache[key] = value
        return value

    def _require(self, class_id: ClassId) -> None:
        if class_id not in self._parents:
            raise FormatError(f"unknown class id: {class_id!r}")


def from_edges(root: ClassId, node_parents: Mapping[ClassId, Iterable[ClassId]]) -> Taxonomy:
    """Validate a root + child->parents mapping and build a Taxonomy.

    Raises FormatError naming the offending id for: duplicate ids (callers
    passing dicts cannot trigger this; the file loader can), undeclared
    parents, a missing or ambiguous root, and cycles.
    """
    parents = {c: tuple(dict.fromkeys(ps)) for c, ps in node_parents.items()}
    if not parents:
        raise FormatError("taxonomy has no nodes")
    if root not in parents:
        raise FormatError(f"declared root {root!r} is not among the nodes")
    for child, ps in parents.items():
        for p in ps:
            if p not in parents:
                raise FormatError(f"node {child!r} references undeclared parent {p!r}")
        if child in ps:
            raise FormatError(f"cycle detected at node {child!r}")

    # Kahn's algorithm over parent edges; leftovers are on a cycle. Cycles
    # are reported before root problems: a file where every node has a
    # parent is a cycle, not a missing root.
    pending = {c: len(ps) for c, ps in parents.items()}
    ready = [c for c, n in pending.items() if n == 0]
    seen = 0
    children: dict[ClassId, list[ClassId]] = {c: [] for c in parents}
    for child, ps in parents.items():
        for p in ps:
            children[p].append(child)
    while ready:
        node = ready.pop()
        seen += 1
        for child in children[node]:
            pending[child] -= 1
            if pending[child] == 0:
                ready.append(child)
    if seen != len(parents):
        stuck = sorted(c for c, n in pending.items() if n > 0)[0]
        raise FormatError(f"cycle detected at node {stuck!r}")

    parentless = sorted(c for c, ps in parents.items() if not ps)
    if parentless != [root]:
        extra = [c for c in parentless if c != root]
        if extra:
            raise FormatError(f"multiple roots: {extra[0]!r} has no parent but is not the declared root")
        raise FormatError(f"declared root {root!r} has parents")
    return Taxonomy(root, parents)


def load_taxonomy(source: str | Path) -> Taxonomy:
    """Load a taxonomy file: {"root": str, "nodes": [{"id", "parents"}, ...]}."""
    path = Path(source)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"taxonomy file {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "root" not in payload or "nodes" not in payload:
        raise FormatError(f"taxonomy file {path} must carry 'root' and 'nodes'")
    root = payload["root"]
    if not isinstance(root, str) or not root:
        raise FormatError("taxonomy root must be a non-empty string")
    node_parents: dict[ClassId, list[ClassId]] = {}
    for record in payload["nodes"]:
        if not isinstance(record, dict) or "id" not in record:
            raise FormatError(f"malformed taxonomy node record: {record!r}")
        node_id = record["id"]
        if not isinstance(node_id, str) or not node_id:
            raise FormatError(f"taxonomy node id must be a non-empty string: {node_id!r}")
        if node_id in node_parents:
            raise FormatError(f"duplicate node id: {node_id!r}")
        ps = record.get("parents", [])
        if not isinstance(ps, list) or not all(isinstance(p, str) for p in ps):
            raise FormatError(f"node {node_id!r} has a malformed parents list")
        node_parents[node_id] = ps
    return from_edges(root, node_parents)
