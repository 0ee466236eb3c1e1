"""Gateway mesh graph plus hop-distance and bounded path algorithms.

The graph is undirected, immutable after construction, and keeps adjacency
lists sorted by node id so that every traversal (and therefore everything
downstream that consumes seeded randomness) is deterministic.

Path semantics used everywhere: a *path* is a simple path (no repeated
vertices) whose edge count is between 1 and ``max_len``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Iterable, Iterator, Mapping

from .errors import EnumerationLimitError

if TYPE_CHECKING:  # runtime import would be circular via geodata.build_graph
    from .geodata import GeoPoint

DEFAULT_PATH_CAP = 10_000_000


@dataclass(frozen=True)
class LinkAttrs:
    """Physical length and effective data rate of one undirected link."""

    distance_m: float
    rate_bps: float


class GatewayGraph:
    """Undirected gateway mesh with per-link distance/rate annotations.

    Node ids are arbitrary non-negative ints (contiguity is not assumed:
    component extraction preserves original ids). Self-loops and duplicate
    edges are rejected.
    """

    __slots__ = ("_points", "_adj", "_edges", "_memo")

    def __init__(
        self,
        points: Mapping[int, "GeoPoint"],
        edges: Iterable[tuple[int, int, float, float]] = (),
    ) -> None:
        self._points = dict(points)
        adj: dict[int, list[int]] = {i: [] for i in self._points}
        self._edges: dict[tuple[int, int], LinkAttrs] = {}
        for u, v, dist, rate in edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if u not in adj or v not in adj:
                raise ValueError(f"edge ({u}, {v}) references unknown node")
            key = (u, v) if u < v else (v, u)
            if key in self._edges:
                raise ValueError(f"duplicate edge {key}")
            self._edges[key] = LinkAttrs(dist, rate)
            adj[u].append(v)
            adj[v].append(u)
        self._adj: dict[int, tuple[int, ...]] = {
            i: tuple(sorted(ns)) for i, ns in adj.items()
        }
        # scratch cache for derived, immutable results (hop maps, reach sets)
        self._memo: dict[Any, Any] = {}

    # -- basic accessors ---------------------------------------------------

    def __contains__(self, node: int) -> bool:
        return node in self._points

    def __len__(self) -> int:
        return len(self._points)

    @property
    def num_nodes(self) -> int:
        return len(self._points)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def node_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self._points))

    def point(self, node: int) -> "GeoPoint":
        return self._points[node]

    def neighbors(self, node: int) -> tuple[int, ...]:
        return self._adj[node]

    def edge(self, u: int, v: int) -> LinkAttrs:
        return self._edges[(u, v) if u < v else (v, u)]

    def edges(self) -> Iterator[tuple[int, int, LinkAttrs]]:
        for (u, v) in sorted(self._edges):
            yield u, v, self._edges[(u, v)]

    def subgraph(self, nodes: Iterable[int]) -> "GatewayGraph":
        keep = set(nodes)
        unknown = keep - self._points.keys()
        if unknown:
            raise ValueError(f"subgraph references unknown nodes {sorted(unknown)}")
        points = {i: self._points[i] for i in sorted(keep)}
        edges = [
            (u, v, a.distance_m, a.rate_bps)
            for (u, v), a in self._edges.items()
            if u in keep and v in keep
        ]
        return GatewayGraph(points, edges)

    def _require(self, node: int) -> None:
        if node not in self._points:
            raise KeyError(f"unknown gateway id {node}")


@dataclass
class HopMap:
    """Minimum hop counts from one source; unreachable nodes are absent."""

    source: int
    distances: dict[int, int]

    def hops_to(self, node: int) -> int | None:
        return self.distances.get(node)


def hop_distances(g: GatewayGraph, src: int) -> HopMap:
    """Unweighted shortest hop counts from ``src`` (breadth-first search).

    Results are cached on the graph; treat the returned map as read-only.
    """
    g._require(src)
    key = ("hops", src)
    cached = g._memo.get(key)
    if cached is not None:
        return cached
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    hm = HopMap(src, dist)
    g._memo[key] = hm
    return hm


def reachable_within(g: GatewayGraph, node: int, max_hops: int) -> frozenset[int]:
    """Nodes at hop distance 1..max_hops from ``node`` (the node itself excluded)."""
    if max_hops < 0:
        raise ValueError(f"max_hops must be >= 0, got {max_hops}")
    key = ("reach", node, max_hops)
    cached = g._memo.get(key)
    if cached is not None:
        return cached
    hm = hop_distances(g, node)
    reach = frozenset(v for v, d in hm.distances.items() if 1 <= d <= max_hops)
    g._memo[key] = reach
    return reach


def connected_components(g: GatewayGraph) -> list[frozenset[int]]:
    """All connected components, ordered by (descending size, ascending min id)."""
    seen: set[int] = set()
    comps: list[frozenset[int]] = []
    for start in g.node_ids():
        if start in seen:
            continue
        comp = set(hop_distances(g, start).distances)
        seen |= comp
        comps.append(frozenset(comp))
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def count_simple_paths(g: GatewayGraph, src: int, dst: int, max_len: int) -> int:
    """Number of simple paths src->dst with 1..max_len edges (exact DFS count)."""
    g._require(src)
    g._require(dst)
    if src == dst:
        raise ValueError("paths from a node to itself are undefined")
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    adj = g._adj
    visited = {src}
    count = 0

    def walk(v: int, remaining: int) -> None:
        nonlocal count
        for w in adj[v]:
            if w == dst:
                count += 1
                continue
            if remaining > 1 and w not in visited:
                visited.add(w)
                walk(w, remaining - 1)
                visited.remove(w)

    walk(src, max_len)
    return count


def count_paths_from(g: GatewayGraph, src: int, max_len: int) -> dict[int, int]:
    """Simple-path counts from ``src`` to every other node, in one DFS sweep.

    Equivalent to {v: count_simple_paths(g, src, v, max_len)} but walks the
    path tree once instead of once per destination. Nodes with no path within
    the bound are absent (a key exists iff the node is within max_len hops).
    """
    g._require(src)
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    adj = g._adj
    counts: dict[int, int] = {}
    visited = {src}

    def walk(v: int, remaining: int) -> None:
        for w in adj[v]:
            if w in visited:
                continue
            counts[w] = counts.get(w, 0) + 1
            if remaining > 1:
                visited.add(w)
                walk(w, remaining - 1)
                visited.remove(w)

    walk(src, max_len)
    return counts


def enumerate_simple_paths(
    g: GatewayGraph,
    src: int,
    dst: int,
    max_len: int,
    max_paths: int = DEFAULT_PATH_CAP,
) -> list[tuple[int, ...]]:
    """All simple paths src->dst with <= max_len edges, ordered by (length, lex).

    Raises EnumerationLimitError once more than ``max_paths`` paths exist;
    dense meshes explode combinatorially and the cap avoids exhausting memory.
    """
    g._require(src)
    g._require(dst)
    if src == dst:
        raise ValueError("paths from a node to itself are undefined")
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    adj = g._adj
    # prune branches that cannot reach dst in the remaining edge budget
    to_dst = hop_distances(g, dst).distances
    paths: list[tuple[int, ...]] = []
    prefix = [src]
    on_path = {src}

    def walk(v: int, remaining: int) -> None:
        for w in adj[v]:
            if w == dst:
                if remaining == 1:
                    if len(paths) >= max_paths:
                        raise EnumerationLimitError(
                            f"more than {max_paths} paths between {src} and {dst} "
                            f"within {max_len} hops"
                        )
                    paths.append((*prefix, dst))
                continue
            if remaining == 1 or w in on_path:
                continue
            if to_dst.get(w, max_len + 1) > remaining - 1:
                continue
            prefix.append(w)
            on_path.add(w)
            walk(w, remaining - 1)
            on_path.remove(w)
            prefix.pop()

    # emit exact length L for L = 1..max_len: (length, lex) order for free
    for length in range(1, max_len + 1):
        walk(src, length)
    return paths


def disjoint_path_set(
    g: GatewayGraph, src: int, dst: int, max_len: int
) -> list[tuple[int, ...]]:
    """Greedy internally-vertex-disjoint path set between src and dst.

    Consumes the (length, lex) enumeration order and accepts a path iff its
    interior vertices are disjoint from all previously accepted interiors;
    shared endpoints never conflict. The search skips subtrees whose prefix
    already touches a used vertex, which prunes exactly the paths greedy
    would reject, so the result equals greedy selection over the full
    enumeration without materializing it.
    """
    g._require(src)
    g._require(dst)
    if src == dst:
        raise ValueError("paths from a node to itself are undefined")
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    adj = g._adj
    to_dst = hop_distances(g, dst).distances
    used: set[int] = set()
    accepted: list[tuple[int, ...]] = []
    prefix = [src]

    def walk(v: int, remaining: int) -> None:
        for w in adj[v]:
            if w == dst:
                if remaining == 1:
                    accepted.append((*prefix, dst))
                    used.update(prefix[1:])
                    # every vertex of this prefix is now used; no sibling or
                    # deeper branch below it can be accepted anymore
                    if len(prefix) > 1:
                        return
                continue
            if remaining == 1 or w in used or w in prefix_set:
                continue
            if to_dst.get(w, max_len + 1) > remaining - 1:
                continue
            prefix.append(w)
            prefix_set.add(w)
            walk(w, remaining - 1)
            prefix_set.discard(w)
            prefix.pop()
            if v in used:  # an accept below consumed this prefix; unwind
                return

    prefix_set = {src}
    for length in range(1, max_len + 1):
        walk(src, length)
    return accepted


def disjoint_paths(g: GatewayGraph, src: int, dst: int, max_len: int) -> int:
    """Size of the greedy internally-vertex-disjoint path set (see above)."""
    return len(disjoint_path_set(g, src, dst, max_len))
