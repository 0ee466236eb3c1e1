"""Anonymity metrics over the gateway mesh.

For an output gateway the *anonymity set* is every gateway reachable within
max_hops: the candidates an observer cannot distinguish as the true origin.
The *effective set* discounts that count by how unevenly simple-path
multiplicity points at candidates: with p_g = (paths from candidate g to the
output) / (all candidates' paths), the effective set size is
2 ** (-sum p_g * log2 p_g), i.e. the uniform-equivalent number of candidates.
Node-to-node and disjoint ("unique") path averages characterize overall
connectivity and failure resilience.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Mapping

from .graph import (
    GatewayGraph,
    count_paths_from,
    disjoint_paths,
    hop_distances,
    reachable_within,
)
from .util import round_sig

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GatewayMetrics:
    gateway: int
    anonymity_set: int
    effective_set: float


@dataclass(frozen=True)
class MetricsReport:
    """Per-gateway metrics plus the six aggregate columns for one range case."""

    max_hops: int
    profile_name: str
    node_count: int
    edge_count: int
    per_gateway: tuple[GatewayMetrics, ...]
    avg_anonymity_set: float
    min_anonymity_set: int
    avg_effective_set: float
    min_effective_set: float
    avg_node2node_paths: float
    avg_unique_paths: float
    empty_set_gateways: tuple[int, ...] = ()

    def csv_row(self) -> str:
        vals = (
            self.avg_anonymity_set,
            float(self.min_anonymity_set),
            self.avg_effective_set,
            self.min_effective_set,
            self.avg_node2node_paths,
            self.avg_unique_paths,
        )
        return ",".join(f"{v:.6g}" for v in vals)

    @staticmethod
    def csv_header() -> str:
        return "avg_anon,min_anon,avg_eff,min_eff,avg_n2n,avg_unique"

    def to_json_dict(self, per_gateway: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "max_hops": self.max_hops,
            "profile": self.profile_name,
            "nodes": self.node_count,
            "edges": self.edge_count,
            "avg_anonymity_set": round_sig(self.avg_anonymity_set),
            "min_anonymity_set": self.min_anonymity_set,
            "avg_effective_set": round_sig(self.avg_effective_set),
            "min_effective_set": round_sig(self.min_effective_set),
            "avg_node2node_paths": round_sig(self.avg_node2node_paths),
            "avg_unique_paths": round_sig(self.avg_unique_paths),
        }
        if self.empty_set_gateways:
            out["empty_set_gateways"] = list(self.empty_set_gateways)
        if per_gateway:
            out["per_gateway"] = [
                {
                    "gateway": m.gateway,
                    "anonymity_set": m.anonymity_set,
                    "effective_set": round_sig(m.effective_set),
                }
                for m in self.per_gateway
            ]
        return out


def anonymity_set(g: GatewayGraph, out: int, max_hops: int) -> int:
    """Number of gateways within max_hops of the output (itself excluded)."""
    g._require(out)
    return len(reachable_within(g, out, max_hops))


def _effective_from_counts(counts: Mapping[int, int]) -> float:
    total = sum(counts.values())
    if total == 0:
        return 0.0
    entropy = 0.0
    for c in counts.values():
        p = c / total
        entropy -= p * math.log2(p)
    return 2.0 ** entropy


def effective_set(g: GatewayGraph, out: int, max_hops: int) -> float:
    """Uniform-equivalent anonymity set size, 2 ** entropy of path shares.

    An isolated output has no candidates; by convention that yields 0.0
    (with a warning, since the entropy is undefined).
    """
    g._require(out)
    counts = count_paths_from(g, out, max_hops)
    if not counts:
        log.warning("gateway %d reaches no other gateway within %d hops", out, max_hops)
        return 0.0
    return _effective_from_counts(counts)


def node2node_paths_avg(g: GatewayGraph, max_hops: int) -> float:
    """Mean simple-path count over all unordered gateway pairs."""
    nodes = g.node_ids()
    if len(nodes) < 2:
        raise ValueError("node2node average needs at least 2 gateways")
    total = 0
    for u in nodes:
        counts = count_paths_from(g, u, max_hops)
        total += sum(c for v, c in counts.items() if v > u)
    return total / (len(nodes) * (len(nodes) - 1) / 2)


def unique_paths_avg(g: GatewayGraph, max_hops: int) -> float:
    """Mean internally-vertex-disjoint path count over all unordered pairs."""
    nodes = g.node_ids()
    if len(nodes) < 2:
        raise ValueError("unique-paths average needs at least 2 gateways")
    total = 0
    for i, u in enumerate(nodes):
        for v in nodes[i + 1 :]:
            total += disjoint_paths(g, u, v, max_hops)
    return total / (len(nodes) * (len(nodes) - 1) / 2)


def full_report(g: GatewayGraph, max_hops: int, profile_name: str) -> MetricsReport:
    """Assemble all per-gateway and aggregate metrics for one range case.

    Requires a connected graph with at least two gateways. Path counts are
    computed once per source and reused for both the effective sets and the
    node-to-node average.
    """
    nodes = g.node_ids()
    if len(nodes) < 2:
        raise ValueError("metrics need at least 2 gateways")
    if len(hop_distances(g, nodes[0]).distances) != len(nodes):
        raise ValueError("graph is not connected; take the largest component first")

    per: list[GatewayMetrics] = []
    empty: list[int] = []
    n2n_total = 0
    for u in nodes:
        counts = count_paths_from(g, u, max_hops)
        anon = len(reachable_within(g, u, max_hops))
        eff = _effective_from_counts(counts)
        if not counts:
            empty.append(u)
        per.append(GatewayMetrics(u, anon, eff))
        n2n_total += sum(c for v, c in counts.items() if v > u)

    pairs = len(nodes) * (len(nodes) - 1) / 2
    uniq_total = 0
    for i, u in enumerate(nodes):
        for v in nodes[i + 1 :]:
            uniq_total += disjoint_paths(g, u, v, max_hops)

    return MetricsReport(
        max_hops=max_hops,
        profile_name=profile_name,
        node_count=g.num_nodes,
        edge_count=g.num_edges,
        per_gateway=tuple(per),
        avg_anonymity_set=sum(m.anonymity_set for m in per) / len(per),
        min_anonymity_set=min(m.anonymity_set for m in per),
        avg_effective_set=sum(m.effective_set for m in per) / len(per),
        min_effective_set=min(m.effective_set for m in per),
        avg_node2node_paths=n2n_total / pairs,
        avg_unique_paths=uniq_total / pairs,
        empty_set_gateways=tuple(empty),
    )
