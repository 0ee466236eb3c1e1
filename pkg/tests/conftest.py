"""Shared graph builders for the test suite."""

import math

import pytest

from anonmesh.geodata import M_PER_DEG, GeoPoint, haversine_m
from anonmesh.graph import GatewayGraph


def graph_from_edges(n: int, edges, spacing_m: float = 1000.0) -> GatewayGraph:
    """Topology-focused graph: nodes laid out on a line ``spacing_m`` apart."""
    pts = {i: GeoPoint(0.0, i * spacing_m / M_PER_DEG, i) for i in range(n)}
    es = []
    for u, v in edges:
        d = haversine_m(pts[u], pts[v])
        es.append((u, v, d, 1_000_000.0))
    return GatewayGraph(pts, es)


def complete_graph(n: int) -> GatewayGraph:
    """K_n with nodes a few meters apart (every pair in range of anything)."""
    pts = {i: GeoPoint(0.0, i * 2.0 / M_PER_DEG, i) for i in range(n)}
    es = [
        (u, v, haversine_m(pts[u], pts[v]), 50_000.0)
        for u in range(n)
        for v in range(u + 1, n)
    ]
    return GatewayGraph(pts, es)


def path_graph(n: int, spacing_m: float = 1000.0) -> GatewayGraph:
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)], spacing_m)


def cycle_graph(n: int) -> GatewayGraph:
    """C_n placed on a circle so coordinates stay distinct."""
    r = 2000.0
    pts = {
        i: GeoPoint(
            r * math.sin(2 * math.pi * i / n) / M_PER_DEG,
            r * math.cos(2 * math.pi * i / n) / M_PER_DEG,
            i,
        )
        for i in range(n)
    }
    es = [
        (i, (i + 1) % n, haversine_m(pts[i], pts[(i + 1) % n]), 1_000_000.0)
        for i in range(n)
    ]
    return GatewayGraph(pts, es)


def star_graph(leaves: int) -> GatewayGraph:
    """Node 0 is the hub."""
    return graph_from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


@pytest.fixture(scope="session")
def k51() -> GatewayGraph:
    return complete_graph(51)
