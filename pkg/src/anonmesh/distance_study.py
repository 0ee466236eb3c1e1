"""Monte Carlo study of the geographic distance between origin and output.

For each sample a uniformly random origin is drawn, a client is initialized
(fresh bias draw per the protocol config), and the great-circle distance from
the origin to the selected output gateway is recorded. Sweeping max_hops
shows how far the uplink moves away from the client as the hop budget grows.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .geodata import haversine_m
from .graph import GatewayGraph
from .protocol import ProtocolConfig, init_client


@dataclass(frozen=True)
class DistanceEntry:
    max_hops: int
    mean_m: float
    stddev_m: float
    samples: int


@dataclass(frozen=True)
class DistanceStudy:
    entries: tuple[DistanceEntry, ...]
    samples: int
    seed: int
    bias_enabled: bool

    def to_csv(self) -> str:
        lines = ["max_hops,mean_m,stddev_m,n"]
        for e in self.entries:
            lines.append(f"{e.max_hops},{e.mean_m:.6g},{e.stddev_m:.6g},{e.samples}")
        return "\n".join(lines) + "\n"


def distance_to_origin(
    g: GatewayGraph,
    max_hops: int,
    samples: int,
    seed: int,
    cfg: ProtocolConfig,
) -> DistanceEntry:
    """Sample mean/stddev of origin->output distance at one max_hops level.

    The cfg's own max_hops is overridden by the parameter so one config can
    drive a whole sweep.
    """
    if g.num_nodes == 0:
        raise ValueError("cannot sample distances on an empty graph")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    cfg = replace(cfg, max_hops=max_hops)
    rng = np.random.default_rng(seed)
    node_ids = g.node_ids()
    dists = np.empty(samples)
    for i in range(samples):
        origin = int(node_ids[rng.integers(len(node_ids))])
        state = init_client(g, origin, rng, cfg)
        if state.current_output == origin:
            dists[i] = 0.0
        else:
            dists[i] = haversine_m(g.point(origin), g.point(state.current_output))
    return DistanceEntry(
        max_hops=max_hops,
        mean_m=float(dists.mean()),
        stddev_m=float(dists.std()),
        samples=samples,
    )


def sweep(
    g: GatewayGraph,
    max_hops_list: list[int],
    samples: int,
    seed: int,
    cfg: ProtocolConfig,
) -> DistanceStudy:
    """One entry per max_hops value; entry i uses seed + i."""
    if not max_hops_list:
        raise ValueError("max_hops_list must not be empty")
    entries = tuple(
        distance_to_origin(g, h, samples, seed + i, cfg)
        for i, h in enumerate(max_hops_list)
    )
    return DistanceStudy(entries, samples, seed, cfg.bias_enabled)
