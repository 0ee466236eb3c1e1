"""Client routing protocol: biased output-gateway selection and rotation.

Each client gets a lifetime-fixed random direction and weight. Output
gateways are drawn from all gateways within ``max_hops`` of the origin plus
the origin itself (the origin must stay selectable, otherwise an observer
identifies it as the one gateway that never uplinks). Candidates in the
preferred direction are favored with weight exp(w * cos(bearing - direction)),
so over many rotations the centroid of used outputs drifts away from the
origin in a direction an observer cannot predict.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, replace
from itertools import accumulate

import numpy as np

from .geodata import GeoPoint
from .graph import GatewayGraph, reachable_within

TIMEOUT_MODES = ("time", "messages", "per_session")

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BiasParams:
    """Per-client selection bias: preferred bearing and concentration weight."""

    direction_rad: float
    weight: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.direction_rad < TWO_PI:
            raise ValueError(f"direction {self.direction_rad!r} outside [0, 2*pi)")
        if self.weight < 0:
            raise ValueError(f"weight must be >= 0, got {self.weight}")


@dataclass(frozen=True)
class ProtocolConfig:
    max_hops: int = 3
    gateway_timeout: float = 60.0  # seconds, or a message count in 'messages' mode
    timeout_mode: str = "per_session"
    bias_enabled: bool = True
    weight_min: float = 0.0
    weight_max: float = 3.0

    def __post_init__(self) -> None:
        if self.max_hops < 0:
            raise ValueError(f"max_hops must be >= 0, got {self.max_hops}")
        if self.timeout_mode not in TIMEOUT_MODES:
            raise ValueError(
                f"timeout_mode {self.timeout_mode!r} not one of {TIMEOUT_MODES}"
            )
        if self.timeout_mode != "per_session" and self.gateway_timeout <= 0:
            raise ValueError("gateway_timeout must be > 0 in time/messages mode")
        if not 0 <= self.weight_min <= self.weight_max:
            raise ValueError(
                f"need 0 <= weight_min <= weight_max, got "
                f"[{self.weight_min}, {self.weight_max}]"
            )


@dataclass(frozen=True)
class ClientRoutingState:
    """One client's routing state. ``bias`` never changes after creation."""

    client_id: int
    origin: int
    bias: BiasParams
    current_output: int
    rotation_deadline: float  # time or message threshold; +inf in per_session mode


def bearing(a: GeoPoint, b: GeoPoint) -> float:
    """Initial great-circle bearing a->b in radians, 0 = north, clockwise."""
    if a.lat == b.lat and a.lon == b.lon:
        raise ValueError("bearing undefined between coincident points")
    lat1 = math.radians(a.lat)
    lat2 = math.radians(b.lat)
    dlon = math.radians(b.lon - a.lon)
    x = math.sin(dlon) * math.cos(lat2)
    y = math.cos(lat1) * math.sin(lat2) - math.sin(lat1) * math.cos(lat2) * math.cos(dlon)
    return math.atan2(x, y) % TWO_PI


def candidate_set(g: GatewayGraph, origin: int, max_hops: int) -> frozenset[int]:
    """All gateways within max_hops of the origin, origin itself included."""
    return reachable_within(g, origin, max_hops) | {origin}


def _sorted_candidates(g: GatewayGraph, origin: int, max_hops: int) -> tuple[int, ...]:
    key = ("cand", origin, max_hops)
    cached = g._memo.get(key)
    if cached is None:
        cached = tuple(sorted(candidate_set(g, origin, max_hops)))
        g._memo[key] = cached
    return cached


def select_output(
    g: GatewayGraph,
    state: ClientRoutingState,
    cfg: ProtocolConfig,
    rng: np.random.Generator,
) -> int:
    """Draw an output gateway from the candidate set.

    A candidate c != origin gets unnormalized weight
    exp(weight * cos(bearing(origin -> c) - direction)); the origin itself,
    having no bearing, gets weight 1. With weight 0 the draw is uniform.
    """
    cands = _sorted_candidates(g, state.origin, cfg.max_hops)
    w = state.bias.weight
    if w == 0.0:
        weights = [1.0] * len(cands)
    else:
        origin_pt = g.point(state.origin)
        direction = state.bias.direction_rad
        weights = []
        for c in cands:
            if c == state.origin:
                weights.append(1.0)
                continue
            pt = g.point(c)
            if pt.lat == origin_pt.lat and pt.lon == origin_pt.lon:
                weights.append(1.0)  # coincident point: no bearing, no bias
            else:
                weights.append(math.exp(w * math.cos(bearing(origin_pt, pt) - direction)))
    cum = list(accumulate(weights))
    r = rng.random() * cum[-1]
    return cands[min(bisect_right(cum, r), len(cands) - 1)]


def _next_deadline(cfg: ProtocolConfig, now: float, messages_sent: int) -> float:
    if cfg.timeout_mode == "time":
        return now + cfg.gateway_timeout
    if cfg.timeout_mode == "messages":
        return messages_sent + cfg.gateway_timeout
    return math.inf  # per_session: rotation is caller-triggered, no timer


def init_client(
    g: GatewayGraph,
    origin: int,
    rng: np.random.Generator,
    cfg: ProtocolConfig,
    client_id: int = 0,
    now: float = 0.0,
) -> ClientRoutingState:
    """Create a client: draw its lifetime bias and select the first output."""
    if origin not in g:
        raise KeyError(f"unknown origin gateway {origin}")
    direction = float(rng.uniform(0.0, TWO_PI)) % TWO_PI
    weight = float(rng.uniform(cfg.weight_min, cfg.weight_max))
    if not cfg.bias_enabled:
        weight = 0.0
    state = ClientRoutingState(
        client_id=client_id,
        origin=origin,
        bias=BiasParams(direction, weight),
        current_output=origin,
        rotation_deadline=_next_deadline(cfg, now, 0),
    )
    return replace(state, current_output=select_output(g, state, cfg, rng))


def maybe_rotate(
    state: ClientRoutingState,
    now: float,
    messages_sent: int,
    g: GatewayGraph,
    cfg: ProtocolConfig,
    rng: np.random.Generator,
) -> tuple[ClientRoutingState, bool]:
    """Rotate the output gateway if the deadline has passed.

    The bias is kept, a fresh output is drawn (repeats allowed: forbidding
    them would leak the previous output), and the deadline is reset. In
    per_session mode every call rotates; the caller invokes it at session
    boundaries.
    """
    if cfg.timeout_mode == "time":
        due = now >= state.rotation_deadline
    elif cfg.timeout_mode == "messages":
        due = messages_sent >= state.rotation_deadline
    else:
        due = True
    if not due:
        return state, False
    new_output = select_output(g, state, cfg, rng)
    return (
        replace(
            state,
            current_output=new_output,
            rotation_deadline=_next_deadline(cfg, now, messages_sent),
        ),
        True,
    )
