"""Discrete-event simulation of client sessions over the gateway mesh.

Each client sits at a random origin gateway and repeats, until the simulated
hour ends: pick an output gateway (protocol module), run a TCP/TLS-style
handshake against a WAN server that answers each client message after a
fixed delay, then stream a fixed-size payload to the output gateway in
MTU-sized packets. Every directed link is an independent FIFO resource: a
packet occupies it for size*8/rate seconds, hops store-and-forward, and
pipelining across hops emerges from the per-link queues. The client<->origin
WiFi hop and the WAN uplink itself cost nothing; the WAN is a flat per-reply
delay.

Measurements: TLS delay = SYN emission to ServerHello receipt at the client;
upload time = first data packet emission to last byte arriving at the output.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import protocol
from .errors import SimulationError
from .graph import GatewayGraph, hop_distances
from .linkmodel import LinkProfile
from .protocol import ClientRoutingState, ProtocolConfig
from .util import round_sig


@dataclass(frozen=True)
class HandshakeSizes:
    """Byte sizes of the four handshake flights (TCP + TLS 1.3 style)."""

    syn: int = 40
    synack: int = 40
    ack_clienthello: int = 300
    serverhello: int = 1200


@dataclass(frozen=True)
class SimConfig:
    profile: LinkProfile
    protocol: ProtocolConfig = ProtocolConfig()
    client_count: int = 1
    sim_duration_s: float = 3600.0
    wan_delay_s: float = 0.100
    payload_bytes: int = 200_000
    mtu_bytes: int = 1500
    handshake: HandshakeSizes = HandshakeSizes()
    runs: int = 30
    base_seed: int = 1

    def __post_init__(self) -> None:
        if self.client_count < 1:
            raise ValueError(f"client_count must be >= 1, got {self.client_count}")
        if self.sim_duration_s <= 0:
            raise ValueError(f"sim_duration_s must be > 0, got {self.sim_duration_s}")
        if self.payload_bytes < 0:
            raise ValueError(f"payload_bytes must be >= 0, got {self.payload_bytes}")
        if self.mtu_bytes <= 0:
            raise ValueError(f"mtu_bytes must be > 0, got {self.mtu_bytes}")
        if self.wan_delay_s < 0:
            raise ValueError(f"wan_delay_s must be >= 0, got {self.wan_delay_s}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")


@dataclass(frozen=True)
class Event:
    time: float
    kind: str  # session_start | link_delivery | wan_reply_due | upload_packet_ready
    payload: dict[str, Any]


@dataclass
class SessionRecord:
    client: int
    origin: int
    output: int
    hops: int
    start_s: float
    tls_delay_s: float | None = None
    upload_s: float | None = None
    upload_start_s: float | None = None
    packets_delivered: int = 0
    bytes_delivered: int = 0


@dataclass
class SimResult:
    seed: int
    client_count: int
    sessions: list[SessionRecord]
    event_count: int
    mean_tls_s: float | None
    median_tls_s: float | None
    mean_upload_s: float | None
    median_upload_s: float | None


@dataclass
class _Client:
    state: ClientRoutingState
    messages_sent: int = 0
    sessions_started: int = 0


class _Run:
    """One seeded simulation run over an immutable graph."""

    def __init__(self, g: GatewayGraph, cfg: SimConfig, seed: int):
        if g.num_nodes == 0:
            raise SimulationError("cannot simulate an empty graph")
        if len(hop_distances(g, g.node_ids()[0]).distances) != g.num_nodes:
            raise SimulationError("graph is not connected; take the largest component first")
        for u, v, attrs in g.edges():
            if attrs.rate_bps <= 0:
                raise SimulationError(f"link ({u}, {v}) has non-positive rate")
        self.g = g
        self.cfg = cfg
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.now = 0.0
        self.heap: list[tuple[float, int, Event]] = []
        self.seq = 0
        self.event_count = 0
        self.link_free: dict[tuple[int, int], float] = {}
        self.route_cache: dict[tuple[int, int], tuple[int, ...]] = {}
        self.sessions: list[SessionRecord] = []
        node_ids = g.node_ids()
        self.clients: list[_Client] = []
        for i in range(cfg.client_count):
            origin = int(node_ids[self.rng.integers(len(node_ids))])
            state = protocol.init_client(g, origin, self.rng, cfg.protocol, client_id=i)
            self.clients.append(_Client(state))
        for i in range(cfg.client_count):
            self._schedule(0.0, "session_start", {"client": i})

    # -- event plumbing ----------------------------------------------------

    def _schedule(self, time: float, kind: str, payload: dict[str, Any]) -> None:
        self.seq += 1
        heapq.heappush(self.heap, (time, self.seq, Event(time, kind, payload)))

    def run(self) -> SimResult:
        handlers = {
            "session_start": self._on_session_start,
            "link_delivery": self._on_link_delivery,
            "wan_reply_due": self._on_wan_reply_due,
            "upload_packet_ready": self._on_upload_packet_ready,
        }
        duration = self.cfg.sim_duration_s
        while self.heap:
            time, _, ev = heapq.heappop(self.heap)
            if time > duration:
                break
            assert time >= self.now, "event scheduled in the past"
            self.now = time
            self.event_count += 1
            handlers[ev.kind](ev.payload)
        return self._result()

    # -- routing and links ---------------------------------------------------

    def _route(self, src: int, dst: int) -> tuple[int, ...]:
        """Hop-shortest path src->dst; ties broken by smallest next-hop id."""
        if src == dst:
            return (src,)
        key = (src, dst)
        path = self.route_cache.get(key)
        if path is not None:
            return path
        dist = hop_distances(self.g, dst).distances
        d = dist.get(src)
        if d is None:
            raise SimulationError(f"no route from {src} to {dst}")
        nodes = [src]
        cur = src
        while cur != dst:
            cur = min(w for w in self.g.neighbors(cur) if dist.get(w, math.inf) == d - 1)
            d -= 1
            nodes.append(cur)
        path = tuple(nodes)
        self.route_cache[key] = path
        return path

    def _forward(self, msg: dict[str, Any], pos: int, ready: float) -> None:
        """Advance msg from path[pos]; zero-length routes deliver in place."""
        path = msg["path"]
        if pos == len(path) - 1:
            self._schedule(ready, "link_delivery", {"msg": msg, "pos": pos})
            return
        u, v = path[pos], path[pos + 1]
        free = self.link_free.get((u, v), 0.0)
        start = max(ready, free)
        arrival = start + msg["size"] * 8.0 / self.g.edge(u, v).rate_bps
        self.link_free[(u, v)] = arrival
        self._schedule(arrival, "link_delivery", {"msg": msg, "pos": pos + 1})

    # -- session workload ----------------------------------------------------

    def _on_session_start(self, payload: dict[str, Any]) -> None:
        if self.now >= self.cfg.sim_duration_s:
            return
        client = self.clients[payload["client"]]
        if client.sessions_started > 0:
            client.state, _ = protocol.maybe_rotate(
                client.state, self.now, client.messages_sent,
                self.g, self.cfg.protocol, self.rng,
            )
        client.sessions_started += 1
        origin = client.state.origin
        output = client.state.current_output
        path = self._route(origin, output)
        session = SessionRecord(
            client=client.state.client_id,
            origin=origin,
            output=output,
            hops=len(path) - 1,
            start_s=self.now,
        )
        self.sessions.append(session)
        self._send_uplink(session, path, "syn", self.cfg.handshake.syn)

    def _send_uplink(self, session: SessionRecord, path: tuple[int, ...],
                     kind: str, size: int) -> None:
        # client -> origin WiFi hop costs nothing; the message enters the
        # first mesh link queue at the current time
        self.clients[session.client].messages_sent += 1
        self._forward({"kind": kind, "size": size, "session": session,
                       "path": path, "up": True}, 0, self.now)

    def _on_link_delivery(self, payload: dict[str, Any]) -> None:
        msg = payload["msg"]
        pos = payload["pos"]
        path = msg["path"]
        if pos < len(path) - 1:
            self._forward(msg, pos, self.now)
            return
        session: SessionRecord = msg["session"]
        if msg["up"]:
            self._at_output(session, msg)
        else:
            self._at_client(session, msg)

    def _at_output(self, session: SessionRecord, msg: dict[str, Any]) -> None:
        kind = msg["kind"]
        if kind == "syn":
            self._schedule(self.now + self.cfg.wan_delay_s, "wan_reply_due",
                           {"session": session, "reply": "synack"})
        elif kind == "ack_clienthello":
            self._schedule(self.now + self.cfg.wan_delay_s, "wan_reply_due",
                           {"session": session, "reply": "serverhello"})
        elif kind == "data":
            session.packets_delivered += 1
            session.bytes_delivered += msg["size"]
            if session.bytes_delivered >= self.cfg.payload_bytes:
                session.upload_s = self.now - session.upload_start_s
                self._schedule(self.now, "session_start", {"client": session.client})

    def _on_wan_reply_due(self, payload: dict[str, Any]) -> None:
        session: SessionRecord = payload["session"]
        reply = payload["reply"]
        sizes = self.cfg.handshake
        size = sizes.synack if reply == "synack" else sizes.serverhello
        down_path = tuple(reversed(self._route(session.origin, session.output)))
        self._forward({"kind": reply, "size": size, "session": session,
                       "path": down_path, "up": False}, 0, self.now)

    def _at_client(self, session: SessionRecord, msg: dict[str, Any]) -> None:
        # origin -> client WiFi hop costs nothing
        if msg["kind"] == "synack":
            path = self._route(session.origin, session.output)
            self._send_uplink(session, path, "ack_clienthello",
                              self.cfg.handshake.ack_clienthello)
        elif msg["kind"] == "serverhello":
            session.tls_delay_s = self.now - session.start_s
            session.upload_start_s = self.now
            if self.cfg.payload_bytes == 0:
                session.upload_s = 0.0
                self._schedule(self.now, "session_start", {"client": session.client})
                return
            full, rem = divmod(self.cfg.payload_bytes, self.cfg.mtu_bytes)
            sizes = [self.cfg.mtu_bytes] * full + ([rem] if rem else [])
            for size in sizes:
                self._schedule(self.now, "upload_packet_ready",
                               {"session": session, "size": size})

    def _on_upload_packet_ready(self, payload: dict[str, Any]) -> None:
        session: SessionRecord = payload["session"]
        path = self._route(session.origin, session.output)
        self._send_uplink(session, path, "data", payload["size"])

    # -- results -------------------------------------------------------------

    def _result(self) -> SimResult:
        tls = [s.tls_delay_s for s in self.sessions if s.tls_delay_s is not None]
        ups = [s.upload_s for s in self.sessions if s.upload_s is not None]
        return SimResult(
            seed=self.seed,
            client_count=self.cfg.client_count,
            sessions=self.sessions,
            event_count=self.event_count,
            mean_tls_s=float(np.mean(tls)) if tls else None,
            median_tls_s=float(np.median(tls)) if tls else None,
            mean_upload_s=float(np.mean(ups)) if ups else None,
            median_upload_s=float(np.median(ups)) if ups else None,
        )


def run_simulation(g: GatewayGraph, cfg: SimConfig, seed: int) -> SimResult:
    """Execute one seeded run; identical inputs give bit-identical results."""
    return _Run(g, cfg, seed).run()


def run_campaign(g: GatewayGraph, cfg: SimConfig) -> list[SimResult]:
    """Run cfg.runs independent simulations seeded base_seed + i."""
    return [run_simulation(g, cfg, cfg.base_seed + i) for i in range(cfg.runs)]


def results_to_json_dict(results: list[SimResult]) -> dict[str, Any]:
    """JSON-ready structure: run -> sessions -> per-session measurements."""
    runs = []
    for i, r in enumerate(results):
        runs.append({
            "run": i,
            "seed": r.seed,
            "client_count": r.client_count,
            "mean_tls_s": _r(r.mean_tls_s),
            "median_tls_s": _r(r.median_tls_s),
            "mean_upload_s": _r(r.mean_upload_s),
            "median_upload_s": _r(r.median_upload_s),
            "event_count": r.event_count,
            "sessions": [
                {
                    "client": s.client,
                    "origin": s.origin,
                    "output": s.output,
                    "hops": s.hops,
                    "tls_delay_s": _r(s.tls_delay_s),
                    "upload_s": _r(s.upload_s),
                }
                for s in r.sessions
            ],
        })
    return {"runs": runs}


def results_to_csv(results: list[SimResult]) -> str:
    """Flat per-session CSV across all runs."""
    lines = ["client_count,run,client,origin,output,hops,tls_delay_s,upload_s"]
    for i, r in enumerate(results):
        for s in r.sessions:
            tls = f"{s.tls_delay_s:.6g}" if s.tls_delay_s is not None else ""
            up = f"{s.upload_s:.6g}" if s.upload_s is not None else ""
            lines.append(
                f"{r.client_count},{i},{s.client},{s.origin},{s.output},{s.hops},{tls},{up}"
            )
    return "\n".join(lines) + "\n"


def _r(x: float | None) -> float | None:
    return None if x is None else round_sig(x)
