#!/usr/bin/env python3
"""TLS-delay and upload-time means vs client count on a synthetic layout.

Shows how gateway congestion grows with concurrent clients: each client
repeatedly uploads through rotating output gateways, so more clients mean
more contention on the slow mesh links.
"""

import argparse

import numpy as np

from anonmesh.geodata import build_graph, generate_synthetic, largest_component
from anonmesh.linkmodel import profile_by_name
from anonmesh.protocol import ProtocolConfig
from anonmesh.simulator import SimConfig, run_campaign


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nodes", type=int, default=30)
    ap.add_argument("--extent", type=float, default=8_000)
    ap.add_argument("--profile", default="lora-subghz")
    ap.add_argument("--max-hops", type=int, default=3)
    ap.add_argument("--clients", default="1,10,50")
    ap.add_argument("--duration", type=float, default=300.0)
    ap.add_argument("--runs", type=int, default=30)
    ap.add_argument("--seed", type=int, default=100)
    args = ap.parse_args()

    profile = profile_by_name(args.profile)
    d = generate_synthetic("uniform", args.nodes, args.extent, 17)
    g = largest_component(build_graph(d, profile))
    print(f"mesh: {g.num_nodes} nodes, {g.num_edges} edges, profile {profile.name}")
    print("clients,mean_tls_s,mean_upload_s,completed_uploads")
    for clients in (int(c) for c in args.clients.split(",")):
        cfg = SimConfig(
            profile=profile,
            protocol=ProtocolConfig(max_hops=args.max_hops),
            client_count=clients,
            sim_duration_s=args.duration,
            runs=args.runs,
            base_seed=args.seed,
        )
        results = run_campaign(g, cfg)
        tls = [s.tls_delay_s for r in results for s in r.sessions
               if s.tls_delay_s is not None]
        ups = [s.upload_s for r in results for s in r.sessions
               if s.upload_s is not None]
        mean_tls = f"{np.mean(tls):.6g}" if tls else ""
        mean_up = f"{np.mean(ups):.6g}" if ups else ""
        print(f"{clients},{mean_tls},{mean_up},{len(ups)}")


if __name__ == "__main__":
    main()
