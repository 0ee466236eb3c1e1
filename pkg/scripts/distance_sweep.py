#!/usr/bin/env python3
"""Mean origin-to-output distance as a function of the max_hops budget.

Works on a user-supplied dataset CSV or a synthetic uniform layout. The mean
rises with max_hops until the layout's own extent saturates it.
"""

import argparse

from anonmesh.distance_study import sweep
from anonmesh.geodata import build_graph, generate_synthetic, largest_component, load_dataset
from anonmesh.linkmodel import profile_by_name
from anonmesh.protocol import ProtocolConfig


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", default=None, help="dataset CSV (default: synthetic)")
    ap.add_argument("--nodes", type=int, default=300)
    ap.add_argument("--extent", type=float, default=30_000)
    ap.add_argument("--profile", default="lora-subghz")
    ap.add_argument("--max-hops", default="1,2,3,4,5,6")
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--bias", action="store_true", help="apply the selection bias")
    args = ap.parse_args()

    profile = profile_by_name(args.profile)
    if args.input:
        d = load_dataset(args.input)
    else:
        d = generate_synthetic("uniform", args.nodes, args.extent, 8)
    g = largest_component(build_graph(d, profile))
    print(f"mesh: {g.num_nodes} nodes, {g.num_edges} edges, profile {profile.name}")

    cfg = ProtocolConfig(bias_enabled=args.bias)
    hops = [int(h) for h in args.max_hops.split(",")]
    study = sweep(g, hops, args.samples, args.seed, cfg)
    print(study.to_csv(), end="")


if __name__ == "__main__":
    main()
