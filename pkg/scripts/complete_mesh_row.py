#!/usr/bin/env python3
"""Metrics row for a fully-connected gateway mesh.

A complete mesh is the one case with exact closed-form metrics (every
candidate is symmetric), which makes it the standard sanity anchor:
n=51, max_hops=3 must give 50 / 50 / 50.0 / 50.0 / 2402.0 / 50.0.
"""

import argparse
import time

from anonmesh.anonymity import full_report
from anonmesh.geodata import build_graph, generate_synthetic
from anonmesh.linkmodel import profile_by_name


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=51)
    ap.add_argument("--max-hops", type=int, default=3)
    ap.add_argument("--profile", default="lora-subghz")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    profile = profile_by_name(args.profile)
    t0 = time.perf_counter()
    d = generate_synthetic("complete", args.n, 1_000, args.seed)
    g = build_graph(d, profile)
    report = full_report(g, args.max_hops, profile.name)
    elapsed = time.perf_counter() - t0

    print(f"complete mesh: n={g.num_nodes} edges={g.num_edges} "
          f"max_hops={args.max_hops} profile={profile.name}")
    print(report.csv_header())
    print(report.csv_row())
    print(f"({elapsed:.2f}s)")


if __name__ == "__main__":
    main()
