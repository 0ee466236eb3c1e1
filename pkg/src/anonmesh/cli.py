"""Command-line front end: ingest -> preprocess -> analyze/simulate -> artifacts.

Subcommands: generate, preprocess, metrics, simulate, distance. Every command
that writes a result file also writes a ``<out>.manifest.json`` sidecar with
the resolved parameters, input digest, seeds, and a timestamp; the result
files themselves embed or reference only the deterministic part so that
seeded re-runs are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import replace
from datetime import datetime, timezone
from typing import Any

from . import __version__, anonymity, config, distance_study, geodata, simulator
from .errors import AnonMeshError, EnumerationLimitError
from .linkmodel import LinkProfile
from .simulator import HandshakeSizes, SimConfig


def _sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _manifest_core(command: str, parameters: dict[str, Any],
                   input_path: str | None, seeds: list[int]) -> dict[str, Any]:
    return {
        "tool": "anonmesh",
        "version": __version__,
        "command": command,
        "parameters": parameters,
        "input": input_path,
        "input_sha256": _sha256_file(input_path) if input_path else None,
        "seeds": seeds,
    }


def _write_manifest(out_path: str, core: dict[str, Any]) -> str:
    side = out_path + ".manifest.json"
    doc = dict(core)
    doc["created_utc"] = datetime.now(timezone.utc).isoformat()
    with open(side, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
    return os.path.basename(side)


def _write_csv(out_path: str, body: str, core: dict[str, Any]) -> None:
    ref = _write_manifest(out_path, core)
    with open(out_path, "w", encoding="utf-8") as f:
        f.write(f"# manifest: {ref}\n")
        f.write(body)


def _write_json(out_path: str, doc: dict[str, Any], core: dict[str, Any]) -> None:
    ref = _write_manifest(out_path, core)
    doc = {"manifest": core, "manifest_file": ref, **doc}
    with open(out_path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def _load_cfg(args: argparse.Namespace) -> dict[str, str]:
    return config.load_config(args.config) if args.config else {}


def _load_mesh(path: str, profile: LinkProfile) -> tuple[geodata.Dataset, Any]:
    """Load a (preprocessed) dataset and build its largest-component graph."""
    d = geodata.load_dataset(path)
    g = geodata.build_graph(d, profile)
    return d, geodata.largest_component(g)


# -- subcommands -------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    d = geodata.generate_synthetic(args.kind, args.n, args.extent, args.seed)
    core = _manifest_core(
        "generate",
        {"kind": args.kind, "n": args.n, "extent_m": args.extent},
        None,
        [args.seed],
    )
    ref = _write_manifest(args.out, core)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(f"# manifest: {ref}\n")
        geodata.write_csv(d, f)
    print(f"wrote {len(d)} points to {args.out}")
    return 0


def cmd_preprocess(args: argparse.Namespace) -> int:
    cfg = _load_cfg(args)
    profile = config.profile_from_config(cfg, args.profile)
    raw = geodata.load_dataset(args.input)
    close = geodata.filter_close(raw, args.min_sep)
    g = geodata.largest_component(geodata.build_graph(close, profile))
    kept = geodata.Dataset(close.name, tuple(close.points[i] for i in g.node_ids()))
    core = _manifest_core(
        "preprocess",
        {"profile": profile.name, "range_m": profile.max_range_m, "min_sep_m": args.min_sep},
        args.input,
        [],
    )
    ref = _write_manifest(args.out, core)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(f"# manifest: {ref}\n")
        geodata.write_csv(kept, f, with_ids=True)
    if len(kept) == 0:
        print("warning: no gateways left after preprocessing", file=sys.stderr)
    print(f"total={len(raw)} close={len(close)} cc={len(kept)}")
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    cfg = _load_cfg(args)
    profile = config.profile_from_config(cfg, args.profile)
    _, g = _load_mesh(args.input, profile)
    try:
        report = anonymity.full_report(g, args.max_hops, profile.name)
    except EnumerationLimitError as exc:
        print(f"error: {exc}\nhint: lower --max-hops to keep the path count tractable",
              file=sys.stderr)
        return 1
    core = _manifest_core(
        "metrics",
        {"profile": profile.name, "max_hops": args.max_hops, "per_gateway": args.per_gateway},
        args.input,
        [],
    )
    if args.out:
        _write_json(args.out, report.to_json_dict(per_gateway=args.per_gateway), core)
    if args.csv:
        body = report.csv_header() + "\n" + report.csv_row() + "\n"
        if args.per_gateway:
            body += "gateway,anonymity_set,effective_set\n"
            for m in report.per_gateway:
                body += f"{m.gateway},{m.anonymity_set},{m.effective_set:.6g}\n"
        _write_csv(args.csv, body, core)
    print(f"nodes={report.node_count} edges={report.edge_count} max_hops={report.max_hops}")
    print(report.csv_header())
    print(report.csv_row())
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_cfg(args)
    profile = config.profile_from_config(cfg, args.profile)
    proto = config.protocol_from_config(cfg)
    if args.max_hops is not None:
        proto = replace(proto, max_hops=args.max_hops)
    _, g = _load_mesh(args.input, profile)
    counts = (
        [int(x) for x in args.clients.split(",")]
        if args.clients
        else config.get_int_list(cfg, "sim.client_counts",
                                 [config.get_int(cfg, "sim.client_count", 1)])
    )
    base = SimConfig(
        profile=profile,
        protocol=proto,
        client_count=counts[0],
        sim_duration_s=args.duration
        if args.duration is not None
        else config.get_float(cfg, "sim.duration_s", 3600.0),
        wan_delay_s=config.get_float(cfg, "sim.wan_delay_s", 0.100),
        payload_bytes=config.get_int(cfg, "sim.payload_bytes", 200_000),
        mtu_bytes=config.get_int(cfg, "sim.mtu_bytes", 1500),
        handshake=HandshakeSizes(
            syn=config.get_int(cfg, "sim.syn_bytes", 40),
            synack=config.get_int(cfg, "sim.synack_bytes", 40),
            ack_clienthello=config.get_int(cfg, "sim.ack_clienthello_bytes", 300),
            serverhello=config.get_int(cfg, "sim.serverhello_bytes", 1200),
        ),
        runs=args.runs if args.runs is not None else config.get_int(cfg, "sim.runs", 30),
        base_seed=args.seed if args.seed is not None else config.get_int(cfg, "sim.base_seed", 1),
    )
    campaigns = []
    print("clients,mean_tls_s,mean_upload_s,sessions")
    for c in counts:
        sc = replace(base, client_count=c)
        results = simulator.run_campaign(g, sc)
        campaigns.append((c, results))
        tls = [s.tls_delay_s for r in results for s in r.sessions if s.tls_delay_s is not None]
        ups = [s.upload_s for r in results for s in r.sessions if s.upload_s is not None]
        n = sum(len(r.sessions) for r in results)
        mean_tls = f"{sum(tls) / len(tls):.6g}" if tls else ""
        mean_up = f"{sum(ups) / len(ups):.6g}" if ups else ""
        print(f"{c},{mean_tls},{mean_up},{n}")
    core = _manifest_core(
        "simulate",
        {
            "profile": profile.name,
            "max_hops": proto.max_hops,
            "client_counts": counts,
            "runs": base.runs,
            "duration_s": base.sim_duration_s,
            "payload_bytes": base.payload_bytes,
            "mtu_bytes": base.mtu_bytes,
            "wan_delay_s": base.wan_delay_s,
        },
        args.input,
        [base.base_seed + i for i in range(base.runs)],
    )
    if args.out:
        if len(campaigns) == 1:
            doc: dict[str, Any] = {
                "client_count": campaigns[0][0],
                **simulator.results_to_json_dict(campaigns[0][1]),
            }
        else:
            doc = {
                "campaigns": [
                    {"client_count": c, **simulator.results_to_json_dict(rs)}
                    for c, rs in campaigns
                ]
            }
        _write_json(args.out, doc, core)
    if args.csv:
        body = "".join(simulator.results_to_csv(rs) for _, rs in campaigns)
        # keep a single header when sweeping client counts
        lines = body.splitlines()
        header, rows = lines[0], [l for l in lines[1:] if l and not l.startswith("client_count,run")]
        _write_csv(args.csv, header + "\n" + "\n".join(rows) + "\n", core)
    return 0


def cmd_distance(args: argparse.Namespace) -> int:
    cfg = _load_cfg(args)
    profile = config.profile_from_config(cfg, args.profile)
    proto = replace(config.protocol_from_config(cfg), bias_enabled=args.bias)
    _, g = _load_mesh(args.input, profile)
    hops = [int(x) for x in args.max_hops.split(",")]
    study = distance_study.sweep(g, hops, args.samples, args.seed, proto)
    core = _manifest_core(
        "distance",
        {
            "profile": profile.name,
            "max_hops": hops,
            "samples": args.samples,
            "bias_enabled": args.bias,
        },
        args.input,
        [args.seed + i for i in range(len(hops))],
    )
    body = study.to_csv()
    if args.out:
        _write_csv(args.out, body, core)
    print(body, end="")
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anonmesh",
        description="Gateway-mesh preprocessing, anonymity metrics, and session simulation.",
    )
    parser.add_argument("--version", action="version", version=f"anonmesh {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic gateway dataset CSV")
    p.add_argument("kind", choices=geodata.SYNTHETIC_KINDS)
    p.add_argument("n", type=int)
    p.add_argument("--extent", type=float, default=10_000.0, help="square side in meters")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("preprocess", help="proximity filter + largest connected component")
    p.add_argument("--input", required=True)
    p.add_argument("--profile", default=None, help="link profile name")
    p.add_argument("--min-sep", type=float, default=200.0)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("metrics", help="anonymity metrics for a preprocessed dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--profile", default=None)
    p.add_argument("--max-hops", type=int, default=3)
    p.add_argument("--per-gateway", action="store_true")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None, help="JSON report path")
    p.add_argument("--csv", default=None, help="CSV report path")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("simulate", help="run the session/upload simulation campaign")
    p.add_argument("--input", required=True)
    p.add_argument("--profile", default=None)
    p.add_argument("--max-hops", type=int, default=None)
    p.add_argument("--clients", default=None, help="comma list of client counts")
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--duration", type=float, default=None, help="simulated seconds")
    p.add_argument("--seed", type=int, default=None, help="base seed")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None, help="JSON results path")
    p.add_argument("--csv", default=None, help="flat CSV results path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("distance", help="origin-to-output distance study")
    p.add_argument("--input", required=True)
    p.add_argument("--profile", default=None)
    p.add_argument("--max-hops", default="1,2,3,4,5", help="comma list")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bias", action=argparse.BooleanOptionalAction, default=False,
                   help="draw outputs with the per-client selection bias")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_distance)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AnonMeshError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
