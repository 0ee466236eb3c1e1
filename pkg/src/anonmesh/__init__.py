"""Gateway-mesh location-privacy toolkit.

Builds range-limited gateway graphs from geographic datasets, runs the
biased output-gateway selection protocol and a deterministic discrete-event
session simulation over them, and computes anonymity and distance metrics.
"""

__version__ = "0.1.0"

from .anonymity import MetricsReport, full_report
from .distance_study import DistanceStudy, distance_to_origin, sweep
from .geodata import (
    Dataset,
    GeoPoint,
    build_graph,
    filter_close,
    generate_synthetic,
    haversine_m,
    largest_component,
    parse_dataset,
)
from .graph import GatewayGraph, count_simple_paths, disjoint_paths, hop_distances
from .linkmodel import LinkProfile, builtin_profiles, link_rate, relative_rate
from .protocol import (
    BiasParams,
    ClientRoutingState,
    ProtocolConfig,
    bearing,
    candidate_set,
    init_client,
    maybe_rotate,
    select_output,
)
from .simulator import SimConfig, SimResult, run_campaign, run_simulation

__all__ = [
    "__version__",
    "BiasParams",
    "ClientRoutingState",
    "Dataset",
    "DistanceStudy",
    "GatewayGraph",
    "GeoPoint",
    "LinkProfile",
    "MetricsReport",
    "ProtocolConfig",
    "SimConfig",
    "SimResult",
    "bearing",
    "build_graph",
    "builtin_profiles",
    "candidate_set",
    "count_simple_paths",
    "disjoint_paths",
    "distance_to_origin",
    "filter_close",
    "full_report",
    "generate_synthetic",
    "haversine_m",
    "hop_distances",
    "init_client",
    "largest_component",
    "link_rate",
    "maybe_rotate",
    "parse_dataset",
    "relative_rate",
    "run_campaign",
    "run_simulation",
    "select_output",
    "sweep",
]
