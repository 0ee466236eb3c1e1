"""Geographic gateway datasets: CSV ingestion, synthetic layouts, and the
proximity-filter / range-graph / largest-component preprocessing pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from . import linkmodel
from .errors import DatasetError
from .graph import GatewayGraph, connected_components
from .linkmodel import LinkProfile

EARTH_RADIUS_M = 6_371_000.0
M_PER_DEG = EARTH_RADIUS_M * math.pi / 180.0

SYNTHETIC_KINDS = ("uniform", "clustered", "complete")


@dataclass(frozen=True)
class GeoPoint:
    """A gateway position in WGS84 decimal degrees with a stable integer id."""

    lat: float
    lon: float
    id: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat) and -90.0 <= self.lat <= 90.0):
            raise ValueError(f"latitude {self.lat!r} outside [-90, 90]")
        if not (math.isfinite(self.lon) and -180.0 <= self.lon <= 180.0):
            raise ValueError(f"longitude {self.lon!r} outside [-180, 180]")


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of gateway positions; order is source-row order.

    The proximity filter is order-sensitive, so the order must be preserved
    exactly as ingested.
    """

    name: str
    points: tuple[GeoPoint, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters (mean Earth radius 6371 km)."""
    lat1 = math.radians(a.lat)
    lat2 = math.radians(b.lat)
    dlat = math.radians(b.lat - a.lat)
    dlon = math.radians(b.lon - a.lon)
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def _haversine_to_many(
    lat_rad: float, lon_rad: float, lats_rad: np.ndarray, lons_rad: np.ndarray
) -> np.ndarray:
    """Vectorized haversine from one point to many (all angles in radians)."""
    dlat = lats_rad - lat_rad
    dlon = lons_rad - lon_rad
    h = np.sin(dlat / 2) ** 2 + math.cos(lat_rad) * np.cos(lats_rad) * np.sin(dlon / 2) ** 2
    return 2.0 * EARTH_RADIUS_M * np.arcsin(np.minimum(1.0, np.sqrt(h)))


def parse_dataset(source: Iterable[str], name: str = "dataset") -> Dataset:
    """Parse a gateway CSV: header ``lat,lon`` (an extra trailing ``id``
    column, as written by the preprocess step, is tolerated and ignored).

    Lines starting with ``#`` and blank lines are skipped; an entirely empty
    file yields an empty dataset. Any malformed row raises DatasetError
    naming the line number.
    """
    points: list[GeoPoint] = []
    ncols = 0
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n").strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if ncols == 0:  # first content line must be the header
            if fields == ["lat", "lon"] or fields == ["lat", "lon", "id"]:
                ncols = len(fields)
                continue
            raise DatasetError(f"{name}:{lineno}: expected header 'lat,lon', got {line!r}")
        if len(fields) != ncols:
            raise DatasetError(f"{name}:{lineno}: expected {ncols} columns, got {len(fields)}")
        try:
            lat = float(fields[0])
            lon = float(fields[1])
        except ValueError:
            raise DatasetError(f"{name}:{lineno}: non-numeric coordinate in {line!r}") from None
        if ncols == 3:
            try:
                int(fields[2])
            except ValueError:
                raise DatasetError(f"{name}:{lineno}: non-integer id {fields[2]!r}") from None
        try:
            points.append(GeoPoint(lat, lon, len(points)))
        except ValueError as exc:
            raise DatasetError(f"{name}:{lineno}: {exc}") from None
    return Dataset(name, tuple(points))


def load_dataset(path: str) -> Dataset:
    with open(path, "r", encoding="utf-8") as f:
        return parse_dataset(f, name=path)


def write_csv(d: Dataset, f: IO[str], with_ids: bool = False) -> None:
    """Write a dataset in the ingestible CSV format (full float precision)."""
    if with_ids:
        f.write("lat,lon,id\n")
        for p in d.points:
            f.write(f"{p.lat!r},{p.lon!r},{p.id}\n")
    else:
        f.write("lat,lon\n")
        for p in d.points:
            f.write(f"{p.lat!r},{p.lon!r}\n")


def filter_close(d: Dataset, min_sep_m: float = 200.0) -> Dataset:
    """Drop points closer than ``min_sep_m`` to an already-kept point.

    Greedy keep-first scan in input order: a point survives iff it is at
    least min_sep_m away from every point kept before it. Ids are reassigned
    0..k-1 over the survivors, preserving input order.
    """
    if min_sep_m < 0:
        raise ValueError(f"min_sep_m must be >= 0, got {min_sep_m}")
    n = len(d.points)
    kept: list[GeoPoint] = []
    klat = np.empty(n)
    klon = np.empty(n)
    k = 0
    for p in d.points:
        lat_r = math.radians(p.lat)
        lon_r = math.radians(p.lon)
        if k:
            dists = _haversine_to_many(lat_r, lon_r, klat[:k], klon[:k])
            if float(dists.min()) < min_sep_m:
                continue
        klat[k] = lat_r
        klon[k] = lon_r
        k += 1
        kept.append(GeoPoint(p.lat, p.lon, len(kept)))
    return Dataset(d.name, tuple(kept))


def build_graph(d: Dataset, profile: LinkProfile) -> GatewayGraph:
    """Connect every pair of points within the profile's range.

    Expects a proximity-filtered dataset (not enforced). Each edge carries
    the physical distance and the distance-derated link rate.
    """
    pts = list(d.points)
    n = len(pts)
    lats = np.radians(np.array([p.lat for p in pts], dtype=float))
    lons = np.radians(np.array([p.lon for p in pts], dtype=float))
    edges: list[tuple[int, int, float, float]] = []
    for i in range(n - 1):
        dists = _haversine_to_many(float(lats[i]), float(lons[i]), lats[i + 1 :], lons[i + 1 :])
        for off in np.nonzero(dists <= profile.max_range_m)[0]:
            j = i + 1 + int(off)
            dist = float(dists[off])
            edges.append((pts[i].id, pts[j].id, dist, linkmodel.link_rate(dist, profile)))
    return GatewayGraph({p.id: p for p in pts}, edges)


def largest_component(g: GatewayGraph) -> GatewayGraph:
    """Induced subgraph on the largest connected component.

    Size ties go to the component containing the smallest node id; node ids
    are preserved, not renumbered.
    """
    if g.num_nodes == 0:
        return g
    return g.subgraph(connected_components(g)[0])


def generate_synthetic(kind: str, n: int, extent_m: float, seed: int) -> Dataset:
    """Deterministic synthetic gateway layouts near (0°, 0°).

    ``uniform``: n points over a square of side extent_m (equirectangular
    placement; distortion is negligible at the extents used here).
    ``clustered``: n points in ceil(n/50) Gaussian clusters over that square.
    ``complete``: n points jittered within a few meters so that any positive
    link range yields a complete graph (all pairs < 10 m apart).
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if extent_m <= 0:
        raise ValueError(f"extent_m must be > 0, got {extent_m}")
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        xy = rng.uniform(-extent_m / 2, extent_m / 2, size=(n, 2))
    elif kind == "clustered":
        k = max(1, math.ceil(n / 50))
        centers = rng.uniform(-extent_m / 2, extent_m / 2, size=(k, 2))
        offsets = rng.normal(0.0, extent_m / 20.0, size=(n, 2))
        xy = centers[np.arange(n) % k] + offsets
    elif kind == "complete":
        xy = rng.uniform(0.0, 5.0, size=(n, 2))
    else:
        raise ValueError(f"unknown synthetic kind {kind!r} (choose from {SYNTHETIC_KINDS})")
    points = tuple(
        GeoPoint(float(xy[i, 1]) / M_PER_DEG, float(xy[i, 0]) / M_PER_DEG, i)
        for i in range(n)
    )
    return Dataset(f"{kind}-{n}", points)
