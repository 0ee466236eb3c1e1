"""Long-range radio link profiles and the distance-dependent data-rate model.

A link between two gateways runs at a fraction of the technology's maximum
data rate that decays exponentially with the relative distance between them:
``rate = max_rate * exp(-2 * d / max_range)``. The maximum rate is only
reached by adjacent nodes; at the edge of the range the rate drops to
``exp(-2)`` (~13.5%) of the maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class LinkProfile:
    """A wireless technology, reduced to its urban range and peak data rate."""

    name: str
    max_range_m: float
    max_rate_bps: float

    def __post_init__(self) -> None:
        if self.max_range_m <= 0:
            raise ValueError(f"profile {self.name!r}: max_range_m must be > 0")
        if self.max_rate_bps <= 0:
            raise ValueError(f"profile {self.name!r}: max_rate_bps must be > 0")


def builtin_profiles() -> list[LinkProfile]:
    """The four range/rate combinations used throughout the experiments.

    NB-IoT (low performance) and Weightless-W (no purchasable hardware) are
    deliberately not offered.
    """
    return [
        LinkProfile("lora-subghz", 5_000.0, 50_000.0),
        LinkProfile("dash7", 5_000.0, 166_000.0),
        LinkProfile("lora24-ltem1", 1_000.0, 1_000_000.0),
        LinkProfile("ltem2", 1_000.0, 4_000_000.0),
    ]


def profile_by_name(name: str) -> LinkProfile:
    for p in builtin_profiles():
        if p.name == name:
            return p
    known = ", ".join(p.name for p in builtin_profiles())
    raise ConfigError(f"unknown link profile {name!r} (built-in: {known})")


def relative_rate(d_rel: float) -> float:
    """Relative data rate exp(-2*d) for a relative distance d in [0, 1]."""
    if not 0.0 <= d_rel <= 1.0:
        raise ValueError(f"relative distance {d_rel!r} outside [0, 1]")
    return math.exp(-2.0 * d_rel)


def link_rate(distance_m: float, profile: LinkProfile) -> float:
    """Effective data rate in bps for a link of the given physical length."""
    if distance_m < 0:
        raise ValueError(f"negative link distance {distance_m!r}")
    if distance_m > profile.max_range_m:
        raise ValueError(
            f"distance {distance_m} m exceeds range {profile.max_range_m} m "
            f"of profile {profile.name!r}; no such link can exist"
        )
    return profile.max_rate_bps * relative_rate(distance_m / profile.max_range_m)
