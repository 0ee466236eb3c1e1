"""Flat key-value config files: ``section.key = value``, ``#`` comments.

Command-line flags override config values; config values override built-in
defaults. Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

from typing import Mapping

from .errors import ConfigError
from .linkmodel import LinkProfile, profile_by_name
from .protocol import TIMEOUT_MODES, ProtocolConfig

KNOWN_KEYS = frozenset({
    "protocol.max_hops",
    "protocol.gateway_timeout_s",
    "protocol.timeout_mode",
    "protocol.bias_enabled",
    "protocol.weight_min",
    "protocol.weight_max",
    "profile.name",
    "profile.range_m",
    "profile.rate_bps",
    "sim.client_count",
    "sim.client_counts",
    "sim.duration_s",
    "sim.wan_delay_s",
    "sim.payload_bytes",
    "sim.mtu_bytes",
    "sim.runs",
    "sim.base_seed",
    "sim.syn_bytes",
    "sim.synack_bytes",
    "sim.ack_clienthello_bytes",
    "sim.serverhello_bytes",
})

_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    cfg: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in cfg:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        cfg[key] = value
    return cfg


def load_config(path: str) -> dict[str, str]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_config_text(f.read(), source=path)


def get_int(cfg: Mapping[str, str], key: str, default: int) -> int:
    if key not in cfg:
        return default
    try:
        return int(cfg[key])
    except ValueError:
        raise ConfigError(f"{key}: expected integer, got {cfg[key]!r}") from None


def get_float(cfg: Mapping[str, str], key: str, default: float) -> float:
    if key not in cfg:
        return default
    try:
        return float(cfg[key])
    except ValueError:
        raise ConfigError(f"{key}: expected number, got {cfg[key]!r}") from None


def get_bool(cfg: Mapping[str, str], key: str, default: bool) -> bool:
    if key not in cfg:
        return default
    v = cfg[key].lower()
    if v not in _BOOL:
        raise ConfigError(f"{key}: expected true/false, got {cfg[key]!r}")
    return _BOOL[v]


def get_str(cfg: Mapping[str, str], key: str, default: str) -> str:
    return cfg.get(key, default)


def get_int_list(cfg: Mapping[str, str], key: str, default: list[int]) -> list[int]:
    if key not in cfg:
        return default
    try:
        return [int(x) for x in cfg[key].split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"{key}: expected comma-separated integers, got {cfg[key]!r}") from None


def protocol_from_config(cfg: Mapping[str, str]) -> ProtocolConfig:
    defaults = ProtocolConfig()
    mode = get_str(cfg, "protocol.timeout_mode", defaults.timeout_mode)
    if mode not in TIMEOUT_MODES:
        raise ConfigError(
            f"protocol.timeout_mode: {mode!r} not one of {'/'.join(TIMEOUT_MODES)}"
        )
    try:
        return ProtocolConfig(
            max_hops=get_int(cfg, "protocol.max_hops", defaults.max_hops),
            gateway_timeout=get_float(cfg, "protocol.gateway_timeout_s", defaults.gateway_timeout),
            timeout_mode=mode,
            bias_enabled=get_bool(cfg, "protocol.bias_enabled", defaults.bias_enabled),
            weight_min=get_float(cfg, "protocol.weight_min", defaults.weight_min),
            weight_max=get_float(cfg, "protocol.weight_max", defaults.weight_max),
        )
    except ValueError as exc:
        raise ConfigError(f"protocol.*: {exc}") from None


def profile_from_config(cfg: Mapping[str, str], flag_name: str | None = None) -> LinkProfile:
    """Resolve the link profile: --profile flag wins, then profile.* keys,
    then the default built-in."""
    custom_keys = [k for k in ("profile.name", "profile.range_m", "profile.rate_bps") if k in cfg]
    if flag_name is not None:
        # a flag naming a config-defined custom profile is also accepted
        if custom_keys and cfg.get("profile.name") == flag_name:
            return _custom_profile(cfg)
        return profile_by_name(flag_name)
    if custom_keys:
        return _custom_profile(cfg)
    return profile_by_name("lora-subghz")


def _custom_profile(cfg: Mapping[str, str]) -> LinkProfile:
    for k in ("profile.name", "profile.range_m", "profile.rate_bps"):
        if k not in cfg:
            raise ConfigError(f"custom profile requires {k}")
    try:
        return LinkProfile(
            name=cfg["profile.name"],
            max_range_m=get_float(cfg, "profile.range_m", 0.0),
            max_rate_bps=get_float(cfg, "profile.rate_bps", 0.0),
        )
    except ValueError as exc:
        raise ConfigError(f"profile.*: {exc}") from None
