from __future__ import annotations

"""
Centralized runtime settings for tilehull.

Single source of truth for tunables. Values are resolved from environment
variables with safe defaults; loading a ``.env`` file is handled by
``tilehull.bootstrap.load_env()``.

Design principles:
- Pure dataclasses, explicit parsing helpers for booleans and ranges.
- Overrides (from the CLI) win over the environment, which wins over defaults.
"""

from dataclasses import dataclass, field, asdict
from typing import Any, Dict, Optional, Tuple
import os
import json

from tilehull.errors import ConfigError

ENV_PREFIX = "TILEHULL_"


def _is_on(val: Optional[str]) -> bool:
    return (val or "0").strip().lower() in {"1", "true", "yes", "on"}


def parse_range(raw: Optional[str], default: Tuple[int, int]) -> Tuple[int, int]:
    """Parse ``"A..B"`` (inclusive) into a tuple; a bare ``"N"`` means ``N..N``."""
    if not raw:
        return default
    text = raw.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            out = (int(lo), int(hi))
        else:
            out = (int(text), int(text))
    except ValueError as exc:
        raise ConfigError(f"bad range {raw!r}; expected A..B") from exc
    if out[0] < 0 or out[1] < out[0]:
        raise ConfigError(f"bad range {raw!r}; need 0 <= A <= B")
    return out


def _env(name: str, default: Any) -> str:
    return os.getenv(ENV_PREFIX + name, str(default))


@dataclass(slots=True)
class ScanSettings:
    initial_window: int = 256
    max_scan: int = 1 << 22
    stable_windows: int = 3


@dataclass(slots=True)
class AnalysisSettings:
    radius: Optional[int] = None  # None: each config's own radius
    orders: Tuple[int, int] = (1, 6)
    patch_cap: int = 10
    seed: int = 20240117


@dataclass(slots=True)
class OutputSettings:
    format: str = "structured"  # structured | table
    log_level: str = "WARNING"
    log_dir: str = "log"
    log_to_file: bool = False


@dataclass(slots=True)
class Settings:
    scan: ScanSettings = field(default_factory=ScanSettings)
    analysis: AnalysisSettings = field(default_factory=AnalysisSettings)
    output: OutputSettings = field(default_factory=OutputSettings)

    @staticmethod
    def from_env(overrides: Optional[Dict[str, Any]] = None) -> "Settings":
        o: Dict[str, Any] = {k: v for k, v in (overrides or {}).items() if v is not None}
        s = Settings()
        sc = s.scan
        try:
            sc.initial_window = int(o.get("initial_window", _env("INITIAL_WINDOW", sc.initial_window)))
            sc.max_scan = int(o.get("max_scan", _env("MAX_SCAN", sc.max_scan)))
            sc.stable_windows = int(o.get("stable_windows", _env("STABLE_WINDOWS", sc.stable_windows)))
            an = s.analysis
            raw_radius = o.get("radius", os.getenv(ENV_PREFIX + "RADIUS"))
            an.radius = int(raw_radius) if raw_radius not in (None, "") else None
            an.patch_cap = int(o.get("patch_cap", _env("PATCH_CAP", an.patch_cap)))
            an.seed = int(o.get("seed", _env("SEED", an.seed)))
        except ValueError as exc:
            raise ConfigError(f"non-integer setting: {exc}") from exc
        orders = o.get("orders")
        if isinstance(orders, tuple):
            s.analysis.orders = orders
        else:
            s.analysis.orders = parse_range(orders or os.getenv(ENV_PREFIX + "ORDERS"), s.analysis.orders)
        out = s.output
        out.format = str(o.get("format", _env("FORMAT", out.format))).strip().lower()
        out.log_level = str(o.get("log_level", _env("LOG_LEVEL", out.log_level))).strip().upper()
        out.log_dir = str(o.get("log_dir", _env("LOG_DIR", out.log_dir)))
        out.log_to_file = _is_on(str(o.get("log_to_file", _env("LOG_TO_FILE", "0"))))
        s.validate()
        return s

    def validate(self) -> None:
        if self.scan.initial_window <= 0 or self.scan.max_scan <= 0:
            raise ConfigError("scan caps must be positive")
        if self.scan.stable_windows < 2:
            raise ConfigError("stabilization needs at least 2 windows")
        if (self.analysis.radius is not None and self.analysis.radius < 0) or self.analysis.patch_cap <= 0:
            raise ConfigError("radius must be >= 0 and patch cap positive")
        if self.output.format not in {"structured", "table"}:
            raise ConfigError(f"unknown output format {self.output.format!r}")

    # Operational helpers
    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, sort_keys=True)
