"""Logging facade.

All modules log through loguru's ``logger``. This module owns sink setup so the
library stays silent unless the CLI (or a test) asks for output, and it keeps
the theorem-check audit trail in ``log/verify.jsonl``.
"""

from __future__ import annotations

import json
import os
import sys
from typing import Any, Mapping

from loguru import logger

from tilehull.log_paths import RUN_LOG, VERIFY_LOG, under

# The library is quiet by default; configure_logging() installs real sinks.
logger.remove()

_verify_path: str | None = None


def configure_logging(level: str = "WARNING", log_dir: str | None = None) -> None:
    """Install a stderr sink at ``level`` and, if ``log_dir`` is given, a file sink."""
    global _verify_path
    logger.remove()
    logger.add(sys.stderr, level=level, format="<level>{level: <8}</level> {name}:{function} - {message}")
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        logger.add(under(log_dir, RUN_LOG), level="DEBUG", rotation="5 MB", retention=3, encoding="utf-8")
        _verify_path = under(log_dir, VERIFY_LOG)
    else:
        _verify_path = None


def log_report(kind: str, payload: Mapping[str, Any]) -> None:
    """Append one theorem-check record to the verify log (best-effort)."""
    logger.info("{} -> {}", kind, "pass" if payload.get("passed") else "FAIL")
    if not _verify_path:
        return
    try:
        with open(_verify_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({"kind": kind, **payload}, sort_keys=True, default=str) + "\n")
    except OSError:
        pass


__all__ = ["logger", "configure_logging", "log_report"]
