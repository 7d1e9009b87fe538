from __future__ import annotations

import os

# General run log (loguru file sink)
RUN_LOG: str = os.path.join("log", "tilehull.log")

# Theorem-check records, one JSON object per line
VERIFY_LOG: str = os.path.join("log", "verify.jsonl")


def under(log_dir: str, path: str) -> str:
    """Re-root one of the default targets under ``log_dir``."""
    return os.path.join(log_dir, os.path.basename(path))
