from __future__ import annotations

from .env import load_env
