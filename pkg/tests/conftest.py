from __future__ import annotations

import sys
from pathlib import Path

import pytest

project_root = Path(__file__).parent.parent.absolute()
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from tilehull.settings import ScanSettings
from tilehull.subst1d import Substitution


@pytest.fixture
def fib() -> Substitution:
    return Substitution.from_rule({"a": "ab", "b": "a"}, name="fibonacci")


@pytest.fixture
def tm() -> Substitution:
    return Substitution.from_rule({"a": "ab", "b": "ba"}, name="thue_morse")


@pytest.fixture
def tem() -> Substitution:
    return Substitution.from_rule({"a": "aab", "b": "bba"}, name="three_e_morse")


@pytest.fixture
def pd() -> Substitution:
    return Substitution.from_rule({"a": "ab", "b": "aa"}, name="period_doubling")


@pytest.fixture
def small_scan() -> ScanSettings:
    return ScanSettings(initial_window=128, max_scan=1 << 16, stable_windows=3)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for key in ("TILEHULL_MAX_SCAN", "TILEHULL_ORDERS", "TILEHULL_FORMAT", "TILEHULL_LOG_LEVEL",
                "TILEHULL_LOG_TO_FILE", "TILEHULL_RADIUS", "TILEHULL_PATCH_CAP", "TILEHULL_SEED"):
        monkeypatch.delenv(key, raising=False)
