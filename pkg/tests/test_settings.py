import pytest

from tilehull.errors import ConfigError
from tilehull.settings import Settings, parse_range


def test_defaults():
    s = Settings.from_env()
    assert s.scan.max_scan == 1 << 22
    assert s.scan.stable_windows == 3
    assert s.analysis.orders == (1, 6)
    assert s.output.format == "structured"


def test_environment_and_overrides(monkeypatch):
    monkeypatch.setenv("TILEHULL_MAX_SCAN", "4096")
    monkeypatch.setenv("TILEHULL_ORDERS", "2..5")
    s = Settings.from_env()
    assert s.scan.max_scan == 4096 and s.analysis.orders == (2, 5)
    s = Settings.from_env({"max_scan": 1024, "orders": "3", "format": "TABLE"})
    assert s.scan.max_scan == 1024 and s.analysis.orders == (3, 3)
    assert s.output.format == "table"


def test_none_overrides_are_ignored(monkeypatch):
    monkeypatch.setenv("TILEHULL_MAX_SCAN", "2048")
    assert Settings.from_env({"max_scan": None}).scan.max_scan == 2048


@pytest.mark.parametrize("overrides", [
    {"max_scan": "lots"},
    {"max_scan": 0},
    {"stable_windows": 1},
    {"radius": -1},
    {"format": "xml"},
    {"orders": "5..1"},
])
def test_bad_settings(overrides):
    with pytest.raises(ConfigError):
        Settings.from_env(overrides)


def test_parse_range():
    assert parse_range(None, (1, 6)) == (1, 6)
    assert parse_range("2..4", (1, 6)) == (2, 4)
    assert parse_range(" 7 ", (1, 6)) == (7, 7)
    with pytest.raises(ConfigError):
        parse_range("a..b", (1, 6))


def test_to_json_round_trips_keys():
    s = Settings.from_env()
    assert '"max_scan"' in s.to_json()
    assert s.to_dict()["analysis"]["radius"] is None


def test_radius_and_seed_from_env(monkeypatch):
    monkeypatch.setenv("TILEHULL_RADIUS", "0")
    monkeypatch.setenv("TILEHULL_SEED", "7")
    s = Settings.from_env()
    assert s.analysis.radius == 0 and s.analysis.seed == 7
    assert Settings.from_env({"radius": 2}).analysis.radius == 2
