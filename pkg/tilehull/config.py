"""Analysis configuration files.

Configs are JSON documents. A bare name (``"thue_morse"``) resolves to the
bundled file in ``tilehull/configs``; anything else is read as a path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from tilehull.contracts import LanguagePort
from tilehull.errors import ConfigError, RationalSlopeError
from tilehull.formal_num import parse_formal
from tilehull.retmod import (
    LengthAssignment,
    as_language,
    lengths_from_mapping,
    symbolic_lengths,
    unit_lengths,
)
from tilehull.settings import parse_range
from tilehull.subst1d import CollaredAlphabet, SturmianSpec, Substitution

CONFIG_DIR = Path(__file__).parent / "configs"


@dataclass(slots=True)
class AnalysisConfig:
    name: str
    substitution: Substitution | None = None
    sturmian: SturmianSpec | None = None
    radius: int = 1
    lengths: Any = "unit"
    patches: tuple[str, ...] = ()
    patch_cap: int | None = None
    orders: tuple[int, int] | None = None
    max_scan: int | None = None
    expect: dict[str, Any] = field(default_factory=dict)
    description: str = ""
    path: str | None = None

    @property
    def alphabet(self) -> tuple[str, ...]:
        if self.substitution is not None:
            return self.substitution.alphabet
        return ("a", "b")

    def language(self) -> LanguagePort:
        source = self.substitution if self.substitution is not None else self.sturmian
        return as_language(source)  # type: ignore[arg-type]

    def length_assignment(self, collared: CollaredAlphabet | None = None) -> LengthAssignment:
        """Lengths on the plain letters, or on ``collared`` letters when given.

        Plain-letter maps stay plain; callers pull them back onto collared letters.
        """
        spec = self.lengths
        alphabet = collared.codes if collared is not None else self.alphabet
        if spec == "unit":
            return unit_lengths(alphabet)
        if spec == "symbolic":
            return symbolic_lengths(alphabet)
        if isinstance(spec, Mapping):
            try:
                if collared is not None and set(spec) == {c.label for c in collared.letters}:
                    return lengths_from_mapping(alphabet, spec, labels=[c.label for c in collared.letters])
                return lengths_from_mapping(self.alphabet, spec)
            except (KeyError, ValueError) as exc:
                raise ConfigError(f"bad lengths in {self.name}: {exc}", path=self.path) from exc
        raise ConfigError(f"lengths must be 'unit', 'symbolic' or a mapping, got {spec!r}", path=self.path)


def config_path(path_or_name: str) -> Path:
    p = Path(path_or_name)
    if p.suffix == ".json" and p.exists():
        return p
    bundled = CONFIG_DIR / f"{path_or_name}.json"
    if bundled.exists():
        return bundled
    if p.exists():
        return p
    raise ConfigError(f"no config named {path_or_name!r} (see list-examples)", path=path_or_name)


def read_json(path_or_name: str) -> tuple[dict[str, Any], str]:
    path = config_path(path_or_name)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}", path=str(path)) from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object", path=str(path))
    return data, str(path)


def _positive(data: Mapping[str, Any], key: str, path: str) -> int | None:
    if key not in data:
        return None
    value = data[key]
    if not isinstance(value, int) or value <= 0:
        raise ConfigError(f"{key} must be a positive integer, got {value!r}", path=path)
    return value


def parse_config(data: Mapping[str, Any], path: str | None = None) -> AnalysisConfig:
    where = path or "<config>"
    name = str(data.get("name") or Path(where).stem)
    sub = stu = None
    if "substitution" in data:
        block = data["substitution"]
        try:
            rule = dict(block["rule"])
            sub = Substitution.from_rule(rule, block.get("alphabet"), name=name)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad substitution in {where}: {exc}", path=path) from exc
    elif "sturmian" in data:
        block = data["sturmian"]
        try:
            stu = SturmianSpec(int(block["d"]), int(block["p"]), int(block["q"]), int(block["r"]),
                               Fraction(str(block.get("rho", "0"))), name=name)
        except (KeyError, TypeError, ValueError, RationalSlopeError) as exc:
            raise ConfigError(f"bad sturmian block in {where}: {exc}", path=path) from exc
    else:
        raise ConfigError(f"{where}: needs a 'substitution' or 'sturmian' block", path=path)

    radius = data.get("radius", 1)
    if not isinstance(radius, int) or radius < 0:
        raise ConfigError(f"radius must be a non-negative integer, got {radius!r}", path=path)
    patches = data.get("patches", [])
    if not isinstance(patches, list) or not all(isinstance(p, str) and p for p in patches):
        raise ConfigError("patches must be a list of nonempty words", path=path)
    orders = parse_range(data["orders"], (1, 6)) if "orders" in data else None
    cfg = AnalysisConfig(
        name=name,
        substitution=sub,
        sturmian=stu,
        radius=radius,
        lengths=data.get("lengths", "unit"),
        patches=tuple(patches),
        patch_cap=_positive(data, "patch_cap", where),
        orders=orders,
        max_scan=_positive(data, "max_scan", where),
        expect=dict(data.get("expect", {})),
        description=str(data.get("description", "")),
        path=path,
    )
    letters = set(cfg.alphabet)
    for p in cfg.patches:
        if not set(p) <= letters:
            raise ConfigError(f"patch {p!r} uses letters outside {sorted(letters)}", path=path)
    # parse lengths eagerly so bad symbols surface as config errors
    if isinstance(cfg.lengths, Mapping) and not set(cfg.lengths) <= letters:
        for key, text in cfg.lengths.items():
            try:
                parse_formal(str(text))
            except ValueError as exc:
                raise ConfigError(f"bad length for {key!r}: {exc}", path=path) from exc
    else:
        cfg.length_assignment()
    return cfg


def load_config(path_or_name: str) -> AnalysisConfig:
    data, path = read_json(path_or_name)
    if "rule" in data and "substitution" not in data and "sturmian" not in data:
        raise ConfigError(f"{path} is a block-rule config; use the chair command", path=path)
    return parse_config(data, path)


def list_examples() -> list[dict[str, str]]:
    out = []
    for p in sorted(CONFIG_DIR.glob("*.json")):
        data = json.loads(p.read_text(encoding="utf-8"))
        kind = "chair" if "rule" in data and "substitution" not in data else (
            "sturmian" if "sturmian" in data else "substitution")
        out.append({"name": p.stem, "kind": kind, "description": str(data.get("description", ""))})
    return out


def example_names(kind: str | None = None) -> list[str]:
    return [e["name"] for e in list_examples() if kind is None or e["kind"] == kind]
