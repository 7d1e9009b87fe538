"""Command-line front end.

Verbs: ``h1``, ``ret``, ``verify``, ``hat``, ``chair``, ``list-examples``.
Every command builds a plain ``dict`` report; ``--format structured`` prints it
as sorted JSON so identical inputs give byte-identical output.

Exit codes: 0 ok, 1 configuration/usage error or failed check, 2 uncertified
or unstabilized result, 130 interrupted.
"""

from __future__ import annotations

import argparse
import json
from dataclasses import replace
from typing import Any, Sequence

from loguru import logger

from tilehull.apcx import (
    ap_for,
    charpoly,
    charpoly_factors,
    cycle_rank,
    export_edges,
    export_matrix,
    stable_h1_rank,
)
from tilehull.bootstrap import load_env
from tilehull.chair2d import (
    LETTERS,
    Patch2D,
    block_substitution_from_config,
    chair_consistency,
    export_region,
    generate_region,
    is_power_of_two,
    return_lattice,
    supertile_patch_2d,
)
from tilehull.config import AnalysisConfig, example_names, list_examples, load_config, read_json
from tilehull.errors import (
    ConfigError,
    StabilizationError,
    TilehullError,
    UncertifiedError,
    VerificationError,
)
from tilehull.exactlin import eventual_rank
from tilehull.hat import PRESETS, HatParams, analyze, preset
from tilehull.logging_service import configure_logging
from tilehull.retmod import check_corollary, check_theorem1, return_module, unit_lengths
from tilehull.settings import Settings
from tilehull.shapechg import check_theorem2, genericity_sweep, synth_generic
from tilehull.subst1d import Substitution, collar, screen_periodicity

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNCERTIFIED = 2
EXIT_INTERRUPTED = 130


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _require_substitution(cfg: AnalysisConfig, verb: str) -> None:
    if cfg.substitution is None:
        raise ConfigError(f"{verb} needs a substitution config; {cfg.name} is Sturmian", path=cfg.path)


def _radius(cfg: AnalysisConfig, override: int | None, settings: Settings) -> int:
    """``--radius``, then ``TILEHULL_RADIUS``, then the config."""
    for r in (override, settings.analysis.radius):
        if r is not None:
            return r
    return cfg.radius


def cmd_h1(cfg: AnalysisConfig, settings: Settings, radius: int | None = None) -> dict[str, Any]:
    _require_substitution(cfg, "h1")
    s = cfg.substitution
    r = _radius(cfg, radius, settings)
    g, m = ap_for(s, r)  # type: ignore[arg-type]
    stability = stable_h1_rank(s, r)  # type: ignore[arg-type]
    report = {
        "name": cfg.name,
        "radius": r,
        "vertices": g.vertex_count,
        "edges": g.edge_count,
        "cycle_rank": cycle_rank(g),
        "cech_h1_rank": eventual_rank(m.matrix),
        "next_radius_rank": stability.next_rank,
        "stable": stability.stable,
        "induced_matrix": m.matrix.int_rows(),
        "charpoly": [int(c) for c in charpoly(m)],
        "charpoly_factors": [{"coeffs": list(f), "multiplicity": k} for f, k in charpoly_factors(m)],
        "edge_list": export_edges(g).splitlines(),
        "periodic_period": screen_periodicity(s),  # type: ignore[arg-type]
        "certified": True,
    }
    if "h1" in cfg.expect:
        report["expected"] = cfg.expect["h1"]
        report["matches"] = report["cech_h1_rank"] == cfg.expect["h1"]
    return report


def cmd_ret(cfg: AnalysisConfig, settings: Settings, patches: Sequence[str] = ()) -> dict[str, Any]:
    lang = cfg.language()
    lengths = cfg.length_assignment()
    rows = []
    for p in patches or cfg.patches:
        rep = return_module(lang, p, lengths, settings.scan)
        rows.append(rep.to_dict())
    return {
        "name": cfg.name,
        "lengths": lengths.to_dict(),
        "patches": rows,
        "certified": all(r["certificate"]["stabilized"] for r in rows),
    }


def _genericity(s: Substitution, radius: int, seed: int, trials: int = 20) -> dict[str, Any]:
    """Random rational specializations of the generic shape; only singular ones may drop rank."""
    g, m = ap_for(s, radius)
    ell = eventual_rank(m.matrix)
    L = synth_generic(g, unit_lengths(g.collared.codes), ell, m)
    sweep = genericity_sweep(g, m, L, ell, trials=trials, seed=seed)
    low = [t for t in sweep if t.rank < ell]
    return {"ell": ell, "seed": seed, "trials": trials, "below_ell": len(low),
            "passed": all(t.singular for t in low)}


def cmd_verify(cfg: AnalysisConfig, settings: Settings, radius: int | None = None) -> dict[str, Any]:
    if cfg.substitution is None:
        return _verify_sturmian(cfg, settings)
    s = cfg.substitution
    r = _radius(cfg, radius, settings)
    orders = cfg.orders or settings.analysis.orders
    cap = cfg.patch_cap or settings.analysis.patch_cap
    checks: dict[str, Any] = {}
    certified = True
    if isinstance(cfg.lengths, dict) and not set(cfg.lengths) <= set(s.alphabet):
        lengths = cfg.length_assignment(collar(s, r))
    else:
        lengths = cfg.length_assignment()
    runs = (
        ("theorem1", lambda: check_theorem1(s, r, lengths, orders, settings.scan)),
        ("theorem2", lambda: check_theorem2(s, r, None, cap, settings.scan)),
        ("corollary", lambda: check_corollary(s, r, None, orders, settings.scan)),
        ("genericity", lambda: _genericity(s, r, settings.analysis.seed)),
    )
    for key, run in runs:
        try:
            result = run()
            checks[key] = result if isinstance(result, dict) else result.to_dict()
        except VerificationError as exc:
            checks[key] = exc.report.to_dict() if exc.report is not None else {"passed": False, "error": str(exc)}
        except (UncertifiedError, StabilizationError) as exc:
            certified = False
            checks[key] = {"passed": False, "error": str(exc)}
    passed = all(c.get("passed") for c in checks.values())
    expect = cfg.expect
    mismatches = []
    cor = checks.get("corollary", {})
    if "h1" in expect and cor.get("cech_rank") not in (None, expect["h1"]):
        mismatches.append(f"h1: expected {expect['h1']}, got {cor.get('cech_rank')}")
    if "limit_rank" in expect and cor.get("limit_rank") not in (None, expect["limit_rank"]):
        mismatches.append(f"limit_rank: expected {expect['limit_rank']}, got {cor.get('limit_rank')}")
    return {
        "name": cfg.name,
        "radius": r,
        "checks": checks,
        "mismatches": mismatches,
        "periodic_period": screen_periodicity(s),
        "passed": passed and not mismatches,
        "certified": certified,
    }


def _verify_sturmian(cfg: AnalysisConfig, settings: Settings) -> dict[str, Any]:
    rep = cmd_ret(cfg, settings)
    want = cfg.expect.get("ret_rank")
    mismatches = [f"{row['patch']}: expected rank {want}, got {row['rank']}"
                  for row in rep["patches"] if want is not None and row["rank"] != want]
    return {"name": cfg.name, "checks": {"ret": rep}, "mismatches": mismatches,
            "passed": not mismatches, "certified": rep["certified"]}


def cmd_hat(alpha: str | None = None, beta: str | None = None, preset_name: str | None = None) -> dict[str, Any]:
    if preset_name:
        params = preset(preset_name)
    else:
        if alpha is None or beta is None:
            raise ConfigError("hat needs --preset or both --alpha and --beta")
        params = HatParams.parse(alpha, beta)
    out = analyze(params).to_dict()
    out["certified"] = True
    return out


def cmd_chair(source: str, order: int = 8, patch_orders: Sequence[int] = (1, 2)) -> dict[str, Any]:
    data, _ = read_json(source)
    b = block_substitution_from_config(data)
    region = generate_region(b, "NE", order)
    consistency = chair_consistency(region)
    patches = []
    for x in LETTERS:
        patches.append(return_lattice(b, Patch2D.from_rows([[x]]), order).to_dict())
    for k in patch_orders:
        for x in LETTERS:
            rep = return_lattice(b, supertile_patch_2d(b, x, k), order)
            row = rep.to_dict()
            row["index_power_of_two"] = is_power_of_two(rep.index)
            patches.append(row)
    return {
        "name": b.name,
        "order": order,
        "region": {"shape": list(region.shape), "triominoes": consistency.triominoes,
                   "consistent": consistency.ok, "diagnostics": consistency.diagnostics()},
        "patches": patches,
        "certified": all(p["stabilized"] for p in patches),
    }


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def render(report: Any, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False, default=str)
    return _table(report)


def _table(report: Any, indent: str = "") -> str:
    lines: list[str] = []
    if isinstance(report, dict):
        width = max((len(str(k)) for k in report), default=0)
        for k in sorted(report):
            v = report[k]
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{indent}{k}:")
                lines.append(_table(v, indent + "  "))
            else:
                lines.append(f"{indent}{str(k).ljust(width)}  {_cell(v)}")
    elif isinstance(report, list):
        for i, item in enumerate(report):
            lines.append(f"{indent}[{i}]")
            lines.append(_table(item, indent + "  "))
    else:
        lines.append(f"{indent}{_cell(report)}")
    return "\n".join(lines)


def _flat_list(v: Any) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v)


def _cell(v: Any) -> str:
    if isinstance(v, list):
        return ", ".join(_cell(x) if not isinstance(x, list) else "(" + _cell(x) + ")" for x in v)
    return str(v)


def _exit_code(report: Any) -> int:
    reports = report if isinstance(report, list) else [report]
    if any(r.get("passed") is False for r in reports):
        return EXIT_ERROR
    if any(r.get("certified") is False for r in reports):
        return EXIT_UNCERTIFIED
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("structured", "table"), default=None)
    common.add_argument("--log-level", default=None)
    common.add_argument("--log-dir", default=None, help="also write run and verify logs here")
    common.add_argument("--max-scan", type=int, default=None, help="longest prefix scanned for return words")

    parser = argparse.ArgumentParser(prog="tilehull", description="Return modules and cohomology of tiling spaces.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("h1", parents=[common], help="Čech H^1 rank from the Anderson-Putnam complex")
    p.add_argument("--config", required=True)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--export", action="store_true", help="print the AP edge list and induced matrix as text instead")

    p = sub.add_parser("ret", parents=[common], help="return words and return modules of patches")
    p.add_argument("--config", required=True)
    p.add_argument("--patch", action="append", default=[])

    p = sub.add_parser("verify", parents=[common], help="run the rank theorem checks")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--config")
    group.add_argument("--all", action="store_true", help="every bundled substitution and Sturmian example")
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--orders", default=None, help="supertile orders A..B")

    p = sub.add_parser("hat", parents=[common], help="return-module rank of a Hat-family tile")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None)
    p.add_argument("--alpha", default=None)
    p.add_argument("--beta", default=None)

    p = sub.add_parser("chair", parents=[common], help="chair region consistency and return lattices")
    p.add_argument("--config", default="chair")
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--export", action="store_true", help="print the region as a text grid instead")

    sub.add_parser("list-examples", parents=[common], help="bundled configurations")
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    overrides: dict[str, Any] = {
        "format": args.format,
        "log_level": args.log_level,
        "max_scan": args.max_scan,
        "orders": getattr(args, "orders", None),
    }
    if args.log_dir:
        overrides["log_dir"] = args.log_dir
        overrides["log_to_file"] = "1"
    return Settings.from_env(overrides)


def _with_config_caps(cfg: AnalysisConfig, settings: Settings, cli_max_scan: int | None) -> Settings:
    if cfg.max_scan and cli_max_scan is None:
        return replace(settings, scan=replace(settings.scan, max_scan=cfg.max_scan))
    return settings


def dispatch(args: argparse.Namespace, settings: Settings) -> Any:
    verb = args.verb
    if verb == "list-examples":
        return list_examples()
    if verb == "hat":
        return cmd_hat(args.alpha, args.beta, args.preset)
    if verb == "chair":
        if args.export:
            data, _ = read_json(args.config)
            b = block_substitution_from_config(data)
            return export_region(generate_region(b, "NE", args.order))
        return cmd_chair(args.config, args.order)
    if verb == "verify" and args.all:
        out = []
        for name in example_names("substitution") + example_names("sturmian"):
            cfg = load_config(name)
            if args.orders:
                cfg.orders = settings.analysis.orders
            out.append(cmd_verify(cfg, _with_config_caps(cfg, settings, args.max_scan), args.radius))
        return out
    cfg = load_config(args.config)
    settings = _with_config_caps(cfg, settings, args.max_scan)
    if verb == "h1":
        if args.export:
            _require_substitution(cfg, "h1")
            g, m = ap_for(cfg.substitution, _radius(cfg, args.radius, settings))  # type: ignore[arg-type]
            return export_edges(g) + "\n\n" + export_matrix(m)
        return cmd_h1(cfg, settings, args.radius)
    if verb == "ret":
        return cmd_ret(cfg, settings, args.patch)
    if args.orders:
        cfg.orders = settings.analysis.orders
    return cmd_verify(cfg, settings, args.radius)


def main(argv: Sequence[str] | None = None) -> int:
    load_env()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        settings = _settings(args)
        configure_logging(settings.output.log_level,
                          settings.output.log_dir if settings.output.log_to_file else None)
        report = dispatch(args, settings)
    except KeyboardInterrupt:
        return EXIT_INTERRUPTED
    except (UncertifiedError, StabilizationError) as exc:
        logger.error("{}", exc)
        return EXIT_UNCERTIFIED
    except ConfigError as exc:
        logger.error("config error: {}", exc)
        return EXIT_ERROR
    except TilehullError as exc:
        for line in getattr(exc, "diagnostics", []):
            logger.error("  {}", line)
        logger.error("{}", exc)
        return EXIT_ERROR
    if isinstance(report, str):
        print(report)
        return EXIT_OK
    print(render(report, settings.output.format))
    return _exit_code(report)
