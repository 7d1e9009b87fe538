#!/usr/bin/env python
"""Run every bundled example through the checks and print a one-line summary each."""

import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent.absolute()
sys.path.insert(0, str(project_root))

from dotenv import load_dotenv
load_dotenv()

from tilehull.cli import EXIT_ERROR, EXIT_OK, EXIT_UNCERTIFIED, cmd_chair, cmd_hat, cmd_verify
from tilehull.config import example_names, load_config
from tilehull.errors import TilehullError
from tilehull.hat import PRESETS
from tilehull.settings import Settings


def _mark(report: dict) -> str:
    if report.get("passed") is False:
        return "FAIL"
    if report.get("certified") is False:
        return "UNCERTIFIED"
    return "ok"


def main() -> int:
    settings = Settings.from_env()
    worst = EXIT_OK
    print("=" * 60)
    for name in example_names("substitution") + example_names("sturmian"):
        try:
            report = cmd_verify(load_config(name), settings)
        except TilehullError as exc:
            print(f"  {name:<22} ERROR {exc}")
            worst = EXIT_ERROR
            continue
        mark = _mark(report)
        print(f"  {name:<22} {mark}  {'; '.join(report['mismatches'])}")
        if mark == "FAIL":
            worst = EXIT_ERROR
        elif mark == "UNCERTIFIED" and worst == EXIT_OK:
            worst = EXIT_UNCERTIFIED
    print("-" * 60)
    for name in sorted(PRESETS):
        report = cmd_hat(preset_name=name)
        print(f"  hat/{name:<18} rank {report['rank']} (closed form {report['closed_form_rank']})")
    print("-" * 60)
    chair = cmd_chair("chair", order=6)
    indices = sorted({p["lattice"]["index"] for p in chair["patches"]}, key=str)
    print(f"  chair consistent={chair['region']['consistent']} indices={indices}")
    print("=" * 60)
    return worst


if __name__ == "__main__":
    sys.exit(main())
