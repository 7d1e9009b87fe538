"""Command-line entrypoint.

Delegates to ``tilehull.cli.main()`` behind a thin exception boundary:
interrupts exit with 130 and unexpected errors with 1.
"""

from __future__ import annotations

import sys
from pathlib import Path

project_root = str(Path(__file__).parent.absolute())
if project_root not in sys.path:
    sys.path.insert(0, project_root)


def _run() -> int:
    from loguru import logger

    try:
        from tilehull.cli import EXIT_INTERRUPTED, main
    except ImportError as e:
        print(f"Import error: {e}", file=sys.stderr)
        print("Please make sure all dependencies are installed.", file=sys.stderr)
        return 1
    try:
        return main() or 0
    except KeyboardInterrupt:
        return EXIT_INTERRUPTED
    except Exception:  # pragma: no cover - safety net
        logger.exception("fatal error")
        return 1


if __name__ == "__main__":
    sys.exit(_run())
