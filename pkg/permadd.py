#!/usr/bin/env python3
"""
permadd - permute-and-add network codes from group algebras
Main launcher

- Always write a runtime log (stderr is used when the file cannot be opened)
- Reports go to stdout only; logs never do
- `--test` runs a quick self-check of the algebra stack
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

APP_DIR = Path(__file__).resolve().parent
_FAULT_FH = None

# Import path setup (must happen BEFORE importing src modules)
sys.path.insert(0, str(APP_DIR))

from src.settings import load_settings  # noqa: E402


def log_path() -> Path:
    path = Path(load_settings().log_file)
    return path if path.is_absolute() else APP_DIR / path


def _configure_logging() -> None:
    """Log to a file next to permadd.py, warnings and worse also to stderr."""
    global _FAULT_FH

    settings = load_settings()
    handlers: list[logging.Handler] = []
    try:
        handlers.append(logging.FileHandler(log_path(), encoding="utf-8", mode="a"))
    except OSError:
        pass

    console = logging.StreamHandler(sys.stderr)
    if handlers:
        console.setLevel(logging.WARNING)
    handlers.append(console)

    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=handlers,
        force=True,
    )

    # Low-level crash dumps
    try:
        import faulthandler

        _FAULT_FH = open(log_path(), "a", encoding="utf-8")
        faulthandler.enable(_FAULT_FH)
    except OSError:
        pass


def _fatal_excepthook(exctype, value, tb) -> None:
    """Global exception hook: log and point at the log file."""
    try:
        logging.critical("UNHANDLED EXCEPTION", exc_info=(exctype, value, tb))
    except Exception:
        pass
    try:
        print(f"permadd crashed: {value}\nLog file: {log_path()}", file=sys.stderr)
    except Exception:
        pass


def _log_environment() -> None:
    logging.info("=== PERMADD START ===")
    logging.info("APP_DIR=%s", APP_DIR)
    logging.info("CWD=%s", Path.cwd())
    logging.info("sys.executable=%s", sys.executable)
    logging.info("settings=%s", load_settings())


def self_test() -> int:
    """Quick validation mode: `permadd --test`."""
    try:
        from src.group import parse_group
        from src.ideal import ideal_from_T
        from src.spectral import decompose

        d = decompose(parse_group("C15"), 2)
        sizes = list(d.sizes)
        logging.info("F2[C15] component field sizes %s", sizes)
        if sizes != [2, 16, 16, 16, 4]:
            logging.error("Self-test: unexpected component sizes %s", sizes)
            return 1

        degree = ideal_from_T(d, [2]).degree_bound
        if degree != 1:
            logging.error("Self-test: simplex ideal degree %d, expected 1", degree)
            return 1

        logging.info("Self-test OK")
        print("permadd self-test OK")
        return 0
    except Exception:
        _fatal_excepthook(*sys.exc_info())
        return 1


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    _configure_logging()
    sys.excepthook = _fatal_excepthook
    _log_environment()

    if "--test" in argv:
        return self_test()

    from src.cli import main as cli_main

    return cli_main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
