"""
menuforge entry point

Configures logging, dispatches the command tree and maps errors onto exit codes.
"""

import json
import logging
import shlex
import sys
from typing import List, Optional

from menuforge.cli import build_parser
from menuforge.core.config import settings
from menuforge.core.exceptions import MenuforgeError
from menuforge.schemas.reports import ErrorReport


logger = logging.getLogger(__name__)


def configure_logging(level: Optional[str] = None) -> None:
    """Logs go to stderr; stdout carries the JSON reports"""
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def report_error(exc: MenuforgeError) -> int:
    report = ErrorReport(error=type(exc).__name__, detail=str(exc), exit_code=exc.exit_code)
    json.dump(report.model_dump(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return report.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.command_line = "menuforge " + shlex.join(argv)

    configure_logging(args.log_level)
    if args.jobs is not None:
        settings.JOBS = args.jobs

    logger.debug(f"Running {args.command_line}", extra={"jobs": settings.JOBS})
    try:
        return args.handler(args)
    except MenuforgeError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return report_error(exc)
    except Exception as exc:
        logger.error(f"Unhandled exception: {exc}", exc_info=True)
        return report_error(MenuforgeError(f"Internal error: {exc}"))


if __name__ == "__main__":
    sys.exit(main())
