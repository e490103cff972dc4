"""
Taffin Main Entry Point

Command-line interface: taffin <command> -c config.json [options]

Exit status: 0 when every requested check passes, 1 on a verification
failure, 2 on a configuration error.
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

from taffin.api.commands import EXIT_CONFIG, parse_config, run_command
from taffin.api.render import render_text
from taffin.config import settings
from taffin.diagnostics import RunLogger
from taffin.engine.verify import MUTATIONS
from taffin.errors import ConfigError
from taffin.models import Command


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taffin",
        description="Exact verification of the twisted quantum affinization vertex representation",
    )
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument("-c", "--config", required=True, help="JSON run config")
    parser.add_argument("--relations", help="Comma-separated relation ids, e.g. Q7,Q8")
    parser.add_argument("--coeff-order", type=int)
    parser.add_argument("--mode-window", type=int, help="Doubled window; 6 compares |exponent| <= 3")
    parser.add_argument("--basis-degree", type=int)
    parser.add_argument("--lattice-height", type=int)
    parser.add_argument("--mutation", choices=MUTATIONS, help=argparse.SUPPRESS)
    parser.add_argument("--out", help="Write the report here instead of stdout")
    parser.add_argument("--emit", choices=("json", "text"), default="json")
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.TOOL_VERSION}")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    RunLogger.to_stdout = bool(args.out)
    try:
        cfg = parse_config(args.config)
        overrides = {
            "coeff_order": args.coeff_order,
            "mode_window": args.mode_window,
            "basis_degree": args.basis_degree,
            "lattice_height": args.lattice_height,
        }
        for name, value in overrides.items():
            if value is not None:
                if value < 0:
                    raise ConfigError(f"--{name.replace('_', '-')} must be >= 0", field=f"truncation.{name}")
                setattr(cfg.truncation, name, value)
        relations = [r.strip() for r in args.relations.split(",") if r.strip()] if args.relations else None
        status, report = run_command(args.command, cfg, relations, args.mutation)
    except ConfigError as e:
        RunLogger.log_config(f"error: {e}")
        return EXIT_CONFIG

    output = report.to_json() if args.emit == "json" else render_text(report)
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return status


if __name__ == "__main__":
    sys.exit(main())
