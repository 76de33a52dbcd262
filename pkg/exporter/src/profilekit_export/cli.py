"""Command line interface for exporting checkpoint evaluation logs."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .jobs import ExportJob, export
from .model import ExportError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="profilekit-export",
        description="Evaluate saved model checkpoints and write analysis logs.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser(
        "export",
        help="run checkpoints over a dataset and write a log directory",
    )
    run.add_argument(
        "--checkpoints",
        nargs="+",
        required=True,
        type=Path,
        metavar="FILE",
        help="checkpoint JSON files, in training order",
    )
    run.add_argument(
        "--resources",
        nargs="+",
        required=True,
        type=float,
        metavar="R",
        help="resource value per checkpoint, strictly increasing",
    )
    run.add_argument(
        "--data",
        required=True,
        type=Path,
        metavar="FILE",
        help="dataset JSON file with points and labels",
    )
    run.add_argument(
        "--out",
        required=True,
        type=Path,
        metavar="DIR",
        help="output log directory (created if missing)",
    )
    run.add_argument(
        "--run-id",
        default=None,
        help="run identifier for the manifest (default: output directory name)",
    )
    return parser


def run(argv: list[str]) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        job = ExportJob(
            checkpoint_paths=tuple(args.checkpoints),
            resource_values=tuple(args.resources),
            dataset_path=args.data,
            output_dir=args.out,
            run_id=args.run_id,
        )
        written = export(job)
    except ExportError as exc:
        print(f"export: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(job.checkpoint_paths)} checkpoints to {written}")
    return 0


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    raise SystemExit(main())
