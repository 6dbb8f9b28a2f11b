"""Command-line entry point."""

from __future__ import annotations

import argparse
import sys

from .export import FORMATS
from .pipeline import HUB_METHODS, PipelineError, RunConfig, run_pipeline


def _bool(token: str) -> bool:
    token = token.lower()
    if token not in ("true", "false"):
        raise argparse.ArgumentTypeError(f"expected true or false, got {token!r}")
    return token == "true"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="coursenet",
        description="Detect fields of interest in course enrollment data with weighted Louvain.",
    )
    ap.add_argument("--input", required=True, help="enrollment CSV")
    ap.add_argument("--major", help="restrict to one major")
    ap.add_argument("--enroll-from", type=int, help="first enrollment year (inclusive)")
    ap.add_argument("--enroll-to", type=int, help="last enrollment year (inclusive)")
    ap.add_argument("--outlier-threshold", type=float, default=0.05,
                    help="drop courses taken by fewer than this share of students (default 0.05)")
    ap.add_argument("--hub-method", choices=HUB_METHODS, default="dd")
    ap.add_argument("--mandatory-list", help="mandatory course ids, one per line; required for gt/both")
    ap.add_argument("--include-failed", type=_bool, default=True, metavar="{true,false}",
                    help="count failed completions as taken (default true)")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--min-gain", type=float, default=1e-7, help="smallest modularity gain that counts as a move")
    ap.add_argument("--refine-guard", type=float, help="re-run Louvain inside communities, accepting splits "
                    "whose children keep inter/intra ratio <= this value")
    ap.add_argument("--semester-cap", type=int, default=10)
    ap.add_argument("--export-format", choices=FORMATS)
    ap.add_argument("--out-dir", default="out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    try:
        report, written = run_pipeline(cfg)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
