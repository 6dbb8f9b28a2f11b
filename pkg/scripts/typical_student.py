"""Build the semester network of a synthetic cohort and print the typical path and share series."""

import argparse
import sys

from coursenet.ingest import SemesterCohortSpec, generate_semester_cohort, parse_enrollments
from coursenet.semester import build_semester_network, common_semester_share, typical_path, write_share_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", help="enrollment CSV; a synthetic cohort is generated when omitted")
    ap.add_argument("--cap", type=int, default=10)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    if args.input:
        with open(args.input, encoding="utf-8", newline="") as fh:
            cohort = parse_enrollments(fh)
    else:
        cohort = generate_semester_cohort(SemesterCohortSpec(seed=args.seed))
    net = build_semester_network(cohort, cap=args.cap)
    for node in typical_path(net):
        print(f"semester {node.ordinal}: {node.label} ({node.weight} students)")
    print()
    write_share_csv(common_semester_share(net), sys.stdout)


if __name__ == "__main__":
    main()
