"""Write a planted-block enrollment CSV plus a matching mandatory-course list."""

import argparse
from pathlib import Path

from coursenet.ingest import PlantedCohortSpec, generate_synthetic_cohort, write_enrollments


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("synthetic"))
    ap.add_argument("--blocks", type=int, default=3)
    ap.add_argument("--courses-per-block", type=int, default=10)
    ap.add_argument("--students-per-block", type=int, default=100)
    ap.add_argument("--p-in", type=float, default=0.9)
    ap.add_argument("--p-out", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    spec = PlantedCohortSpec(args.blocks, args.courses_per_block, args.students_per_block,
                             args.p_in, args.p_out, seed=args.seed)
    cohort, labels = generate_synthetic_cohort(spec)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "enrollments.csv", "w", encoding="utf-8", newline="") as fh:
        write_enrollments(cohort, fh)
    # the first course of each block plays the mandatory course
    firsts = [min(c for c, b in labels.items() if b == blk) for blk in range(args.blocks)]
    (args.out / "mandatory.txt").write_text("\n".join(firsts) + "\n", encoding="utf-8")
    with open(args.out / "labels.csv", "w", encoding="utf-8") as fh:
        fh.write("course_id,block\n")
        fh.writelines(f"{c},{b}\n" for c, b in sorted(labels.items()))
    print(f"{len(cohort.students)} students, {len(cohort.courses)} courses -> {args.out}")


if __name__ == "__main__":
    main()
