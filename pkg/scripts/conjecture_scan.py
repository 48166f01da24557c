"""Desk-scale search for sequences with more distinct squares than conjectured.

Writes one JSON line per sequence that has at least one square besides y_0,
and a final summary line.
"""
import argparse
import json
import os
import sys
import time
from dataclasses import asdict, fields

from recsquares.analysis import ScanRanges, conjecture_scan


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    for f in fields(ScanRanges):
        flag = f"--{f.name.replace('_', '-')}"
        if f.type in ("tuple[int, ...]",):
            parser.add_argument(flag, type=int, nargs="+", default=list(f.default))
        elif f.type == "bool":
            parser.add_argument(flag, action=argparse.BooleanOptionalAction, default=f.default)
        elif f.name in ("b_max", "d_max"):
            parser.add_argument(flag, type=int, required=True)
        else:
            parser.add_argument(flag, type=int, default=f.default)
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    args = vars(parser.parse_args())
    jobs = args.pop("jobs")
    ranges = ScanRanges(**{k: tuple(v) if isinstance(v, list) else v for k, v in args.items()})

    start = time.perf_counter()
    total = flagged = 0
    for rec in conjecture_scan(ranges, jobs=jobs):
        total += 1
        flagged += bool(rec.violations)
        if rec.distinct_count > 1 or rec.violations:
            row = {
                "params": rec.params.as_tuple(),
                "squares": {h.k: h.root for h in rec.hits},
                "distinct": rec.distinct_count,
                "limit": rec.limit,
                "violations": rec.violations,
            }
            sys.stdout.write(json.dumps(row) + "\n")
    summary = {"ranges": asdict(ranges), "sequences": total, "violations": flagged, "seconds": round(time.perf_counter() - start, 1)}
    sys.stdout.write(json.dumps({"summary": summary}) + "\n")
    sys.exit(1 if flagged else 0)


if __name__ == "__main__":
    main()
