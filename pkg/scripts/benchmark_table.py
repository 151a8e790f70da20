"""Time ConMat against ConnectMat on the preset instances plus the discretized g field.

    python3 scripts/benchmark_table.py --presets V1 V2 --out table.md
"""

import argparse
import sys

from conley.bench import run_benchmark
from conley.discretize import discretize_builtin
from conley.randgen import TABLE_PRESETS, build_benchmark_complex, coarsen_to


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--presets", nargs="*", default=["V1", "V2", "V3"], choices=sorted(TABLE_PRESETS))
    ap.add_argument("--g-resolution", type=int, default=21)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--repetitions", type=int, default=3)
    ap.add_argument("--timeout", type=float, default=600.0)
    ap.add_argument("--out")
    ap.add_argument("--out-csv")
    args = ap.parse_args(argv)

    instances = []
    for name in args.presets:
        kind, params, p = TABLE_PRESETS[name]
        K = build_benchmark_complex(kind, params, args.seed)
        F, got = coarsen_to(K, p, args.seed)
        print(f"{name}: {len(K)} simplices, p = {float(got):.6f}", file=sys.stderr)
        instances.append((name, K, F))
    if args.g_resolution:
        K, _, F = discretize_builtin(resolution=args.g_resolution)
        instances.append(("V7", K, F))
    report = run_benchmark(instances, args.repetitions, args.timeout)
    table = report.to_markdown()
    print(table, end="")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(table)
    if args.out_csv:
        with open(args.out_csv, "w") as fh:
            fh.write(report.to_csv())


if __name__ == "__main__":
    main()
