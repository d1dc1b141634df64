"""Compare the compiled kernels with the NumPy fallback.

Usage: ``python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]``
"""

import argparse
import itertools
import json
import sys
import timeit

import numpy as np

from fiducial._kernels import available_backends


def _cases(rng):
    perms = np.array(list(itertools.permutations(range(6))), dtype=np.int64)
    cdf = np.cumsum(np.full(4, 0.25))
    u = rng.random(10**6)
    n = 12
    adj = np.zeros(n, dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < 0.6:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return {
        "min_row_mismatch (6! rows, no early exit)": lambda k: k.min_row_mismatch(perms, 0),
        "inverse_cdf_counts (1e6 draws)": lambda k: k.inverse_cdf_counts(cdf, u),
        "compatible_subsets (12 items)": lambda k: k.compatible_subsets(adj),
    }


def run(repeat=5, seed=0):
    backends = available_backends()
    rows = []
    for name, fn in _cases(np.random.default_rng(seed)).items():
        results = {b: fn(k) for b, k in backends.items()}
        ref = results["python"]
        agree = all(np.array_equal(np.asarray(r), np.asarray(ref)) for r in results.values())
        times = {
            b: min(timeit.repeat(lambda k=k: fn(k), number=1, repeat=repeat))
            for b, k in backends.items()
        }
        rows.append({"kernel": name, "seconds": times, "agree": agree})
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="write raw timings here")
    args = ap.parse_args(argv)
    rows = run(args.repeat, args.seed)
    if "cython" not in available_backends():
        print("compiled extension not built; timing the fallback only", file=sys.stderr)
    for r in rows:
        py = r["seconds"]["python"]
        cy = r["seconds"].get("cython")
        speed = f"{py / cy:8.1f}x" if cy else "       -"
        cy_s = f"{cy * 1e3:9.2f} ms" if cy else "        -   "
        print(f"{r['kernel']:<44} python {py * 1e3:9.2f} ms  cython {cy_s}  speedup {speed}  agree={r['agree']}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
