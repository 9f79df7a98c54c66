#!/usr/bin/env python3
"""Compare the numba kernels against the pure-numpy fallback.

Each configuration runs in a fresh interpreter because the backend is
chosen at import time from MWDS_DISABLE_NUMBA.

    python3 benchmarks/bench_paths.py --sizes 100:500 250:2000 --iterations 3000
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = """
import json, sys, time
from mwds import NUMBA_ENABLED, Solution, construct_random, generate_instance, tabu_search, SearchParams
from mwds._rng import Rng
n, m, iters, reps = map(int, sys.argv[1:5])
g = generate_instance(n, m, "T1", 1).graph
params = SearchParams(i_max=iters, i_ni=iters)
# warm up (JIT compilation or cache load)
rng = Rng(0)
tabu_search(g, construct_random(g, rng), params.with_(i_max=20, i_ni=20), rng)
best = float("inf")
for r in range(reps):
    rng = Rng(r)
    s0 = construct_random(g, rng)
    t0 = time.perf_counter()
    res = tabu_search(g, s0, params, rng)
    best = min(best, time.perf_counter() - t0)
print(json.dumps({"numba": NUMBA_ENABLED, "seconds": best, "iterations": res.iterations,
                  "weight": res.best.total_weight}))
"""


def run(n, m, iters, reps, disable):
    env = dict(os.environ)
    env.pop("MWDS_DISABLE_NUMBA", None)
    if disable:
        env["MWDS_DISABLE_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", WORKER, str(n), str(m), str(iters), str(reps)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", nargs="+", default=["100:500", "250:2000", "250:5000", "500:5000"],
                    help="n:m pairs")
    ap.add_argument("--iterations", type=int, default=3000)
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()

    print(f"{'n':>5} {'m':>6} {'numba ms':>10} {'numpy ms':>10} {'us/it nb':>9} {'speedup':>8}  same")
    for pair in args.sizes:
        n, m = map(int, pair.split(":"))
        fast = run(n, m, args.iterations, args.reps, False)
        slow = run(n, m, args.iterations, args.reps, True)
        same = fast["weight"] == slow["weight"] and fast["iterations"] == slow["iterations"]
        print(f"{n:>5} {m:>6} {fast['seconds'] * 1e3:>10.1f} {slow['seconds'] * 1e3:>10.1f} "
              f"{fast['seconds'] / fast['iterations'] * 1e6:>9.1f} {slow['seconds'] / fast['seconds']:>7.1f}x  {same}")


if __name__ == "__main__":
    main()
