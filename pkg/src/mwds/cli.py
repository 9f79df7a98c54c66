"""Command line: ``mwds solve|generate|bench|oracle``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .driver import TRACE_COLUMNS, InstanceResult, aggregate_groups, hts_ds
from .graph import generate_instance, read_instance, serialize_instance
from .oracle import brute_force_optimum
from .tabu import SearchParams

INSTANCE_SUFFIXES = {".txt", ".mwds", ".dat", ".clq", ".col", ".dimacs"}


def _add_search_args(p):
    d = SearchParams()
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--restarts", type=int, default=d.n_restart)
    p.add_argument("--imax", type=int, default=None, help=f"iterations per tabu search (default {d.i_max})")
    p.add_argument("--ini", type=int, default=None, help=f"iterations without improvement (default {d.i_ni})")
    p.add_argument("--ipert", type=int, default=d.i_pert)
    p.add_argument("--rho", type=float, default=d.rho)
    p.add_argument("--tabu", type=int, default=d.n_tabu)
    p.add_argument("--tmax-ip", type=float, default=d.t_max_ip)
    p.add_argument("--alpha-min", type=float, default=d.alpha_min)
    p.add_argument("--alpha-max", type=float, default=d.alpha_max)
    p.add_argument("--beta", type=float, default=d.beta)
    p.add_argument("--nfree", type=int, default=d.n_free_init, help="initial free-set size of the reduced IP")
    p.add_argument("--ip-node-limit", type=int, default=0, help="cap on IP nodes (0 = time limit only)")
    p.add_argument("--preset", choices=["default", "dimacs"], default="default",
                   help="dimacs: 2000 iterations, 1000 without improvement")
    p.add_argument("--no-ip", action="store_true", help="skip the reduced IP")
    p.add_argument("--no-swap", action="store_true", help="skip the SWAP neighbourhood")
    p.add_argument("--threads", type=int, default=1, help="run tabu phases of restarts concurrently")


def _params(args) -> SearchParams:
    base = SearchParams.dimacs() if args.preset == "dimacs" else SearchParams()
    return base.with_(
        n_restart=args.restarts,
        i_max=base.i_max if args.imax is None else args.imax,
        i_ni=base.i_ni if args.ini is None else args.ini,
        i_pert=args.ipert, rho=args.rho, n_tabu=args.tabu, t_max_ip=args.tmax_ip,
        alpha_min=args.alpha_min, alpha_max=args.alpha_max, beta=args.beta,
        n_free_init=args.nfree, ip_node_limit=args.ip_node_limit,
        use_ip=not args.no_ip, use_swap=not args.no_swap,
    )


def cmd_solve(args) -> int:
    inst = read_instance(args.file)
    report = hts_ds(inst, _params(args), args.seed, threads=args.threads, keep_trace=args.trace is not None)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(TRACE_COLUMNS)
            wr.writerows(report.trace)
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n")
    status = " (proven optimal)" if report.proven_optimal else ""
    print(f"{inst.name}: n={inst.n} m={inst.m} best={report.best_weight}{status} "
          f"|S|={len(report.best_vertices)} time={report.total_time:.2f}s")
    print("vertices:", " ".join(map(str, report.best_vertices)))
    return 0


def cmd_generate(args) -> int:
    inst = generate_instance(args.n, args.m, args.type, args.seed)
    text = serialize_instance(inst)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return 0


def _read_bks(path) -> dict[str, float]:
    bks = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            try:
                bks[row[0].strip()] = float(row[1])
            except (IndexError, ValueError):
                continue  # header or malformed row
    return bks


def cmd_bench(args) -> int:
    files = sorted(p for p in Path(args.dir).iterdir() if p.is_file() and p.suffix.lower() in INSTANCE_SUFFIXES)
    if not files:
        print(f"no instance files in {args.dir}", file=sys.stderr)
        return 1
    params = _params(args)
    results = []
    for path in files:
        inst = read_instance(path)
        reports = [hts_ds(inst, params, args.seed + run, threads=args.threads) for run in range(args.runs)]
        res = InstanceResult.from_reports(reports)
        results.append(res)
        print(f"{res.name}: best={res.best} avg={res.average:.1f} time={sum(res.times) / len(res.times):.2f}s",
              file=sys.stderr)
    rows = aggregate_groups(results, _read_bks(args.bks) if args.bks else None)

    def fmt(x, digits):
        return "" if x is None else f"{x:.{digits}f}"

    with open(args.csv, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["n", "m", "instances", "best", "avg", "time_s", "gap_best_pct", "gap_avg_pct"])
        for r in rows:
            wr.writerow([r.n, r.m, r.instances, fmt(r.best, 1), fmt(r.avg, 1), fmt(r.time, 2),
                         fmt(r.gap_best, 3), fmt(r.gap_avg, 3)])
    return 0


def cmd_oracle(args) -> int:
    inst = read_instance(args.file)
    weight, vertices = brute_force_optimum(inst)
    print(json.dumps({"weight": weight, "vertices": [v + 1 for v in vertices]}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mwds", description="Minimum-weight dominating set matheuristic")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance file")
    p.add_argument("file")
    _add_search_args(p)
    p.add_argument("--trace", metavar="CSV", help="write the per-iteration trace")
    p.add_argument("--json", metavar="FILE", help="write the run report")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="generate a random T1/T2 instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--type", type=str.upper, choices=["T1", "T2"], default="T1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="run every instance of a directory and aggregate by (n, m)")
    p.add_argument("--dir", required=True)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--bks", help="CSV of (instance name, best known value)")
    p.add_argument("--csv", required=True, help="output CSV of group rows")
    _add_search_args(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exact optimum by enumeration (at most 25 vertices)")
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
