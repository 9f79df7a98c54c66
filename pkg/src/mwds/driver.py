"""Restart loop of the matheuristic, run reports and benchmark aggregation."""
from __future__ import annotations

import json
import logging
import math
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ._rng import Rng, restart_seed
from .graph import Instance
from .reduced_ip import FrequencyCounter, adapt_n_free, build_reduced, solve_branch_bound
from .solution import Solution, construct_random, is_dominating
from .tabu import SearchParams, SearchResult, Trace, tabu_search

log = logging.getLogger(__name__)

TIMING_FIELDS = ("tabu_time", "ip_time", "total_time")


@dataclass
class RestartRecord:
    restart: int
    seed: int
    tabu_best_weight: int
    best_weight: int
    iterations: int
    ip_verdict: str | None
    ip_free_vars: int
    n_free_next: int
    tabu_time: float
    ip_time: float


@dataclass
class RunReport:
    instance: str
    n: int
    m: int
    master_seed: int
    best_weight: int
    best_vertices: list[int]
    proven_optimal: bool
    restarts: list[RestartRecord]
    total_time: float
    params: dict
    trace: list[tuple] | None = field(default=None, repr=False)
    audit: dict | None = field(default=None, repr=False)

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        d.pop("trace")
        d.pop("audit")
        if not timing:
            d.pop("total_time")
            for r in d["restarts"]:
                for k in TIMING_FIELDS:
                    r.pop(k, None)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)


@dataclass
class _SearchOutcome:
    seed: int
    result: SearchResult
    freq: FrequencyCounter
    seconds: float


def _search_restart(inst: Instance, params: SearchParams, master_seed: int, r: int, audit: bool) -> _SearchOutcome:
    g = inst.graph
    seed = restart_seed(master_seed, r)
    rng = Rng(seed)
    t0 = time.perf_counter()
    s0 = construct_random(g, rng)
    freq = FrequencyCounter(g.n)
    res = tabu_search(g, s0, params, rng, freq=freq, audit=audit)
    return _SearchOutcome(seed, res, freq, time.perf_counter() - t0)


def hts_ds(inst: Instance, params: SearchParams | None = None, master_seed: int = 0, *,
           threads: int = 1, keep_trace: bool = False, audit: bool = False) -> RunReport:
    """Solve ``inst`` by restarts of tabu search followed by a reduced IP.

    Restart ``r`` draws its generator from ``(master_seed, r)``. The tabu
    phases of different restarts are independent, so with ``threads > 1`` they
    run concurrently; the IP phases (which share the adaptive free-set size and
    the accumulated frequencies) are replayed in restart order, giving the same
    report as a sequential run. The run stops early once the IP proves the whole
    problem optimal.
    """
    params = params or SearchParams()
    g = inst.graph
    n = g.n
    t_start = time.perf_counter()

    def outcomes():
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                yield from pool.map(lambda r: _search_restart(inst, params, master_seed, r, audit),
                                    range(params.n_restart))
        else:
            for r in range(params.n_restart):
                yield _search_restart(inst, params, master_seed, r, audit)

    freq = FrequencyCounter(n)
    n_free = min(params.n_free_init, n)
    overall: Solution | None = None
    proven = False
    records = []
    trace_rows = [] if keep_trace else None
    audits = {"mismatches": 0, "redundant": 0, "checks": 0}

    for r, out in enumerate(outcomes()):
        res = out.result
        freq += out.freq
        s_best = res.best
        tabu_w = s_best.total_weight
        verdict = None
        n_vars = 0
        ip_time = 0.0
        if params.use_ip and n > 0:
            rp = build_reduced(g, s_best, freq, n_free)
            n_vars = rp.n_free
            ip = solve_branch_bound(rp, s_best, params.t_max_ip, params.ip_node_limit)
            ip_time = ip.seconds
            verdict = ip.verdict
            if ip.incumbent is not None and ip.incumbent.total_weight < s_best.total_weight:
                s_best = ip.incumbent
            n_free, proven = adapt_n_free(ip, n_free, n)
        if overall is None or s_best.total_weight < overall.total_weight:
            overall = s_best
        records.append(RestartRecord(
            restart=r, seed=out.seed, tabu_best_weight=tabu_w, best_weight=s_best.total_weight,
            iterations=res.iterations, ip_verdict=verdict.value if verdict else None,
            ip_free_vars=n_vars, n_free_next=n_free, tabu_time=out.seconds, ip_time=ip_time,
        ))
        if keep_trace:
            trace_rows.extend(row + (r,) for row in res.trace.rows())
        for k in audits:
            audits[k] += res.audit.get(k, 0)
        if proven:
            break

    assert overall is not None and is_dominating(g, overall.members)
    report = RunReport(
        instance=inst.name, n=n, m=g.m, master_seed=int(master_seed),
        best_weight=overall.total_weight, best_vertices=[v + 1 for v in overall.members],
        proven_optimal=proven, restarts=records, total_time=time.perf_counter() - t_start,
        params=params.to_dict(), trace=trace_rows,
    )
    if audit:
        report.audit = audits
    return report


TRACE_COLUMNS = Trace.COLUMNS + ("restart",)


def gap_percent(z: float, z_bks: float) -> float:
    if z_bks <= 0:
        raise ValueError("BKS value must be positive")
    return 100.0 * (z - z_bks) / z_bks


@dataclass
class InstanceResult:
    """Outcome of several runs on one instance."""

    name: str
    n: int
    m: int
    weights: list[float]
    times: list[float]

    @property
    def best(self) -> float:
        return min(self.weights)

    @property
    def average(self) -> float:
        return float(np.mean(self.weights))

    @classmethod
    def from_reports(cls, reports: list[RunReport]) -> "InstanceResult":
        r0 = reports[0]
        return cls(r0.instance, r0.n, r0.m, [r.best_weight for r in reports], [r.total_time for r in reports])


@dataclass
class GroupRow:
    n: int
    m: int
    instances: int
    best: float
    avg: float
    time: float
    gap_best: float | None = None
    gap_avg: float | None = None


def aggregate_groups(results: list[InstanceResult], bks: dict[str, float] | None = None) -> list[GroupRow]:
    """One row per (n, m): means of per-instance best and average weights and of run times.

    Gaps compare the group means against the mean BKS of the group; they are
    left empty if any instance of the group has no BKS entry.
    """
    groups = defaultdict(list)
    for res in results:
        groups[(res.n, res.m)].append(res)
    rows = []
    for (n, m), members in sorted(groups.items()):
        row = GroupRow(
            n=n, m=m, instances=len(members),
            best=float(np.mean([r.best for r in members])),
            avg=float(np.mean([r.average for r in members])),
            time=float(np.mean([t for r in members for t in r.times])),
        )
        if bks is not None:
            missing = [r.name for r in members if r.name not in bks]
            if missing:
                log.warning("no BKS for %s; gaps omitted for group %d/%d", ", ".join(missing), n, m)
            else:
                ref = float(np.mean([bks[r.name] for r in members]))
                row.gap_best = gap_percent(row.best, ref)
                row.gap_avg = gap_percent(row.avg, ref)
        rows.append(row)
    return rows


def fit_power_law(points) -> tuple[float, float]:
    """Least-squares fit of ``t = x * n**y`` on the log-log scale; returns ``(x, y)``."""
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or len(pts) < 2:
        raise ValueError("need at least two (n, t) points")
    if np.any(pts <= 0):
        raise ValueError("n and t must be positive")
    slope, intercept = np.polyfit(np.log(pts[:, 0]), np.log(pts[:, 1]), 1)
    return math.exp(intercept), float(slope)
