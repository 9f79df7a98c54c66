"""Weighted graphs, instance files and the T1/T2 random generators."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

WEIGHT_MODELS = ("T1", "T2", "DIMACS_MOD200", "EXPLICIT")


class ParseError(ValueError):
    """Malformed instance file. ``line`` is the 1-based offending line (0 for end of file)."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class Graph:
    """Undirected simple graph with positive integer vertex weights.

    Vertices are ``0..n-1``. Adjacency is kept in CSR form (``indptr``,
    ``indices``) with sorted neighbour lists; the closed-neighbourhood arrays
    used by the kernels are derived from it on first use.
    """

    def __init__(self, n: int, edges, weights):
        n = int(n)
        weights = np.asarray(weights, dtype=np.int64)
        if weights.shape != (n,):
            raise ValueError(f"expected {n} weights, got {weights.shape}")
        if n and weights.min() < 1:
            raise ValueError("vertex weights must be >= 1")
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(edges):
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loops are not allowed")
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        keys = lo * n + hi
        if len(np.unique(keys)) != len(keys):
            raise ValueError("duplicate edges are not allowed")

        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        self.n = n
        self.m = len(edges)
        self.indices = dst[order]
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=self.indptr[1:])
        self.weights = weights
        for arr in (self.indices, self.indptr, self.weights):
            arr.flags.writeable = False

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def w_max(self) -> int:
        return int(self.weights.max()) if self.n else 0

    @cached_property
    def closed(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR arrays of N(i), vertex itself first, then its sorted neighbours."""
        cptr = self.indptr + np.arange(self.n + 1, dtype=np.int64)
        cidx = np.empty(self.n + 2 * self.m, dtype=np.int64)
        cidx[cptr[:-1]] = np.arange(self.n, dtype=np.int64)
        mask = np.ones(len(cidx), dtype=bool)
        mask[cptr[:-1]] = False
        cidx[mask] = self.indices
        cptr.flags.writeable = False
        cidx.flags.writeable = False
        return cptr, cidx

    def edges(self) -> np.ndarray:
        """Edge list ``(u, v)`` with ``u < v``, sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return np.stack([src[keep], self.indices[keep]], axis=1)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def closed_neighborhood(g: Graph, i: int) -> set[int]:
    assert 0 <= i < g.n
    return {int(i), *map(int, g.neighbors(i))}


@dataclass
class Instance:
    graph: Graph
    name: str = "instance"
    weight_model: str = "EXPLICIT"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.name:
            raise ValueError("instance name must be nonempty")
        if self.weight_model not in WEIGHT_MODELS:
            raise ValueError(f"unknown weight model {self.weight_model!r}")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m


def _lines(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split()
        if toks and toks[0] != "c":
            yield lineno, toks


def _ints(toks, lineno, count):
    if len(toks) != count + 1:
        raise ParseError(f"expected {count} fields after {toks[0]!r}", lineno)
    try:
        return [int(t) for t in toks[1:]]
    except ValueError:
        raise ParseError(f"non-integer field in {' '.join(toks)!r}", lineno) from None


class _EdgeCollector:
    def __init__(self, n):
        self.n = n
        self.seen = set()
        self.edges = []

    def add(self, u, v, lineno):
        n = self.n
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"vertex id out of range [1, {n}] in edge ({u}, {v})", lineno)
        if u == v:
            raise ParseError(f"self-loop on vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in self.seen:
            raise ParseError(f"duplicate edge ({u}, {v})", lineno)
        self.seen.add(key)
        self.edges.append((u - 1, v - 1))


def _header(toks, lineno, kinds):
    if toks[0] != "p" or len(toks) != 4 or toks[1] not in kinds:
        raise ParseError(f"malformed header, expected 'p {kinds[0]} <n> <m>'", lineno)
    try:
        n, m = int(toks[2]), int(toks[3])
    except ValueError:
        raise ParseError("malformed header counts", lineno) from None
    if n < 0 or m < 0:
        raise ParseError("negative header counts", lineno)
    return n, m


def parse_instance(text, name: str = "instance") -> Instance:
    """Parse the native ``p mwds`` format (see README)."""
    it = _lines(text)
    first = next(it, None)
    if first is None:
        raise ParseError("missing 'p mwds' header", 0)
    n, m = _header(first[1], first[0], ("mwds",))
    weights = [0] * n
    col = _EdgeCollector(n)
    last = first[0]
    for lineno, toks in it:
        last = lineno
        tag = toks[0]
        if tag == "v":
            vid, wt = _ints(toks, lineno, 2)
            if not 1 <= vid <= n:
                raise ParseError(f"vertex id {vid} out of range [1, {n}]", lineno)
            if weights[vid - 1]:
                raise ParseError(f"duplicate weight line for vertex {vid}", lineno)
            if wt < 1:
                raise ParseError(f"weight of vertex {vid} must be >= 1", lineno)
            weights[vid - 1] = wt
        elif tag == "e":
            u, v = _ints(toks, lineno, 2)
            col.add(u, v, lineno)
        elif tag == "p":
            raise ParseError("second header line", lineno)
        else:
            raise ParseError(f"unknown line prefix {tag!r}", lineno)
    missing = [i + 1 for i, wt in enumerate(weights) if not wt]
    if missing:
        raise ParseError(f"missing weight line for vertex {missing[0]}", last)
    if len(col.edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(col.edges)}", last)
    return Instance(Graph(n, col.edges, weights), name=name, weight_model="EXPLICIT")


def dimacs_weight(vertex_id: int) -> int:
    """Weight of a 1-based DIMACS/BHOSLIB vertex id."""
    return vertex_id % 200 + 1


def parse_dimacs_clq(text, name: str = "instance") -> Instance:
    """Parse a DIMACS ``p edge`` graph; weights follow the mod-200 rule."""
    it = _lines(text)
    first = next(it, None)
    if first is None:
        raise ParseError("missing 'p edge' header", 0)
    n, m = _header(first[1], first[0], ("edge", "col"))
    col = _EdgeCollector(n)
    last = first[0]
    for lineno, toks in it:
        last = lineno
        if toks[0] == "e":
            u, v = _ints(toks, lineno, 2)
            col.add(u, v, lineno)
        elif toks[0] == "p":
            raise ParseError("second header line", lineno)
        else:
            raise ParseError(f"unknown line prefix {toks[0]!r}", lineno)
    if len(col.edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(col.edges)}", last)
    weights = dimacs_weight(np.arange(1, n + 1, dtype=np.int64))
    return Instance(Graph(n, col.edges, weights), name=name, weight_model="DIMACS_MOD200")


def serialize_instance(inst: Instance) -> str:
    g = inst.graph
    out = [f"c {inst.name} ({inst.weight_model})", f"p mwds {g.n} {g.m}"]
    out += [f"v {i + 1} {int(wt)}" for i, wt in enumerate(g.weights)]
    out += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(out) + "\n"


def read_instance(path) -> Instance:
    """Read a native or DIMACS file, deciding by its header line."""
    from pathlib import Path

    path = Path(path)
    data = path.read_bytes()
    for _, toks in _lines(data):
        if toks[0] == "p" and len(toks) > 1 and toks[1] in ("edge", "col"):
            return parse_dimacs_clq(data, name=path.stem)
        break
    return parse_instance(data, name=path.stem)


def _decode_pairs(keys: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # row u holds pairs (u, u+1..n-1); offsets[u] = number of pairs in rows < u
    rows = np.arange(n, dtype=np.int64)
    offsets = rows * (2 * n - rows - 1) // 2
    u = np.searchsorted(offsets, keys, side="right") - 1
    v = keys - offsets[u] + u + 1
    return u, v


def generate_instance(n: int, m: int, weight_type: str = "T1", seed: int = 0) -> Instance:
    """Random simple graph with ``m`` uniformly drawn edges and T1/T2 weights.

    T1 weights are uniform integers on [20, 70]; T2 weights are uniform on
    [1, max(1, deg(i)**2)] using the realised degree.
    """
    weight_type = weight_type.upper()
    if weight_type not in ("T1", "T2"):
        raise ValueError(f"weight type must be T1 or T2, got {weight_type!r}")
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise ValueError(f"m={m} outside [0, {total}] for a simple graph on {n} vertices")
    rng = np.random.default_rng(np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF))
    keys = np.sort(rng.choice(total, size=m, replace=False)) if m else np.zeros(0, np.int64)
    u, v = _decode_pairs(keys.astype(np.int64), n)
    deg = np.bincount(np.concatenate([u, v]), minlength=n).astype(np.int64)
    if weight_type == "T1":
        weights = rng.integers(20, 71, size=n, dtype=np.int64)
    else:
        weights = rng.integers(1, np.maximum(1, deg * deg) + 1, dtype=np.int64)
    name = f"{weight_type.lower()}_{n}_{m}_{seed}"
    graph = Graph(n, np.stack([u, v], axis=1), weights)
    return Instance(graph, name=name, weight_model=weight_type, meta={"seed": int(seed)})
