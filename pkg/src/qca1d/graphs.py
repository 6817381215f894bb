"""Weighted de Bruijn graphs over neighborhoods and neighborhood pairs.

Two graphs drive the unitarity analysis of a rule table:

* the *norm graph*: vertices are length k-1 strings, one edge per
  neighborhood from its prefix to its suffix, weighted by the squared norm
  of the neighborhood's amplitude vector;
* the *pair graph*: vertices are ordered pairs of length k-1 strings, one
  edge per ordered pair of neighborhoods, weighted by the inner product of
  the two amplitude vectors (first one conjugated).

Pair edges whose two configurations coincide form a copy of the norm graph,
the *diagonal*; all other pair edges are *mismatch* edges.  Cycle and path
weights are products of edge weights.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .rules import Config, RuleTable, all_configs, config_index, config_str, inner, unit_configs

DEFAULT_CYCLE_CAP = 10**6


class CycleCapExceeded(RuntimeError):
    """Cycle enumeration produced more cycles than the configured cap."""


def resolve_cycle_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get("QCA_CYCLE_CAP", DEFAULT_CYCLE_CAP))


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    configs: tuple[Config, ...]  # one neighborhood (norm graph) or an ordered pair
    weight: complex
    mismatch: bool = False

    @property
    def diagonal(self) -> bool:
        return not self.mismatch

    def label(self) -> str:
        if len(self.configs) == 1:
            return config_str(self.configs[0])
        return config_str(self.configs[0]) + "|" + config_str(self.configs[1])


class WeightedDiGraph:
    """Immutable directed multigraph with complex edge weights."""

    def __init__(self, kind: str, q: int, k: int, vertices: Sequence, edges: Sequence[Edge]):
        self.kind = kind  # "single" or "pair"
        self.q = q
        self.k = k
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        out: list[list[int]] = [[] for _ in self.vertices]
        for i, e in enumerate(self.edges):
            out[e.source].append(i)
        self._out = tuple(tuple(ix) for ix in out)

    def out_edges(self, vertex: int) -> tuple[int, ...]:
        """Indices into ``edges`` of the edges leaving ``vertex``."""
        return self._out[vertex]

    def vertex_name(self, vertex: int) -> str:
        label = self.vertices[vertex]
        if self.kind == "single":
            return config_str(label)
        return config_str(label[0]) + "|" + config_str(label[1])

    def is_diagonal_vertex(self, vertex: int) -> bool:
        if self.kind == "single":
            return True
        a, b = self.vertices[vertex]
        return a == b

    def diagonal_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(len(self.vertices)) if self.is_diagonal_vertex(v))

    def restricted(self, edge_ok: Callable[[Edge], bool]) -> "WeightedDiGraph":
        """Same vertex set, edges filtered by a predicate."""
        return WeightedDiGraph(self.kind, self.q, self.k, self.vertices,
                               [e for e in self.edges if edge_ok(e)])


def rule_graph(rule: RuleTable) -> WeightedDiGraph:
    """Norm graph: q^(k-1) vertices, one edge per neighborhood.

    The edge for neighborhood i1..ik runs from vertex i1..i(k-1) to vertex
    i2..ik and carries weight <<i1..ik | i1..ik>>.
    """
    q, k = rule.q, rule.k
    vertices = list(all_configs(q, k - 1))
    edges = []
    for cfg in rule.configs():
        edges.append(Edge(
            source=config_index(cfg[:-1], q),
            target=config_index(cfg[1:], q),
            configs=(cfg,),
            weight=inner(rule, cfg, cfg),
        ))
    return WeightedDiGraph("single", q, k, vertices, edges)


def pair_graph(rule: RuleTable) -> WeightedDiGraph:
    """Pair graph: q^(2(k-1)) vertices, one edge per ordered neighborhood pair.

    The edge for the pair (a, b) carries weight <<a | b>> and is flagged as a
    mismatch edge when a != b; the remaining edges reproduce the norm graph
    on the diagonal vertices.
    """
    q, k = rule.q, rule.k
    n_pref = q ** (k - 1)
    vertices = [(a, b) for a in all_configs(q, k - 1) for b in all_configs(q, k - 1)]
    edges = []
    for ca in rule.configs():
        for cb in all_configs(q, k):
            src = config_index(ca[:-1], q) * n_pref + config_index(cb[:-1], q)
            dst = config_index(ca[1:], q) * n_pref + config_index(cb[1:], q)
            edges.append(Edge(
                source=src,
                target=dst,
                configs=(ca, cb),
                weight=inner(rule, ca, cb),
                mismatch=ca != cb,
            ))
    return WeightedDiGraph("pair", q, k, vertices, edges)


def sector_subgraph(graph: WeightedDiGraph, sector: Iterable[Config]) -> WeightedDiGraph:
    """Edges whose configuration(s) all lie in the deterministic sector."""
    sector = frozenset(sector)
    return graph.restricted(lambda e: all(c in sector for c in e.configs))


# ---------------------------------------------------------------------------
# Cycle and path enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    edges: tuple[Edge, ...]

    @property
    def weight(self) -> complex:
        w = complex(1.0)
        for e in self.edges:
            w *= e.weight
        return w

    def __len__(self) -> int:
        return len(self.edges)


def path_weight(edges: Sequence[Edge]) -> complex:
    w = complex(1.0)
    for e in edges:
        w *= e.weight
    return w


def iter_cycles(
    graph: WeightedDiGraph,
    *,
    edge_ok: Callable[[Edge], bool] | None = None,
    vertex_ok: Callable[[int], bool] | None = None,
) -> Iterator[Cycle]:
    """Yield every vertex-simple directed cycle, deterministically ordered.

    Cycles are grouped by their minimal vertex (ascending) and within a
    group follow depth-first edge order.  Parallel self-loops count as
    distinct cycles.
    """
    edges = graph.edges
    allowed_edge = edge_ok or (lambda e: True)
    allowed_vertex = vertex_ok or (lambda v: True)
    n = len(graph.vertices)
    for start in range(n):
        if not allowed_vertex(start):
            continue
        # Iterative DFS over vertices >= start; `stack` holds (vertex, edge iterator).
        path_edges: list[Edge] = []
        on_path = {start}
        stack = [(start, iter(graph.out_edges(start)))]
        while stack:
            vertex, it = stack[-1]
            advanced = False
            for ei in it:
                e = edges[ei]
                if not allowed_edge(e):
                    continue
                t = e.target
                if t == start:
                    yield Cycle(tuple(path_edges) + (e,))
                    continue
                if t > start and t not in on_path and allowed_vertex(t):
                    path_edges.append(e)
                    on_path.add(t)
                    stack.append((t, iter(graph.out_edges(t))))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if path_edges:
                    on_path.discard(path_edges.pop().target)


def enumerate_cycles(
    graph: WeightedDiGraph,
    restrict: str | None = None,
    cap: int | None = None,
) -> list[Cycle]:
    """All vertex-simple cycles with their weights.

    restrict="mismatch" keeps only cycles that lie entirely in the mismatch
    region of a pair graph: every edge a mismatch edge and every vertex off
    the diagonal.  (Closed mismatch walks through diagonal vertices are
    classified as terminating paths, not cycles.)  Enumeration stops with
    :class:`CycleCapExceeded` once more than ``cap`` cycles appear; the cap
    defaults to QCA_CYCLE_CAP or 10**6.
    """
    if restrict not in (None, "mismatch"):
        raise ValueError(f"unknown restrict value {restrict!r}")
    edge_ok = vertex_ok = None
    if restrict == "mismatch":
        if graph.kind != "pair":
            raise ValueError("mismatch restriction applies to pair graphs only")
        edge_ok = lambda e: e.mismatch
        vertex_ok = lambda v: not graph.is_diagonal_vertex(v)
    cap = resolve_cycle_cap(cap)
    cycles: list[Cycle] = []
    for cyc in iter_cycles(graph, edge_ok=edge_ok, vertex_ok=vertex_ok):
        cycles.append(cyc)
        if len(cycles) > cap:
            raise CycleCapExceeded(f"cycle enumeration exceeded the cap of {cap} cycles")
    return cycles


def iter_paths(
    graph: WeightedDiGraph,
    sources: Iterable[int],
    targets: Iterable[int],
    *,
    edge_ok: Callable[[Edge], bool] | None = None,
    interior_ok: Callable[[int], bool] | None = None,
    exact_len: int | None = None,
    max_len: int | None = None,
) -> Iterator[tuple[Edge, ...]]:
    """Paths from a source to a target with vertex-simple interior.

    Interior vertices must be distinct, satisfy ``interior_ok`` and differ
    from both endpoints; the endpoints themselves may coincide.  Paths are
    produced in depth-first order from each source (ascending).
    """
    edges = graph.edges
    allowed_edge = edge_ok or (lambda e: True)
    allowed_interior = interior_ok or (lambda v: True)
    target_set = frozenset(targets)
    limit = exact_len if exact_len is not None else max_len
    for source in sorted(set(sources)):
        path: list[Edge] = []
        interior: set[int] = set()
        stack = [(source, iter(graph.out_edges(source)))]
        while stack:
            vertex, it = stack[-1]
            advanced = False
            for ei in it:
                e = edges[ei]
                if not allowed_edge(e):
                    continue
                depth = len(path) + 1
                if limit is not None and depth > limit:
                    break
                t = e.target
                if t in target_set:
                    if exact_len is None or depth == exact_len:
                        yield tuple(path) + (e,)
                    continue
                if (limit is None or depth < limit) and t != source \
                        and t not in interior and allowed_interior(t):
                    path.append(e)
                    interior.add(t)
                    stack.append((t, iter(graph.out_edges(t))))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if path:
                    interior.discard(path.pop().target)


def reachable_over(
    graph: WeightedDiGraph,
    sources: Iterable[int],
    edge_ok: Callable[[Edge], bool],
) -> tuple[set[int], bool]:
    """Breadth-first closure over allowed edges.

    Returns the set of vertices reachable in one or more steps and whether
    some allowed edge lands back on a diagonal vertex (for pair graphs this
    decides the terminating-path conditions without path enumeration).
    """
    frontier = list(set(sources))
    seen: set[int] = set()
    hits_diagonal = False
    while frontier:
        nxt = []
        for v in frontier:
            for ei in graph.out_edges(v):
                e = graph.edges[ei]
                if not edge_ok(e):
                    continue
                if graph.is_diagonal_vertex(e.target):
                    hits_diagonal = True
                if e.target not in seen:
                    seen.add(e.target)
                    nxt.append(e.target)
        frontier = nxt
    return seen, hits_diagonal


def has_cycle(graph: WeightedDiGraph, edge_ok: Callable[[Edge], bool],
              vertex_ok: Callable[[int], bool]) -> bool:
    """Existence of a directed cycle in the restricted subgraph (linear time)."""
    n = len(graph.vertices)
    color = [0] * n  # 0 unvisited, 1 on stack, 2 done
    for root in range(n):
        if color[root] or not vertex_ok(root):
            continue
        stack = [(root, iter(graph.out_edges(root)))]
        color[root] = 1
        while stack:
            vertex, it = stack[-1]
            advanced = False
            for ei in it:
                e = graph.edges[ei]
                if not edge_ok(e) or not vertex_ok(e.target):
                    continue
                if color[e.target] == 1:
                    return True
                if color[e.target] == 0:
                    color[e.target] = 1
                    stack.append((e.target, iter(graph.out_edges(e.target))))
                    advanced = True
                    break
            if not advanced:
                color[vertex] = 2
                stack.pop()
    return False


# ---------------------------------------------------------------------------
# Deterministic sector
# ---------------------------------------------------------------------------


def _cycle_supported(rule: RuleTable, sector: set[Config]) -> set[Config]:
    """Configs whose norm-graph edge lies on a cycle using sector edges only."""
    q, k = rule.q, rule.k
    succ: dict[Config, set[Config]] = {}
    for cfg in sector:
        succ.setdefault(cfg[:-1], set()).add(cfg[1:])
    reach_cache: dict[Config, set[Config]] = {}

    def reachable(v: Config) -> set[Config]:
        if v not in reach_cache:
            seen = {v}
            frontier = [v]
            while frontier:
                nxt = []
                for u in frontier:
                    for w in succ.get(u, ()):
                        if w not in seen:
                            seen.add(w)
                            nxt.append(w)
                frontier = nxt
            reach_cache[v] = seen
        return reach_cache[v]

    return {cfg for cfg in sector if cfg[:-1] in reachable(cfg[1:])}


def _closure_stable(rule: RuleTable, sector: set[Config]) -> set[Config]:
    """Drop configs breaking closure under the deterministic update.

    Every k consecutive sector edges spell a string of length 2k-1 whose k
    windows each produce a unique output state; the produced string must
    itself be a sector config.  Windows with no unique unit component, and
    all windows of a producing path whose output escapes the sector, are
    removed.
    """
    from .rules import deterministic_output

    out: dict[Config, int] = {}
    bad: set[Config] = set()
    for cfg in sector:
        o = deterministic_output(rule, cfg)
        if o is None:
            bad.add(cfg)
        else:
            out[cfg] = o
    live = sector - bad
    if not live:
        return live

    # Depth-first extension of strings whose windows all stay in the sector.
    def walk(string: tuple[int, ...], windows: tuple[Config, ...]):
        if len(windows) == rule.k:
            produced = tuple(out[w] for w in windows)
            if produced not in live:
                bad.update(windows)
            return
        for s in range(rule.q):
            nxt = string + (s,)
            window = nxt[-rule.k:]
            if window in live:
                walk(nxt, windows + (window,))

    for first in sorted(live):
        walk(first, (first,))
    return sector - bad


def deterministic_sector(rule: RuleTable) -> frozenset[Config]:
    """Largest set of unit-component configs supporting deterministic ends.

    Computed as the greatest fixpoint of two prunings applied to the set of
    unit-component configs: every config must lie on a norm-graph cycle made
    of sector configs, and the sector must be closed under the deterministic
    update.  The result may be empty.
    """
    sector = set(unit_configs(rule))
    while True:
        pruned = _cycle_supported(rule, sector)
        pruned = _closure_stable(rule, pruned)
        if pruned == sector:
            return frozenset(sector)
        sector = pruned


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------


def format_weight(z: complex, digits: int = 6) -> str:
    z = complex(z)
    if abs(z.imag) < 10 ** (-digits - 3) * max(1.0, abs(z.real)):
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


def to_dot(graph: WeightedDiGraph, name: str = "g") -> str:
    """Graphviz rendering; mismatch-region structure is kept visible.

    Each edge is labelled "<appended symbols> / <weight>"; diagonal edges of
    a pair graph are drawn grey.
    """
    lines = [f"digraph {name} {{"]
    for v in range(len(graph.vertices)):
        lines.append(f'  "{graph.vertex_name(v)}";')
    for e in graph.edges:
        if len(e.configs) == 1:
            sym = str(e.configs[0][-1])
        else:
            sym = f"({e.configs[0][-1]},{e.configs[1][-1]})"
        attrs = f'label="{sym} / {format_weight(e.weight)}"'
        if graph.kind == "pair" and e.diagonal:
            attrs += ", color=gray"
        lines.append(f'  "{graph.vertex_name(e.source)}" -> "{graph.vertex_name(e.target)}" [{attrs}];')
    lines.append("}")
    return "\n".join(lines)
