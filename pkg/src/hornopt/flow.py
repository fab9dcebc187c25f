"""Max-flow networks, the star reduction from counting specs, DIMACS output.

The reduction compiles a maximization spec over a structure into a
unit-capacity network with one intermediate vertex per objective tuple:
source -> tuple edges always, tuple -> sink edges exactly for tuples a
feasibility oracle accepts.  The default oracle asks, per tuple, whether
some interpretation of the solution predicates satisfies the global formula
together with that tuple's local condition.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from .engine import (
    EngineError, OptSpec, SearchLimits, SearchSpaceError, _compile,
)
from .logic import LogicError, Structure


class FlowError(LogicError):
    pass


@dataclass(frozen=True)
class FlowNetwork:
    num_vertices: int
    edges: tuple[tuple[int, int, int], ...]  # (u, v, capacity)
    source: int
    sink: int
    tuple_labels: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.source == self.sink:
            raise FlowError("source and sink must differ")
        for u, v, cap in self.edges:
            if u == v:
                raise FlowError(f"self-loop on vertex {u}")
            if cap < 1:
                raise FlowError(f"capacity {cap} on edge ({u},{v}) must be positive")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise FlowError(f"edge ({u},{v}) outside vertex range")
        if not (0 <= self.source < self.num_vertices and 0 <= self.sink < self.num_vertices):
            raise FlowError("source or sink outside vertex range")

    @property
    def unit_capacity(self) -> bool:
        return all(cap == 1 for _, _, cap in self.edges)


@dataclass(frozen=True)
class FlowResult:
    value: int
    edge_flows: dict[tuple[int, int], int]
    paths: Optional[tuple[tuple[int, ...], ...]] = None  # unit-capacity mode only


def max_flow(net: FlowNetwork) -> FlowResult:
    """Maximum s-t flow by repeated shortest augmenting paths.

    Exact on integer capacities.  In unit-capacity mode the flow is also
    decomposed into edge-disjoint s-t paths, one per flow unit.
    """
    cap: dict[tuple[int, int], int] = {}
    adj: dict[int, list[int]] = {v: [] for v in range(net.num_vertices)}
    for u, v, c in net.edges:
        if cap.get((u, v), 0) == 0 and cap.get((v, u)) is None:
            adj[u].append(v)
            adj[v].append(u)
        cap[(u, v)] = cap.get((u, v), 0) + c
        cap.setdefault((v, u), 0)
    flow: dict[tuple[int, int], int] = {e: 0 for e in cap}

    def residual(u: int, v: int) -> int:
        return cap[(u, v)] - flow[(u, v)]

    total = 0
    while True:
        parent = {net.source: net.source}
        queue = deque([net.source])
        while queue and net.sink not in parent:
            u = queue.popleft()
            for v in adj[u]:
                if v not in parent and residual(u, v) > 0:
                    parent[v] = u
                    queue.append(v)
        if net.sink not in parent:
            break
        bottleneck = None
        v = net.sink
        while v != net.source:
            u = parent[v]
            r = residual(u, v)
            bottleneck = r if bottleneck is None else min(bottleneck, r)
            v = u
        v = net.sink
        while v != net.source:
            u = parent[v]
            flow[(u, v)] += bottleneck
            flow[(v, u)] -= bottleneck
            v = u
        total += bottleneck

    edge_flows = {
        (u, v): flow[(u, v)]
        for u, v, _ in net.edges
        if flow.get((u, v), 0) > 0
    }
    paths = _decompose_paths(net, edge_flows, total) if net.unit_capacity else None
    return FlowResult(total, edge_flows, paths)


def _decompose_paths(net: FlowNetwork, edge_flows: dict[tuple[int, int], int],
                     value: int) -> tuple[tuple[int, ...], ...]:
    out_edges: dict[int, list[int]] = {}
    for (u, v), f in edge_flows.items():
        if f > 0:
            out_edges.setdefault(u, []).append(v)
    for vs in out_edges.values():
        vs.sort()
    paths = []
    for _ in range(value):
        path = [net.source]
        while path[-1] != net.sink:
            u = path[-1]
            v = out_edges[u].pop(0)
            path.append(v)
        paths.append(tuple(path))
    return tuple(paths)


def check_flow(net: FlowNetwork, result: FlowResult) -> None:
    """Raise FlowError unless conservation and capacity hold everywhere."""
    caps: dict[tuple[int, int], int] = {}
    for u, v, c in net.edges:
        caps[(u, v)] = caps.get((u, v), 0) + c
    balance = [0] * net.num_vertices
    for (u, v), f in result.edge_flows.items():
        if (u, v) not in caps:
            raise FlowError(f"flow on non-edge ({u},{v})")
        if not (0 <= f <= caps[(u, v)]):
            raise FlowError(f"flow {f} on ({u},{v}) outside capacity {caps[(u, v)]}")
        balance[u] -= f
        balance[v] += f
    for w in range(net.num_vertices):
        if w in (net.source, net.sink):
            continue
        if balance[w] != 0:
            raise FlowError(f"conservation violated at vertex {w}")
    if -balance[net.source] != result.value or balance[net.sink] != result.value:
        raise FlowError("flow value disagrees with terminal balance")
    if result.paths is not None:
        if len(result.paths) != result.value:
            raise FlowError("path count disagrees with flow value")
        used = set()
        for path in result.paths:
            if path[0] != net.source or path[-1] != net.sink:
                raise FlowError("path does not run source to sink")
            for e in zip(path, path[1:]):
                if e in used:
                    raise FlowError(f"edge {e} shared between paths")
                used.add(e)


TupleFeasibilityOracle = Callable[[tuple[int, ...]], bool]

DEFAULT_VERTEX_LIMIT = 10**6


def default_oracle(spec: OptSpec, m: Structure,
                   limits: SearchLimits = SearchLimits()) -> TupleFeasibilityOracle:
    """Per-tuple existential check over the solution predicates.

    Accepts a tuple when some interpretation satisfies the global formula
    and the tuple's grounded local condition; distinct tuples may be
    accepted by conflicting interpretations.
    """
    c = _compile(spec, m, limits)
    tuple_index = {tup: i for i, tup in enumerate(c.objective)}

    def feasible(tup: tuple[int, ...]) -> bool:
        lc = c.local_clauses[tuple_index[tup]]
        if lc == [()]:
            return False
        clauses = list(c.global_clauses) + [tuple(cl) for cl in (lc or [])]
        return _satisfiable(clauses, len(c.atoms), limits)

    return feasible


def _satisfiable(clauses: list[tuple[int, ...]], num_atoms: int,
                 limits: SearchLimits) -> bool:
    """First-solution DFS over the atoms mentioned in the clauses."""
    if any(len(cl) == 0 for cl in clauses):
        return False
    relevant = sorted({abs(lit) - 1 for cl in clauses for lit in cl})
    occur: dict[int, list[tuple[int, bool]]] = {v: [] for v in relevant}
    for ci, cl in enumerate(clauses):
        for lit in cl:
            occur[abs(lit) - 1].append((ci, lit > 0))
    free = [len(cl) for cl in clauses]
    sat = [0] * len(clauses)

    def rec(pos: int) -> bool:
        if pos == len(relevant):
            return True
        v = relevant[pos]
        for value in (False, True):
            ok = True
            for ci, positive in occur[v]:
                free[ci] -= 1
                if positive == value:
                    sat[ci] += 1
                elif free[ci] == 0 and sat[ci] == 0:
                    ok = False
            if ok and rec(pos + 1):
                return True
            for ci, positive in occur[v]:
                free[ci] += 1
                if positive == value:
                    sat[ci] -= 1
        return False

    return rec(0)


def compile_reduction(spec: OptSpec, m: Structure,
                      feas: Optional[TupleFeasibilityOracle] = None,
                      vertex_limit: int = DEFAULT_VERTEX_LIMIT,
                      limits: SearchLimits = SearchLimits()) -> FlowNetwork:
    """Build the unit-capacity star network for a maximization spec.

    Vertex 0 is the source, vertices 1..n^k stand for the objective tuples
    in lexicographic order, and vertex n^k + 1 is the sink.  Every tuple
    vertex gets a source edge; it gets a sink edge exactly when the
    feasibility oracle accepts its tuple, so the maximum flow equals the
    number of accepted tuples.
    """
    if spec.direction != "max":
        raise EngineError("the reduction applies to maximization specs only")
    if spec.weighted:
        raise EngineError(
            "the reduction counts tuples; weighted specs are outside its scope")
    n = m.universe_size
    k = len(spec.objective_vars)
    if n ** k > vertex_limit:
        raise SearchSpaceError(n ** k, vertex_limit)
    if feas is None:
        feas = default_oracle(spec, m, limits)
    tuples = list(itertools.product(range(n), repeat=k))
    num = len(tuples) + 2
    source, sink = 0, num - 1
    edges = []
    labels: dict[int, tuple[int, ...]] = {}
    for i, tup in enumerate(tuples):
        vertex = i + 1
        labels[vertex] = tup
        edges.append((source, vertex, 1))
    for i, tup in enumerate(tuples):
        if feas(tup):
            edges.append((i + 1, sink, 1))
    return FlowNetwork(num, tuple(edges), source, sink, labels)


def emit_dimacs(net: FlowNetwork) -> str:
    """DIMACS max-flow text: 1-based vertices, edges sorted by (u, v)."""
    lines = [f"p max {net.num_vertices} {len(net.edges)}"]
    lines.append(f"n {net.source + 1} s")
    lines.append(f"n {net.sink + 1} t")
    for u, v, cap in sorted(net.edges):
        lines.append(f"a {u + 1} {v + 1} {cap}")
    return "\n".join(lines) + "\n"
