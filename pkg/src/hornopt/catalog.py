"""Built-in problem encodings and independent classical oracles.

Three encodings are provided: unit-capacity max flow as a counting
maximization over a ternary path-order predicate, shortest path as a
counting minimization over a path order plus a chosen-arc relation, and
weighted matching as a weighted maximization over a marked-edge relation on
a mixed vertex/weight universe.

Each encoding ships with an oracle that solves the same instance by a
textbook graph algorithm sharing no code with the optimization engine; the
test suite holds the two answers equal.

Caveats baked into the max-flow encoding (both exact on three-vertex
instances, the scale the equivalence suite sweeps):

* a path consisting of the single arc (s, t) cannot be represented inside
  the path-order predicate, so the objective counts it through a separate
  direct-edge disjunct, and arc (s, t) is reserved for that path;
* the adjacency constraint demands that every third vertex witness a
  midpoint, which on larger universes is stricter than requiring some
  midpoint.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .engine import OptSpec
from .logic import LogicError, Structure, Vocabulary, parse_formula


class CatalogError(LogicError):
    pass


@dataclass(frozen=True)
class GraphInstance:
    """A directed graph with terminals and optional positive edge weights."""

    num_vertices: int
    edges: frozenset[tuple[int, int]]
    source: int
    sink: int
    weights: Optional[dict[tuple[int, int], int]] = None

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        nv = self.num_vertices
        if nv < 1:
            raise CatalogError("graph needs at least one vertex")
        if not (0 <= self.source < nv and 0 <= self.sink < nv):
            raise CatalogError("terminal outside vertex range")
        if self.source == self.sink:
            raise CatalogError("source and sink must differ")
        for u, v in self.edges:
            if not (0 <= u < nv and 0 <= v < nv):
                raise CatalogError(f"edge ({u},{v}) outside vertex range")
        if self.weights is not None:
            object.__setattr__(self, "weights", dict(self.weights))
            missing = self.edges - set(self.weights)
            if missing:
                raise CatalogError(f"edges without weights: {sorted(missing)}")
            if any(w < 1 for w in self.weights.values()):
                raise CatalogError("edge weights must be positive integers")


# ---------------------------------------------------------------------------
# MAXFLOW (unit capacities, polynomially bound)

_MAXFLOW_GLOBALS = [
    # source edge exists for every path, and arc (s,t) is reserved for the
    # direct path counted by the objective's second disjunct
    "forall x1. forall x2. forall w. P(x1,x2,w) -> G(s,w) & (x1 != s | x2 != t)",
    # an arc belongs to at most one path
    "forall i. forall j. forall w1. forall w2. "
    "(P(i,j,w1) & P(i,j,w2) & G(i,j)) -> w1 = w2",
    # non-reflexive
    "forall y1. forall y2. !P(y1,y1,y2)",
    # transitive
    "forall u1. forall u2. forall u3. forall w3. "
    "(P(u1,u2,w3) & P(u2,u3,w3)) -> P(u1,u3,w3)",
    # consecutive path vertices are adjacent in the graph: every other
    # vertex witnesses a midpoint (exact when the universe has 3 elements)
    "forall z1. forall z2. forall z3. forall w4. "
    "(z3 != z1 & z3 != z2 & P(z1,z2,w4) & !G(z1,z2)) -> (P(z1,z3,w4) & P(z3,z2,w4))",
]

_MAXFLOW_LOCAL = "P(w,t,w) | (w = t & G(s,t))"


def _graph_structure(g: GraphInstance, vocab: Vocabulary) -> Structure:
    return Structure(
        vocab, g.num_vertices,
        const_bindings={"s": g.source, "t": g.sink},
        extensions={"G": frozenset(g.edges)},
    )


def encode_maxflow_pb(g: GraphInstance) -> tuple[OptSpec, Structure]:
    """Maximum edge-disjoint s-t paths as a counting maximization.

    One ternary solution predicate P orders the vertices of each path,
    indexed by the path's first hop; the optimum counts first hops.  The
    spec is universal Horn: it passes horn_check and classifies PI1.
    """
    vocab = Vocabulary(relations=(("G", 2),), constants=("s", "t"))
    so_sig = (("P", 3),)
    globals_ = [parse_formula(text, vocab, so_sig) for text in _MAXFLOW_GLOBALS]
    global_formula = globals_[0]
    for f in globals_[1:]:
        global_formula = global_formula & f
    spec = OptSpec(
        direction="max",
        so_sig=so_sig,
        objective_vars=("w",),
        local_formula=parse_formula(_MAXFLOW_LOCAL, vocab, so_sig),
        global_formula=global_formula,
        name="maxflow_pb",
    )
    return spec, _graph_structure(g, vocab)


# ---------------------------------------------------------------------------
# SHORTEST PATH (unit arc weights, polynomially bound)

_SHORTEST_PATH_GLOBALS = [
    # a path from s to t exists
    "P(s,t)",
    # the path order is transitive
    "forall x. forall y. forall z. (P(x,y) & P(y,z)) -> P(x,z)",
    # and neither reflexive nor symmetric
    "forall x. forall y. !P(x,x) & (P(x,y) -> !P(y,x))",
    # chosen arcs lie in the graph and in the order
    "forall x. forall y. S(x,y) -> (G(x,y) & P(x,y))",
    # the order is generated by the chosen arcs (note the inner exists:
    # this conjunct is not universal as written)
    "forall x. forall y. P(x,y) -> (S(x,y) | (exists z. P(x,z) & S(z,y)))",
    # the predecessor along chosen arcs is unique
    "forall x. forall y. forall z. (S(x,y) & S(z,y)) -> x = z",
]


def encode_shortest_path(g: GraphInstance) -> tuple[OptSpec, Structure]:
    """Fewest arcs on an s-t path as a counting minimization.

    Binary P is the path order, binary S the chosen arcs; the optimum
    counts chosen arcs, and an instance without an s-t path is infeasible.
    """
    vocab = Vocabulary(relations=(("G", 2),), constants=("s", "t"))
    so_sig = (("P", 2), ("S", 2))
    globals_ = [parse_formula(text, vocab, so_sig) for text in _SHORTEST_PATH_GLOBALS]
    global_formula = globals_[0]
    for f in globals_[1:]:
        global_formula = global_formula & f
    spec = OptSpec(
        direction="min",
        so_sig=so_sig,
        objective_vars=("p", "q"),
        local_formula=parse_formula("S(p,q)", vocab, so_sig),
        global_formula=global_formula,
        name="shortest_path_pb",
    )
    return spec, _graph_structure(g, vocab)


def shortest_path_decision_formula(k: int, vocab: Optional[Vocabulary] = None):
    """First-order decision form: an s-t path with exactly k+1 arcs exists."""
    if k < 0:
        raise CatalogError("path length must be non-negative")
    if vocab is None:
        vocab = Vocabulary(relations=(("G", 2),), constants=("s", "t"))
    if k == 0:
        return parse_formula("G(s,t)", vocab)
    hops = ["G(s,x1)"]
    hops += [f"G(x{i},x{i + 1})" for i in range(1, k)]
    hops.append(f"G(x{k},t)")
    text = "".join(f"exists x{i}. " for i in range(1, k + 1)) + " & ".join(hops)
    return parse_formula(text, vocab)


# ---------------------------------------------------------------------------
# WEIGHTED MATCHING (not necessarily polynomially bound)

_MATCHING_PHIS = [
    "U(vi,vj) -> G(vi,vj)",
    "(x != vi & x != vj & U(vi,vj) & G(x,vi)) -> !U(x,vi)",
    "(x != vi & x != vj & U(vi,vj) & G(vi,x)) -> !U(vi,x)",
    "(x != vi & x != vj & U(vi,vj) & G(x,vj)) -> !U(x,vj)",
    "(x != vi & x != vj & U(vi,vj) & G(vj,x)) -> !U(vj,x)",
]

_MATCHING_GLOBAL = (
    "forall vi. forall vj. forall x. (C(vi) & C(vj) & C(x)) -> ("
    + " & ".join(f"({phi})" for phi in _MATCHING_PHIS)
    + ")"
)

_MATCHING_LOCAL = "U(p,q) & C(p) & C(q)"


def canonical_weighted_edges(g: GraphInstance) -> dict[tuple[int, int], int]:
    """Undirected reading of a weighted graph: (min,max) keyed weights."""
    if g.weights is None:
        raise CatalogError("instance has no edge weights")
    out: dict[tuple[int, int], int] = {}
    for (u, v), w in sorted(g.weights.items()):
        if u == v:
            raise CatalogError(f"self-loop ({u},{v}) cannot be matched")
        key = (min(u, v), max(u, v))
        if out.get(key, w) != w:
            raise CatalogError(f"conflicting weights for undirected edge {key}")
        out[key] = w
    return out


def encode_weighted_matching(g: GraphInstance) -> tuple[OptSpec, Structure]:
    """Maximum-weight matching as a weighted maximization.

    The universe mixes weight values with vertices: weight value v sits at
    element v, and vertex i sits at element max_weight + 1 + i, so the two
    sorts never collide.  The hidden unary relation C marks non-weight
    elements; R(weight, u, v) attaches each edge's weight.
    """
    edges = canonical_weighted_edges(g)
    max_weight = max(edges.values(), default=0)
    offset = max_weight + 1
    n = offset + g.num_vertices

    def vx(i: int) -> int:
        return offset + i

    vocab = Vocabulary(relations=(("G", 2), ("R", 3), ("C", 1)))
    so_sig = (("U", 2),)
    structure = Structure(
        vocab, n,
        extensions={
            "G": frozenset((vx(u), vx(v)) for u, v in edges),
            "R": frozenset((w, vx(u), vx(v)) for (u, v), w in edges.items()),
        },
        weight_elements=frozenset(edges.values()),
    )
    spec = OptSpec(
        direction="max",
        so_sig=so_sig,
        objective_vars=("p", "q"),
        local_formula=parse_formula(_MATCHING_LOCAL, vocab, so_sig),
        global_formula=parse_formula(_MATCHING_GLOBAL, vocab, so_sig),
        weight_relation="R",
        name="weighted_matching",
    )
    return spec, structure


def matching_vertex_element(g: GraphInstance, vertex: int) -> int:
    """Universe element standing for a vertex in the matching encoding."""
    edges = canonical_weighted_edges(g)
    return max(edges.values(), default=0) + 1 + vertex


# ---------------------------------------------------------------------------
# Weight sets: the multiplicity-split accounting of a matched-edge relation


@dataclass(frozen=True)
class WeightSets:
    """Weight values split by how many matched edges carry each value."""

    sets: dict[int, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "sets", {k: frozenset(v) for k, v in self.sets.items() if v})

    def bucket(self, k: int) -> frozenset[int]:
        return self.sets.get(k, frozenset())


def weight_sets(matched: frozenset[tuple[int, int]],
                weights: dict[tuple[int, int], int]) -> WeightSets:
    """B_k holds the weight values shared by exactly k matched edges."""
    count: dict[int, int] = {}
    for e in matched:
        w = weights[e]
        count[w] = count.get(w, 0) + 1
    out: dict[int, set[int]] = {}
    for w, k in count.items():
        out.setdefault(k, set()).add(w)
    return WeightSets({k: frozenset(v) for k, v in out.items()})


def weight_of_sets(ws: WeightSets) -> int:
    """Total weight recovered from the multiplicity split: sum_k k * sum(B_k)."""
    return sum(k * sum(values) for k, values in ws.sets.items())


# ---------------------------------------------------------------------------
# Independent oracles (no code shared with the engine or the flow solver)


def oracle_max_flow(g: GraphInstance) -> int:
    """Maximum edge-disjoint s-t paths by depth-first augmentation."""
    residual: dict[int, dict[int, int]] = {v: {} for v in range(g.num_vertices)}
    for u, v in g.edges:
        if u != v:
            residual[u][v] = residual[u].get(v, 0) + 1
            residual[v].setdefault(u, 0)

    def augment() -> bool:
        stack = [g.source]
        parent: dict[int, int] = {g.source: g.source}
        while stack:
            u = stack.pop()
            if u == g.sink:
                break
            for v in sorted(residual[u]):
                if v not in parent and residual[u][v] > 0:
                    parent[v] = u
                    stack.append(v)
        if g.sink not in parent:
            return False
        v = g.sink
        while v != g.source:
            u = parent[v]
            residual[u][v] -= 1
            residual[v][u] += 1
            v = u
        return True

    value = 0
    while augment():
        value += 1
    return value


def oracle_shortest_path(g: GraphInstance) -> Optional[int]:
    """Fewest arcs from s to t by breadth-first search; None if unreachable."""
    succ: dict[int, list[int]] = {v: [] for v in range(g.num_vertices)}
    for u, v in sorted(g.edges):
        succ[u].append(v)
    dist = {g.source: 0}
    queue = deque([g.source])
    while queue:
        u = queue.popleft()
        if u == g.sink:
            return dist[u]
        for v in succ[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return None


ORACLE_MATCHING_EDGE_LIMIT = 16


def oracle_max_matching(g: GraphInstance) -> int:
    """Maximum matching weight by exhaustive search over edge subsets."""
    edges = canonical_weighted_edges(g)
    items = sorted(edges.items())
    if len(items) > ORACLE_MATCHING_EDGE_LIMIT:
        raise CatalogError(
            f"exhaustive matching oracle limited to {ORACLE_MATCHING_EDGE_LIMIT} edges")
    best = 0
    for mask in range(1 << len(items)):
        seen: set[int] = set()
        total = 0
        ok = True
        for i, ((u, v), w) in enumerate(items):
            if mask >> i & 1:
                if u in seen or v in seen:
                    ok = False
                    break
                seen.add(u)
                seen.add(v)
                total += w
        if ok and total > best:
            best = total
    return best


# Built-in demonstration instances for the command-line catalog.

def builtin_instance(problem: str) -> GraphInstance:
    if problem == "maxflow-pb":
        return GraphInstance(3, frozenset({(0, 2), (0, 1), (1, 2)}), 0, 2)
    if problem == "shortest-path":
        return GraphInstance(3, frozenset({(0, 1), (1, 2)}), 0, 2)
    if problem == "matching":
        return GraphInstance(
            3, frozenset({(0, 1), (1, 2)}), 0, 2,
            weights={(0, 1): 2, (1, 2): 4})
    raise CatalogError(f"unknown catalog problem {problem!r}")


def encode_builtin(problem: str) -> tuple[OptSpec, Structure]:
    g = builtin_instance(problem)
    if problem == "maxflow-pb":
        return encode_maxflow_pb(g)
    if problem == "shortest-path":
        return encode_shortest_path(g)
    return encode_weighted_matching(g)
