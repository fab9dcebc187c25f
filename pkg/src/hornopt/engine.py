"""Counting-based optimization over second-order interpretations.

An OptSpec fixes a direction, a signature of solution predicates, an
objective tuple with its per-tuple condition, and a closed feasibility
formula.  The engine enumerates interpretations of the solution predicates
in lexicographic bit-vector order (predicates in declaration order, tuples
lexicographic, earlier atoms more significant), skips infeasible ones, and
returns the optimal tuple count (or weight sum) with the first witness
attaining it.

Feasibility is compiled to a ground propositional clause set, which both
drives subtree pruning during the search and realizes the classical
grounding step for Horn satisfiability.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

from .analysis import (
    Clause, ClauseSet, Literal, matrix_to_cnf, to_pnf,
)
from .logic import (
    And, Atom, Equal, Exists, Forall, Formula, Iff, Implies, LogicError, Not,
    Or, SecondOrderSig, Structure, atoms_of, constant_names, evaluate,
    free_vars, term_value,
)


class EngineError(LogicError):
    pass


class SearchSpaceError(EngineError):
    """The full interpretation space exceeds the configured bound."""

    def __init__(self, bound: int, limit: int):
        self.bound = bound
        self.limit = limit
        super().__init__(
            f"search space of {bound} interpretations exceeds limit {limit}")


class SearchTimeout(EngineError):
    pass


class NonHornError(EngineError):
    pass


class WeightError(EngineError):
    pass


class InternalError(EngineError):
    """An invariant the engine guarantees failed on re-verification."""


@dataclass(frozen=True)
class SearchLimits:
    max_interpretations: int = 2**30
    timeout_s: float = 60.0
    pruning: bool = True
    clause_limit: int = 10**6


@dataclass(frozen=True)
class OptSpec:
    """An optimization problem over a structure-independent formula pair.

    `local_formula` may use exactly the objective variables free; the
    closed `global_formula` states feasibility of a whole interpretation.
    A weight relation of arity k+1 (weight first) switches the objective
    from tuple counting to weight summing.
    """

    direction: str  # "max" | "min"
    so_sig: SecondOrderSig
    objective_vars: tuple[str, ...]
    local_formula: Formula
    global_formula: Formula
    weight_relation: Optional[str] = None
    name: str = ""

    def __post_init__(self):
        if self.direction not in ("max", "min"):
            raise EngineError(f"direction must be max or min, not {self.direction!r}")
        object.__setattr__(self, "so_sig", tuple((n, int(a)) for n, a in self.so_sig))
        object.__setattr__(self, "objective_vars", tuple(self.objective_vars))
        names = [n for n, _ in self.so_sig]
        if len(set(names)) != len(names):
            raise EngineError("duplicate second-order predicate name")
        if any(a < 1 for _, a in self.so_sig):
            raise EngineError("second-order predicate with non-positive arity")
        if not self.objective_vars:
            raise EngineError("objective tuple must have at least one variable")
        extra = free_vars(self.local_formula) - set(self.objective_vars)
        if extra:
            raise EngineError(f"local formula has stray free variables {sorted(extra)}")
        if free_vars(self.global_formula):
            raise EngineError("global formula must be closed")

    @property
    def weighted(self) -> bool:
        return self.weight_relation is not None


SecondOrderInterp = dict[str, frozenset[tuple[int, ...]]]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class OptResult:
    status: str
    value: int = 0
    witness: Optional[SecondOrderInterp] = None
    witness_tuples: frozenset[tuple[int, ...]] = frozenset()
    tuple_weights: Optional[dict[tuple[int, ...], int]] = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass(frozen=True)
class BoundReport:
    """Objective-value bound implied by the objective arity.

    Counting objectives are bounded by n^k, so every counting spec is
    polynomially bound; weighted objectives are bounded by (max weight)*n^k
    and sit in the not-necessarily-polynomially-bound class.
    """

    arity: int
    weighted: bool

    @property
    def polynomially_bound(self) -> bool:
        return not self.weighted

    @property
    def expression(self) -> str:
        return f"W*n^{self.arity}" if self.weighted else f"n^{self.arity}"

    def value_bound(self, n: int, max_weight: int = 1) -> int:
        return (max_weight if self.weighted else 1) * n ** self.arity


def check_poly_bound(spec: OptSpec) -> BoundReport:
    return BoundReport(arity=len(spec.objective_vars), weighted=spec.weighted)


# ---------------------------------------------------------------------------
# Ground clause sets

GroundAtom = tuple[str, tuple[int, ...]]
IntClause = tuple[int, ...]  # literals are +-(atom_id + 1)


@dataclass(frozen=True)
class GroundClauseSet:
    num_vars: int
    clauses: tuple[IntClause, ...]
    atoms: tuple[GroundAtom, ...] = ()  # id -> ground second-order atom; may be empty

    def atom_name(self, var: int) -> str:
        if self.atoms:
            name, tup = self.atoms[var]
            return f"{name}({','.join(map(str, tup))})"
        return f"v{var + 1}"

    def is_horn(self) -> bool:
        return all(sum(1 for lit in c if lit > 0) <= 1 for c in self.clauses)


@dataclass(frozen=True)
class SatResult:
    sat: bool
    model: frozenset[int] = frozenset()  # 0-based atom ids forced true

    def model_atoms(self, g: GroundClauseSet) -> frozenset[GroundAtom]:
        return frozenset(g.atoms[v] for v in self.model)


def _atom_table(so_sig: SecondOrderSig, n: int) -> tuple[tuple[GroundAtom, ...],
                                                          dict[GroundAtom, int]]:
    atoms: list[GroundAtom] = []
    for name, arity in so_sig:
        for tup in itertools.product(range(n), repeat=arity):
            atoms.append((name, tup))
    return tuple(atoms), {a: i for i, a in enumerate(atoms)}


def _ground_literal(lit: Literal, m: Structure, env: dict[str, int],
                    so_names: frozenset[str],
                    index: dict[GroundAtom, int]) -> Union[bool, int]:
    """A ground literal is either decided by the structure or propositional."""
    atom = lit.atom
    if isinstance(atom, Atom) and atom.relation in so_names:
        tup = tuple(term_value(t, m, env) for t in atom.terms)
        v = index[(atom.relation, tup)] + 1
        return v if lit.positive else -v
    if isinstance(atom, Atom):
        truth = tuple(term_value(t, m, env) for t in atom.terms) in m.relation(atom.relation)
    elif isinstance(atom, Equal):
        truth = term_value(atom.left, m, env) == term_value(atom.right, m, env)
    else:
        raise EngineError(f"not an atom: {atom!r}")
    return truth == lit.positive


def ground_to_propositional(matrix: ClauseSet, prefix_vars: Sequence[str],
                            m: Structure, so_sig: SecondOrderSig) -> GroundClauseSet:
    """Expand an all-universal prefix over the universe.

    Emits one ground clause per assignment of `prefix_vars` per matrix
    clause; first-order literals are evaluated against the structure and
    simplified away (a true literal deletes the clause, a false one drops
    out).  Horn-ness of the matrix is preserved.
    """
    n = m.universe_size
    atoms, index = _atom_table(so_sig, n)
    so_names = frozenset(name for name, _ in so_sig)
    out: list[IntClause] = []
    for values in itertools.product(range(n), repeat=len(prefix_vars)):
        env = dict(zip(prefix_vars, values))
        for clause in matrix.clauses:
            residue: list[int] = []
            seen: set[int] = set()
            satisfied = False
            for lit in clause:
                g = _ground_literal(lit, m, env, so_names, index)
                if g is True:
                    satisfied = True
                    break
                if g is False:
                    continue
                if -g in seen:
                    satisfied = True  # complementary pair
                    break
                if g not in seen:
                    seen.add(g)
                    residue.append(g)
            if not satisfied:
                out.append(tuple(residue))
    return GroundClauseSet(len(atoms), tuple(out), atoms)


# NNF that keeps quantifiers, for grounding arbitrary closed formulas.
def _nnf_q(f: Formula, negate: bool = False) -> Formula:
    if isinstance(f, (Atom, Equal)):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return _nnf_q(f.sub, not negate)
    if isinstance(f, And):
        op = Or if negate else And
        return op(_nnf_q(f.left, negate), _nnf_q(f.right, negate))
    if isinstance(f, Or):
        op = And if negate else Or
        return op(_nnf_q(f.left, negate), _nnf_q(f.right, negate))
    if isinstance(f, Implies):
        return _nnf_q(Or(Not(f.left), f.right), negate)
    if isinstance(f, Iff):
        both = And(Implies(f.left, f.right), Implies(f.right, f.left))
        return _nnf_q(both, negate)
    if isinstance(f, Forall):
        op = Exists if negate else Forall
        return op(f.var, _nnf_q(f.body, negate))
    if isinstance(f, Exists):
        op = Forall if negate else Exists
        return op(f.var, _nnf_q(f.body, negate))
    raise EngineError(f"not a formula: {f!r}")


def _ground_clauses(f: Formula, m: Structure, so_names: frozenset[str],
                    index: dict[GroundAtom, int], env: dict[str, int],
                    clause_limit: int) -> Optional[list[IntClause]]:
    """Ground a closed NNF formula to clauses; None encodes `true`.

    Universal quantifiers expand to conjunctions over the universe and
    existentials to disjunctions, then disjunction distributes over
    conjunction exactly, within `clause_limit`.
    """
    from .analysis import CnfSizeError

    n = m.universe_size
    FALSUM = [()]

    def merge_int(a: IntClause, b: IntClause) -> Optional[IntClause]:
        seen = set(a)
        out = list(a)
        for lit in b:
            if -lit in seen:
                return None
            if lit not in seen:
                seen.add(lit)
                out.append(lit)
        return tuple(out)

    def conj(parts: Iterable[Optional[list[IntClause]]]) -> Optional[list[IntClause]]:
        out: Optional[list[IntClause]] = None
        for p in parts:
            if p is None:
                continue
            if p == FALSUM or () in p:
                return FALSUM
            if out is None:
                out = list(p)
            else:
                out.extend(p)
                if len(out) > clause_limit:
                    raise CnfSizeError(f"ground clause count exceeds limit {clause_limit}")
        return out

    def disj(parts: Iterable[Optional[list[IntClause]]]) -> Optional[list[IntClause]]:
        out: Optional[list[IntClause]] = [()]
        for p in parts:
            if p is None:
                return None
            if () in p:
                continue  # false disjunct drops out
            merged = []
            for c1 in out:
                for c2 in p:
                    c = merge_int(c1, c2)
                    if c is not None:
                        merged.append(c)
                if len(merged) > clause_limit:
                    raise CnfSizeError(f"ground clause count exceeds limit {clause_limit}")
            out = merged
            if not out:
                return None  # every merge was tautological
        return out

    def walk(g: Formula) -> Optional[list[IntClause]]:
        if isinstance(g, (Atom, Equal, Not)):
            lit = Literal(False, g.sub) if isinstance(g, Not) else Literal(True, g)
            ground = _ground_literal(lit, m, env, so_names, index)
            if ground is True:
                return None
            if ground is False:
                return FALSUM
            return [(ground,)]
        if isinstance(g, And):
            return conj([walk(g.left), walk(g.right)])
        if isinstance(g, Or):
            return disj([walk(g.left), walk(g.right)])
        if isinstance(g, Forall):
            parts = []
            for e in range(n):
                env[g.var] = e
                parts.append(walk(g.body))
            del env[g.var]
            return conj(parts)
        if isinstance(g, Exists):
            parts = []
            for e in range(n):
                env[g.var] = e
                parts.append(walk(g.body))
            del env[g.var]
            return disj(parts)
        raise EngineError(f"not in NNF: {g!r}")

    return walk(_nnf_q(f))


# ---------------------------------------------------------------------------
# Horn satisfiability


def horn_sat(g: GroundClauseSet) -> SatResult:
    """Unit propagation on a Horn clause set; minimal model when satisfiable.

    The model is the set of atoms forced true by positive unit clauses
    propagated through definite clauses; every other atom is false.
    """
    heads: list[Optional[int]] = []
    bodies: list[tuple[int, ...]] = []
    for clause in g.clauses:
        pos = [lit - 1 for lit in clause if lit > 0]
        neg = [-lit - 1 for lit in clause if lit < 0]
        if len(pos) > 1:
            raise NonHornError(
                f"clause with {len(pos)} positive literals is not Horn")
        heads.append(pos[0] if pos else None)
        bodies.append(tuple(neg))

    occurs: dict[int, list[int]] = {}
    remaining = []
    for ci, body in enumerate(bodies):
        remaining.append(len(body))
        for v in body:
            occurs.setdefault(v, []).append(ci)

    true: set[int] = set()
    queue: list[int] = []
    for ci, cnt in enumerate(remaining):
        if cnt == 0:
            if heads[ci] is None:
                return SatResult(False)
            if heads[ci] not in true:
                true.add(heads[ci])
                queue.append(heads[ci])
    while queue:
        v = queue.pop()
        for ci in occurs.get(v, ()):
            remaining[ci] -= 1
            if remaining[ci] == 0:
                h = heads[ci]
                if h is None:
                    return SatResult(False)
                if h not in true:
                    true.add(h)
                    queue.append(h)
    return SatResult(True, frozenset(true))


# ---------------------------------------------------------------------------
# Spec validation against a structure


def validate_spec(spec: OptSpec, m: Structure) -> None:
    so = dict(spec.so_sig)
    for name, _ in spec.so_sig:
        if m.vocab.has_relation(name):
            raise EngineError(f"second-order predicate {name!r} shadows a vocabulary relation")

    def check_formula(f: Formula, where: str) -> None:
        for atom in atoms_of(f):
            declared = so.get(atom.relation, m.vocab.arity(atom.relation))
            if declared is None:
                raise EngineError(f"{where}: unknown relation {atom.relation!r}")
            if declared != len(atom.terms):
                raise EngineError(
                    f"{where}: relation {atom.relation!r} has arity {declared}, "
                    f"got {len(atom.terms)}")

    check_formula(spec.local_formula, "local formula")
    check_formula(spec.global_formula, "global formula")

    for f, where in ((spec.local_formula, "local formula"),
                     (spec.global_formula, "global formula")):
        unbound = constant_names(f) - set(m.const_bindings)
        if unbound:
            raise EngineError(f"{where}: constants not bound by structure: {sorted(unbound)}")

    if spec.weighted:
        rel = spec.weight_relation
        k = len(spec.objective_vars)
        arity = m.vocab.arity(rel)
        if arity is None:
            raise EngineError(f"weight relation {rel!r} not declared")
        if arity != k + 1:
            raise EngineError(
                f"weight relation {rel!r} must have arity {k + 1}, has {arity}")
        for tup in m.relation(rel):
            if tup[0] not in m.weight_elements:
                raise WeightError(
                    f"first position of {rel}{tup} is not a declared weight element")


# ---------------------------------------------------------------------------
# The brute search


@dataclass
class _Compiled:
    spec: OptSpec
    m: Structure
    atoms: tuple[GroundAtom, ...]
    index: dict[GroundAtom, int]
    global_clauses: tuple[IntClause, ...]
    objective: tuple[tuple[int, ...], ...]  # objective tuples, lex order
    local_clauses: list[Optional[list[IntClause]]]  # None = always; [()] inside = never
    weights: Optional[list[Optional[list[int]]]]  # per tuple, weights found in R


def _compile(spec: OptSpec, m: Structure, limits: SearchLimits) -> _Compiled:
    validate_spec(spec, m)
    n = m.universe_size
    atoms, index = _atom_table(spec.so_sig, n)
    so_names = frozenset(name for name, _ in spec.so_sig)

    bound = 1 << sum(n ** a for _, a in spec.so_sig)
    if bound > limits.max_interpretations:
        raise SearchSpaceError(bound, limits.max_interpretations)

    # Quantifier expansion stays scoped to each quantifier's own body, so a
    # conjunction of small-prefix formulas never grounds over a joint prefix.
    lst = _ground_clauses(spec.global_formula, m, so_names, index, {},
                          limits.clause_limit)
    gclauses = tuple(lst) if lst is not None else ()

    objective = tuple(itertools.product(range(n), repeat=len(spec.objective_vars)))
    local = []
    for tup in objective:
        env = dict(zip(spec.objective_vars, tup))
        lc = _ground_clauses(spec.local_formula, m, so_names, index, env,
                             limits.clause_limit)
        if lc is not None and () in lc:
            lc = [()]
        local.append(lc)

    weights = None
    if spec.weighted:
        per_tuple: dict[tuple[int, ...], list[int]] = {}
        for tup in m.relation(spec.weight_relation):
            per_tuple.setdefault(tuple(tup[1:]), []).append(tup[0])
        weights = [per_tuple.get(tup) for tup in objective]

    return _Compiled(spec, m, atoms, index, tuple(dict.fromkeys(gclauses)),
                     objective, local, weights)


def _tuple_weight(c: _Compiled, ti: int) -> int:
    ws = c.weights[ti]
    if ws is None or len(ws) != 1:
        found = 0 if ws is None else len(ws)
        raise WeightError(
            f"objective tuple {c.objective[ti]} has {found} weights in "
            f"{c.spec.weight_relation}, expected exactly 1")
    return ws[0]


def _result_from_assign(c: _Compiled, assign: Sequence[bool], value: int,
                        sat_tuples: Sequence[int]) -> OptResult:
    interp: SecondOrderInterp = {name: frozenset() for name, _ in c.spec.so_sig}
    grouped: dict[str, set[tuple[int, ...]]] = {name: set() for name, _ in c.spec.so_sig}
    for i, (name, tup) in enumerate(c.atoms):
        if assign[i]:
            grouped[name].add(tup)
    interp = {name: frozenset(tups) for name, tups in grouped.items()}
    tuple_weights = None
    if c.spec.weighted:
        tuple_weights = {c.objective[ti]: _tuple_weight(c, ti) for ti in sat_tuples}
    return OptResult(OPTIMAL, value, interp,
                     frozenset(c.objective[ti] for ti in sat_tuples), tuple_weights)


def _leaf_value(c: _Compiled, truth: Callable[[int], bool]) -> tuple[int, list[int]]:
    """Objective value and satisfying tuple indices for a complete assignment."""
    value = 0
    sat: list[int] = []
    for ti, lc in enumerate(c.local_clauses):
        if lc is not None:
            ok = all(
                any((lit > 0) == truth(abs(lit) - 1) for lit in clause)
                for clause in lc
            )
            if not ok:
                continue
        sat.append(ti)
        value += _tuple_weight(c, ti) if c.spec.weighted else 1
    return value, sat


class _Deadline:
    def __init__(self, seconds: float):
        self.t0 = time.monotonic()
        self.seconds = seconds
        self.ticks = 0

    def check(self, every: int = 4096):
        self.ticks += 1
        if self.ticks % every == 0 and time.monotonic() - self.t0 > self.seconds:
            raise SearchTimeout(f"search exceeded {self.seconds} s")


def _search_pruned(c: _Compiled, limits: SearchLimits) -> Optional[tuple[int, list[bool], list[int]]]:
    """DFS over relevant atoms in lexicographic order with clause pruning.

    Atoms appearing in no ground clause and in no tuple's local condition
    cannot affect feasibility or value; they are pinned false, which is
    exactly their value in the lexicographically first optimum.
    """
    if any(len(cl) == 0 for cl in c.global_clauses):
        return None

    relevant = sorted(
        {abs(lit) - 1 for cl in c.global_clauses for lit in cl}
        | {abs(lit) - 1 for lc in c.local_clauses if lc is not None
           for cl in lc for lit in cl}
    )
    num_atoms = len(c.atoms)
    assign = [False] * num_atoms

    clauses = [tuple(cl) for cl in c.global_clauses]
    occur: dict[int, list[tuple[int, bool]]] = {v: [] for v in relevant}
    for ci, cl in enumerate(clauses):
        for lit in cl:
            occur[abs(lit) - 1].append((ci, lit > 0))
    free = [len(cl) for cl in clauses]
    sat = [0] * len(clauses)

    maximize = c.spec.direction == "max"
    if not maximize:
        best_possible = 0
    elif c.spec.weighted:
        # tuples without exactly one weight abort any leaf that counts them,
        # so they add nothing to the reachable maximum
        best_possible = sum(
            c.weights[ti][0]
            for ti, lc in enumerate(c.local_clauses)
            if lc != [()] and c.weights[ti] is not None and len(c.weights[ti]) == 1
        )
    else:
        best_possible = sum(1 for lc in c.local_clauses if lc != [()])

    deadline = _Deadline(limits.timeout_s)
    best: Optional[tuple[int, list[bool], list[int]]] = None
    done = False

    def set_atom(v: int, value: bool) -> bool:
        assign[v] = value
        ok = True
        for ci, positive in occur[v]:
            free[ci] -= 1
            if positive == value:
                sat[ci] += 1
            elif free[ci] == 0 and sat[ci] == 0:
                ok = False  # keep counters consistent; caller undoes fully
        return ok

    def unset_atom(v: int, value: bool) -> None:
        assign[v] = False
        for ci, positive in occur[v]:
            free[ci] += 1
            if positive == value:
                sat[ci] -= 1

    def rec(pos: int) -> None:
        nonlocal best, done
        if done:
            return
        deadline.check()
        if pos == len(relevant):
            value, sat_tuples = _leaf_value(c, lambda v: assign[v])
            if best is None or (value > best[0] if maximize else value < best[0]):
                best = (value, list(assign), sat_tuples)
                if value == best_possible:
                    done = True
            return
        v = relevant[pos]
        for value in (False, True):
            if set_atom(v, value):
                rec(pos + 1)
            unset_atom(v, value)
            if done:
                return

    rec(0)
    return best


def _search_naive(c: _Compiled, limits: SearchLimits) -> Optional[tuple[int, list[bool], list[int]]]:
    """Reference enumeration: every complete interpretation, evaluator-checked.

    Independent of the grounding machinery; used as the correctness
    baseline and for tiny cross-checks.
    """
    num_atoms = len(c.atoms)
    maximize = c.spec.direction == "max"
    deadline = _Deadline(limits.timeout_s)
    best = None
    names = [name for name, _ in c.spec.so_sig]
    for bits in range(1 << num_atoms):
        deadline.check(every=64)
        assign = [(bits >> (num_atoms - 1 - i)) & 1 == 1 for i in range(num_atoms)]
        grouped: dict[str, set[tuple[int, ...]]] = {name: set() for name in names}
        for i, (name, tup) in enumerate(c.atoms):
            if assign[i]:
                grouped[name].add(tup)
        interp = {name: frozenset(tups) for name, tups in grouped.items()}
        if not evaluate(c.spec.global_formula, c.m, interp):
            continue
        value = 0
        sat_tuples = []
        for ti, tup in enumerate(c.objective):
            env = dict(zip(c.spec.objective_vars, tup))
            if evaluate(c.spec.local_formula, c.m, interp, env):
                sat_tuples.append(ti)
                value += _tuple_weight(c, ti) if c.spec.weighted else 1
        if best is None or (value > best[0] if maximize else value < best[0]):
            best = (value, assign, sat_tuples)
    return best


def _optimize(spec: OptSpec, m: Structure, limits: SearchLimits) -> OptResult:
    c = _compile(spec, m, limits)
    found = _search_pruned(c, limits) if limits.pruning else _search_naive(c, limits)
    if found is None:
        return OptResult(INFEASIBLE)
    value, assign, sat_tuples = found
    result = _result_from_assign(c, assign, value, sat_tuples)
    _verify_result(spec, m, result)
    return result


def _verify_result(spec: OptSpec, m: Structure, r: OptResult) -> None:
    """Re-evaluate the witness; a failure here is an engine bug."""
    if not evaluate(spec.global_formula, m, r.witness):
        raise InternalError("witness does not satisfy the global formula")
    for tup in r.witness_tuples:
        env = dict(zip(spec.objective_vars, tup))
        if not evaluate(spec.local_formula, m, r.witness, env):
            raise InternalError("witness tuple fails the local formula")
    expected = (sum(r.tuple_weights.values()) if spec.weighted
                else len(r.witness_tuples))
    if expected != r.value:
        raise InternalError("optimal value disagrees with the witness tuples")


def brute_opt(spec: OptSpec, m: Structure,
              limits: SearchLimits = SearchLimits()) -> OptResult:
    """Optimal tuple count over all feasible second-order interpretations.

    Returns the max/min number of objective tuples satisfying the local
    formula, over interpretations satisfying the global formula, with the
    lexicographically first witness attaining it; Infeasible when no
    interpretation satisfies the global formula.
    """
    if spec.weighted:
        raise EngineError("spec has a weight relation; use weighted_opt")
    return _optimize(spec, m, limits)


def weighted_opt(spec: OptSpec, m: Structure,
                 limits: SearchLimits = SearchLimits()) -> OptResult:
    """As brute_opt, but the objective is the sum of tuple weights.

    Every counted tuple must carry exactly one weight in the weight
    relation; weight values are the weight elements themselves.  Values are
    exact integers of arbitrary size.
    """
    if not spec.weighted:
        raise EngineError("spec has no weight relation; use brute_opt")
    return _optimize(spec, m, limits)


def decision_check(spec: OptSpec, m: Structure, threshold: int,
                   limits: SearchLimits = SearchLimits()) -> bool:
    """Is there a feasible solution with value >= K (max) or <= K (min)?"""
    if threshold < 0:
        raise EngineError("threshold must be non-negative")
    result = weighted_opt(spec, m, limits) if spec.weighted else brute_opt(spec, m, limits)
    if not result.optimal:
        return False
    return result.value >= threshold if spec.direction == "max" else result.value <= threshold
