import itertools
import random

import pytest

from hornopt import (
    Atom, Exists, Forall, GraphInstance, GroundClauseSet, EngineError,
    InternalError, NonHornError, OptSpec, SearchLimits, SearchSpaceError,
    SearchTimeout, Structure, Var, Vocabulary, WeightError, brute_opt,
    check_poly_bound, decision_check, encode_maxflow_pb, encode_shortest_path,
    encode_weighted_matching, evaluate, free_vars, ground_to_propositional,
    horn_check, horn_sat, matrix_to_cnf, oracle_max_flow, oracle_max_matching,
    oracle_shortest_path, parse_formula, validate_spec, weighted_opt,
)
from conftest import TEST_SO_SIG, random_formula, random_interp, random_structure

V = Vocabulary(relations=(("G", 2),), constants=("s", "t"))

WIDE = SearchLimits(max_interpretations=2**128)


def graph(edges, n=3, s=0, t=2, weights=None):
    return GraphInstance(n, frozenset(edges), s, t, weights=weights)


def independent_set_spec():
    """max |{w : S(w)}| subject to S being independent in E."""
    vocab = Vocabulary(relations=(("E", 2),))
    so = (("S", 1),)
    return vocab, OptSpec(
        "max", so, ("w",),
        parse_formula("S(w)", vocab, so),
        parse_formula("forall x. forall y. (S(x) & S(y) & E(x,y)) -> x = y",
                      vocab, so))


class TestBruteOpt:
    def test_maxflow_three_vertex(self):
        g = graph({(0, 2), (0, 1), (1, 2)})
        assert oracle_max_flow(g) == 2  # oracle first: two edge-disjoint paths
        spec, m = encode_maxflow_pb(g)
        result = brute_opt(spec, m)
        assert result.optimal and result.value == 2

    def test_maxflow_empty_graph(self):
        spec, m = encode_maxflow_pb(graph(set()))
        result = brute_opt(spec, m)
        assert result.optimal and result.value == 0

    def test_shortest_path_chain(self):
        g = graph({(0, 1), (1, 2)})
        assert oracle_shortest_path(g) == 2
        spec, m = encode_shortest_path(g)
        result = brute_opt(spec, m)
        assert result.optimal and result.value == 2

    def test_shortest_path_unreachable(self):
        g = graph({(1, 0), (2, 1)})
        assert oracle_shortest_path(g) is None
        spec, m = encode_shortest_path(g)
        assert not brute_opt(spec, m).optimal

    def test_zero_solution_never_returned_when_path_exists(self):
        # minimization must skip the infeasible empty interpretation
        for edges in ({(0, 2)}, {(0, 1), (1, 2)}, {(0, 1), (1, 2), (0, 2)}):
            spec, m = encode_shortest_path(graph(edges))
            result = brute_opt(spec, m)
            assert result.optimal and result.value >= 1
            assert result.witness["S"]

    def test_weighted_spec_rejected(self):
        spec, m = encode_weighted_matching(
            graph({(0, 1)}, n=2, t=1, weights={(0, 1): 5}))
        with pytest.raises(EngineError, match="weighted_opt"):
            brute_opt(spec, m)

    def test_witness_is_refused_never_trusted(self):
        # every optimal witness re-satisfies the global and local formulas
        vocab, spec = independent_set_spec()
        m = Structure(vocab, 3, extensions={"E": {(0, 1), (1, 2)}})
        result = brute_opt(spec, m)
        assert result.optimal and result.value == 2
        assert evaluate(spec.global_formula, m, result.witness)
        for tup in result.witness_tuples:
            assert evaluate(spec.local_formula, m, result.witness,
                            dict(zip(spec.objective_vars, tup)))

    def test_lexicographically_first_witness(self):
        # a 2-vertex edgeless graph: both singletons and the pair are optimal
        # only for the pair; max is {0,1}, unique; use min instead:
        vocab, spec = independent_set_spec()
        m = Structure(vocab, 2, extensions={"E": frozenset()})
        result = brute_opt(spec, m)
        assert result.value == 2
        # now force ties: minimize tuple count; empty interpretation wins
        min_spec = OptSpec("min", spec.so_sig, spec.objective_vars,
                           spec.local_formula, spec.global_formula)
        result = brute_opt(min_spec, m)
        assert result.value == 0
        assert result.witness["S"] == frozenset()

    def test_determinism_and_prune_naive_agreement(self):
        rng = random.Random(707)
        for _ in range(60):
            m = random_structure(rng, max_n=2)
            n = m.universe_size
            raw_local = random_formula(rng, n, depth=2, variables=["w"],
                                       quantifiers=False)
            global_f = random_formula(rng, n, depth=2)
            for var in sorted(free_vars(global_f)):
                global_f = Forall(var, global_f)
            local = raw_local
            for var in sorted(free_vars(raw_local) - {"w"}):
                local = Exists(var, local)
            spec = OptSpec(rng.choice(["max", "min"]), TEST_SO_SIG, ("w",),
                           local, global_f)
            pruned = brute_opt(spec, m, SearchLimits(pruning=True))
            naive = brute_opt(spec, m, SearchLimits(pruning=False))
            assert pruned == naive
            assert brute_opt(spec, m, SearchLimits(pruning=True)) == pruned

    def test_search_space_limit(self):
        vocab = Vocabulary(relations=(("G", 2),), constants=("s", "t"))
        so = (("P", 3),)
        spec = OptSpec("max", so, ("w",),
                       parse_formula("P(w,t,w)", vocab, so),
                       parse_formula("forall x. !P(x,x,x)", vocab, so))
        m = Structure(vocab, 5, {"s": 0, "t": 4})
        with pytest.raises(SearchSpaceError) as err:
            brute_opt(spec, m)
        assert err.value.bound == 2**125

    def test_timeout(self):
        vocab = Vocabulary(relations=(("E", 2),))
        so = (("S", 1), ("T", 2))
        spec = OptSpec("max", so, ("w",),
                       parse_formula("S(w)", vocab, so),
                       parse_formula("forall x. x = x", vocab, so))
        m = Structure(vocab, 3, extensions={"E": frozenset()})
        with pytest.raises(SearchTimeout):
            brute_opt(spec, m, SearchLimits(pruning=False, timeout_s=0.0))

    def test_so_name_shadowing_vocab_rejected(self):
        vocab = Vocabulary(relations=(("E", 2),))
        so = (("E", 2),)
        spec = OptSpec("max", so, ("w",),
                       parse_formula("E(w,w)", vocab, so),
                       parse_formula("forall x. x = x", vocab, so))
        with pytest.raises(EngineError, match="shadows"):
            validate_spec(spec, Structure(vocab, 2))


class TestWeightedOpt:
    def test_single_edge(self):
        spec, m = encode_weighted_matching(
            graph({(0, 1)}, n=2, t=1, weights={(0, 1): 5}))
        result = weighted_opt(spec, m, WIDE)
        assert result.optimal and result.value == 5

    def test_two_disjoint_edges(self):
        g = graph({(0, 1), (2, 3)}, n=4, t=3, weights={(0, 1): 2, (2, 3): 4})
        assert oracle_max_matching(g) == 6
        spec, m = encode_weighted_matching(g)
        assert weighted_opt(spec, m, WIDE).value == 6

    def test_triangle(self):
        g = graph({(0, 1), (1, 2), (0, 2)}, n=3,
                  weights={(0, 1): 3, (1, 2): 2, (0, 2): 1})
        assert oracle_max_matching(g) == 3
        spec, m = encode_weighted_matching(g)
        assert weighted_opt(spec, m, WIDE).value == 3

    def test_tuple_weights_reported(self):
        g = graph({(0, 1), (2, 3)}, n=4, t=3, weights={(0, 1): 2, (2, 3): 4})
        spec, m = encode_weighted_matching(g)
        result = weighted_opt(spec, m, WIDE)
        assert result.tuple_weights is not None
        assert sorted(result.tuple_weights.values()) == [2, 4]
        assert sum(result.tuple_weights.values()) == result.value

    def test_unweighted_spec_rejected(self):
        spec, m = encode_maxflow_pb(graph({(0, 2)}))
        with pytest.raises(EngineError, match="brute_opt"):
            weighted_opt(spec, m)

    def test_countable_tuple_without_weight_is_an_error(self):
        vocab = Vocabulary(relations=(("R", 2),))
        so = (("S", 1),)
        spec = OptSpec("max", so, ("w",),
                       parse_formula("S(w)", vocab, so),
                       parse_formula("forall x. x = x", vocab, so),
                       weight_relation="R")
        m = Structure(vocab, 3, extensions={"R": {(2, 0)}},
                      weight_elements={2})
        with pytest.raises(WeightError, match="expected exactly 1"):
            weighted_opt(spec, m)

    def test_weight_outside_weight_elements_rejected(self):
        vocab = Vocabulary(relations=(("R", 2),))
        so = (("S", 1),)
        spec = OptSpec("max", so, ("w",),
                       parse_formula("S(w)", vocab, so),
                       parse_formula("forall x. x = x", vocab, so),
                       weight_relation="R")
        m = Structure(vocab, 3, extensions={"R": {(1, 0)}}, weight_elements={2})
        with pytest.raises(WeightError, match="weight element"):
            weighted_opt(spec, m)


class TestGrounding:
    def test_forall_unit_clauses(self):
        vocab = Vocabulary()
        so = (("S", 1),)
        cs = matrix_to_cnf(parse_formula("S(x)", vocab, so))
        g = ground_to_propositional(cs, ["x"], Structure(vocab, 2), so)
        assert g.num_vars == 2
        assert sorted(g.clauses) == [(1,), (2,)]

    def test_source_edge_clause_vanishes_where_true(self):
        # !P(x1,x2,w) | G(s,w)  over n = 2: 8 assignments; the clause
        # vanishes exactly where G(s,w) holds
        vocab = Vocabulary(relations=(("G", 2),), constants=("s", "t"))
        so = (("P", 3),)
        cs = matrix_to_cnf(parse_formula("!P(x1,x2,w) | G(s,w)", vocab, so))
        m = Structure(vocab, 2, {"s": 0, "t": 1}, {"G": {(0, 1)}})
        g = ground_to_propositional(cs, ["x1", "x2", "w"], m, so)
        # G(0, w) holds only for w = 1: the four w = 0 assignments remain
        assert len(g.clauses) == 4
        assert all(len(c) == 1 and c[0] < 0 for c in g.clauses)

    def test_false_first_order_literal_leaves_residue(self):
        vocab = Vocabulary(relations=(("G", 2),))
        so = (("S", 1),)
        cs = matrix_to_cnf(parse_formula("G(x,x) | S(x)", vocab, so))
        m = Structure(vocab, 2, extensions={"G": frozenset()})
        g = ground_to_propositional(cs, ["x"], m, so)
        assert sorted(g.clauses) == [(1,), (2,)]

    def test_horn_preserved(self):
        vocab = Vocabulary(relations=(("G", 2),), constants=("s", "t"))
        so = (("P", 3),)
        f = parse_formula(
            "(P(u1,u2,w3) & P(u2,u3,w3)) -> P(u1,u3,w3)", vocab, so)
        cs = matrix_to_cnf(f)
        assert horn_check(cs, so).ok
        m = Structure(vocab, 2, {"s": 0, "t": 1}, {"G": {(0, 1)}})
        g = ground_to_propositional(cs, ["u1", "u2", "u3", "w3"], m, so)
        assert g.is_horn()
        # 16 assignments; those with u1 = u2 or u2 = u3 ground to
        # tautologies (complementary pair) and vanish, leaving u1 != u2 != u3
        assert len(g.clauses) == 4

    def test_grounding_fidelity_randomized(self):
        rng = random.Random(808)
        for _ in range(500):
            m = random_structure(rng)
            n = m.universe_size
            f = random_formula(rng, n, depth=2, variables=["x", "y"],
                               quantifiers=False)
            prefix = ["x", "y"]
            closed = Forall("x", Forall("y", f))
            cs = matrix_to_cnf(f)
            g = ground_to_propositional(cs, prefix, m, TEST_SO_SIG)
            interp = random_interp(rng, TEST_SO_SIG, n)
            truth = [tup in interp[name] for name, tup in g.atoms]
            ground_value = all(
                any((lit > 0) == truth[abs(lit) - 1] for lit in clause)
                for clause in g.clauses)
            assert ground_value == evaluate(closed, m, interp)


class TestHornSat:
    def test_unit_propagation(self):
        g = GroundClauseSet(2, ((1,), (-1, 2)))
        r = horn_sat(g)
        assert r.sat and r.model == {0, 1}

    def test_unsat(self):
        g = GroundClauseSet(1, ((1,), (-1,)))
        assert not horn_sat(g).sat

    def test_no_positive_facts_gives_empty_model(self):
        g = GroundClauseSet(3, ((-1, 2), (-2, 3)))
        r = horn_sat(g)
        assert r.sat and r.model == frozenset()

    def test_empty_clause_unsat(self):
        assert not horn_sat(GroundClauseSet(1, ((),))).sat

    def test_non_horn_rejected(self):
        with pytest.raises(NonHornError):
            horn_sat(GroundClauseSet(2, ((1, 2),)))

    def test_minimal_model_randomized(self):
        rng = random.Random(909)
        for _ in range(500):
            nvars = rng.randint(1, 12)
            clauses = []
            for _ in range(rng.randint(1, 2 * nvars)):
                body = [v for v in range(1, nvars + 1) if rng.random() < 0.25]
                head = rng.choice([None] + list(range(1, nvars + 1)))
                clause = tuple(-v for v in body) + ((head,) if head else ())
                clauses.append(clause)
            g = GroundClauseSet(nvars, tuple(clauses))
            r = horn_sat(g)
            models = []
            for mask in range(1 << nvars):
                ok = all(
                    any((lit > 0) == bool(mask >> (abs(lit) - 1) & 1)
                        for lit in c)
                    for c in clauses)
                if ok:
                    models.append(mask)
            if not models:
                assert not r.sat
            else:
                assert r.sat
                meet = models[0]
                for mdl in models[1:]:
                    meet &= mdl
                expected = {v for v in range(nvars) if meet >> v & 1}
                assert r.model == expected


class TestDecisionCheck:
    def test_maxflow_thresholds(self):
        spec, m = encode_maxflow_pb(graph({(0, 2), (0, 1), (1, 2)}))
        assert decision_check(spec, m, 2)
        assert not decision_check(spec, m, 3)

    def test_zero_threshold_feasible_max(self):
        spec, m = encode_maxflow_pb(graph(set()))
        assert decision_check(spec, m, 0)

    def test_infeasible_instance(self):
        spec, m = encode_shortest_path(graph(set()))
        assert not decision_check(spec, m, 0)


class TestPolyBound:
    def test_arity_two(self):
        spec, _ = encode_shortest_path(graph({(0, 2)}))
        report = check_poly_bound(spec)
        assert report.polynomially_bound
        assert report.expression == "n^2"
        assert report.value_bound(3) == 9

    def test_arity_one(self):
        spec, _ = encode_maxflow_pb(graph({(0, 2)}))
        report = check_poly_bound(spec)
        assert report.expression == "n^1"
        assert report.value_bound(7) == 7

    def test_weighted_flagged(self):
        spec, _ = encode_weighted_matching(
            graph({(0, 1)}, n=2, t=1, weights={(0, 1): 5}))
        report = check_poly_bound(spec)
        assert not report.polynomially_bound
        assert report.expression == "W*n^2"
        assert report.value_bound(4, max_weight=5) == 80
