"""Shared generators for randomized suites.

Every randomized test seeds its own Random instance, so failures reproduce
without external state.
"""

from __future__ import annotations

import itertools
import random

import pytest

from hornopt import (
    And, Atom, Const, Elem, Equal, Exists, Forall, GraphInstance, Iff,
    Implies, Not, Or, Structure, Var, Vocabulary,
)

TEST_VOCAB = Vocabulary(relations=(("E", 2), ("Q", 1)), constants=("c",))
TEST_SO_SIG = (("S", 1), ("T", 2))


def random_structure(rng: random.Random, vocab: Vocabulary = TEST_VOCAB,
                     max_n: int = 3) -> Structure:
    n = rng.randint(1, max_n)
    extensions = {}
    for name, arity in vocab.relations:
        if name in ("succ", "C"):
            continue
        tuples = [t for t in itertools.product(range(n), repeat=arity)
                  if rng.random() < 0.5]
        extensions[name] = frozenset(tuples)
    consts = {c: rng.randrange(n) for c in vocab.constants}
    return Structure(vocab, n, const_bindings=consts, extensions=extensions)


def random_interp(rng: random.Random, so_sig, n: int):
    out = {}
    for name, arity in so_sig:
        out[name] = frozenset(
            t for t in itertools.product(range(n), repeat=arity)
            if rng.random() < 0.5)
    return out


def random_term(rng: random.Random, variables, n: int):
    choices = ["var"] * 4 + ["const", "elem"]
    kind = rng.choice([c for c in choices if c != "var" or variables])
    if kind == "var":
        return Var(rng.choice(variables))
    if kind == "const":
        return Const("c")
    return Elem(rng.randrange(n))


def random_formula(rng: random.Random, n: int, depth: int,
                   variables=(), quantifiers: bool = True):
    """A random formula whose element literals stay below n."""
    variables = list(variables)
    if depth <= 0 or rng.random() < 0.25:
        pool = [("E", 2), ("Q", 1)] + list(TEST_SO_SIG) + [None]  # None: equality
        pick = rng.choice(pool)
        if pick is None:
            return Equal(random_term(rng, variables, n),
                         random_term(rng, variables, n))
        name, arity = pick
        return Atom(name, tuple(random_term(rng, variables, n)
                                for _ in range(arity)))
    ops = ["not", "and", "or", "implies", "iff"]
    if quantifiers:
        ops += ["forall", "exists", "forall"]
    op = rng.choice(ops)
    if op == "not":
        return Not(random_formula(rng, n, depth - 1, variables, quantifiers))
    if op in ("forall", "exists"):
        var = rng.choice(["x", "y", "z", "u"])
        body = random_formula(rng, n, depth - 1, variables + [var], quantifiers)
        return (Forall if op == "forall" else Exists)(var, body)
    cls = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[op]
    return cls(random_formula(rng, n, depth - 1, variables, quantifiers),
               random_formula(rng, n, depth - 1, variables, quantifiers))


def random_assignment(rng: random.Random, names, n: int):
    return {name: rng.randrange(n) for name in names}


def all_three_vertex_instances():
    """All 64 digraphs on vertices {0,1,2} with s=0, t=2, no self-loops."""
    pairs = [(u, v) for u in range(3) for v in range(3) if u != v]
    for mask in range(64):
        edges = frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)
        yield GraphInstance(3, edges, 0, 2)


def random_weighted_graph(rng: random.Random, max_vertices: int = 4,
                          max_weight: int = 3) -> GraphInstance:
    nv = rng.randint(2, max_vertices)
    possible = [(u, v) for u in range(nv) for v in range(u + 1, nv)]
    edges = [e for e in possible if rng.random() < 0.6] or [possible[0]]
    weights = {e: rng.randint(1, max_weight) for e in edges}
    return GraphInstance(nv, frozenset(edges), 0, nv - 1, weights=weights)


def random_digraph(rng: random.Random, max_vertices: int = 8) -> GraphInstance:
    nv = rng.randint(2, max_vertices)
    edges = frozenset(
        (u, v)
        for u in range(nv) for v in range(nv)
        if u != v and rng.random() < 0.35)
    return GraphInstance(nv, edges, 0, nv - 1)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
