"""Prenex normal form, clausal form, Horn validation, prefix classification.

All transformations are semantics-preserving on every structure and
assignment; the clausal converter distributes disjunction over conjunction
exactly (no auxiliary variables), so the Horn property of the output is the
Horn property of the input formula itself.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Optional

from .logic import (
    And, Assignment, Atom, Equal, Exists, Forall, Formula, Iff, Implies,
    LogicError, Not, Or, SecondOrderSig, Structure, all_var_names, evaluate,
    formula_to_text, free_vars, rename_var,
)


class CnfSizeError(LogicError):
    """Exact distribution would exceed the configured clause budget."""


DEFAULT_CLAUSE_LIMIT = 10**6


class QuantClass(enum.Enum):
    SIGMA0 = "SIGMA0"
    SIGMA1 = "SIGMA1"
    PI1 = "PI1"
    PI2 = "PI2"
    SIGMA2 = "SIGMA2"
    OTHER = "OTHER"


@dataclass(frozen=True)
class PrenexForm:
    prefix: tuple[tuple[str, str], ...]  # ("forall"|"exists", var)
    matrix: Formula

    def to_formula(self) -> Formula:
        f = self.matrix
        for quant, var in reversed(self.prefix):
            f = Forall(var, f) if quant == "forall" else Exists(var, f)
        return f


@dataclass(frozen=True)
class Literal:
    positive: bool
    atom: Formula  # Atom or Equal

    def negate(self) -> "Literal":
        return Literal(not self.positive, self.atom)

    def __str__(self):
        if not self.positive and isinstance(self.atom, Equal):
            return f"{self.atom.left} != {self.atom.right}"
        text = formula_to_text(self.atom)
        return text if self.positive else f"!{text}"


Clause = tuple[Literal, ...]


@dataclass(frozen=True)
class ClauseSet:
    clauses: tuple[Clause, ...]

    def __str__(self):
        return " & ".join(
            "(" + " | ".join(map(str, c)) + ")" if c else "false"
            for c in self.clauses
        ) or "true"


def evaluate_clauses(cs: ClauseSet, m: Structure, so=None, a: Optional[Assignment] = None,
                     ) -> bool:
    """Truth of the clause conjunction under the evaluator's semantics."""
    so = so or {}
    return all(
        any(evaluate(lit.atom, m, so, a) == lit.positive for lit in clause)
        for clause in cs.clauses
    )


@dataclass(frozen=True)
class HornReport:
    ok: bool
    offending_clause: Optional[Clause] = None
    positive_so_literals: tuple[Literal, ...] = ()

    def describe(self) -> str:
        if self.ok:
            return "horn"
        lits = ", ".join(map(str, self.positive_so_literals))
        clause = " | ".join(map(str, self.offending_clause or ()))
        return f"not horn: clause ({clause}) has positive second-order literals {lits}"


# ---------------------------------------------------------------------------
# Prenex normal form


def _expand_iff(f: Formula) -> Formula:
    if isinstance(f, Iff):
        a, b = _expand_iff(f.left), _expand_iff(f.right)
        return And(Implies(a, b), Implies(b, a))
    if isinstance(f, Not):
        return Not(_expand_iff(f.sub))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_expand_iff(f.left), _expand_iff(f.right))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, _expand_iff(f.body))
    return f


def _rectify(f: Formula) -> Formula:
    """Rename bound variables apart from one another and from free variables."""
    used = set(all_var_names(f))
    taken = set(free_vars(f))

    def fresh(name: str) -> str:
        while name in used:
            name += "'"
        used.add(name)
        return name

    def walk(g: Formula) -> Formula:
        if isinstance(g, (Atom, Equal)):
            return g
        if isinstance(g, Not):
            return Not(walk(g.sub))
        if isinstance(g, (And, Or, Implies)):
            return type(g)(walk(g.left), walk(g.right))
        if isinstance(g, (Forall, Exists)):
            var, body = g.var, g.body
            if var in taken:
                new = fresh(var)
                body = rename_var(body, var, new)
                var = new
            taken.add(var)
            return type(g)(var, walk(body))
        raise LogicError(f"not a formula: {g!r}")

    return walk(f)


def to_pnf(f: Formula) -> PrenexForm:
    """Pull all quantifiers into a rectified prefix.

    Biconditionals are expanded first; quantifier polarity flips under
    negation and in implication antecedents; bound variables are renamed
    apart with prime suffixes.  The matrix keeps the input's connectives.
    """
    f = _rectify(_expand_iff(f))

    def pull(g: Formula) -> tuple[list[tuple[str, str]], Formula]:
        if isinstance(g, (Atom, Equal)):
            return [], g
        if isinstance(g, Not):
            prefix, matrix = pull(g.sub)
            flipped = [("exists" if q == "forall" else "forall", v) for q, v in prefix]
            return flipped, Not(matrix)
        if isinstance(g, (And, Or)):
            lp, lm = pull(g.left)
            rp, rm = pull(g.right)
            return lp + rp, type(g)(lm, rm)
        if isinstance(g, Implies):
            lp, lm = pull(g.left)
            rp, rm = pull(g.right)
            flipped = [("exists" if q == "forall" else "forall", v) for q, v in lp]
            return flipped + rp, Implies(lm, rm)
        if isinstance(g, (Forall, Exists)):
            quant = "forall" if isinstance(g, Forall) else "exists"
            prefix, matrix = pull(g.body)
            return [(quant, g.var)] + prefix, matrix
        raise LogicError(f"not a formula: {g!r}")

    prefix, matrix = pull(f)
    return PrenexForm(tuple(prefix), matrix)


def classify_prefix(p: PrenexForm) -> QuantClass:
    """Quantifier-prefix class of a rectified prenex formula."""
    blocks: list[str] = []
    for quant, _ in p.prefix:
        if not blocks or blocks[-1] != quant:
            blocks.append(quant)
    if not blocks:
        return QuantClass.SIGMA0
    if blocks == ["exists"]:
        return QuantClass.SIGMA1
    if blocks == ["forall"]:
        return QuantClass.PI1
    if blocks == ["forall", "exists"]:
        return QuantClass.PI2
    if blocks == ["exists", "forall"]:
        return QuantClass.SIGMA2
    return QuantClass.OTHER


# ---------------------------------------------------------------------------
# Clausal form


def _nnf(f: Formula, negate: bool = False) -> Formula:
    if isinstance(f, (Atom, Equal)):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return _nnf(f.sub, not negate)
    if isinstance(f, And):
        op = Or if negate else And
        return op(_nnf(f.left, negate), _nnf(f.right, negate))
    if isinstance(f, Or):
        op = And if negate else Or
        return op(_nnf(f.left, negate), _nnf(f.right, negate))
    if isinstance(f, Implies):
        return _nnf(Or(Not(f.left), f.right), negate)
    if isinstance(f, Iff):
        both = And(Implies(f.left, f.right), Implies(f.right, f.left))
        return _nnf(both, negate)
    raise LogicError(f"quantifier inside matrix: {f!r}")


def _literal_truth(lit: Literal) -> Optional[bool]:
    """Truth decidable syntactically: only  t = t  with identical terms."""
    if isinstance(lit.atom, Equal) and lit.atom.left == lit.atom.right:
        return lit.positive
    return None


def _merge(a: Clause, b: Clause) -> Optional[Clause]:
    seen = {lit.atom: lit.positive for lit in a}
    out = list(a)
    for lit in b:
        if lit.atom in seen:
            if seen[lit.atom] != lit.positive:
                return None  # complementary pair: tautology
            continue
        seen[lit.atom] = lit.positive
        out.append(lit)
    return tuple(out)


def matrix_to_cnf(m: Formula, clause_limit: int = DEFAULT_CLAUSE_LIMIT) -> ClauseSet:
    """Exact clausal form of a quantifier-free formula.

    Implications and biconditionals are eliminated, negation pushed to
    atoms, and disjunction distributed over conjunction; no auxiliary
    variables are introduced.  Raises CnfSizeError when the clause count
    would exceed `clause_limit`.
    """
    nnf = _nnf(m)

    def clauses(g: Formula) -> Optional[list[Clause]]:
        """None encodes `true`; a () member encodes falsum."""
        if isinstance(g, And):
            left, right = clauses(g.left), clauses(g.right)
            if left is None:
                return right
            if right is None:
                return left
            if len(left) + len(right) > clause_limit:
                raise CnfSizeError(f"clause count exceeds limit {clause_limit}")
            return left + right
        if isinstance(g, Or):
            left, right = clauses(g.left), clauses(g.right)
            if left is None or right is None:
                return None
            if len(left) * len(right) > clause_limit:
                raise CnfSizeError(f"clause count exceeds limit {clause_limit}")
            out = []
            for c1 in left:
                for c2 in right:
                    merged = _merge(c1, c2)
                    if merged is not None:
                        out.append(merged)
            return out or None
        lit = Literal(False, g.sub) if isinstance(g, Not) else Literal(True, g)
        truth = _literal_truth(lit)
        if truth is True:
            return None
        if truth is False:
            return [()]
        return [(lit,)]

    result = clauses(nnf)
    return ClauseSet(tuple(result) if result is not None else ())


def horn_check(cs: ClauseSet, so_sig: SecondOrderSig) -> HornReport:
    """At most one positive second-order literal per clause (definite form).

    First-order and equality literals never count toward the limit; a clause
    of only first-order literals is Horn.  Reports the first offender.
    """
    so_names = {name for name, _ in so_sig}
    for clause in cs.clauses:
        positives = tuple(
            lit for lit in clause
            if lit.positive and isinstance(lit.atom, Atom) and lit.atom.relation in so_names
        )
        if len(positives) > 1:
            return HornReport(False, clause, positives)
    return HornReport(True)
