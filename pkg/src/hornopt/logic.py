"""First-order logic over finite structures.

Vocabularies, finite structures with integer universes, formula ASTs, a
recursive-descent parser for the concrete formula syntax, and a Tarskian
evaluator that also handles second-order (solution) predicates supplied as
explicit interpretations.

Universe elements are always ``0 .. n-1``.  Two relation names are reserved:
``succ`` (binary successor, auto-populated when the vocabulary enables it)
and ``C`` (unary basic-element indicator, auto-populated as the complement
of the structure's declared weight elements).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union


class LogicError(Exception):
    """Base class for errors raised by this package's logic layer."""


class ParseError(LogicError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        if line:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


class EvalError(LogicError):
    """Unbound variable, missing interpretation, or bad element reference."""


SUCC = "succ"
BASIC = "C"


# ---------------------------------------------------------------------------
# Vocabulary and structures


@dataclass(frozen=True)
class Vocabulary:
    """Relation symbols with arities, constant names, optional successor.

    When ``has_successor`` is set the binary relation ``succ`` is implicitly
    part of the vocabulary; its extension is derived, never user-supplied.
    """

    relations: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()
    has_successor: bool = False

    def __post_init__(self):
        rels = tuple((str(n), int(a)) for n, a in self.relations)
        if self.has_successor and SUCC not in {n for n, _ in rels}:
            rels = rels + ((SUCC, 2),)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "constants", tuple(self.constants))
        names = [n for n, _ in self.relations]
        if len(set(names)) != len(names):
            raise LogicError("duplicate relation name in vocabulary")
        if len(set(self.constants)) != len(self.constants):
            raise LogicError("duplicate constant name in vocabulary")
        overlap = set(names) & set(self.constants)
        if overlap:
            raise LogicError(f"names used for both relation and constant: {sorted(overlap)}")
        for n, a in self.relations:
            if a < 1:
                raise LogicError(f"relation {n} has non-positive arity {a}")
        if self.has_successor and self.arity(SUCC) != 2:
            raise LogicError("successor relation must be binary")

    def arity(self, name: str) -> Optional[int]:
        for n, a in self.relations:
            if n == name:
                return a
        return None

    def has_relation(self, name: str) -> bool:
        return self.arity(name) is not None


@dataclass(frozen=True)
class Structure:
    """A finite model: an instance of an optimization problem.

    ``weight_elements`` marks the elements that act as tuple weights; the
    reserved unary relation ``C`` (when declared) holds exactly the
    complement, and a weight element's numeric value is the element itself.
    """

    vocab: Vocabulary
    universe_size: int
    const_bindings: Mapping[str, int] = field(default_factory=dict)
    extensions: Mapping[str, frozenset[tuple[int, ...]]] = field(default_factory=dict)
    weight_elements: frozenset[int] = frozenset()

    def __post_init__(self):
        n = self.universe_size
        if n < 1:
            raise LogicError("universe must be non-empty")
        object.__setattr__(self, "const_bindings", dict(self.const_bindings))
        object.__setattr__(self, "weight_elements", frozenset(self.weight_elements))
        exts = {name: frozenset(map(tuple, tups)) for name, tups in self.extensions.items()}

        for reserved in (SUCC, BASIC):
            if reserved in exts:
                raise LogicError(f"extension for {reserved} is derived, not user-supplied")
        if self.vocab.has_successor:
            exts[SUCC] = frozenset((i, i + 1) for i in range(n - 1))
        if self.vocab.arity(BASIC) == 1:
            exts[BASIC] = frozenset((e,) for e in range(n) if e not in self.weight_elements)

        for name, tups in exts.items():
            arity = self.vocab.arity(name)
            if arity is None:
                raise LogicError(f"relation {name} not declared in vocabulary")
            for t in tups:
                if len(t) != arity:
                    raise LogicError(f"tuple {t} has wrong arity for {name}/{arity}")
                if any(not (0 <= e < n) for e in t):
                    raise LogicError(f"tuple {t} of {name} outside universe 0..{n - 1}")
        for c in self.vocab.constants:
            if c not in self.const_bindings:
                raise LogicError(f"constant {c} not bound by structure")
        for c, e in self.const_bindings.items():
            if c not in self.vocab.constants:
                raise LogicError(f"binding for undeclared constant {c}")
            if not (0 <= e < n):
                raise LogicError(f"constant {c} bound outside universe")
        if any(not (0 <= e < n) for e in self.weight_elements):
            raise LogicError("weight element outside universe")
        object.__setattr__(self, "extensions", exts)

    def relation(self, name: str) -> frozenset[tuple[int, ...]]:
        return self.extensions.get(name, frozenset())


# ---------------------------------------------------------------------------
# Formula AST


class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const(Term):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Elem(Term):
    """A universe element written literally in a formula."""

    value: int

    def __str__(self):
        return str(self.value)


class Formula:
    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __str__(self):
        return formula_to_text(self)


@dataclass(frozen=True)
class Atom(Formula):
    relation: str
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class Equal(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


Assignment = dict[str, int]
SecondOrderSig = tuple[tuple[str, int], ...]
SecondOrderInterp = Mapping[str, frozenset[tuple[int, ...]]]


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (Atom,)):
        return frozenset(t.name for t in f.terms if isinstance(t, Var))
    if isinstance(f, Equal):
        return frozenset(t.name for t in (f.left, f.right) if isinstance(t, Var))
    if isinstance(f, Not):
        return free_vars(f.sub)
    if isinstance(f, (And, Or, Implies, Iff)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    raise LogicError(f"not a formula: {f!r}")


def all_var_names(f: Formula) -> frozenset[str]:
    """Every variable name occurring in f, bound or free."""
    if isinstance(f, Atom):
        return frozenset(t.name for t in f.terms if isinstance(t, Var))
    if isinstance(f, Equal):
        return frozenset(t.name for t in (f.left, f.right) if isinstance(t, Var))
    if isinstance(f, Not):
        return all_var_names(f.sub)
    if isinstance(f, (And, Or, Implies, Iff)):
        return all_var_names(f.left) | all_var_names(f.right)
    if isinstance(f, (Forall, Exists)):
        return all_var_names(f.body) | {f.var}
    raise LogicError(f"not a formula: {f!r}")


def rename_var(f: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of variable `old` to `new`."""

    def on_term(t: Term) -> Term:
        if isinstance(t, Var) and t.name == old:
            return Var(new)
        return t

    if isinstance(f, Atom):
        return Atom(f.relation, tuple(on_term(t) for t in f.terms))
    if isinstance(f, Equal):
        return Equal(on_term(f.left), on_term(f.right))
    if isinstance(f, Not):
        return Not(rename_var(f.sub, old, new))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(rename_var(f.left, old, new), rename_var(f.right, old, new))
    if isinstance(f, (Forall, Exists)):
        if f.var == old:
            return f
        return type(f)(f.var, rename_var(f.body, old, new))
    raise LogicError(f"not a formula: {f!r}")


def constant_names(f: Formula) -> frozenset[str]:
    """Every constant name occurring in f."""

    def of_terms(terms) -> frozenset[str]:
        return frozenset(t.name for t in terms if isinstance(t, Const))

    if isinstance(f, Atom):
        return of_terms(f.terms)
    if isinstance(f, Equal):
        return of_terms((f.left, f.right))
    if isinstance(f, Not):
        return constant_names(f.sub)
    if isinstance(f, (And, Or, Implies, Iff)):
        return constant_names(f.left) | constant_names(f.right)
    if isinstance(f, (Forall, Exists)):
        return constant_names(f.body)
    raise LogicError(f"not a formula: {f!r}")


def atoms_of(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Equal):
        return
    elif isinstance(f, Not):
        yield from atoms_of(f.sub)
    elif isinstance(f, (And, Or, Implies, Iff)):
        yield from atoms_of(f.left)
        yield from atoms_of(f.right)
    elif isinstance(f, (Forall, Exists)):
        yield from atoms_of(f.body)


# ---------------------------------------------------------------------------
# Concrete syntax
#
#   formula := quant | iff
#   quant   := ("forall"|"exists") IDENT "." formula
#   iff     := impl ("<->" iff)?
#   impl    := disj ("->" impl)?
#   disj    := conj ("|" conj)*
#   conj    := lit ("&" lit)*
#   lit     := "!" lit | "(" formula ")" | atom
#   atom    := IDENT "(" term ("," term)* ")" | term ("="|"!=") term
#   term    := IDENT | NUMBER

_TOKEN_RE = re.compile(
    r"(?:(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<num>\d+)"
    r"|(?P<op><->|->|!=|=|!|&|\||\(|\)|,|\.))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # ident | num | op | eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, line_start = 1, 0
    pos, n = 0, len(text)
    while pos < n:
        ch = text[pos]
        if ch == "\n":
            line += 1
            pos += 1
            line_start = pos
            continue
        if ch.isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {ch!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, n - line_start + 1))
    return toks


class _Parser:
    quantifiers = {"forall", "exists"}

    def __init__(self, text: str, vocab: Optional[Vocabulary], so_sig: SecondOrderSig,
                 line_offset: int = 0):
        self.toks = _tokenize(text)
        self.pos = 0
        self.vocab = vocab
        self.so_arity = dict(so_sig)
        self.line_offset = line_offset
        self.inferred_relations: dict[str, int] = {}
        self.bound: list[str] = []

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def err(self, msg: str, tok: _Tok) -> ParseError:
        return ParseError(msg, tok.line + self.line_offset, tok.col)

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text or t.kind == "eof":
            raise self.err(f"expected {text!r}, found {t.text or 'end of input'!r}", t)
        return t

    def parse(self) -> Formula:
        f = self.formula()
        t = self.peek()
        if t.kind != "eof":
            raise self.err(f"unexpected trailing input {t.text!r}", t)
        return f

    def formula(self) -> Formula:
        t = self.peek()
        if t.kind == "ident" and t.text in self.quantifiers:
            self.next()
            v = self.next()
            if v.kind != "ident":
                raise self.err("expected variable name after quantifier", v)
            if v.text in self.quantifiers:
                raise self.err(f"{v.text!r} cannot be used as a variable", v)
            self.expect(".")
            self.bound.append(v.text)
            body = self.formula()
            self.bound.pop()
            return (Forall if t.text == "forall" else Exists)(v.text, body)
        return self.iff()

    def iff(self) -> Formula:
        left = self.impl()
        if self.peek().text == "<->":
            self.next()
            return Iff(left, self.iff())
        return left

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek().text == "->":
            self.next()
            return Implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().text == "|":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.lit()
        while self.peek().text == "&":
            self.next()
            f = And(f, self.lit())
        return f

    def lit(self) -> Formula:
        t = self.peek()
        if t.text == "!":
            self.next()
            return Not(self.lit())
        if t.text == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        t = self.peek()
        if t.kind == "ident" and self.toks[self.pos + 1].text == "(":
            name = self.next()
            self.expect("(")
            terms = [self.term()]
            while self.peek().text == ",":
                self.next()
                terms.append(self.term())
            self.expect(")")
            self.check_relation(name, len(terms))
            return Atom(name.text, tuple(terms))
        left = self.term()
        op = self.next()
        if op.text == "=":
            return Equal(left, self.term())
        if op.text == "!=":
            return Not(Equal(left, self.term()))
        raise self.err(f"expected atom, found {op.text or 'end of input'!r}", op)

    def check_relation(self, name: _Tok, nargs: int):
        rel = name.text
        if rel in self.so_arity:
            declared = self.so_arity[rel]
        elif self.vocab is not None:
            declared = self.vocab.arity(rel)
            if declared is None:
                raise self.err(f"unknown relation {rel!r}", name)
        else:
            declared = self.inferred_relations.setdefault(rel, nargs)
        if declared != nargs:
            raise self.err(
                f"relation {rel!r} has arity {declared}, got {nargs} arguments", name)

    def term(self) -> Term:
        t = self.next()
        if t.kind == "num":
            return Elem(int(t.text))
        if t.kind != "ident" or t.text in self.quantifiers:
            raise self.err(f"expected term, found {t.text or 'end of input'!r}", t)
        if self.vocab is not None and t.text in self.vocab.constants:
            return Const(t.text)
        return Var(t.text)


def parse_formula(text: str, vocab: Vocabulary, so_sig: SecondOrderSig = ()) -> Formula:
    """Parse formula source against a vocabulary and second-order signature.

    Operator precedence is ``!`` > ``&`` > ``|`` > ``->`` > ``<->`` with the
    implication arrows right-associative; quantifiers extend as far right as
    possible.  Raises ParseError with position on bad syntax, unknown
    relations, or arity mismatches.
    """
    return _Parser(text, vocab, so_sig).parse()


def parse_formula_free(text: str, so_sig: SecondOrderSig = (),
                       known_vars: frozenset[str] = frozenset(),
                       line_offset: int = 0) -> tuple[Formula, dict[str, int]]:
    """Parse with the first-order vocabulary inferred from use.

    Unbound identifiers other than ``known_vars`` are read as constants.
    Returns the formula and the inferred relation arities.
    """
    p = _Parser(text, None, so_sig, line_offset)
    f = p.parse()
    consts = free_vars(f) - known_vars

    def fix(g: Formula, shadowed: frozenset[str]) -> Formula:
        def on_term(t: Term) -> Term:
            if isinstance(t, Var) and t.name in consts and t.name not in shadowed:
                return Const(t.name)
            return t

        if isinstance(g, Atom):
            return Atom(g.relation, tuple(on_term(t) for t in g.terms))
        if isinstance(g, Equal):
            return Equal(on_term(g.left), on_term(g.right))
        if isinstance(g, Not):
            return Not(fix(g.sub, shadowed))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(fix(g.left, shadowed), fix(g.right, shadowed))
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, fix(g.body, shadowed | {g.var}))
        raise LogicError(f"not a formula: {g!r}")

    return fix(f, frozenset()), dict(p.inferred_relations)


def formula_to_text(f: Formula) -> str:
    """Render a formula in the concrete syntax (re-parseable)."""

    def prec(g: Formula) -> int:
        if isinstance(g, (Forall, Exists)):
            return 0
        if isinstance(g, Iff):
            return 1
        if isinstance(g, Implies):
            return 2
        if isinstance(g, Or):
            return 3
        if isinstance(g, And):
            return 4
        return 5

    def render(g: Formula, level: int) -> str:
        p = prec(g)
        if isinstance(g, Atom):
            s = f"{g.relation}({', '.join(map(str, g.terms))})"
        elif isinstance(g, Equal):
            s = f"{g.left} = {g.right}"
        elif isinstance(g, Not):
            if isinstance(g.sub, Equal):
                s = f"{g.sub.left} != {g.sub.right}"
            else:
                s = f"!{render(g.sub, 5)}"
        elif isinstance(g, And):
            s = f"{render(g.left, 4)} & {render(g.right, 5)}"
        elif isinstance(g, Or):
            s = f"{render(g.left, 3)} | {render(g.right, 4)}"
        elif isinstance(g, Implies):
            s = f"{render(g.left, 3)} -> {render(g.right, 2)}"
        elif isinstance(g, Iff):
            s = f"{render(g.left, 2)} <-> {render(g.right, 1)}"
        elif isinstance(g, (Forall, Exists)):
            kw = "forall" if isinstance(g, Forall) else "exists"
            s = f"{kw} {g.var}. {render(g.body, 0)}"
        else:
            raise LogicError(f"not a formula: {g!r}")
        return f"({s})" if p < level else s

    return render(f, 0)


# ---------------------------------------------------------------------------
# Evaluation


def term_value(t: Term, m: Structure, a: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        if t.name in a:
            return a[t.name]
        raise EvalError(f"unbound variable {t.name!r}")
    if isinstance(t, Const):
        if t.name in m.const_bindings:
            return m.const_bindings[t.name]
        raise EvalError(f"constant {t.name!r} not bound by structure")
    if isinstance(t, Elem):
        if not (0 <= t.value < m.universe_size):
            raise EvalError(f"element {t.value} outside universe 0..{m.universe_size - 1}")
        return t.value
    raise EvalError(f"not a term: {t!r}")


def evaluate(f: Formula, m: Structure, so: SecondOrderInterp = {},
             a: Optional[Assignment] = None) -> bool:
    """Tarskian satisfaction: true iff (m, so) |= f under assignment a.

    Quantifiers range over the full universe 0..n-1, weight elements
    included.  Relations are looked up in `so` when the symbol has an
    interpretation there, else in the structure's extensions.
    """
    env: dict[str, int] = dict(a) if a else {}
    n = m.universe_size

    def ev(g: Formula) -> bool:
        if isinstance(g, Atom):
            tup = tuple(term_value(t, m, env) for t in g.terms)
            if g.relation in so:
                return tup in so[g.relation]
            if m.vocab.has_relation(g.relation):
                return tup in m.relation(g.relation)
            raise EvalError(f"no interpretation for relation {g.relation!r}")
        if isinstance(g, Equal):
            return term_value(g.left, m, env) == term_value(g.right, m, env)
        if isinstance(g, Not):
            return not ev(g.sub)
        if isinstance(g, And):
            return ev(g.left) and ev(g.right)
        if isinstance(g, Or):
            return ev(g.left) or ev(g.right)
        if isinstance(g, Implies):
            return (not ev(g.left)) or ev(g.right)
        if isinstance(g, Iff):
            return ev(g.left) == ev(g.right)
        if isinstance(g, (Forall, Exists)):
            shadow = env.get(g.var)
            hit = isinstance(g, Exists)
            result = not hit
            for e in range(n):
                env[g.var] = e
                if ev(g.body) == hit:
                    result = hit
                    break
            if shadow is None:
                env.pop(g.var, None)
            else:
                env[g.var] = shadow
            return result
        raise EvalError(f"not a formula: {g!r}")

    return ev(f)


Connective = Union[And, Or, Implies, Iff]
