"""Line-oriented file formats for structures and optimization specs.

Structure files::

    # comment
    universe 3
    const s 0
    const t 2
    weights 4 5          (optional; marks weight elements)
    rel G 2
    0 1
    1 2
    end

Spec files::

    problem maxflow_pb
    direction max
    so P 3
    objective w : P(w,t,w) | (w = t & G(s,t))
    feasible forall x1. forall x2. forall w. P(x1,x2,w) -> G(s,w)
    weightrel R          (optional)

Spec files carry no vocabulary block: relation arities are inferred from
use and identifiers that are never quantifier-bound (and are not objective
variables) are read as constants.  The reserved relations ``succ`` and
``C`` may be used in formulas but never given extensions in structure
files; their extensions are derived.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .engine import OptSpec
from .logic import (
    BASIC, SUCC, And, Elem, Equal, Formula, LogicError, SecondOrderSig,
    Structure, Vocabulary, constant_names, formula_to_text, parse_formula_free,
)


class FileFormatError(LogicError):
    def __init__(self, message: str, line: int = 0):
        if line:
            message = f"{message} (line {line})"
        super().__init__(message)


@dataclass(frozen=True)
class StructureFile:
    universe: int
    consts: dict[str, int]
    weights: frozenset[int]
    relations: dict[str, tuple[int, frozenset[tuple[int, ...]]]]


@dataclass(frozen=True)
class SpecFile:
    name: str
    spec: OptSpec
    feasibles: tuple[Formula, ...]
    inferred_relations: dict[str, int]


def _content_lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def parse_structure_file(text: str) -> StructureFile:
    universe: Optional[int] = None
    consts: dict[str, int] = {}
    weights: set[int] = set()
    relations: dict[str, tuple[int, frozenset[tuple[int, ...]]]] = {}
    current: Optional[tuple[str, int, int]] = None  # (name, arity, decl line)
    tuples: set[tuple[int, ...]] = set()

    def close_relation():
        nonlocal current, tuples
        if current is not None:
            raise FileFormatError(
                f"relation {current[0]!r} not terminated by 'end'", current[2])

    for lineno, line in _content_lines(text):
        words = line.split()
        if current is not None:
            if words == ["end"]:
                name, arity, _ = current
                relations[name] = (arity, frozenset(tuples))
                current, tuples = None, set()
                continue
            try:
                tup = tuple(int(w) for w in words)
            except ValueError:
                raise FileFormatError(f"expected a tuple of integers", lineno)
            if len(tup) != current[1]:
                raise FileFormatError(
                    f"tuple of length {len(tup)} in relation {current[0]!r}"
                    f" of arity {current[1]}", lineno)
            tuples.add(tup)
            continue
        key = words[0]
        if key == "universe" and len(words) == 2 and words[1].isdigit():
            if universe is not None:
                raise FileFormatError("duplicate universe line", lineno)
            universe = int(words[1])
        elif key == "const" and len(words) == 3:
            if words[1] in consts:
                raise FileFormatError(f"duplicate constant {words[1]!r}", lineno)
            try:
                consts[words[1]] = int(words[2])
            except ValueError:
                raise FileFormatError("constant must bind an integer element", lineno)
        elif key == "weights":
            try:
                weights.update(int(w) for w in words[1:])
            except ValueError:
                raise FileFormatError("weights line must list integer elements", lineno)
        elif key == "rel" and len(words) == 3:
            name = words[1]
            if name in relations:
                raise FileFormatError(f"duplicate relation {name!r}", lineno)
            if name in (SUCC, BASIC):
                raise FileFormatError(
                    f"extension for {name!r} is derived, not user-supplied", lineno)
            try:
                arity = int(words[2])
            except ValueError:
                raise FileFormatError("relation arity must be an integer", lineno)
            current = (name, arity, lineno)
        else:
            raise FileFormatError(f"unrecognized line {line!r}", lineno)
    close_relation()
    if universe is None:
        raise FileFormatError("missing universe line")
    return StructureFile(universe, consts, frozenset(weights), relations)


def load_structure_file(path: str) -> StructureFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_structure_file(fh.read())


_TRUE = Equal(Elem(0), Elem(0))


def parse_spec_file(text: str) -> SpecFile:
    name = ""
    direction: Optional[str] = None
    so_sig: list[tuple[str, int]] = []
    objective: Optional[tuple[str, ...]] = None
    local_src: Optional[tuple[int, str]] = None
    feasible_src: list[tuple[int, str]] = []
    weightrel: Optional[str] = None

    for lineno, line in _content_lines(text):
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "problem":
            name = rest
        elif key == "direction":
            if direction is not None:
                raise FileFormatError("duplicate direction line", lineno)
            if rest not in ("max", "min"):
                raise FileFormatError(f"direction must be max or min, not {rest!r}", lineno)
            direction = rest
        elif key == "so":
            words = rest.split()
            if len(words) != 2 or not words[1].isdigit():
                raise FileFormatError("so line must be: so NAME ARITY", lineno)
            so_sig.append((words[0], int(words[1])))
        elif key == "objective":
            if objective is not None:
                raise FileFormatError("duplicate objective line", lineno)
            head, sep, formula = rest.partition(":")
            if not sep or not formula.strip():
                raise FileFormatError(
                    "objective line must be: objective v1 ... vk : FORMULA", lineno)
            objective = tuple(head.split())
            if not objective:
                raise FileFormatError("objective tuple must not be empty", lineno)
            local_src = (lineno, formula.strip())
        elif key == "feasible":
            if not rest:
                raise FileFormatError("feasible line without a formula", lineno)
            feasible_src.append((lineno, rest))
        elif key == "weightrel":
            if weightrel is not None:
                raise FileFormatError("duplicate weightrel line", lineno)
            weightrel = rest
        else:
            raise FileFormatError(f"unrecognized line {line!r}", lineno)

    if direction is None:
        raise FileFormatError("missing direction line")
    if objective is None or local_src is None:
        raise FileFormatError("missing objective line")

    sig: SecondOrderSig = tuple(so_sig)
    arities: dict[str, int] = {}

    def note_arities(found: dict[str, int], lineno: int):
        for rel, arity in found.items():
            if arities.setdefault(rel, arity) != arity:
                raise FileFormatError(
                    f"relation {rel!r} used with arities {arities[rel]} and {arity}",
                    lineno)

    lineno, src = local_src
    local, found = parse_formula_free(src, sig, known_vars=frozenset(objective),
                                      line_offset=lineno - 1)
    note_arities(found, lineno)

    feasibles: list[Formula] = []
    for lineno, src in feasible_src:
        f, found = parse_formula_free(src, sig, line_offset=lineno - 1)
        note_arities(found, lineno)
        feasibles.append(f)

    global_formula: Formula = _TRUE
    if feasibles:
        global_formula = feasibles[0]
        for f in feasibles[1:]:
            global_formula = And(global_formula, f)

    spec = OptSpec(
        direction=direction,
        so_sig=sig,
        objective_vars=objective,
        local_formula=local,
        global_formula=global_formula,
        weight_relation=weightrel,
        name=name,
    )
    return SpecFile(name, spec, tuple(feasibles), arities)


def load_spec_file(path: str) -> SpecFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec_file(fh.read())


def top_level_conjuncts(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, And):
        return top_level_conjuncts(f.left) + top_level_conjuncts(f.right)
    return (f,)


def write_spec_file(spec: OptSpec, name: Optional[str] = None) -> str:
    """Render a spec in the file format; feasibility splits on top-level ands."""
    lines = [f"problem {name or spec.name or 'unnamed'}"]
    lines.append(f"direction {spec.direction}")
    for so_name, arity in spec.so_sig:
        lines.append(f"so {so_name} {arity}")
    lines.append(
        f"objective {' '.join(spec.objective_vars)} : "
        f"{formula_to_text(spec.local_formula)}")
    for f in top_level_conjuncts(spec.global_formula):
        lines.append(f"feasible {formula_to_text(f)}")
    if spec.weight_relation:
        lines.append(f"weightrel {spec.weight_relation}")
    return "\n".join(lines) + "\n"


def write_structure_file(m: Structure) -> str:
    lines = [f"universe {m.universe_size}"]
    for cname in sorted(m.const_bindings):
        lines.append(f"const {cname} {m.const_bindings[cname]}")
    if m.weight_elements:
        lines.append("weights " + " ".join(map(str, sorted(m.weight_elements))))
    for rel, arity in m.vocab.relations:
        if rel in (SUCC, BASIC):
            continue
        lines.append(f"rel {rel} {arity}")
        for tup in sorted(m.extensions.get(rel, ())):
            lines.append(" ".join(map(str, tup)))
        lines.append("end")
    return "\n".join(lines) + "\n"


def bind(spec_file: SpecFile, struct_file: StructureFile) -> tuple[OptSpec, Structure]:
    """Join a parsed spec with a parsed structure under a merged vocabulary."""
    so_names = {n for n, _ in spec_file.spec.so_sig}
    relations: dict[str, int] = {}
    for rel, (arity, _) in struct_file.relations.items():
        relations[rel] = arity
    has_successor = False
    needs_basic = False
    for rel, arity in spec_file.inferred_relations.items():
        if rel in so_names:
            continue
        if rel == SUCC:
            if arity != 2:
                raise FileFormatError("successor relation must be binary")
            has_successor = True
            continue
        if rel == BASIC:
            if arity != 1:
                raise FileFormatError(f"reserved relation {BASIC!r} must be unary")
            needs_basic = True
            continue
        if relations.setdefault(rel, arity) != arity:
            raise FileFormatError(
                f"relation {rel!r}: spec uses arity {arity}, "
                f"structure declares {relations[rel]}")
    rel_list = sorted(relations.items())
    if needs_basic:
        rel_list.append((BASIC, 1))
    wrel = spec_file.spec.weight_relation
    if wrel is not None and wrel not in relations:
        raise FileFormatError(f"weight relation {wrel!r} not defined by the structure")

    used_constants = (constant_names(spec_file.spec.local_formula)
                      | constant_names(spec_file.spec.global_formula))
    unbound = used_constants - set(struct_file.consts)
    if unbound:
        raise FileFormatError(
            f"spec constants not bound by the structure: {sorted(unbound)}")

    vocab = Vocabulary(
        relations=tuple(rel_list),
        constants=tuple(sorted(struct_file.consts)),
        has_successor=has_successor,
    )
    structure = Structure(
        vocab, struct_file.universe,
        const_bindings=struct_file.consts,
        extensions={rel: tups for rel, (_, tups) in struct_file.relations.items()},
        weight_elements=struct_file.weights,
    )
    return spec_file.spec, structure
