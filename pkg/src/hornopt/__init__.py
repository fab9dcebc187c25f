"""Optimization over finite structures via second-order Horn specifications."""

from .analysis import (
    Clause, ClauseSet, CnfSizeError, HornReport, Literal, PrenexForm,
    QuantClass, classify_prefix, evaluate_clauses, horn_check, matrix_to_cnf,
    to_pnf,
)
from .catalog import (
    CatalogError, GraphInstance, WeightSets, builtin_instance,
    canonical_weighted_edges, encode_builtin, encode_maxflow_pb,
    encode_shortest_path, encode_weighted_matching, matching_vertex_element,
    oracle_max_flow, oracle_max_matching, oracle_shortest_path,
    shortest_path_decision_formula, weight_of_sets, weight_sets,
)
from .engine import (
    BoundReport, EngineError, GroundClauseSet, InternalError, NonHornError,
    OptResult, OptSpec, SatResult, SearchLimits, SearchSpaceError,
    SearchTimeout, WeightError, brute_opt, check_poly_bound, decision_check,
    ground_to_propositional, horn_sat, validate_spec, weighted_opt,
)
from .files import (
    FileFormatError, SpecFile, StructureFile, bind, load_spec_file,
    load_structure_file, parse_spec_file, parse_structure_file,
    top_level_conjuncts, write_spec_file, write_structure_file,
)
from .flow import (
    FlowError, FlowNetwork, FlowResult, check_flow, compile_reduction,
    default_oracle, emit_dimacs, max_flow,
)
from .logic import (
    And, Assignment, Atom, Const, Elem, Equal, EvalError, Exists, Forall,
    Formula, Iff, Implies, LogicError, Not, Or, ParseError, Structure, Term,
    Var, Vocabulary, constant_names, evaluate, formula_to_text, free_vars,
    parse_formula, parse_formula_free,
)

__version__ = "0.1.0"
