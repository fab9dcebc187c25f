"""Command-line front end.

Results go to stdout as `key=value` lines for machine scraping; human
diagnostics go to stderr.  Exit codes: 0 success, 2 input error, 3 resource
limit exceeded, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .analysis import (
    CnfSizeError, classify_prefix, horn_check, matrix_to_cnf, to_pnf,
)
from .catalog import encode_builtin
from .engine import (
    InternalError, OptSpec, SearchLimits, SearchSpaceError, SearchTimeout,
    brute_opt, check_poly_bound, weighted_opt,
)
from .files import (
    SpecFile, bind, load_spec_file, load_structure_file, top_level_conjuncts,
    write_spec_file, write_structure_file,
)
from .flow import check_flow, compile_reduction, emit_dimacs, max_flow
from .logic import Forall, Formula, LogicError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_LIMIT = 3
EXIT_INTERNAL = 4


def _closure(spec: OptSpec) -> Formula:
    """Global formula conjoined with the universal closure of the local one."""
    local = spec.local_formula
    for var in reversed(spec.objective_vars):
        local = Forall(var, local)
    return spec.global_formula & local


def _analyze(f: Formula, so_sig) -> tuple[str, str]:
    pnf = to_pnf(f)
    quant_class = classify_prefix(pnf).value
    report = horn_check(matrix_to_cnf(pnf.matrix), so_sig)
    if not report.ok:
        print(report.describe(), file=sys.stderr)
    return ("yes" if report.ok else "no"), quant_class


def cmd_check(args) -> int:
    sf = load_spec_file(args.spec)
    horn, quant_class = _analyze(_closure(sf.spec), sf.spec.so_sig)
    bound = check_poly_bound(sf.spec)
    print(f"horn={horn}")
    print(f"class={quant_class}")
    print(f"poly_bound={'yes' if bound.polynomially_bound else 'no'}")
    print(f"bound={bound.expression}")
    return EXIT_OK


def cmd_classify(args) -> int:
    sf = load_spec_file(args.spec)
    for i, f in enumerate(top_level_conjuncts(sf.spec.global_formula), start=1):
        horn, quant_class = _analyze(f, sf.spec.so_sig)
        print(f"formula=feasible{i} class={quant_class} horn={horn}")
    horn, quant_class = _analyze(sf.spec.local_formula, sf.spec.so_sig)
    print(f"formula=objective class={quant_class} horn={horn}")
    return EXIT_OK


def _limits(args) -> SearchLimits:
    return SearchLimits(max_interpretations=args.limit, timeout_s=args.timeout)


def _load_problem(args) -> tuple[SpecFile, OptSpec, "Structure"]:
    sf = load_spec_file(args.spec)
    spec, structure = bind(sf, load_structure_file(args.structure))
    return sf, spec, structure


def cmd_solve(args) -> int:
    _, spec, structure = _load_problem(args)
    limits = _limits(args)
    if args.engine == "reduction":
        if args.witness:
            print("witness output is unavailable under the reduction engine: "
                  "tuples are certified independently and no joint "
                  "interpretation is constructed", file=sys.stderr)
        net = compile_reduction(spec, structure, limits=limits)
        result = max_flow(net)
        check_flow(net, result)
        print("status=optimal")
        print(f"value={result.value}")
        return EXIT_OK
    solver = weighted_opt if spec.weighted else brute_opt
    result = solver(spec, structure, limits)
    if not result.optimal:
        print("status=infeasible")
        return EXIT_OK
    print("status=optimal")
    print(f"value={result.value}")
    if args.witness:
        for name, _ in spec.so_sig:
            tuples = " ".join(
                "(" + ",".join(map(str, tup)) + ")"
                for tup in sorted(result.witness[name]))
            print(f"witness.{name}={tuples}")
    return EXIT_OK


def cmd_compile_flow(args) -> int:
    _, spec, structure = _load_problem(args)
    net = compile_reduction(spec, structure, limits=_limits(args))
    text = emit_dimacs(net)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    result = max_flow(net)
    check_flow(net, result)
    print(f"vertices={net.num_vertices}")
    print(f"edges={len(net.edges)}")
    print(f"flow={result.value}")
    return EXIT_OK


def cmd_catalog(args) -> int:
    spec, structure = encode_builtin(args.problem)
    text = write_spec_file(spec) if args.emit == "spec" else write_structure_file(structure)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hornopt",
        description="Optimization over finite structures from second-order "
                    "Horn specifications",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for randomized sweeps (reserved)")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="validate a spec and report horn/class/bound")
    check.add_argument("spec")
    check.set_defaults(func=cmd_check)

    classify = sub.add_parser("classify", help="per-formula class and horn diagnostics")
    classify.add_argument("spec")
    classify.set_defaults(func=cmd_classify)

    solve = sub.add_parser("solve", help="compute the optimal value of an instance")
    solve.add_argument("spec")
    solve.add_argument("structure")
    solve.add_argument("--engine", choices=("brute", "reduction"), default="brute")
    solve.add_argument("--limit", type=int, default=SearchLimits().max_interpretations,
                       help="interpretation-space bound")
    solve.add_argument("--timeout", type=float, default=SearchLimits().timeout_s,
                       help="search timeout in seconds")
    solve.add_argument("--witness", action="store_true",
                       help="print the witness interpretation")
    solve.set_defaults(func=cmd_solve)

    compile_flow = sub.add_parser("compile-flow",
                                  help="compile a max spec to a DIMACS flow instance")
    compile_flow.add_argument("spec")
    compile_flow.add_argument("structure")
    compile_flow.add_argument("--out", required=True, help="DIMACS output path")
    compile_flow.add_argument("--limit", type=int,
                              default=SearchLimits().max_interpretations)
    compile_flow.add_argument("--timeout", type=float, default=SearchLimits().timeout_s)
    compile_flow.set_defaults(func=cmd_compile_flow)

    catalog = sub.add_parser("catalog", help="emit a built-in encoding")
    catalog.add_argument("problem", choices=("maxflow-pb", "shortest-path", "matching"))
    catalog.add_argument("--emit", choices=("spec", "struct"), required=True)
    catalog.add_argument("--out", default=None)
    catalog.set_defaults(func=cmd_catalog)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SearchSpaceError, SearchTimeout, CnfSizeError) as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except InternalError as e:
        print(f"internal invariant violation: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (LogicError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
