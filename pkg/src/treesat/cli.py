"""Command-line entry point.

Subcommands: generate, solve, saturate, analyze, verify, bench.  Exit
codes follow solver convention: 0 success, 1 failure, 2 usage error,
10 satisfiable, 20 unsatisfiable.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from typing import Sequence

from .bench import (
    FAMILIES,
    default_sweep_budget,
    export_csv,
    run_sweep,
    summarize,
    write_scatter_svg,
)
from .counts import (
    ENUMERATION_DEPTH_CAP,
    binary_depth_for,
    binary_var_count,
    binomial_depth_for,
    binomial_var_count,
    candidate_combinations,
    enumerate_paths,
    leaf_path_counts,
)
from .forge import (
    Closing,
    NamedLit,
    RedundancySpec,
    TreeSpec,
    build_binary_tree,
    build_binomial_tree,
    build_multi_branching,
    build_pair_chain,
    build_unit_chain,
    compose_two_trees,
    parse_closure,
)
from .formula import (
    CnfFormula,
    DimacsError,
    SlotVar,
    Tautology,
    make_clause,
    parse_dimacs,
    parse_var_name,
    write_dimacs,
)
from .oracle import brute_force_sat, dpll_sat
from .resolution import (
    DEFAULT_MAX_CLAUSES,
    DEFAULT_MAX_STEPS,
    Budget,
    decision_chain_of,
    export_chain_dot,
    export_trace,
    saturate,
)
from .verify import check_names, format_report, run_checks

ENV_MAX_CLAUSES = "TREESAT_MAX_CLAUSES"
ENV_MAX_STEPS = "TREESAT_MAX_STEPS"
ENV_MAX_WIDTH = "TREESAT_MAX_WIDTH"

_EPILOG = (
    "Budget environment variables: "
    f"{ENV_MAX_CLAUSES}, {ENV_MAX_STEPS} and {ENV_MAX_WIDTH} override the "
    "built-in saturation budget defaults when the matching flag is not given."
)

GENERATE_FAMILIES = (
    "unit-chain",
    "pair-chain",
    "binary",
    "binomial",
    "compose-matched",
    "compose-crossed",
    "multi-branching",
)


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from exc


def _budget(
    args: argparse.Namespace,
    fallback_clauses: int = DEFAULT_MAX_CLAUSES,
    fallback_steps: int = DEFAULT_MAX_STEPS,
) -> Budget:
    """Flag beats environment beats fallback, per budget field."""
    max_clauses = args.max_clauses
    if max_clauses is None:
        max_clauses = _env_int(ENV_MAX_CLAUSES)
    if max_clauses is None:
        max_clauses = fallback_clauses
    max_steps = args.max_steps
    if max_steps is None:
        max_steps = _env_int(ENV_MAX_STEPS)
    if max_steps is None:
        max_steps = fallback_steps
    max_width = args.max_width
    if max_width is None:
        max_width = _env_int(ENV_MAX_WIDTH)
    return Budget(max_clauses=max_clauses, max_steps=max_steps, max_width=max_width)


def _parse_node(text: str) -> tuple[int, int]:
    try:
        level, row = text.split(".")
        return int(level), int(row)
    except ValueError as exc:
        raise ValueError(f"expected a node as LEVEL.ROW, got {text!r}") from exc


def _parse_sub(text: str) -> tuple[SlotVar, NamedLit]:
    slot_text, _, lit_text = text.partition("=")
    if not lit_text:
        raise ValueError(f"expected a substitution as SLOT=LIT, got {text!r}")
    slot = parse_var_name(slot_text)
    if not isinstance(slot, SlotVar):
        raise ValueError(f"substitutions bind slot variables, got {slot_text!r}")
    return slot, NamedLit.parse(lit_text)


def _parse_implicit(text: str) -> tuple[tuple[int, int], SlotVar]:
    node_text, _, via_text = text.partition("=")
    if not via_text:
        raise ValueError(f"expected an implicit node as LEVEL.ROW=SLOT, got {text!r}")
    via = parse_var_name(via_text)
    if not isinstance(via, SlotVar):
        raise ValueError(f"the via variable must be a slot, got {via_text!r}")
    return _parse_node(node_text), via


def _parse_redundancy(text: str) -> tuple[tuple[int, int], int]:
    node_text, _, count_text = text.partition(":")
    if not count_text:
        raise ValueError(f"expected redundancy as LEVEL.ROW:COUNT, got {text!r}")
    return _parse_node(node_text), int(count_text)


def _family_formula(args: argparse.Namespace) -> CnfFormula:
    family = args.family
    k = args.k
    if k is None:
        raise ValueError("--k is required when generating a family")
    if family == "unit-chain":
        return build_unit_chain(k)
    if family == "pair-chain":
        return build_pair_chain(k)
    if family == "binary":
        return build_binary_tree(k)
    if family == "compose-matched":
        return compose_two_trees(k, Closing.MATCHED)
    if family == "compose-crossed":
        return compose_two_trees(k, Closing.CROSSED)
    if family == "multi-branching":
        return build_multi_branching(k, args.k_sub)
    spec = TreeSpec(
        k=k,
        closure=parse_closure(args.closure),
        substitutions=tuple(_parse_sub(s) for s in args.sub),
        implicit_nodes=tuple(_parse_implicit(s) for s in args.implicit),
        redundancy=tuple(
            RedundancySpec(node, count, args.seed)
            for node, count in (_parse_redundancy(s) for s in args.redundancy)
        ),
        root_negated=args.negate_root,
    )
    return build_binomial_tree(spec)


def _input_formula(args: argparse.Namespace) -> CnfFormula:
    if args.input is not None:
        with open(args.input) as fh:
            return parse_dimacs(fh.read())
    if args.family is None:
        raise ValueError("give either --in FILE or --family/--k")
    return _family_formula(args)


def _write_output(path: str | None, text: str) -> None:
    """Write atomically so a failure never leaves a partial file."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".treesat-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _add_family_flags(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument(
        "--family",
        choices=GENERATE_FAMILIES,
        required=required,
        help="instance family to build",
    )
    parser.add_argument("--k", type=int, help="tree or chain depth")
    parser.add_argument(
        "--closure",
        default="alias:1",
        help="binomial closure: alias:ROW, clause:ROW or none (default alias:1)",
    )
    parser.add_argument(
        "--sub",
        action="append",
        default=[],
        metavar="SLOT=LIT",
        help="substitute a boundary slot, e.g. s4.2=z0 or s4.4=~z0 (repeatable)",
    )
    parser.add_argument(
        "--implicit",
        action="append",
        default=[],
        metavar="LEVEL.ROW=SLOT",
        help="make a node's switching clauses implicit via a descendant slot (repeatable)",
    )
    parser.add_argument(
        "--redundancy",
        action="append",
        default=[],
        metavar="LEVEL.ROW:COUNT",
        help="append seeded redundancy clauses for a node (repeatable)",
    )
    parser.add_argument("--k-sub", type=int, default=1, help="subtree depth for multi-branching")
    parser.add_argument("--negate-root", action="store_true", help="enter the tree by the negated root")
    parser.add_argument("--seed", type=int, default=0, help="seed for seeded constructions")


def _add_budget_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-clauses", type=int, help="stop after this many stored clauses")
    parser.add_argument("--max-steps", type=int, help="stop after this many resolution steps")
    parser.add_argument("--max-width", type=int, help="discard resolvents wider than this")


def cmd_generate(args: argparse.Namespace) -> int:
    formula = _family_formula(args)
    _write_output(args.out, write_dimacs(formula))
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    formula = _input_formula(args)
    oracle = brute_force_sat if args.oracle == "brute" else dpll_sat
    verdict = oracle(formula)
    print(verdict.status)
    if args.model and verdict.model is not None:
        pairs = []
        for vid in range(1, formula.num_vars + 1):
            name = formula.atlas.name_of(vid) if formula.atlas else vid
            pairs.append(f"{name}={int(verdict.model[vid])}")
        print(" ".join(pairs))
    return 10 if verdict.is_sat else 20


def cmd_saturate(args: argparse.Namespace) -> int:
    formula = _input_formula(args)
    result = saturate(formula, _budget(args))
    c = result.counters
    print(f"status {result.status}")
    print(f"original {result.n_original} derived {len(result.derived)} steps {c.steps}")
    print(f"tautologies {c.tautologies} duplicates {c.duplicates} over-width {c.over_width}")
    if args.trace is not None:
        _write_output(args.trace, export_trace(result))
    if args.chain is not None:
        clause = make_clause([int(tok) for tok in args.chain.split()])
        if isinstance(clause, Tautology):
            raise ValueError(f"--chain clause {args.chain!r} is tautologous")
        cid = result.clause_id(clause)
        if cid is None:
            print(f"clause ({clause}) not in the saturated store")
            return 1
        chain = decision_chain_of(result, cid)
        names = " ".join(
            str(formula.atlas.name_of(v)) if formula.atlas else str(v)
            for v in chain.resolved
        )
        print(f"chain for ({clause}): length {chain.length}, resolved {names or '-'}")
        if args.dot is not None:
            _write_output(args.dot, export_chain_dot(result, cid))
    elif args.dot is not None:
        raise ValueError("--dot needs --chain to pick a clause")
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    actions = [args.paths, args.vars, args.depth_for is not None, args.combinations is not None]
    if sum(actions) != 1:
        raise ValueError("pick exactly one of --paths, --vars, --depth-for, --combinations")
    if args.paths or args.vars:
        if args.k is None:
            raise ValueError("--k is required")
    if args.paths:
        if args.k <= ENUMERATION_DEPTH_CAP:
            report = enumerate_paths(args.k)
        else:
            report = leaf_path_counts(args.k)
        print(report.to_text())
        return 0
    if args.vars:
        count = binary_var_count(args.k) if args.tree == "binary" else binomial_var_count(args.k)
        print(count)
        return 0
    if args.depth_for is not None:
        depth = (
            binary_depth_for(args.depth_for)
            if args.tree == "binary"
            else binomial_depth_for(args.depth_for)
        )
        print(depth)
        return 0
    m, k = args.combinations
    print(candidate_combinations(m, k))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    only = args.only or None
    results = run_checks(only=only)
    print(format_report(results))
    return 0 if all(r.passed for r in results) else 1


def cmd_bench(args: argparse.Namespace) -> int:
    sweep = default_sweep_budget()
    budget = _budget(args, fallback_clauses=sweep.max_clauses, fallback_steps=sweep.max_steps)
    records = run_sweep(
        args.family or ["binomial"],
        range(args.k_min, args.k_max + 1),
        budget=budget,
        repetitions=args.repetitions,
        seed=args.seed,
    )
    if args.csv is not None:
        directory = os.path.dirname(os.path.abspath(args.csv))
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".treesat-", suffix=".csv")
        os.close(fd)
        try:
            export_csv(records, tmp)
            os.replace(tmp, args.csv)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    if args.svg is not None:
        directory = os.path.dirname(os.path.abspath(args.svg))
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".treesat-", suffix=".svg")
        os.close(fd)
        try:
            write_scatter_svg(records, tmp)
            os.replace(tmp, args.svg)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    print(summarize(records))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treesat",
        description="Generate, solve, saturate and analyze pair-sharing tree instances.",
        epilog=_EPILOG,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("generate", help="write an instance as DIMACS", epilog=_EPILOG)
    _add_family_flags(p, required=True)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="decide satisfiability; exits 10 (sat) or 20 (unsat)")
    p.add_argument("--in", dest="input", help="DIMACS input path")
    _add_family_flags(p, required=False)
    p.add_argument("--oracle", choices=("dpll", "brute"), default="dpll")
    p.add_argument("--model", action="store_true", help="print the model when satisfiable")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("saturate", help="run resolution saturation", epilog=_EPILOG)
    p.add_argument("--in", dest="input", help="DIMACS input path")
    _add_family_flags(p, required=False)
    _add_budget_flags(p)
    p.add_argument("--trace", help="write the full resolution trace to this path")
    p.add_argument("--chain", metavar="LITS", help='report the decision chain of a clause, e.g. "1 4"')
    p.add_argument("--dot", help="write the picked chain's ancestry as Graphviz dot")
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("analyze", help="counts and closed forms")
    p.add_argument("--paths", action="store_true", help="path counts per boundary row")
    p.add_argument("--vars", action="store_true", help="variable count of a tree")
    p.add_argument("--depth-for", type=int, metavar="N", help="largest depth whose tree fits N variables")
    p.add_argument("--combinations", type=int, nargs=2, metavar=("M", "K"), help="selection combinations")
    p.add_argument("--k", type=int, help="depth for --paths/--vars")
    p.add_argument("--tree", choices=("binomial", "binary"), default="binomial")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run the verification checklist")
    p.add_argument("--only", action="append", choices=check_names(), help="run one named check (repeatable)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="sweep families and report scaling", epilog=_EPILOG)
    p.add_argument("--family", action="append", choices=sorted(FAMILIES), help="family to sweep (repeatable)")
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    _add_budget_flags(p)
    p.add_argument("--csv", help="write per-run records to this path")
    p.add_argument("--svg", help="write a log-log scatter plot to this path")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DimacsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
