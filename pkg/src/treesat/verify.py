"""Desk-scale verification checklist.

Every check exercises one end-to-end property of the toolkit: chain and
tree dominance, path counts, composed-tree verdicts, redundancy and
substitution behaviour, engine trustworthiness, and the bench report.
Checks return structured results so the command line and the test suite
share one implementation.  Checks with a pinned wall-time bound fail
when they exceed it.
"""

from __future__ import annotations

import dataclasses
import math
import os
import random
import tempfile
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .bench import COLUMNS, export_csv, fit_power_law, parse_csv, run_sweep
from .counts import (
    binary_depth_for,
    binary_var_count,
    binomial_depth_for,
    binomial_var_count,
    candidate_combinations,
    enumerate_paths,
)
from .forge import (
    Alias,
    Closing,
    NamedLit,
    TreeSpec,
    build_binomial_tree,
    build_pair_chain,
    build_unit_chain,
    compose_two_trees,
    gen_redundancy_clauses,
    tree_nodes,
)
from .formula import (
    ChainVar,
    Clause,
    FreshVar,
    RootVar,
    SlotVar,
    build_formula,
    make_clause,
)
from .oracle import Verdict, brute_force_sat, dpll_sat, entails, is_dominant
from .resolution import (
    Budget,
    SaturationStatus,
    decision_chain_of,
    resolve,
    saturate,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: str
    seconds: float


_CHECKS: list[tuple[str, float | None, Callable[[], tuple[bool, str]]]] = []


def _register(name: str, limit_seconds: float | None = None):
    def wrap(fn: Callable[[], tuple[bool, str]]):
        _CHECKS.append((name, limit_seconds, fn))
        return fn

    return wrap


def check_names() -> list[str]:
    return [name for name, _, _ in _CHECKS]


def run_checks(only: Sequence[str] | None = None) -> list[CheckResult]:
    if only is not None:
        unknown = [n for n in only if n not in check_names()]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")
    results = []
    for name, limit, fn in _CHECKS:
        if only is not None and name not in only:
            continue
        start = time.perf_counter()
        try:
            passed, details = fn()
        except Exception as exc:
            passed, details = False, f"raised {type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - start
        if passed and limit is not None and elapsed > limit:
            passed = False
            details += f"; took {elapsed:.1f}s, over the {limit:.0f}s bound"
        results.append(CheckResult(name, passed, details, elapsed))
    return results


def format_report(results: Sequence[CheckResult]) -> str:
    lines = []
    for r in results:
        flag = "pass" if r.passed else "FAIL"
        lines.append(f"[{flag}] {r.name} ({r.seconds:.1f}s): {r.details}")
    failed = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results)} checks, {len(results) - failed} passed, {failed} failed")
    return "\n".join(lines)


@_register("unit-chain-dominance", limit_seconds=1.0)
def _check_unit_chain() -> tuple[bool, str]:
    for k in range(2, 9):
        formula = build_unit_chain(k)
        root = formula.atlas.id_of(RootVar())
        result = saturate(formula)
        cid = result.clause_id(Clause((root,)))
        if cid is None:
            return False, f"k={k}: unit clause on the root never derived"
        chain = decision_chain_of(result, cid)
        if chain.length != k - 1 or not chain.is_generalized_unit:
            return False, f"k={k}: chain length {chain.length}, expected {k - 1}"
        if not is_dominant(formula, root, oracle=brute_force_sat):
            return False, f"k={k}: enumeration does not confirm dominance"
        if not is_dominant(formula, root):
            return False, f"k={k}: dpll does not confirm dominance"
    return True, "k=2..8: root unit derived along a chain of k-1 variables; both oracles confirm dominance"


@_register("pair-chain-equivalence")
def _check_pair_chain() -> tuple[bool, str]:
    for k in range(2, 7):
        formula = build_pair_chain(k)
        root = formula.atlas.id_of(RootVar())
        if not dpll_sat(formula).is_sat:
            return False, f"k={k}: formula unexpectedly unsatisfiable"
        if not is_dominant(formula, root):
            return False, f"k={k}: root not dominant"
        if k >= 3:
            result = saturate(formula, Budget(max_clauses=20_000, max_steps=200_000))
            hop = formula.atlas.id_of(ChainVar(3, 1))
            cid = result.clause_id(Clause((root, hop)))
            if cid is None:
                return False, f"k={k}: two-hop link clause never derived"
            chain = decision_chain_of(result, cid)
            if chain.length != 3:
                return False, f"k={k}: two-hop link derived in {chain.length} steps, expected 3"
    return True, "k=2..6: satisfiable with dominant root; k>=3: two-hop link derived in exactly 3 steps"


@_register("path-counts", limit_seconds=30.0)
def _check_path_counts() -> tuple[bool, str]:
    for k in range(25):
        report = enumerate_paths(k)
        reference = tuple(math.comb(k, i) for i in range(k + 1))
        if report.rows != reference or report.total != 2**k:
            return False, f"k={k}: enumerated rows disagree with binomial coefficients"
    if enumerate_paths(3).rows != (1, 3, 3, 1):
        return False, "k=3 row is not (1, 3, 3, 1)"
    return True, "k=0..24: enumerated paths per boundary row equal C(k, r-1), totalling 2^k"


@_register("depth-formulas")
def _check_depth_formulas() -> tuple[bool, str]:
    for k in range(1001):
        if binomial_var_count(k) != (k + 1) * (k + 2) // 2:
            return False, f"triangular count fails at k={k}"
        if binomial_depth_for(binomial_var_count(k)) != k:
            return False, f"triangular round trip fails at k={k}"
        n = binary_var_count(k)
        if binary_depth_for(n) != k:
            return False, f"geometric round trip fails at k={k}"
        if (n + 1) % 2 or 2**k != (n + 1) // 2:
            return False, f"identity 2^k = (n+1)/2 fails at k={k}"
    return True, "k=0..1000: depth formulas invert the variable counts; 2^k = (n+1)/2 exactly"


@_register("two-tree-verdicts")
def _check_two_trees() -> tuple[bool, str]:
    failures = []
    for k in (2, 3, 4):
        for closing in (Closing.MATCHED, Closing.CROSSED):
            want = Verdict.UNSAT if closing is Closing.MATCHED else Verdict.SAT
            got = brute_force_sat(compose_two_trees(k, closing)).status
            if got is not want:
                failures.append(f"enumeration k={k} {closing} gave {got}")
    for k in range(2, 9):
        for closing in (Closing.MATCHED, Closing.CROSSED):
            want = Verdict.UNSAT if closing is Closing.MATCHED else Verdict.SAT
            got = dpll_sat(compose_two_trees(k, closing)).status
            if got is not want:
                failures.append(f"dpll k={k} {closing} gave {got}")
    for k in (2, 3, 4):
        result = saturate(compose_two_trees(k, Closing.MATCHED))
        if result.status is not SaturationStatus.EMPTY_DERIVED:
            failures.append(
                f"saturation matched k={k} ended {result.status} at default budgets "
                f"(store {len(result.store)}, steps {result.counters.steps})"
            )
    if failures:
        return False, "; ".join(failures)
    return True, "enumeration k=2..4 and dpll k=2..8 verdicts exact; matched saturation empty-derived k=2..4"


@_register("substitution-suite")
def _check_substitutions() -> tuple[bool, str]:
    closed = build_binomial_tree(TreeSpec(k=3, closure=Alias(1)))
    if not is_dominant(closed, closed.atlas.id_of(RootVar()), oracle=brute_force_sat):
        return False, "alias closure: root not dominant"
    opened = build_binomial_tree(TreeSpec(k=3, closure=None))
    if is_dominant(opened, opened.atlas.id_of(RootVar()), oracle=brute_force_sat):
        return False, "no closure: root unexpectedly dominant"
    paired = build_binomial_tree(TreeSpec(
        k=3,
        closure=None,
        substitutions=(
            (SlotVar(4, 2), NamedLit(FreshVar(0))),
            (SlotVar(4, 4), NamedLit(FreshVar(0), negated=True)),
        ),
    ))
    if not is_dominant(paired, paired.atlas.id_of(RootVar()), oracle=brute_force_sat):
        return False, "z/~z at two boundary slots: root not dominant"
    return True, "alias closure dominant; closure removed not dominant; z/~z at two boundary slots dominant again"


@_register("redundancy-entailment")
def _check_redundancy() -> tuple[bool, str]:
    for k in (3, 4):
        formula = build_binomial_tree(TreeSpec(k=k))
        baseline = dpll_sat(formula).status
        for node in tree_nodes(k):
            if node.level == k:
                continue
            extra = gen_redundancy_clauses(
                formula,
                (node.level, node.row),
                count=20,
                seed=100 * k + 10 * node.level + node.row,
            )
            if len(extra) != 20:
                return False, f"k={k} node ({node.level},{node.row}): got {len(extra)} clauses"
            for clause in extra:
                if not entails(formula, clause):
                    return False, f"k={k} node ({node.level},{node.row}): {clause} not entailed"
            extended = formula.with_extra(tuple(extra))
            if dpll_sat(extended).status is not baseline:
                return False, f"k={k} node ({node.level},{node.row}): verdict changed"
    return True, "k=3..4: 20 seeded clauses per non-leaf node, all entailed, verdicts unchanged"


@_register("implicit-decision")
def _check_implicit() -> tuple[bool, str]:
    via = SlotVar(5, 2)
    closed = build_binomial_tree(TreeSpec(
        k=4, closure=Alias(1), implicit_nodes=(((2, 1), via),),
    ))
    entry = closed.atlas.id_of(SlotVar(2, 1))
    left = closed.atlas.id_of(SlotVar(3, 1))
    target = Clause(tuple(sorted((-entry, left), key=abs)))
    result = saturate(closed, Budget(max_clauses=50_000, max_steps=500_000))
    cid = result.clause_id(target)
    if cid is None:
        return False, f"switching resolvent {target} not derived within 50k clauses"
    opened = build_binomial_tree(TreeSpec(
        k=4, closure=None, implicit_nodes=(((2, 1), via),),
    ))
    if is_dominant(opened, opened.atlas.id_of(RootVar()), oracle=brute_force_sat):
        return False, "root stays dominant without the closure"
    return True, (
        f"switching resolvent ({target}) rebuilt through descendants at store id {cid}; "
        "removing the closure loses dominance"
    )


@_register("combination-counts")
def _check_combinations() -> tuple[bool, str]:
    for m in range(2, 6):
        for k in range(1, 31):
            product = 1
            for _ in range(k):
                product *= m
            if candidate_combinations(m, k) != product:
                return False, f"m={m} k={k}: {candidate_combinations(m, k)} != {product}"
    return True, "m=2..5, k=1..30: closed form equals repeated multiplication"


def _clause_true(clause, assignment: dict[int, bool]) -> bool:
    if not isinstance(clause, Clause):
        return True
    return any(assignment.get(abs(l), False) == (l > 0) for l in clause.lits)


@_register("engine-trustworthiness", limit_seconds=60.0)
def _check_engine() -> tuple[bool, str]:
    rng = random.Random(2024)

    for trial in range(1000):
        n = rng.randint(3, 20)
        pivot = rng.randint(1, n)
        sides = []
        for sign in (1, -1):
            pool = [v for v in range(1, n + 1) if v != pivot]
            extra = rng.sample(pool, rng.randint(0, min(3, len(pool))))
            sides.append(make_clause(
                [sign * pivot] + [v if rng.random() < 0.5 else -v for v in extra]
            ))
        first, second = sides
        resolvent = resolve(first, second, pivot)
        seen = sorted({abs(l) for l in first.lits} | {abs(l) for l in second.lits})
        for bits in range(1 << len(seen)):
            assignment = {v: bool(bits >> i & 1) for i, v in enumerate(seen)}
            if (_clause_true(first, assignment) and _clause_true(second, assignment)
                    and not _clause_true(resolvent, assignment)):
                return False, f"unsound resolvent on pair {trial}: {first} | {second}"

    found = 0
    attempts = 0
    while found < 200:
        attempts += 1
        if attempts > 10_000:
            return False, "could not collect 200 unsatisfiable formulas"
        n = rng.randint(4, 5)
        clauses = []
        for _ in range(8 * n):
            picked = rng.sample(range(1, n + 1), 3)
            clauses.append(make_clause([v if rng.random() < 0.5 else -v for v in picked]))
        formula = build_formula(clauses, n, None, {})
        if brute_force_sat(formula).status is not Verdict.UNSAT:
            continue
        found += 1
        if saturate(formula).status is not SaturationStatus.EMPTY_DERIVED:
            return False, f"refutation missed on an unsatisfiable {n}-variable formula"

    for trial in range(1000):
        n = rng.randint(1, 10)
        clauses = []
        for _ in range(rng.randint(1, 5 * n)):
            width = rng.randint(1, min(3, n))
            picked = rng.sample(range(1, n + 1), width)
            clause = make_clause([v if rng.random() < 0.5 else -v for v in picked])
            if isinstance(clause, Clause):
                clauses.append(clause)
        if not clauses:
            continue
        formula = build_formula(clauses, n, None, {})
        if brute_force_sat(formula).status is not dpll_sat(formula).status:
            return False, f"oracle disagreement on formula {trial}"

    return True, "1000 sound resolvents; 200 complete refutations; 1000 oracle agreements"


@_register("bench-report", limit_seconds=300.0)
def _check_bench() -> tuple[bool, str]:
    records = run_sweep(["binomial"], range(2, 13), repetitions=3, seed=0)
    if len(records) != 33:
        return False, f"expected 33 records, got {len(records)}"
    first_rep = [r for r in records if r.repetition == 0]
    for prev, cur in zip(first_rep, first_rep[1:]):
        if cur.variables <= prev.variables or cur.clauses <= prev.clauses:
            return False, f"sizes not strictly increasing at k={cur.k}"
    outcomes = {}
    for r in records:
        outcomes.setdefault(r.k, set()).add((r.dpll_verdict, r.saturation_status, r.derived_clauses))
    for k, seen in outcomes.items():
        if len(seen) != 1:
            return False, f"results vary across repetitions at k={k}"
    if any(r.dpll_verdict != "sat" for r in records):
        return False, "unexpected dpll verdict in sweep"
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "sweep.csv")
        export_csv(records, path)
        with open(path) as fh:
            lines = fh.read().splitlines()
        if len(lines) != 34 or lines[0].split(",") != list(COLUMNS):
            return False, "csv not well-formed"
        recovered = parse_csv(path)
    def strip(r):
        return dataclasses.replace(r, saturation_seconds=0.0, dpll_seconds=0.0)
    if [strip(r) for r in recovered] != [strip(r) for r in records]:
        return False, "csv round trip lost non-timing fields"
    nodes_fit = fit_power_law([(r.variables, r.dpll_nodes) for r in records])
    derived_fit = fit_power_law([(r.variables, r.derived_clauses) for r in records])
    if nodes_fit is None or derived_fit is None:
        return False, "scaling fit failed"
    return True, (
        f"33 runs, stable verdicts, csv round-trips; dpll nodes ~ n^{nodes_fit.exponent:.2f} "
        f"(residual {nodes_fit.residual:.3f}), derived clauses ~ n^{derived_fit.exponent:.2f} "
        f"(residual {derived_fit.residual:.3f})"
    )
