"""Resolution engine: single steps, saturation, and decision chains.

Saturation keeps a first-in-first-out frontier.  Clause ids are assigned
in discovery order (original clauses first); the clause with id i is
resolved against every clause with a smaller id, on every variable the
two share with opposite signs, so each unordered pair is considered
exactly once and runs are deterministic.  Resolvents that are tautologies,
too wide, or already present are counted and dropped; novel ones join the
store and the trace.  The first recorded derivation of a clause is the
one its decision chain reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .formula import Clause, CnfFormula, Literal, Tautology, as_int, make_clause

DEFAULT_MAX_CLAUSES = 1_000_000
DEFAULT_MAX_STEPS = 10_000_000


@dataclass(frozen=True)
class Budget:
    """Work limits for saturation; max_width defaults to the formula's
    variable count (no resolvent can be wider anyway)."""

    max_clauses: int = DEFAULT_MAX_CLAUSES
    max_steps: int = DEFAULT_MAX_STEPS
    max_width: int | None = None


class SaturationStatus(Enum):
    EMPTY_DERIVED = "empty-derived"
    SATURATED = "saturated"
    BUDGET_EXHAUSTED = "budget-exhausted"

    def __str__(self) -> str:
        return self.value


class ResolutionDominance(Enum):
    DOMINANT = "dominant"
    NOT_SHOWN = "not-shown"
    BUDGET_EXHAUSTED = "budget-exhausted"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ResolutionStep:
    """`left` and `right` are parent clause ids (left is the older one);
    `var` is the resolved variable; `result` the new clause's id."""

    left: int
    right: int
    var: int
    result: int


@dataclass
class SaturationCounters:
    steps: int = 0
    added: int = 0
    tautologies: int = 0
    duplicates: int = 0
    over_width: int = 0


@dataclass(frozen=True)
class SaturationResult:
    status: SaturationStatus
    store: tuple[Clause, ...]
    n_original: int
    trace: tuple[ResolutionStep, ...]
    counters: SaturationCounters

    def clause_id(self, clause: Clause) -> int | None:
        for i, c in enumerate(self.store):
            if c == clause:
                return i
        return None

    @property
    def derived(self) -> tuple[Clause, ...]:
        return self.store[self.n_original :]


@dataclass(frozen=True)
class DecisionChain:
    """Resolved variables of one derivation, in left-to-right order, plus
    the variables still connected (those of the derived clause)."""

    clause: Clause
    resolved: tuple[int, ...]
    connected: frozenset[int]

    @property
    def length(self) -> int:
        return len(self.resolved)

    @property
    def is_generalized_unit(self) -> bool:
        return len(self.connected) == 1

    @property
    def is_generalized_empty(self) -> bool:
        return not self.connected


def resolve(c1: Clause, c2: Clause, var: int) -> Clause | Tautology:
    """Resolve two clauses on `var`, which must occur with opposite signs
    in the parents.  Returns the canonical resolvent or TAUTOLOGY."""
    if var in c1.lits and -var in c2.lits:
        pos, neg = c1, c2
    elif var in c2.lits and -var in c1.lits:
        pos, neg = c2, c1
    else:
        raise ValueError(f"parents are not complementary on variable {var}")
    return make_clause(
        [l for l in pos.lits if l != var] + [l for l in neg.lits if l != -var]
    )


def saturate(formula: CnfFormula, budget: Budget | None = None) -> SaturationResult:
    """Resolve to fixpoint, empty clause, or budget exhaustion."""
    budget = budget or Budget()
    max_width = budget.max_width if budget.max_width is not None else formula.num_vars
    counters = SaturationCounters()

    store: list[Clause] = list(formula.clauses)
    ids: dict[tuple[int, ...], int] = {c.lits: i for i, c in enumerate(store)}
    occ: dict[int, list[int]] = {}
    for i, clause in enumerate(store):
        for lit in clause.lits:
            occ.setdefault(lit, []).append(i)
    trace: list[ResolutionStep] = []
    n_original = len(store)

    status = SaturationStatus.SATURATED
    if any(c.is_empty for c in store):
        status = SaturationStatus.EMPTY_DERIVED

    i = 0
    while status is SaturationStatus.SATURATED and i < len(store):
        if len(store) >= budget.max_clauses:
            status = SaturationStatus.BUDGET_EXHAUSTED
            break
        lits_i = store[i].lits
        set_i = set(lits_i)
        partners = sorted(
            {j for lit in lits_i for j in occ.get(-lit, ()) if j < i}
        )
        for j in partners:
            shared = sorted(abs(l) for l in store[j].lits if -l in set_i)
            for var in shared:
                if counters.steps >= budget.max_steps:
                    status = SaturationStatus.BUDGET_EXHAUSTED
                    break
                counters.steps += 1
                resolvent = resolve(store[j], store[i], var)
                if isinstance(resolvent, Tautology):
                    counters.tautologies += 1
                    continue
                if resolvent.width > max_width:
                    counters.over_width += 1
                    continue
                if resolvent.lits in ids:
                    counters.duplicates += 1
                    continue
                new_id = len(store)
                ids[resolvent.lits] = new_id
                store.append(resolvent)
                for lit in resolvent.lits:
                    occ.setdefault(lit, []).append(new_id)
                trace.append(ResolutionStep(j, i, var, new_id))
                counters.added += 1
                if resolvent.is_empty:
                    status = SaturationStatus.EMPTY_DERIVED
                    break
                if len(store) >= budget.max_clauses:
                    status = SaturationStatus.BUDGET_EXHAUSTED
                    break
            if status is not SaturationStatus.SATURATED:
                break
        i += 1
        if status is not SaturationStatus.SATURATED:
            break
    if status is SaturationStatus.SATURATED and any(c.is_empty for c in store):
        status = SaturationStatus.EMPTY_DERIVED

    return SaturationResult(status, tuple(store), n_original, tuple(trace), counters)


def decision_chain_of(result: SaturationResult, clause_id: int) -> DecisionChain:
    """Chain of resolved variables along the recorded (first) derivation."""
    if not 0 <= clause_id < len(result.store):
        raise ValueError(f"unknown clause id {clause_id}")
    step_for = {s.result: s for s in result.trace}
    memo: dict[int, tuple[int, ...]] = {}

    def chain(cid: int) -> tuple[int, ...]:
        if cid in memo:
            return memo[cid]
        stack = [cid]
        while stack:
            top = stack[-1]
            if top in memo:
                stack.pop()
                continue
            if top < result.n_original:
                memo[top] = ()
                stack.pop()
                continue
            step = step_for[top]
            missing = [p for p in (step.left, step.right) if p not in memo]
            if missing:
                stack.extend(missing)
                continue
            memo[top] = memo[step.left] + memo[step.right] + (step.var,)
            stack.pop()
        return memo[cid]

    clause = result.store[clause_id]
    return DecisionChain(clause, chain(clause_id), frozenset(clause.variables()))


def is_dominant_by_resolution(
    formula: CnfFormula, lit: int | Literal, budget: Budget | None = None
) -> ResolutionDominance:
    """DOMINANT iff saturation derives the unit clause {lit} in budget."""
    ilit = as_int(lit)
    if abs(ilit) > formula.num_vars:
        raise ValueError(f"variable {abs(ilit)} not in formula")
    result = saturate(formula, budget)
    if Clause((ilit,)) in result.store:
        return ResolutionDominance.DOMINANT
    if result.status is SaturationStatus.BUDGET_EXHAUSTED:
        return ResolutionDominance.BUDGET_EXHAUSTED
    return ResolutionDominance.NOT_SHOWN


def replay_trace(formula: CnfFormula, trace: tuple[ResolutionStep, ...]) -> list[Clause]:
    """Re-run a recorded trace from the original clauses; raises if any
    step fails to reproduce.  Returns the reconstructed store."""
    store = list(formula.clauses)
    for step in trace:
        resolvent = resolve(store[step.left], store[step.right], step.var)
        if isinstance(resolvent, Tautology):
            raise ValueError(f"step {step} resolves to a tautology on replay")
        if step.result != len(store):
            raise ValueError(f"step {step} out of order on replay")
        store.append(resolvent)
    return store


def export_trace(result: SaturationResult) -> str:
    """One line per recorded step: '<left> <right> <var> -> <id> : <lits>'."""
    lines = [
        f"{s.left} {s.right} {s.var} -> {s.result} : {result.store[s.result]}"
        for s in result.trace
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def export_chain_dot(result: SaturationResult, clause_id: int) -> str:
    """Ancestry of one derived clause as a DOT graph: nodes are clauses,
    edges run parent -> resolvent labeled with the resolved variable."""
    if not 0 <= clause_id < len(result.store):
        raise ValueError(f"unknown clause id {clause_id}")
    step_for = {s.result: s for s in result.trace}
    keep: set[int] = set()
    todo = [clause_id]
    while todo:
        cid = todo.pop()
        if cid in keep:
            continue
        keep.add(cid)
        if cid in step_for:
            todo += [step_for[cid].left, step_for[cid].right]
    lines = ["digraph chain {"]
    for cid in sorted(keep):
        shape = "box" if cid < result.n_original else "ellipse"
        lines.append(f'  c{cid} [label="#{cid}: {result.store[cid]}" shape={shape}];')
    for cid in sorted(keep):
        if cid in step_for:
            step = step_for[cid]
            lines.append(f'  c{step.left} -> c{cid} [label="{step.var}"];')
            lines.append(f'  c{step.right} -> c{cid} [label="{step.var}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
