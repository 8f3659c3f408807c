"""Generators for CNF families that hide a forced unit behind pair choices.

All families share one trick: a clause (e | a | b) plus the switching
clauses (e | a | ~b) and (e | ~a | b) force a AND b wherever the entry
literal e is false, while resolution must pick the pair member to keep.
Chains link such triples in a line; trees share pair variables between
row neighbours so the number of root-to-boundary resolution paths grows
as binomial coefficients.  Closing the structure back onto the root
variable turns the whole formula into a disguised unit clause.

Generators are deterministic: same spec and seed give byte-identical
DIMACS output.  The root variable is always registered first (id 1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from .formula import (
    Atlas,
    BinaryVar,
    ChainVar,
    Clause,
    CnfFormula,
    FreshVar,
    RootVar,
    SlotVar,
    Tautology,
    VarName,
    build_formula,
    make_clause,
    parse_var_name,
)


class TreeVariant(Enum):
    UNIT_CHAIN = "unit-chain"
    PAIR_CHAIN = "pair-chain"
    BINARY = "binary"
    BINOMIAL = "binomial"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Alias:
    """Close the tree by writing the root literal into one boundary slot."""

    row: int = 1


@dataclass(frozen=True)
class ClosureClause:
    """Close the tree with an implication (~slot | root) instead."""

    row: int = 1


Closure = Alias | ClosureClause | None


@dataclass(frozen=True)
class NamedLit:
    """A literal over a named variable, before ids are assigned."""

    name: VarName
    negated: bool = False

    def __str__(self) -> str:
        return ("~" if self.negated else "") + str(self.name)

    @classmethod
    def parse(cls, text: str) -> NamedLit:
        negated = text.startswith("~")
        return cls(parse_var_name(text[1:] if negated else text), negated)


@dataclass(frozen=True)
class TreeNode:
    """One decision position of the pair-sharing tree."""

    level: int
    row: int
    entry: VarName
    left: SlotVar
    right: SlotVar


@dataclass(frozen=True)
class RedundancySpec:
    node: tuple[int, int]
    count: int
    seed: int


@dataclass(frozen=True)
class TreeSpec:
    """Recipe for one generated formula of the pair-sharing tree family."""

    variant: TreeVariant = TreeVariant.BINOMIAL
    k: int = 3
    closure: Closure = Alias(1)
    substitutions: tuple[tuple[SlotVar, NamedLit], ...] = ()
    implicit_nodes: tuple[tuple[tuple[int, int], SlotVar], ...] = ()
    redundancy: tuple[RedundancySpec, ...] = ()
    root_negated: bool = False


class Closing(Enum):
    MATCHED = "matched"
    CROSSED = "crossed"

    def __str__(self) -> str:
        return self.value


def tree_nodes(k: int) -> list[TreeNode]:
    """Decision positions (level, row) with 1 <= row <= level <= k."""
    if k < 1:
        raise ValueError("tree depth must be at least 1")
    nodes = []
    for level in range(1, k + 1):
        for row in range(1, level + 1):
            entry: VarName = RootVar() if level == 1 else SlotVar(level, row)
            nodes.append(
                TreeNode(level, row, entry, SlotVar(level + 1, row), SlotVar(level + 1, row + 1))
            )
    return nodes


# ---------------------------------------------------------------------------
# emission plumbing


class _Emitter:
    """Accumulates clauses against a shared atlas, resolving slot names
    through a substitution map (closure aliases and literal substitutions)."""

    def __init__(self) -> None:
        self.atlas = Atlas()
        self.clauses: list[Clause] = []
        self.sub: dict[VarName, int] = {}

    def lit(self, name: VarName, negated: bool = False) -> int:
        if name in self.sub:
            resolved = self.sub[name]
        else:
            resolved = self.atlas.register(name)
        return -resolved if negated else resolved

    def bind(self, name: VarName, lit: int) -> None:
        self.sub[name] = lit

    def add(self, *lits: int) -> None:
        clause = make_clause(lits)
        if isinstance(clause, Tautology):
            raise ValueError(
                "substitution makes a generated clause tautologous: "
                + " ".join(str(l) for l in lits)
            )
        self.clauses.append(clause)


def _emit_triple(em: _Emitter, entry: int, a: int, b: int) -> None:
    """The decision triple: entry false forces both pair members true."""
    em.add(entry, a, b)
    em.add(entry, a, -b)
    em.add(entry, -a, b)


def _emit_binomial(
    em: _Emitter,
    k: int,
    root_lit: int,
    closure: Closure,
    alias_lit: int | None = None,
    tree: int = 0,
) -> None:
    """Emit a depth-k pair-sharing tree entered through `root_lit`."""
    if isinstance(closure, Alias):
        if not 1 <= closure.row <= k + 1:
            raise ValueError(f"closure row {closure.row} outside boundary 1..{k + 1}")
        em.bind(SlotVar(k + 1, closure.row, tree), alias_lit if alias_lit is not None else root_lit)
    for level in range(1, k + 1):
        for row in range(1, level + 1):
            entry = root_lit if level == 1 else em.lit(SlotVar(level, row, tree), negated=True)
            a = em.lit(SlotVar(level + 1, row, tree))
            b = em.lit(SlotVar(level + 1, row + 1, tree))
            _emit_triple(em, entry, a, b)
    if isinstance(closure, ClosureClause):
        if not 1 <= closure.row <= k + 1:
            raise ValueError(f"closure row {closure.row} outside boundary 1..{k + 1}")
        em.add(em.lit(SlotVar(k + 1, closure.row, tree), negated=True), root_lit)


def _closure_text(closure: Closure) -> str:
    if isinstance(closure, Alias):
        return f"alias:{closure.row}"
    if isinstance(closure, ClosureClause):
        return f"clause:{closure.row}"
    return "none"


def parse_closure(text: str) -> Closure:
    if text == "none":
        return None
    kind, _, row = text.partition(":")
    if kind == "alias" and row.isdigit():
        return Alias(int(row))
    if kind == "clause" and row.isdigit():
        return ClosureClause(int(row))
    raise ValueError(f"bad closure {text!r}; expected alias:ROW, clause:ROW, or none")


def _finish(em: _Emitter, metadata: dict[str, str]) -> CnfFormula:
    formula = build_formula(
        em.clauses, num_vars=len(em.atlas), atlas=em.atlas, metadata=metadata
    )
    width_two = sum(1 for c in formula.clauses if c.width == 2)
    if width_two:
        formula.metadata["width_two_clauses"] = str(width_two)
    return formula


# ---------------------------------------------------------------------------
# chain families


def build_unit_chain(k: int) -> CnfFormula:
    """k width-2 clauses over x1..xk whose cycle closes onto x1:
    (x1 | x2), (~xi | xi+1), (~xk | x1).  Resolution walks the chain and
    produces the unit x1 after k - 1 steps."""
    if k < 2:
        raise ValueError("unit chain needs at least two variables")
    em = _Emitter()
    ids = [em.lit(RootVar())] + [em.lit(ChainVar(i)) for i in range(2, k + 1)]
    em.add(ids[0], ids[1])
    for i in range(1, k - 1):
        em.add(-ids[i], ids[i + 1])
    em.add(-ids[k - 1], ids[0])
    return _finish(em, {"family": "unit-chain", "k": str(k)})


def build_pair_chain(k: int) -> CnfFormula:
    """Decision triples chained in a line, closed back onto the root.

    Step i introduces the pair (xi.1, xi.2); its triple is entered by the
    previous step's kept variable.  The closing triple pairs one fresh
    slot with the root so its pair resolvent is (~xk.1 | x1.1), which
    completes the cycle exactly like the unit chain."""
    if k < 2:
        raise ValueError("pair chain needs at least two steps")
    em = _Emitter()
    root = em.lit(RootVar())
    kept = root
    for i in range(2, k + 1):
        entry = kept if i == 2 else -kept
        a = em.lit(ChainVar(i, 1))
        b = em.lit(ChainVar(i, 2))
        _emit_triple(em, entry, a, b)
        kept = a
    tail = em.lit(ChainVar(k + 1, 1))
    _emit_triple(em, -kept, tail, root)
    return _finish(em, {"family": "pair-chain", "k": str(k)})


# ---------------------------------------------------------------------------
# tree families


def build_binary_tree(k: int) -> CnfFormula:
    """Perfect binary tree of decision triples to depth k; no pair
    sharing, so every boundary position has exactly one path."""
    if k < 1:
        raise ValueError("binary tree depth must be at least 1")
    em = _Emitter()
    root = em.lit(RootVar())
    for level in range(1, k + 1):
        for index in range(1, 2**level + 1):
            em.lit(BinaryVar(level, index))
    for level in range(0, k):
        for index in range(1, 2**level + 1):
            entry = root if level == 0 else em.lit(BinaryVar(level, index), negated=True)
            a = em.lit(BinaryVar(level + 1, 2 * index - 1))
            b = em.lit(BinaryVar(level + 1, 2 * index))
            _emit_triple(em, entry, a, b)
    return _finish(em, {"family": "binary", "k": str(k)})


def build_binomial_tree(spec: TreeSpec) -> CnfFormula:
    """Pair-sharing tree per `spec`: nodes (level, row) for row <= level
    <= k, node (l, r) pairing slots (l+1, r) and (l+1, r+1), so adjacent
    nodes share one slot and boundary row arrivals count binomially."""
    if spec.variant is not TreeVariant.BINOMIAL:
        raise ValueError(f"spec variant {spec.variant} is not the pair-sharing tree")
    if spec.k < 1:
        raise ValueError("tree depth must be at least 1")
    em = _Emitter()
    root = em.lit(RootVar())
    root_lit = -root if spec.root_negated else root
    _apply_substitutions(em, spec)
    _emit_binomial(em, spec.k, root_lit, spec.closure)
    metadata = {
        "family": "binomial",
        "k": str(spec.k),
        "closure": _closure_text(spec.closure),
        "nodes": str(spec.k * (spec.k + 1) // 2),
        "variables_closed_form": str((spec.k + 1) * (spec.k + 2) // 2),
    }
    if spec.root_negated:
        metadata["root"] = "neg"
    if spec.substitutions:
        metadata["substitutions"] = ";".join(
            f"{slot}={lit}" for slot, lit in spec.substitutions
        )
    formula = _finish(em, metadata)
    for red in spec.redundancy:
        extra = gen_redundancy_clauses(formula, red.node, red.count, red.seed)
        formula = formula.with_extra(extra)
        notes = formula.metadata.get("redundancy", "")
        tag = f"{red.node[0]}.{red.node[1]}:{red.count}:{red.seed}"
        formula.metadata["redundancy"] = f"{notes};{tag}" if notes else tag
    for node, via in spec.implicit_nodes:
        formula = make_implicit(formula, node, via)
    return formula


def _apply_substitutions(em: _Emitter, spec: TreeSpec) -> None:
    seen: set[SlotVar] = set()
    for slot, replacement in spec.substitutions:
        if not (2 <= slot.boundary <= spec.k + 1 and 1 <= slot.row <= slot.boundary):
            raise ValueError(f"substitution of a nonexistent slot {slot}")
        if slot in seen:
            raise ValueError(f"slot {slot} substituted twice")
        if isinstance(spec.closure, Alias) and slot == SlotVar(spec.k + 1, spec.closure.row):
            raise ValueError(f"slot {slot} was aliased away by the closure")
        if not isinstance(replacement.name, (RootVar, FreshVar)):
            raise ValueError("replacement must be the root or a fresh variable")
        seen.add(slot)
        em.bind(slot, em.lit(replacement.name, replacement.negated))


def compose_two_trees(k: int, closing: Closing) -> CnfFormula:
    """Two depth-k trees sharing only the root variable: one entered when
    the root is false, one when it is true.  MATCHED closures write each
    tree's own entry literal into its boundary (jointly unsatisfiable);
    CROSSED closures swap them (satisfiable either way)."""
    if k < 1:
        raise ValueError("tree depth must be at least 1")
    em = _Emitter()
    root = em.lit(RootVar())
    flip = -1 if closing is Closing.CROSSED else 1
    _emit_binomial(em, k, root, Alias(1), alias_lit=flip * root, tree=0)
    _emit_binomial(em, k, -root, Alias(1), alias_lit=flip * -root, tree=1)
    return _finish(
        em,
        {
            "family": "compose",
            "k": str(k),
            "closing": str(closing),
            "variables_closed_form": str((k + 1) * (k + 2) - 3),
        },
    )


def build_multi_branching(k_top: int, k_sub: int) -> CnfFormula:
    """A depth-k_top tree whose last level uses disjoint pair variables
    (no sharing between row neighbours); each of the 2*k_top distinct
    boundary variables then enters its own depth-k_sub pair-sharing
    subtree.  No closure anywhere, so the formula stays satisfiable."""
    if k_top < 2:
        raise ValueError("multi-branching needs a top depth of at least 2")
    if k_sub < 1:
        raise ValueError("subtree depth must be at least 1")
    em = _Emitter()
    root = em.lit(RootVar())
    for level in range(1, k_top):
        for row in range(1, level + 1):
            entry = root if level == 1 else em.lit(SlotVar(level, row), negated=True)
            _emit_triple(
                em,
                entry,
                em.lit(SlotVar(level + 1, row)),
                em.lit(SlotVar(level + 1, row + 1)),
            )
    # Last top level: rows 2r-1 and 2r of the boundary namespace make the
    # pairs disjoint; each such variable roots an attached subtree.
    branch_roots: list[int] = []
    for row in range(1, k_top + 1):
        entry = em.lit(SlotVar(k_top, row), negated=True)
        a = em.lit(SlotVar(k_top + 1, 2 * row - 1))
        b = em.lit(SlotVar(k_top + 1, 2 * row))
        _emit_triple(em, entry, a, b)
        branch_roots += [a, b]
    top_clauses = len(em.clauses)
    for j, branch in enumerate(branch_roots, start=1):
        _emit_binomial(em, k_sub, -branch, None, tree=j)
    return _finish(
        em,
        {
            "family": "multi-branching",
            "k_top": str(k_top),
            "k_sub": str(k_sub),
            "subtrees": str(len(branch_roots)),
            "clauses_top": str(top_clauses),
            "clauses_subtrees": str(len(em.clauses) - top_clauses),
        },
    )


# ---------------------------------------------------------------------------
# transforms on generated trees


def _tree_params(formula: CnfFormula) -> tuple[int, Closure, dict[VarName, int], int]:
    """Recover (k, closure, slot substitution map, root literal) from a
    pair-sharing tree formula's metadata."""
    if formula.metadata.get("family") != "binomial":
        raise ValueError("this transform needs a pair-sharing tree formula")
    k = int(formula.metadata["k"])
    closure = parse_closure(formula.metadata.get("closure", "none"))
    root = formula.lit(RootVar(), negated=formula.metadata.get("root") == "neg")
    sub: dict[VarName, int] = {}
    if isinstance(closure, Alias):
        sub[SlotVar(k + 1, closure.row)] = root
    for item in filter(None, formula.metadata.get("substitutions", "").split(";")):
        slot_text, _, lit_text = item.partition("=")
        named = NamedLit.parse(lit_text)
        lit = formula.lit(named.name, named.negated)
        sub[parse_var_name(slot_text)] = lit
    for tag in filter(None, formula.metadata.get("implicit", "").split(";")):
        node_text, _, via_text = tag.partition(":")
        level, row = (int(p) for p in node_text.split("."))
        left = SlotVar(level + 1, row)
        sub[parse_var_name(via_text)] = sub[left] if left in sub else formula.lit(left)
    return k, closure, sub, root


def _slot_lit(formula: CnfFormula, sub: dict[VarName, int], slot: SlotVar) -> int:
    if slot in sub:
        return sub[slot]
    return formula.lit(slot)


def _cone_slots(node: tuple[int, int], k: int) -> list[SlotVar]:
    """Boundary slots reachable from a node: rows fan out one per level."""
    level, row = node
    out = []
    for boundary in range(level + 1, k + 2):
        for r in range(row, row + boundary - level + 1):
            out.append(SlotVar(boundary, r))
    return out


def _check_node(node: tuple[int, int], k: int) -> None:
    level, row = node
    if not 1 <= row <= level <= k:
        raise ValueError(f"no node at level {level}, row {row} in a depth-{k} tree")


def make_implicit(formula: CnfFormula, node: tuple[int, int], via: SlotVar) -> CnfFormula:
    """Drop a node's two switching clauses and alias a descendant boundary
    slot to the node's left pair variable.

    The dropped pair resolvent (~entry | left) then reappears through the
    descendant triples: resolution walks from the node's right slot down
    to `via`, whose occurrences now read as the left variable.  Aliasing
    the immediate right slot degenerates to the explicit triple."""
    k, closure, sub, root = _tree_params(formula)
    _check_node(node, k)
    level, row = node
    cone = set(_cone_slots(node, k))
    if via not in cone:
        raise ValueError(f"{via} is not a descendant boundary slot of node {node}")
    if via == SlotVar(level + 1, row):
        raise ValueError("cannot alias the node's left slot to itself")
    if via in sub or (isinstance(closure, Alias) and via == SlotVar(k + 1, closure.row)):
        raise ValueError(f"{via} was already substituted or aliased away")

    entry = root if level == 1 else -_slot_lit(formula, sub, SlotVar(level, row))
    left = _slot_lit(formula, sub, SlotVar(level + 1, row))
    right = _slot_lit(formula, sub, SlotVar(level + 1, row + 1))
    switching = {make_clause([entry, left, -right]).lits, make_clause([entry, -left, right]).lits}
    kept = [c for c in formula.clauses if c.lits not in switching]
    if len(kept) != len(formula.clauses) - 2:
        raise ValueError(f"switching clauses of node {node} are not present")

    via_id = formula.atlas.id_of(via)
    rewritten: list[Clause] = []
    for clause in kept:
        if via_id in clause.variables():
            remapped = make_clause(
                [left if l == via_id else -left if l == -via_id else l for l in clause.lits]
            )
            if isinstance(remapped, Tautology):
                raise ValueError(f"aliasing {via} makes clause {clause} tautologous")
            rewritten.append(remapped)
        else:
            rewritten.append(clause)

    metadata = dict(formula.metadata)
    tag = f"{level}.{row}:{via}"
    metadata["implicit"] = (
        f"{metadata['implicit']};{tag}" if "implicit" in metadata else tag
    )
    return build_formula(
        rewritten, num_vars=formula.num_vars, atlas=formula.atlas, metadata=metadata
    )


def gen_redundancy_clauses(
    formula: CnfFormula, node: tuple[int, int], count: int, seed: int
) -> list[Clause]:
    """Entailed extra clauses shaped like the node clause (~entry | u | v),
    with u, v drawn from the node's descendant cone.

    Wherever the entry variable is true the whole cone below it is forced
    true, so any such clause with at most one negated member is a logical
    consequence; a seeded shuffle picks `count` of them, skipping clauses
    already present."""
    if count < 1:
        raise ValueError("count must be at least 1")
    k, closure, sub, root = _tree_params(formula)
    if "implicit" in formula.metadata:
        raise ValueError("redundancy generation requires explicit switching clauses")
    _check_node(node, k)
    level, row = node
    if level == k:
        raise ValueError(f"node {node} has no descendant nodes (leaf level)")

    cone = [_slot_lit(formula, sub, s) for s in _cone_slots(node, k)]
    entry = root if level == 1 else -_slot_lit(formula, sub, SlotVar(level, row))
    candidates = [(u, v) for i, u in enumerate(cone) for v in cone[i + 1 :]]
    candidates += [(-u, v) for u in cone for v in cone if u != v]
    rng = random.Random(seed)
    rng.shuffle(candidates)

    existing = {c.lits for c in formula.clauses}
    out: list[Clause] = []
    chosen: set[tuple[int, ...]] = set()
    for u, v in candidates:
        clause = make_clause([entry, u, v])
        if isinstance(clause, Tautology) or clause.width != 3:
            continue
        if clause.lits in existing or clause.lits in chosen:
            continue
        chosen.add(clause.lits)
        out.append(clause)
        if len(out) == count:
            return out
    raise ValueError(
        f"only {len(out)} distinct redundancy clauses exist for node {node}, "
        f"requested {count}"
    )
