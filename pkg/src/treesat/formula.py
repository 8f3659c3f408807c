"""Clauses, CNF formulas, variable naming, and DIMACS serialization.

Literals are DIMACS-style signed integers: variable ids are positive, a
negative sign means negation.  A clause is a canonical tuple of such
literals (sorted by variable id, no duplicates, never both polarities).
Formulas carry an atlas mapping structured variable names to ids plus
free-form metadata; both survive a DIMACS round trip through comment
lines written before the header:

    c meta <key> <value>
    c var <id> <name>
    p cnf <variables> <clauses>
    1 -2 3 0
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class DimacsError(ValueError):
    """Raised for malformed DIMACS input; messages carry the line number."""


# ---------------------------------------------------------------------------
# literals


@dataclass(frozen=True)
class Literal:
    """Structured view of a signed literal."""

    var: int
    negated: bool = False

    def __post_init__(self) -> None:
        if self.var < 1:
            raise ValueError(f"variable id must be positive, got {self.var}")

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    @classmethod
    def from_int(cls, lit: int) -> Literal:
        if lit == 0:
            raise ValueError("0 is the clause terminator, not a literal")
        return cls(abs(lit), lit < 0)

    @property
    def complement(self) -> Literal:
        return Literal(self.var, not self.negated)


def as_int(lit: int | Literal) -> int:
    """Normalize a literal given either as a signed int or a Literal."""
    if isinstance(lit, Literal):
        return lit.to_int()
    if lit == 0:
        raise ValueError("0 is the clause terminator, not a literal")
    return lit


# ---------------------------------------------------------------------------
# clauses


class Tautology:
    """Marker for a resolvent or clause containing a variable both ways.

    Tautologies are never stored in formulas or clause stores; operations
    that may produce one return this marker instead of a Clause.
    """

    _instance: Tautology | None = None

    def __new__(cls) -> Tautology:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TAUTOLOGY"


TAUTOLOGY = Tautology()


@dataclass(frozen=True)
class Clause:
    """Canonical disjunction of literals.  Width 0 is the empty clause."""

    lits: tuple[int, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        last = 0
        for lit in self.lits:
            var = abs(lit)
            if lit == 0:
                raise ValueError("0 is not a literal")
            if var in seen:
                raise ValueError(f"duplicate or complementary variable {var}")
            if var < last:
                raise ValueError("literals must be sorted by variable id")
            seen.add(var)
            last = var

    @property
    def width(self) -> int:
        return len(self.lits)

    @property
    def is_empty(self) -> bool:
        return not self.lits

    @property
    def is_unit(self) -> bool:
        return len(self.lits) == 1

    def variables(self) -> tuple[int, ...]:
        return tuple(abs(lit) for lit in self.lits)

    def literals(self) -> tuple[Literal, ...]:
        return tuple(Literal.from_int(lit) for lit in self.lits)

    def __contains__(self, lit: int | Literal) -> bool:
        return as_int(lit) in self.lits

    def __str__(self) -> str:
        return " ".join(str(lit) for lit in self.lits) if self.lits else "<empty>"


EMPTY_CLAUSE = Clause(())


def make_clause(lits) -> Clause | Tautology:
    """Build a canonical clause from literals, or TAUTOLOGY if a variable
    occurs in both polarities.  Duplicate literals collapse."""
    out: set[int] = set()
    for raw in lits:
        lit = as_int(raw)
        if -lit in out:
            return TAUTOLOGY
        out.add(lit)
    return Clause(tuple(sorted(out, key=abs)))


# ---------------------------------------------------------------------------
# variable names

_NAME_PATTERNS = (
    re.compile(r"^x(\d+)\.([12])$"),
    re.compile(r"^(?:t(\d+)\.)?s(\d+)\.(\d+)$"),
    re.compile(r"^b(\d+)\.(\d+)$"),
    re.compile(r"^z(\d+)$"),
)


@dataclass(frozen=True)
class RootVar:
    """The distinguished root variable; always registered first (id 1)."""

    def __str__(self) -> str:
        return "x1.1"


@dataclass(frozen=True)
class ChainVar:
    """Chain variable at a chain step; slot 2 is the discarded pair member."""

    step: int
    slot: int = 1

    def __post_init__(self) -> None:
        if self.step < 2:
            raise ValueError("chain steps start at 2 (step 1 is the root)")
        if self.slot not in (1, 2):
            raise ValueError("chain slot must be 1 or 2")

    def __str__(self) -> str:
        return f"x{self.step}.{self.slot}"


@dataclass(frozen=True)
class SlotVar:
    """Pair-boundary variable of a tree; `tree` namespaces attached or
    composed trees (0 is the main tree)."""

    boundary: int
    row: int
    tree: int = 0

    def __post_init__(self) -> None:
        if self.boundary < 2 or self.row < 1 or self.tree < 0:
            raise ValueError(f"bad slot {self!r}")

    def __str__(self) -> str:
        base = f"s{self.boundary}.{self.row}"
        return base if self.tree == 0 else f"t{self.tree}.{base}"


@dataclass(frozen=True)
class BinaryVar:
    """Position variable of the perfect binary tree, by level and index."""

    level: int
    index: int

    def __post_init__(self) -> None:
        if self.level < 1 or not 1 <= self.index <= 2**self.level:
            raise ValueError(f"bad binary position {self!r}")

    def __str__(self) -> str:
        return f"b{self.level}.{self.index}"


@dataclass(frozen=True)
class FreshVar:
    """Substitution variable (the z of literal substitutions)."""

    tag: int

    def __post_init__(self) -> None:
        if self.tag < 0:
            raise ValueError("fresh tags are non-negative")

    def __str__(self) -> str:
        return f"z{self.tag}"


VarName = RootVar | ChainVar | SlotVar | BinaryVar | FreshVar


def parse_var_name(text: str) -> VarName:
    """Inverse of str() for every VarName variant."""
    if text == "x1.1":
        return RootVar()
    m = _NAME_PATTERNS[0].match(text)
    if m:
        return ChainVar(int(m.group(1)), int(m.group(2)))
    m = _NAME_PATTERNS[1].match(text)
    if m:
        tree = int(m.group(1)) if m.group(1) else 0
        return SlotVar(int(m.group(2)), int(m.group(3)), tree)
    m = _NAME_PATTERNS[2].match(text)
    if m:
        return BinaryVar(int(m.group(1)), int(m.group(2)))
    m = _NAME_PATTERNS[3].match(text)
    if m:
        return FreshVar(int(m.group(1)))
    raise ValueError(f"unrecognized variable name {text!r}")


class Atlas:
    """Injective map between structured variable names and 1-based ids,
    in registration order."""

    def __init__(self) -> None:
        self._ids: dict[VarName, int] = {}
        self._names: list[VarName] = []

    def register(self, name: VarName) -> int:
        """Return the id for `name`, assigning the next id if new."""
        vid = self._ids.get(name)
        if vid is None:
            vid = len(self._names) + 1
            self._ids[name] = vid
            self._names.append(name)
        return vid

    def id_of(self, name: VarName) -> int:
        return self._ids[name]

    def name_of(self, vid: int) -> VarName:
        return self._names[vid - 1]

    def __contains__(self, name: VarName) -> bool:
        return name in self._ids

    def __len__(self) -> int:
        return len(self._names)

    def items(self):
        return ((vid, name) for vid, name in enumerate(self._names, start=1))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Atlas) and self._names == other._names

    def copy(self) -> Atlas:
        dup = Atlas()
        for _, name in self.items():
            dup.register(name)
        return dup


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class CnfFormula:
    """A deduplicated CNF clause sequence with naming and metadata."""

    clauses: tuple[Clause, ...]
    num_vars: int
    atlas: Atlas = field(default_factory=Atlas)
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        seen: set[tuple[int, ...]] = set()
        for clause in self.clauses:
            if clause.lits in seen:
                raise ValueError(f"duplicate clause {clause}")
            seen.add(clause.lits)
            for var in clause.variables():
                if var > self.num_vars:
                    raise ValueError(
                        f"variable {var} above declared count {self.num_vars}"
                    )

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def lit(self, name: VarName, negated: bool = False) -> int:
        """Signed literal for a named variable."""
        vid = self.atlas.id_of(name)
        return -vid if negated else vid

    def with_extra(self, extra: list[Clause]) -> CnfFormula:
        """Copy with additional clauses appended (duplicates dropped)."""
        have = {c.lits for c in self.clauses}
        added = tuple(c for c in extra if c.lits not in have)
        return CnfFormula(
            self.clauses + added, self.num_vars, self.atlas, dict(self.metadata)
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CnfFormula)
            and self.clauses == other.clauses
            and self.num_vars == other.num_vars
            and self.atlas == other.atlas
            and self.metadata == other.metadata
        )


def build_formula(clauses, num_vars=None, atlas=None, metadata=None) -> CnfFormula:
    """Assemble a formula, deduplicating while preserving first occurrence.

    Tautology markers in `clauses` are rejected: they are never stored.
    """
    out: list[Clause] = []
    seen: set[tuple[int, ...]] = set()
    top = 0
    for clause in clauses:
        if isinstance(clause, Tautology):
            raise ValueError("tautologies cannot be stored in a formula")
        if clause.lits in seen:
            continue
        seen.add(clause.lits)
        out.append(clause)
        if clause.lits:
            top = max(top, max(clause.variables()))
    if num_vars is None:
        num_vars = len(atlas) if atlas is not None else top
    return CnfFormula(
        tuple(out), num_vars, atlas if atlas is not None else Atlas(),
        dict(metadata) if metadata else {},
    )


def write_dimacs(formula: CnfFormula) -> str:
    """Serialize deterministically; equal formulas give identical bytes."""
    lines: list[str] = []
    for key, value in formula.metadata.items():
        lines.append(f"c meta {key} {value}")
    for vid, name in formula.atlas.items():
        lines.append(f"c var {vid} {name}")
    lines.append(f"p cnf {formula.num_vars} {formula.num_clauses}")
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause.lits) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF, recovering metadata and atlas comment lines.

    Duplicate clauses are dropped; tautologous input clauses are rejected
    with a line number, as are header mismatches, out-of-range variables,
    and unterminated clauses.
    """
    metadata: dict[str, str] = {}
    atlas = Atlas()
    atlas_ids: dict[int, VarName] = {}
    num_vars = num_clauses = -1
    clauses: list[Clause] = []
    seen: set[tuple[int, ...]] = set()
    parsed = 0
    pending: list[int] = []
    pending_line = 0

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split(maxsplit=3)
            if len(parts) >= 4 and parts[1] == "meta":
                metadata[parts[2]] = parts[3]
            elif len(parts) >= 4 and parts[1] == "var":
                try:
                    atlas_ids[int(parts[2])] = parse_var_name(parts[3])
                except ValueError as exc:
                    raise DimacsError(f"line {lineno}: {exc}") from None
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                num_vars, num_clauses = int(fields[2]), int(fields[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if num_vars < 0 or num_clauses < 0:
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            continue
        if num_vars < 0:
            raise DimacsError(f"line {lineno}: clause before header")
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad literal {token!r}") from None
            if lit == 0:
                clause = make_clause(pending)
                if isinstance(clause, Tautology):
                    raise DimacsError(
                        f"line {lineno}: tautologous clause {' '.join(map(str, pending))}"
                    )
                parsed += 1
                if clause.lits not in seen:
                    seen.add(clause.lits)
                    clauses.append(clause)
                pending = []
            else:
                if abs(lit) > num_vars:
                    raise DimacsError(
                        f"line {lineno}: variable {abs(lit)} above declared count {num_vars}"
                    )
                if not pending:
                    pending_line = lineno
                pending.append(lit)

    if pending:
        raise DimacsError(f"line {pending_line}: clause not terminated by 0")
    if num_vars < 0:
        raise DimacsError("line 1: missing header")
    if parsed != num_clauses:
        raise DimacsError(f"header declares {num_clauses} clauses, found {parsed}")
    for vid in sorted(atlas_ids):
        expected = len(atlas) + 1
        if vid != expected:
            raise DimacsError(f"atlas ids must be contiguous from 1, got {vid}")
        if vid > num_vars:
            raise DimacsError(f"atlas id {vid} above declared count {num_vars}")
        atlas.register(atlas_ids[vid])
    return CnfFormula(tuple(clauses), num_vars, atlas, metadata)
