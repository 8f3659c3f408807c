import random

import pytest

from treesat.formula import (
    EMPTY_CLAUSE,
    TAUTOLOGY,
    Atlas,
    BinaryVar,
    ChainVar,
    Clause,
    CnfFormula,
    DimacsError,
    FreshVar,
    Literal,
    RootVar,
    SlotVar,
    Tautology,
    as_int,
    build_formula,
    make_clause,
    parse_dimacs,
    parse_var_name,
    write_dimacs,
)


def test_literal_int_round_trip():
    for raw in (1, -1, 7, -42):
        lit = Literal.from_int(raw)
        assert lit.to_int() == raw
        assert lit.complement.to_int() == -raw
        assert lit.complement.complement == lit


def test_literal_rejects_zero_and_bad_var():
    with pytest.raises(ValueError):
        Literal.from_int(0)
    with pytest.raises(ValueError):
        Literal(0)
    with pytest.raises(ValueError):
        as_int(0)


def test_as_int_accepts_both_forms():
    assert as_int(-5) == -5
    assert as_int(Literal(5, negated=True)) == -5


def test_clause_canonical_form_enforced():
    Clause((1, -2, 3))
    with pytest.raises(ValueError):
        Clause((3, 1))
    with pytest.raises(ValueError):
        Clause((1, 1))
    with pytest.raises(ValueError):
        Clause((1, -1))
    with pytest.raises(ValueError):
        Clause((0,))


def test_clause_properties():
    c = Clause((1, -3))
    assert c.width == 2 and not c.is_empty and not c.is_unit
    assert c.variables() == (1, 3)
    assert -3 in c and 3 not in c
    assert Literal(1) in c
    assert str(c) == "1 -3"
    assert EMPTY_CLAUSE.is_empty and str(EMPTY_CLAUSE) == "<empty>"
    assert Clause((7,)).is_unit


def test_make_clause_sorts_merges_and_detects_tautology():
    assert make_clause([3, 1, -2]) == Clause((1, -2, 3))
    assert make_clause([2, 2, -1]) == Clause((-1, 2))
    assert make_clause([1, -1]) is TAUTOLOGY
    assert make_clause([]) == EMPTY_CLAUSE
    assert Tautology() is TAUTOLOGY


def test_var_name_str_parse_round_trip():
    names = [
        RootVar(),
        ChainVar(2, 1),
        ChainVar(9, 2),
        SlotVar(4, 3),
        SlotVar(2, 1, tree=1),
        BinaryVar(3, 8),
        FreshVar(0),
        FreshVar(12),
    ]
    for name in names:
        assert parse_var_name(str(name)) == name
    assert str(RootVar()) == "x1.1"
    assert str(SlotVar(5, 2, tree=1)) == "t1.s5.2"
    assert str(BinaryVar(2, 3)) == "b2.3"


def test_var_name_validation():
    with pytest.raises(ValueError):
        ChainVar(1, 1)
    with pytest.raises(ValueError):
        ChainVar(2, 3)
    with pytest.raises(ValueError):
        SlotVar(1, 1)
    with pytest.raises(ValueError):
        BinaryVar(2, 5)
    with pytest.raises(ValueError):
        FreshVar(-1)
    with pytest.raises(ValueError):
        parse_var_name("q7")
    with pytest.raises(ValueError):
        parse_var_name("x1.3")


def test_atlas_registration_order_and_idempotence():
    atlas = Atlas()
    assert atlas.register(RootVar()) == 1
    assert atlas.register(SlotVar(2, 1)) == 2
    assert atlas.register(RootVar()) == 1
    assert atlas.id_of(SlotVar(2, 1)) == 2
    assert atlas.name_of(2) == SlotVar(2, 1)
    assert SlotVar(2, 1) in atlas and SlotVar(2, 2) not in atlas
    assert len(atlas) == 2
    assert list(atlas.items()) == [(1, RootVar()), (2, SlotVar(2, 1))]
    assert atlas.copy() == atlas


def test_formula_validation():
    with pytest.raises(ValueError):
        CnfFormula((Clause((1,)), Clause((1,))), 1)
    with pytest.raises(ValueError):
        CnfFormula((Clause((2,)),), 1)
    f = CnfFormula((Clause((1, 2)),), 2)
    assert f.num_clauses == 1


def test_build_formula_dedups_and_rejects_tautologies():
    f = build_formula([Clause((1, 2)), Clause((1, 2)), Clause((-1,))])
    assert f.clauses == (Clause((1, 2)), Clause((-1,)))
    assert f.num_vars == 2
    with pytest.raises(ValueError):
        build_formula([TAUTOLOGY])


def test_with_extra_dedups_and_shares_atlas():
    atlas = Atlas()
    atlas.register(RootVar())
    atlas.register(ChainVar(2))
    f = build_formula([Clause((1, 2))], 2, atlas, {"family": "test"})
    g = f.with_extra([Clause((1, 2)), Clause((-2,))])
    assert g.clauses == (Clause((1, 2)), Clause((-2,)))
    assert g.atlas is f.atlas
    assert g.metadata == f.metadata and g.metadata is not f.metadata
    assert f.lit(ChainVar(2), negated=True) == -2


GOLDEN_DIMACS = """\
c meta family test
c var 1 x1.1
c var 2 x2.1
p cnf 2 2
1 2 0
-2 0
"""


def test_write_dimacs_golden():
    atlas = Atlas()
    atlas.register(RootVar())
    atlas.register(ChainVar(2))
    f = build_formula([Clause((1, 2)), Clause((-2,))], 2, atlas, {"family": "test"})
    assert write_dimacs(f) == GOLDEN_DIMACS


def test_dimacs_round_trip_is_byte_identical():
    atlas = Atlas()
    for name in (RootVar(), SlotVar(2, 1), SlotVar(2, 2)):
        atlas.register(name)
    f = build_formula(
        [Clause((1, 2, 3)), Clause((1, 2, -3)), Clause((-1,))],
        3,
        atlas,
        {"family": "demo", "k": "1"},
    )
    text = write_dimacs(f)
    back = parse_dimacs(text)
    assert back == f
    assert write_dimacs(back) == text


def test_parse_dimacs_plain_file_without_comments():
    f = parse_dimacs("p cnf 3 2\n1 -3 0\n2 0\n")
    assert f.num_vars == 3
    assert f.clauses == (Clause((1, -3)), Clause((2,)))
    assert len(f.atlas) == 0 and f.metadata == {}


def test_parse_dimacs_multiline_and_multi_clause_lines():
    f = parse_dimacs("p cnf 2 2\n1\n2 0 -1 0\n")
    assert f.clauses == (Clause((1, 2)), Clause((-1,)))


def test_parse_dimacs_duplicate_clauses_counted_against_header():
    f = parse_dimacs("p cnf 1 2\n1 0\n1 0\n")
    assert f.clauses == (Clause((1,)),)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("p cnf 1\n1 0\n", "malformed header"),
        ("p dnf 1 1\n1 0\n", "malformed header"),
        ("p cnf -1 0\n", "malformed header"),
        ("1 0\n", "clause before header"),
        ("p cnf 1 1\n2 0\n", "above declared count"),
        ("p cnf 1 1\n1 -1 0\n", "tautologous"),
        ("p cnf 1 1\n1\n", "not terminated"),
        ("p cnf 1 2\n1 0\n", "declares 2 clauses, found 1"),
        ("p cnf 1 1\nx 0\n", "bad literal"),
        ("", "missing header"),
        ("c var 2 x1.1\np cnf 2 1\n1 0\n", "contiguous"),
        ("c var 1 what\np cnf 1 1\n1 0\n", "unrecognized"),
    ],
)
def test_parse_dimacs_rejects_malformed_input(text, fragment):
    with pytest.raises(DimacsError) as err:
        parse_dimacs(text)
    assert fragment in str(err.value)


def test_random_formula_round_trips():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(1, 12)
        clauses = []
        for _ in range(rng.randint(1, 20)):
            width = rng.randint(1, min(4, n))
            chosen = rng.sample(range(1, n + 1), width)
            clause = make_clause([v if rng.random() < 0.5 else -v for v in chosen])
            if isinstance(clause, Clause):
                clauses.append(clause)
        f = build_formula(clauses, n)
        assert parse_dimacs(write_dimacs(f)) == f
