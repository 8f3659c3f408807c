import random

import pytest

from treesat.forge import build_unit_chain, compose_two_trees, Closing
from treesat.formula import Clause, build_formula, make_clause
from treesat.oracle import (
    BRUTE_FORCE_VAR_CAP,
    Verdict,
    all_models,
    brute_force_sat,
    dpll_sat,
    entails,
    is_dominant,
)

UNSAT_TWO_VARS = build_formula(
    [Clause((1, 2)), Clause((1, -2)), Clause((-1, 2)), Clause((-1, -2))]
)


def random_formula(rng, max_vars=10, max_clauses=25):
    n = rng.randint(2, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        width = rng.randint(1, min(3, n))
        chosen = rng.sample(range(1, n + 1), width)
        clause = make_clause([v if rng.random() < 0.5 else -v for v in chosen])
        if isinstance(clause, Clause):
            clauses.append(clause)
    return build_formula(clauses, n)


def test_brute_force_first_model_golden():
    # The cyclic chain admits x1=True, x2=False, x3=False as its
    # lexicographically first model, reached at the fifth assignment.
    verdict = brute_force_sat(build_unit_chain(3))
    assert verdict.status is Verdict.SAT
    assert verdict.model == {1: True, 2: False, 3: False}
    assert verdict.nodes == 5


def test_brute_force_unsat_counts_all_assignments():
    verdict = brute_force_sat(UNSAT_TWO_VARS)
    assert verdict.status is Verdict.UNSAT
    assert verdict.model is None
    assert verdict.nodes == 4


def test_brute_force_crosses_chunk_boundary():
    # 22 variables spill past the 2**20 block size, so the high-part
    # loop must run; the unit (x1) only holds in the upper half.
    f = build_formula([Clause((1,))], 22)
    verdict = brute_force_sat(f)
    assert verdict.model == {v: v == 1 for v in range(1, 23)}
    assert verdict.nodes == 2**21 + 1


def test_brute_force_refuses_large_formulas():
    f = build_formula([Clause((1,))], BRUTE_FORCE_VAR_CAP + 1)
    with pytest.raises(ValueError):
        brute_force_sat(f)
    assert brute_force_sat(f, max_vars=BRUTE_FORCE_VAR_CAP + 1).is_sat


def test_dpll_verdicts_on_tree_compositions():
    assert not dpll_sat(compose_two_trees(3, Closing.MATCHED)).is_sat
    assert dpll_sat(compose_two_trees(3, Closing.CROSSED)).is_sat


def test_dpll_counts_nodes_and_propagations():
    verdict = dpll_sat(build_unit_chain(4))
    assert verdict.is_sat
    assert verdict.nodes >= 1
    assert verdict.propagations >= 1


def test_oracles_agree_on_random_formulas():
    rng = random.Random(11)
    for _ in range(150):
        f = random_formula(rng)
        assert brute_force_sat(f).status is dpll_sat(f).status


def test_brute_force_matches_model_enumeration():
    rng = random.Random(12)
    for _ in range(60):
        f = random_formula(rng, max_vars=8)
        models = list(all_models(f))
        verdict = brute_force_sat(f)
        if models:
            assert verdict.is_sat and verdict.model == models[0]
        else:
            assert not verdict.is_sat


def test_all_models_lexicographic_order():
    f = build_formula([Clause((1, 2))])
    assert list(all_models(f)) == [
        {1: False, 2: True},
        {1: True, 2: False},
        {1: True, 2: True},
    ]
    big = build_formula([Clause((1,))], 21)
    with pytest.raises(ValueError):
        next(all_models(big))


def test_is_dominant_detects_the_forced_root():
    chain = build_unit_chain(3)
    assert is_dominant(chain, 1)
    assert is_dominant(chain, 1, oracle=brute_force_sat)
    assert not is_dominant(chain, -1)
    assert not is_dominant(chain, 2)
    assert not is_dominant(chain, -2)


def test_is_dominant_edge_cases():
    assert not is_dominant(UNSAT_TWO_VARS, 1)
    with pytest.raises(ValueError):
        is_dominant(build_unit_chain(3), 4)


def test_entails_units_and_originals():
    chain = build_unit_chain(3)
    assert entails(chain, Clause((1,)))
    assert entails(chain, Clause((1, 2)))
    assert not entails(chain, Clause((2,)))
    assert not entails(chain, Clause((-1,)))
    with pytest.raises(ValueError):
        entails(chain, Clause((9,)))


def test_entailment_is_consistent_with_model_enumeration():
    rng = random.Random(13)
    for _ in range(40):
        f = random_formula(rng, max_vars=7)
        chosen = rng.sample(range(1, f.num_vars + 1), 2)
        clause = make_clause([v if rng.random() < 0.5 else -v for v in chosen])
        if not isinstance(clause, Clause):
            continue
        by_models = all(
            any(m[abs(l)] == (l > 0) for l in clause.lits) for m in all_models(f)
        )
        assert entails(f, clause) == by_models
