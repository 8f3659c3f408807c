import os

import pytest

from treesat.cli import main
from treesat.forge import (
    Closing,
    NamedLit,
    TreeSpec,
    build_binomial_tree,
    build_unit_chain,
    compose_two_trees,
)
from treesat.formula import FreshVar, SlotVar, write_dimacs
from treesat.resolution import saturate


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_to_stdout(capsys):
    code, out, err = run_cli(capsys, "generate", "--family", "unit-chain", "--k", "3")
    assert code == 0 and err == ""
    assert out == write_dimacs(build_unit_chain(3))


def test_generate_to_file_atomically(capsys, tmp_path):
    target = tmp_path / "chain.cnf"
    code, out, _ = run_cli(
        capsys, "generate", "--family", "unit-chain", "--k", "4", "--out", str(target)
    )
    assert code == 0 and out == ""
    assert target.read_text() == write_dimacs(build_unit_chain(4))
    leftovers = [p for p in os.listdir(tmp_path) if p.startswith(".treesat-")]
    assert leftovers == []


def test_generate_is_deterministic(capsys):
    args = ("generate", "--family", "binomial", "--k", "5", "--redundancy", "2.1:5")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_generate_binomial_options_reach_the_recipe(capsys):
    code, out, _ = run_cli(
        capsys,
        "generate", "--family", "binomial", "--k", "4",
        "--closure", "clause:2", "--negate-root", "--implicit", "2.1=s5.2",
    )
    assert code == 0
    assert "c meta closure clause:2" in out
    assert "c meta root neg" in out
    assert "c meta implicit 2.1:s5.2" in out


def test_generate_requires_depth(capsys):
    code, _, err = run_cli(capsys, "generate", "--family", "unit-chain")
    assert code == 2
    assert err.startswith("error:")


def test_generate_rejects_bad_closure_text(capsys):
    code, _, err = run_cli(
        capsys, "generate", "--family", "binomial", "--k", "3", "--closure", "pivot:1"
    )
    assert code == 2 and "closure" in err


def test_solve_family_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "solve", "--family", "unit-chain", "--k", "3")
    assert code == 10 and out == "sat\n"
    code, out, _ = run_cli(capsys, "solve", "--family", "compose-matched", "--k", "2")
    assert code == 20 and out == "unsat\n"


def test_solve_prints_named_model(capsys):
    code, out, _ = run_cli(
        capsys, "solve", "--family", "unit-chain", "--k", "3", "--oracle", "brute", "--model"
    )
    assert code == 10
    assert out.splitlines() == ["sat", "x1.1=1 x2.1=0 x3.1=0"]


def test_solve_reads_dimacs_files(capsys, tmp_path):
    path = tmp_path / "matched.cnf"
    path.write_text(write_dimacs(compose_two_trees(2, Closing.MATCHED)))
    code, out, _ = run_cli(capsys, "solve", "--in", str(path))
    assert code == 20 and out == "unsat\n"


def test_solve_input_errors(capsys, tmp_path):
    code, _, err = run_cli(capsys, "solve")
    assert code == 2 and "--in FILE or --family" in err
    code, _, err = run_cli(capsys, "solve", "--in", str(tmp_path / "missing.cnf"))
    assert code == 1
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 1 1\n2 0\n")
    code, _, err = run_cli(capsys, "solve", "--in", str(bad))
    assert code == 1 and "error:" in err


def test_saturate_reports_match_the_engine(capsys):
    result = saturate(build_unit_chain(3))
    c = result.counters
    code, out, _ = run_cli(capsys, "saturate", "--family", "unit-chain", "--k", "3")
    assert code == 0
    assert out.splitlines() == [
        "status saturated",
        f"original 3 derived {len(result.derived)} steps {c.steps}",
        f"tautologies {c.tautologies} duplicates {c.duplicates} over-width {c.over_width}",
    ]


def test_saturate_chain_and_dot(capsys, tmp_path):
    dot = tmp_path / "chain.dot"
    code, out, _ = run_cli(
        capsys,
        "saturate", "--family", "unit-chain", "--k", "3",
        "--chain", "1", "--dot", str(dot),
    )
    assert code == 0
    assert "chain for (1): length 2, resolved x2.1 x3.1" in out
    assert dot.read_text().startswith("digraph chain {")


def test_saturate_chain_miss_fails(capsys):
    code, out, _ = run_cli(
        capsys, "saturate", "--family", "unit-chain", "--k", "3", "--chain", "2"
    )
    assert code == 1
    assert "not in the saturated store" in out
    code, _, err = run_cli(
        capsys, "saturate", "--family", "unit-chain", "--k", "3", "--chain", "1 -1"
    )
    assert code == 2 and "tautologous" in err
    code, _, err = run_cli(
        capsys, "saturate", "--family", "unit-chain", "--k", "3", "--dot", "x.dot"
    )
    assert code == 2 and "--dot needs --chain" in err


def test_saturate_trace_export(capsys, tmp_path):
    trace = tmp_path / "run.trace"
    code, _, _ = run_cli(
        capsys, "saturate", "--family", "unit-chain", "--k", "3", "--trace", str(trace)
    )
    assert code == 0
    lines = trace.read_text().splitlines()
    assert len(lines) == 3
    assert lines[0].endswith("-> 3 : 1 3")


def test_budget_env_and_flag_precedence(capsys, monkeypatch):
    monkeypatch.setenv("TREESAT_MAX_STEPS", "2")
    _, out, _ = run_cli(capsys, "saturate", "--family", "unit-chain", "--k", "4")
    assert "status budget-exhausted" in out
    _, out, _ = run_cli(
        capsys, "saturate", "--family", "unit-chain", "--k", "4", "--max-steps", "1000"
    )
    assert "status saturated" in out
    monkeypatch.setenv("TREESAT_MAX_STEPS", "lots")
    code, _, err = run_cli(capsys, "saturate", "--family", "unit-chain", "--k", "4")
    assert code == 2 and "TREESAT_MAX_STEPS" in err


def test_max_width_flag_limits_resolvents(capsys):
    code, out, _ = run_cli(
        capsys, "saturate", "--family", "unit-chain", "--k", "4", "--max-width", "1"
    )
    assert code == 0
    assert "original 4 derived 0" in out
    assert "over-width" in out and "over-width 0" not in out


def test_analyze_paths(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--paths", "--k", "3")
    assert code == 0 and out == "1 3 3 1 total 8\n"
    # Depths beyond the enumeration cap switch to the closed form.
    code, out, _ = run_cli(capsys, "analyze", "--paths", "--k", "30")
    assert code == 0
    assert out.startswith("1 30 435 ") and out.endswith("total 1073741824\n")


def test_analyze_paths_matches_spec_row(capsys):
    # A depth-3 tree has one path to each outer row and three to each
    # inner row of the boundary; the total is every selection sequence.
    _, out, _ = run_cli(capsys, "analyze", "--paths", "--k", "3")
    rows = out.split()
    assert rows[:4] == ["1", "3", "3", "1"]


def test_analyze_vars_and_depths(capsys):
    assert run_cli(capsys, "analyze", "--vars", "--k", "5")[1] == "21\n"
    assert run_cli(capsys, "analyze", "--vars", "--k", "5", "--tree", "binary")[1] == "63\n"
    assert run_cli(capsys, "analyze", "--depth-for", "21")[1] == "5\n"
    assert run_cli(capsys, "analyze", "--depth-for", "63", "--tree", "binary")[1] == "5\n"


def test_analyze_combinations(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--combinations", "3", "4")
    assert code == 0 and out == "81\n"


def test_analyze_requires_exactly_one_action(capsys):
    code, _, err = run_cli(capsys, "analyze")
    assert code == 2 and "exactly one" in err
    code, _, err = run_cli(capsys, "analyze", "--paths", "--vars", "--k", "3")
    assert code == 2
    code, _, err = run_cli(capsys, "analyze", "--paths")
    assert code == 2 and "--k is required" in err


def test_verify_only_named_check(capsys):
    code, out, _ = run_cli(capsys, "verify", "--only", "unit-chain-dominance")
    assert code == 0
    assert out.startswith("[pass] unit-chain-dominance")
    assert "1 checks, 1 passed, 0 failed" in out


def test_verify_rejects_unknown_check_names(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--only", "nonsense"])
    capsys.readouterr()


def test_bench_writes_csv_and_svg(capsys, tmp_path):
    csv_path = tmp_path / "out.csv"
    svg_path = tmp_path / "out.svg"
    code, out, _ = run_cli(
        capsys,
        "bench", "--family", "unit-chain", "--k-min", "2", "--k-max", "4",
        "--repetitions", "1", "--csv", str(csv_path), "--svg", str(svg_path),
    )
    assert code == 0
    assert "family unit-chain: k 2..4, 3 runs" in out
    assert "derived clauses ~" in out
    assert len(csv_path.read_text().splitlines()) == 4
    assert svg_path.read_text().startswith("<svg ")
    leftovers = [p for p in os.listdir(tmp_path) if p.startswith(".treesat-")]
    assert leftovers == []


def test_output_failure_keeps_no_partial_file(capsys, tmp_path):
    target = tmp_path / "no-such-dir" / "x.cnf"
    code, _, err = run_cli(
        capsys, "generate", "--family", "unit-chain", "--k", "3", "--out", str(target)
    )
    assert code == 1
    assert not target.exists()


def test_missing_subcommand_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2
    capsys.readouterr()


def test_generate_matches_library_output_for_tree_specs(capsys):
    _, out, _ = run_cli(
        capsys,
        "generate", "--family", "binomial", "--k", "3",
        "--sub", "s4.2=z0", "--sub", "s4.4=~z0",
    )
    spec = TreeSpec(
        k=3,
        substitutions=(
            (SlotVar(4, 2), NamedLit(FreshVar(0))),
            (SlotVar(4, 4), NamedLit(FreshVar(0), negated=True)),
        ),
    )
    assert out == write_dimacs(build_binomial_tree(spec))
    assert "c meta substitutions s4.2=z0;s4.4=~z0" in out


def test_solve_round_trips_generated_files(capsys, tmp_path):
    path = tmp_path / "tree.cnf"
    code, _, _ = run_cli(
        capsys, "generate", "--family", "binomial", "--k", "4", "--out", str(path)
    )
    assert code == 0
    code, out, _ = run_cli(capsys, "solve", "--in", str(path))
    assert code == 10 and out == "sat\n"
