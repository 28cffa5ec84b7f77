import argparse
import json
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from campaignlogic.cli import _load_formula, main
from campaignlogic.evaluation import utility
from campaignlogic.formula import parse_theory
from campaignlogic.voters import format_rational, loads_voters

import oracles

FIX = Path(__file__).parent / "fixtures"
THEORY = str(FIX / "sample_theory.txt")
VOTERS = str(FIX / "sample_voters.json")


def load_formula(path):
    phi, universe, _ = _load_formula(argparse.Namespace(formula=str(path)))
    return phi, universe


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_voters(tmp_path, voters, variables=None, name="voters.json"):
    data = {"voters": voters}
    if variables:
        data["variables"] = variables
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


class TestEval:
    def test_golden(self, capsys):
        code, out, _ = run(capsys, "eval", "--theory", THEORY, "--voters", VOTERS)
        assert code == 0
        assert out == (FIX / "sample_eval.golden").read_text()

    def test_golden_matches_oracle(self):
        voters, universe = loads_voters(Path(VOTERS).read_text())
        t = parse_theory(Path(THEORY).read_text(), universe)
        worlds = oracles.models(t.statements, universe.n)
        lines = (FIX / "sample_eval.golden").read_text().splitlines()
        for v, line in zip(voters, lines):
            vid, kind, value = line.split()[:3]
            assert (vid, kind) == (v.id, v.kind.value)
            assert F(value) == oracles.ut(kind, oracles.prefs_of(v, universe), worlds)

    def test_matches_library(self, capsys):
        voters, universe = loads_voters(Path(VOTERS).read_text())
        t = parse_theory(Path(THEORY).read_text(), universe)
        _, out, _ = run(capsys, "eval", "--theory", THEORY, "--voters", VOTERS, "--machine")
        for v in voters:
            assert f"{v.id}.value={format_rational(utility(t, v).value)}" in out.splitlines()

    def test_empty_theory_expected_voter(self, capsys, tmp_path):
        theory = tmp_path / "empty.txt"
        theory.write_text("# nothing said yet\n")
        voters = write_voters(tmp_path, [{"id": "v1", "kind": "expected", "prefs": {"x1": "1/2"}}])
        code, out, _ = run(capsys, "eval", "--theory", theory, "--voters", voters)
        assert code == 0 and out == "v1 expected 0\n"

    def test_complete_theory_all_kinds_equal(self, capsys, tmp_path):
        theory = tmp_path / "t.txt"
        theory.write_text("x1\n!x2\n")
        prefs = {"x1": "1/3", "x2": "1/2"}
        voters = write_voters(tmp_path, [{"id": k[0], "kind": k, "prefs": prefs}
                                         for k in ("optimistic", "pessimistic", "expected")])
        _, out, _ = run(capsys, "eval", "--theory", theory, "--voters", voters)
        assert {line.split()[2] for line in out.splitlines()} == {"-1/6"}

    def test_voter_id_filter(self, capsys):
        _, out, _ = run(capsys, "eval", "--theory", THEORY, "--voters", VOTERS, "--voter-id", "bob")
        assert out.startswith("bob pessimistic")
        code, _, err = run(capsys, "eval", "--theory", THEORY, "--voters", VOTERS, "--voter-id", "zed")
        assert code == 1 and "zed" in err

    def test_universe_from_theory_and_prefs(self, capsys, tmp_path):
        theory = tmp_path / "t.txt"
        theory.write_text("a | b\n")
        voters = write_voters(tmp_path, [{"id": "v", "kind": "optimistic", "prefs": {"c": "1"}}])
        _, out, _ = run(capsys, "eval", "--theory", theory, "--voters", voters)
        assert out == "v optimistic 1 !a&b&c\n"

    @pytest.mark.parametrize("theory_text,message", [("x1\n!x1\n", "no models"), ("x1 &\n", "line 1"),
                                                     ("zz\n", "unknown variable")])
    def test_errors_exit_one(self, capsys, tmp_path, theory_text, message):
        theory = tmp_path / "t.txt"
        theory.write_text(theory_text)
        voters = write_voters(tmp_path, [{"id": "v", "kind": "optimistic", "prefs": {"x1": "1"}}], ["x1"])
        code, out, err = run(capsys, "eval", "--theory", theory, "--voters", voters)
        assert code == 1 and out == "" and message in err

    def test_variable_limit(self, capsys, tmp_path):
        theory = tmp_path / "t.txt"
        theory.write_text("x1 | x2 | x3\n")
        voters = write_voters(tmp_path, [{"id": "v", "kind": "optimistic", "prefs": {"x1": "1"}}])
        code, _, err = run(capsys, "eval", "--theory", theory, "--voters", voters, "--nmax", "2")
        assert code == 1 and "limit" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "eval", "--theory", "/nonexistent", "--voters", VOTERS)
        assert code == 1 and "cannot read" in err


class TestOptimize:
    def test_aggregate(self, capsys, tmp_path):
        voters = write_voters(tmp_path, [{"id": "a", "kind": "expected", "prefs": {"x1": "1"}},
                                         {"id": "b", "kind": "expected", "prefs": {"x1": "-1/2"}}])
        _, out, _ = run(capsys, "optimize", "--voters", voters)
        assert out == "x1\n# total 1/2\n"

    def test_tie_and_machine(self, capsys, tmp_path):
        voters = write_voters(tmp_path, [{"id": "a", "kind": "pessimistic", "prefs": {"x1": "1", "x2": "-1"}},
                                         {"id": "b", "kind": "pessimistic", "prefs": {"x1": "-1"}}])
        _, out, _ = run(capsys, "optimize", "--voters", voters, "--kind", "pessimistic", "--machine")
        assert out == "statement=x1\nstatement=!x2\ntotal=1\n"

    def test_output_is_a_theory_file(self, capsys, tmp_path):
        voters = write_voters(tmp_path, [{"id": "a", "kind": "expected", "prefs": {"x1": "1/2", "x2": "-1"}}])
        _, out, _ = run(capsys, "optimize", "--voters", voters)
        t = parse_theory(out)
        assert [str(s) for s in t.statements] and len(t) == 2

    def test_mixed_kinds_need_kind(self, capsys):
        code, _, err = run(capsys, "optimize", "--voters", VOTERS)
        assert code == 1 and "--kind" in err


class TestComplete:
    def test_constrained(self, capsys, tmp_path):
        theory = tmp_path / "t.txt"
        theory.write_text("!x1\n")
        voters = write_voters(tmp_path, [{"id": "a", "kind": "expected", "prefs": {"x1": "1", "x2": "1/2"}}])
        _, out, _ = run(capsys, "complete", "--theory", theory, "--voters", voters)
        assert out == "!x1\n!x1 & x2\n# total -1/2\n"


class TestTurnout:
    def test_optimistic(self, capsys, tmp_path):
        voters = write_voters(tmp_path, [{"id": "a", "kind": "optimistic", "prefs": {"x1": "1/2"}, "threshold": "1"}])
        _, out, _ = run(capsys, "turnout", "--voters", voters, "--h", 1)
        assert out.splitlines()[:2] == ["NO", "# best.a 1/2"]
        _, out, _ = run(capsys, "turnout", "--voters", voters, "--h", 0)
        assert out.splitlines()[0] == "YES"

    def test_pessimistic(self, capsys, tmp_path):
        voters = write_voters(tmp_path, [
            {"id": "a", "kind": "pessimistic", "prefs": {"x1": "1"}, "threshold": "1"},
            {"id": "b", "kind": "pessimistic", "prefs": {"x1": "-1"}, "threshold": "1"}])
        _, out, _ = run(capsys, "turnout", "--voters", voters, "--h", 2, "--machine")
        assert out == "decision=NO\n"
        _, out, _ = run(capsys, "turnout", "--voters", voters, "--h", 1, "--machine")
        assert out == "decision=YES\nsatisfied=b\nstatement=!x1\n"

    def test_mixed(self, capsys, tmp_path):
        voters = write_voters(tmp_path, [
            {"id": "o1", "kind": "optimistic", "prefs": {"x1": "1"}, "threshold": "1"},
            {"id": "o2", "kind": "optimistic", "prefs": {"x1": "-1"}, "threshold": "1"},
            {"id": "p", "kind": "pessimistic", "prefs": {"x2": "1"}, "threshold": "1"}])
        _, out, _ = run(capsys, "turnout", "--voters", voters, "--h", 3)
        assert out == "YES\n# satisfied o1,o2,p\n!x1 & x2 | x1 & x2\n"

    def test_requires_h(self, capsys):
        code, _, err = run(capsys, "turnout", "--voters", VOTERS)
        assert code == 1 and "--h" in err


class TestCount:
    @pytest.mark.parametrize("via", ["enumerate", "utility"])
    @pytest.mark.parametrize("name", ["sample.cnf", "sample_formula.txt"])
    def test_methods_agree_with_oracle(self, capsys, via, name):
        phi, universe = load_formula(FIX / name)
        _, out, _ = run(capsys, "count", "--formula", FIX / name, "--via", via)
        assert int(out) == oracles.sat_count(phi, universe.n)

    def test_unsatisfiable(self, capsys, tmp_path):
        path = tmp_path / "f.txt"
        path.write_text("a\n!a\n")
        for via in ("enumerate", "utility"):
            _, out, _ = run(capsys, "count", "--formula", path, "--via", via, "--machine")
            assert out == "count=0\n"


class TestReduce:
    def test_sat_round_trip(self, capsys, tmp_path):
        for text, sat in (("a | b\n!a\n", True), ("a\n!a\n", False)):
            src = tmp_path / "phi.txt"
            src.write_text(text)
            run(capsys, "reduce", "sat-optimistic", "--formula", src, "--out", tmp_path / "o")
            _, out, _ = run(capsys, "eval", "--theory", tmp_path / "o" / "theory.txt",
                            "--voters", tmp_path / "o" / "voters.json")
            assert (F(out.split()[2]) >= 1) == sat

    def test_unsat_round_trip(self, capsys, tmp_path):
        src = tmp_path / "phi.txt"
        src.write_text("a & !a\n")
        _, out, _ = run(capsys, "reduce", "unsat-pessimistic", "--formula", src, "--out", tmp_path)
        assert "# threshold 1" in out
        _, out, _ = run(capsys, "eval", "--theory", tmp_path / "theory.txt", "--voters", tmp_path / "voters.json")
        assert out.split()[2] == "1"

    def test_count_round_trip(self, capsys, tmp_path):
        run(capsys, "reduce", "count", "--formula", FIX / "sample_formula.txt", "--out", tmp_path)
        vals = []
        for name in ("psi.txt", "psi_prime.txt"):
            _, out, _ = run(capsys, "eval", "--theory", tmp_path / name, "--voters", tmp_path / "voters.json")
            vals.append(F(out.split()[2]))
        _, out, _ = run(capsys, "count", "--formula", FIX / "sample_formula.txt")
        assert 1 / (vals[0] / vals[1] - 1) == int(out)

    def test_wsat_round_trip(self, capsys, tmp_path):
        _, out, _ = run(capsys, "reduce", "wsat", "--formula", FIX / "sample_formula.txt", "--out", tmp_path,
                        "--weights", "a=2,b=1/2,c=3", "--direction", "max")
        assert "W = (u * 3 + 11/2) / 2" in out
        _, out, _ = run(capsys, "eval", "--theory", tmp_path / "theory.txt", "--voters", tmp_path / "voters.json")
        u = F(out.split()[2])
        phi, _ = load_formula(FIX / "sample_formula.txt")
        assert (u * 3 + F(11, 2)) / 2 == oracles.wsat_optimum(phi, 3, [2, F(1, 2), 3], "max")

    def test_wsat_needs_weights(self, capsys, tmp_path):
        code, _, err = run(capsys, "reduce", "wsat", "--formula", FIX / "sample_formula.txt", "--out", tmp_path,
                           "--weights", "a=1")
        assert code == 1 and "missing" in err

    def test_cnf_turnout_round_trip(self, capsys, tmp_path):
        _, out, _ = run(capsys, "reduce", "cnf-turnout", "--formula", FIX / "sample.cnf", "--out", tmp_path)
        assert "# h 5" in out
        _, out, _ = run(capsys, "turnout", "--voters", tmp_path / "voters.json", "--h", 5)
        assert out.startswith("YES")

    def test_cnf_turnout_rejects_non_cnf(self, capsys, tmp_path):
        src = tmp_path / "phi.txt"
        src.write_text("a -> b\n")
        code, _, err = run(capsys, "reduce", "cnf-turnout", "--formula", src, "--out", tmp_path)
        assert code == 1


def test_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "campaignlogic", "eval", "--theory", THEORY, "--voters", VOTERS],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == (FIX / "sample_eval.golden").read_text()
