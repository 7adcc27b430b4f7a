import json
import math
import os
import subprocess
import sys

import pytest

from latcal.cli import BRIDGE_DOCUMENT, main

NO_JOIN = "elements: a b c d e f\na < c\na < d\nb < c\nb < d\nc < e\nc < f\nd < e\nd < f\n"
B2 = "elements: 0 a b 1\n0 < a\n0 < b\na < 1\nb < 1\n"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    doc = json.loads(out) if out.strip().startswith("{") else None
    return code, doc, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text if isinstance(text, str) else json.dumps(text))
        return path

    return write


class TestCheck:
    def test_bridge_components(self, capsys, files):
        # L and R have no common lower bound
        code, doc, _, _ = run(capsys, "check", files("b.poset", BRIDGE_DOCUMENT))
        assert code == 1
        assert doc["lattice"]["classification"] == "mixed"
        w = doc["lattice"]["failureWitness"]
        assert w["kind"] == "meet" and w["pair"] == ["L", "R"] and w["bounds"] == []

    def test_bridge_states(self, capsys, files):
        text = "elements: {} {L} {R} {L,R} {L,R,S}\n{} < {L}\n{} < {R}\n{L} < {L,R}\n{R} < {L,R}\n{L,R} < {L,R,S}\n"
        code, doc, _, _ = run(capsys, "check", files("s.poset", text))
        assert code == 0 and doc["lattice"]["classification"] == "mixed"
        assert doc["lattice"]["bottom"] == "{}" and doc["lattice"]["top"] == "{L,R,S}"

    def test_missing_join_rejected(self, capsys, files, tmp_path):
        dot = tmp_path / "h.dot"
        code, doc, _, _ = run(capsys, "check", files("f.poset", NO_JOIN), "--dot", dot)
        assert code == 1
        w = doc["lattice"]["failureWitness"]
        assert w["pair"] == ["a", "b"] and w["kind"] == "join" and w["bounds"] == ["c", "d"]
        assert dot.read_text().startswith("digraph")

    def test_b2_ok_and_text(self, capsys, files):
        code, doc, _, _ = run(capsys, "check", files("b2.poset", B2))
        assert code == 0 and doc["lattice"]["isDistributive"] and doc["lattice"]["top"] == "1"
        code, _, out, _ = run(capsys, "check", files("b2.poset", B2), "--format", "text")
        assert code == 0 and "distributive: True" in out

    def test_empty_file(self, capsys, files):
        code, _, _, err = run(capsys, "check", files("e.poset", ""))
        assert code == 2 and "parse error" in err

    def test_cycle_and_missing_file(self, capsys, files, tmp_path):
        code, _, _, err = run(capsys, "check", files("c.poset", "elements: a b\na < b\nb < a\n"))
        assert code == 2 and "cycle" in err
        code, _, _, _ = run(capsys, "check", tmp_path / "nope.poset")
        assert code == 2

    def test_output_file_is_deterministic(self, capsys, files, tmp_path):
        src = files("b2.poset", B2)
        run(capsys, "check", src, "-o", tmp_path / "1.json")
        run(capsys, "check", src, "-o", tmp_path / "2.json")
        assert (tmp_path / "1.json").read_bytes() == (tmp_path / "2.json").read_bytes()


class TestBuild:
    def test_questions_four_states(self, capsys):
        code, doc, _, _ = run(capsys, "build", "questions", "--states", 4)
        assert code == 0
        assert doc["results"]["elementCount"] == 167 and doc["results"]["statementCount"] == 16

    def test_questions_from_components(self, capsys, files):
        code, doc, _, _ = run(capsys, "build", "questions", "--components", files("b.poset", BRIDGE_DOCUMENT))
        assert code == 0 and doc["results"]["elementCount"] == 167 and doc["results"]["stateCount"] == 4

    def test_powerset(self, capsys):
        code, doc, _, _ = run(capsys, "build", "powerset", 4)
        assert code == 0 and doc["results"]["elementCount"] == 16
        assert doc["lattice"]["classification"] == "mixed" and doc["lattice"]["isDistributive"]

    def test_partition(self, capsys):
        code, doc, _, _ = run(capsys, "build", "partition", 3)
        assert code == 0 and doc["results"]["elementCount"] == 5
        assert doc["lattice"]["isLattice"] and not doc["lattice"]["isDistributive"]
        assert len(doc["lattice"]["distributivityWitness"]) == 3

    def test_downsets(self, capsys, files, tmp_path):
        out = tmp_path / "states.poset"
        src = files("b.poset", BRIDGE_DOCUMENT)
        code, doc, _, _ = run(capsys, "build", "downsets", src, "--include-empty", "--poset-out", out)
        assert code == 0 and doc["results"]["elementCount"] == 5 and doc["lattice"]["isDistributive"]
        code, doc, _, _ = run(capsys, "check", out)
        assert code == 0 and doc["lattice"]["elementCount"] == 5
        assert doc["lattice"]["classification"] == "mixed"
        code, doc, _, _ = run(capsys, "build", "downsets", src)
        assert code == 0 and doc["results"]["elementCount"] == 4 and not doc["lattice"]["isLattice"]

    def test_product(self, capsys, files):
        b1 = files("b1.poset", "elements: 0 1\n0 < 1\n")
        code, doc, _, _ = run(capsys, "build", "product", b1, b1)
        assert code == 0 and doc["results"]["elementCount"] == 4
        code, _, _, _ = run(capsys, "build", "product", b1, files("f.poset", NO_JOIN))
        assert code == 4

    def test_divisor_and_seed(self, capsys, tmp_path):
        seed = tmp_path / "seed.json"
        code, doc, _, _ = run(capsys, "build", "divisor", 360, "--seed-out", seed)
        assert code == 0 and doc["results"]["elementCount"] == 24
        assert doc["results"]["joinIrreducibles"] == ["2", "3", "4", "5", "8", "9"]
        assert json.loads(seed.read_text())["8"] == math.log(8)

    def test_size_limit(self, capsys):
        code, _, _, err = run(capsys, "build", "powerset", 5, "--max-elements", 10)
        assert code == 3 and "size limit" in err

    def test_bad_arguments(self, capsys):
        assert run(capsys, "build", "partition", "x")[0] == 2
        assert run(capsys, "build", "divisor", 1)[0] == 2
        assert run(capsys, "build", "powerset")[0] == 2


class TestValuate:
    @pytest.fixture
    def divisor_files(self, capsys, tmp_path):
        poset, seed = tmp_path / "d.poset", tmp_path / "s.json"
        run(capsys, "build", "divisor", 360, "--poset-out", poset, "--seed-out", seed)
        return poset, seed

    def test_divisor_all_checks(self, capsys, divisor_files):
        poset, seed = divisor_files
        code, doc, _, _ = run(capsys, "valuate", poset, seed, "--check", "sum,monotone,chain,context-product,contextual-sum,bayes")
        assert code == 0
        assert all(r["passed"] for r in doc["reports"]) and len(doc["reports"]) == 6
        assert abs(doc["valuation"]["values"]["12"] - math.log(12)) < 1e-12

    def test_hand_b2_fails(self, capsys, files):
        seed = files("s.json", {"0": 0, "a": 1, "b": 1, "1": 1})
        code, doc, _, _ = run(capsys, "valuate", files("b2.poset", B2), seed, "--hand")
        assert code == 5
        r = doc["reports"][0]
        assert r["rule"] == "sum" and not r["passed"] and sorted(r["witness"]) == ["a", "b"]
        assert r["maxResidual"] == 1.0

    def test_bridge_powerset_context(self, capsys, files, tmp_path):
        poset = tmp_path / "p.poset"
        run(capsys, "build", "powerset", "--components", files("b.poset", BRIDGE_DOCUMENT), "--poset-out", poset)
        code, doc, _, _ = run(capsys, "build", "powerset", "--components", tmp_path / "b.poset")
        states = doc["results"]["states"]
        seed = files("s.json", {f"{{{s}}}": 0.25 for s in states})
        code, doc, _, _ = run(capsys, "valuate", poset, seed, "--context", "top")
        assert code == 0
        cond = doc["valuation"]["conditional"]
        assert len(cond["values"]) == 16
        for label, w in cond["values"].items():
            size = 0 if label == "{}" else label.count("{") - 1
            assert w == pytest.approx(size / 4, abs=1e-15)

    def test_preconditions(self, capsys, files):
        b2 = files("b2.poset", B2)
        assert run(capsys, "valuate", files("f.poset", NO_JOIN), files("s.json", {}))[0] == 4
        assert run(capsys, "valuate", b2, files("m.json", {"a": 1.0}))[0] == 4
        assert run(capsys, "valuate", b2, files("x.json", {"a": 1, "b": 1, "1": 2}))[0] == 4
        part = files("p.poset", "elements: 0 x y z 1\n0 < x\n0 < y\n0 < z\nx < 1\ny < 1\nz < 1\n")
        assert run(capsys, "valuate", part, files("s.json", {"x": 1, "y": 1, "z": 1}))[0] == 4

    def test_seed_parse_errors(self, capsys, files):
        b2 = files("b2.poset", B2)
        assert run(capsys, "valuate", b2, files("bad.json", "{nope"))[0] == 2
        assert run(capsys, "valuate", b2, files("list.json", [1, 2]))[0] == 2
        assert run(capsys, "valuate", b2, files("str.json", {"a": "1"}))[0] == 2
        assert run(capsys, "valuate", b2, files("ok.json", {"a": 1, "b": 1}), "--check", "sum,bogus")[0] == 2


class TestDemo:
    def test_bridge(self, capsys):
        code, doc, _, _ = run(capsys, "demo", "bridge")
        assert code == 0
        r = doc["results"]
        assert (r["stateCount"], r["statementCount"], r["questionCount"]) == (4, 16, 167)
        assert r["downsetsIncludingEmpty"] == 5

    def test_divisor(self, capsys):
        code, doc, _, _ = run(capsys, "demo", "divisor")
        assert code == 0
        r = doc["results"]
        assert r["d(2|4)"] == pytest.approx(0.5, abs=1e-12) and r["d(360|1)"] == 1.0
        assert abs(r["v(12)"] - r["log 4 + log 6 - log 2"]) < 1e-12

    def test_partition_text(self, capsys):
        code, _, out, _ = run(capsys, "demo", "partition", "--format", "text")
        assert code == 0 and "distributive: False" in out and "distributivity fails at" in out

    def test_unknown(self, capsys):
        code, _, _, err = run(capsys, "demo", "nope")
        assert code == 4 and "unknown demo" in err

    def test_byte_identical_runs(self, capsys):
        first = run(capsys, "demo", "divisor")[2]
        assert run(capsys, "demo", "divisor")[2] == first


def test_console_script_and_backends(tmp_path):
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, LATCAL_DISABLE_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, "-m", "latcal.cli", "demo", "divisor"], capture_output=True, text=True, env=env, check=False
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(proc.stdout)
    assert outs[0] == outs[1]
