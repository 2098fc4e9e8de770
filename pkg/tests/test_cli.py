"""Command-line behaviour: payloads, exit codes, determinism."""

import json

import pytest

from forestsolve import cli, system_to_json
from forestsolve.linsys import dump_system

from conftest import CRN_TEXT


@pytest.fixture
def system_file(tmp_path, three_var_system):
    path = tmp_path / "system.json"
    path.write_text(dump_system(three_var_system))
    return str(path)


@pytest.fixture
def block_file(tmp_path, block_three_system):
    system, blocks = block_three_system
    data = system_to_json(system)
    data["blocks"] = {"sizes": list(blocks.sizes), "m0": blocks.m0, "j": list(blocks.j)}
    path = tmp_path / "block.json"
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def mmatrix_file(tmp_path, mmatrix_system):
    path = tmp_path / "mmatrix.json"
    path.write_text(dump_system(mmatrix_system))
    return str(path)


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolve:
    def test_json_output(self, capsys, system_file):
        code, out, _ = run(capsys, ["solve", "--input", system_file])
        assert code == 0
        payload = json.loads(out)
        assert payload["solution"][0] == "(z5)/(z1 + 2*z2)"

    def test_oracle_flag(self, capsys, system_file):
        code, out, _ = run(capsys, ["solve", "--input", system_file, "--oracle"])
        assert code == 0
        assert json.loads(out)["oracle_agrees"] is True

    def test_text_format(self, capsys, system_file):
        code, out, _ = run(
            capsys, ["solve", "--input", system_file, "--format", "text"]
        )
        assert code == 0
        assert out.splitlines()[0] == "x1 = (z5)/(z1 + 2*z2)"

    def test_deterministic_output(self, capsys, system_file):
        _, first, _ = run(capsys, ["solve", "--input", system_file])
        _, second, _ = run(capsys, ["solve", "--input", system_file])
        assert first == second

    def test_permute_rows_changes_system(self, capsys, system_file):
        code, out, _ = run(
            capsys,
            ["solve", "--input", system_file, "--permute-rows", "2,1,3", "--oracle"],
        )
        assert code == 0
        assert json.loads(out)["oracle_agrees"] is True


class TestCertify:
    def test_certified_payload(self, capsys, system_file):
        code, out, _ = run(capsys, ["certify", "--input", system_file])
        assert code == 0
        payload = json.loads(out)
        assert payload["certified"] is True
        assert sorted(payload["witness"]["group_sums"].values()) == ["0", "z2"]
        assert payload["witness"]["mu"]

    def test_no_witness_exit_code(self, capsys, mmatrix_file):
        code, out, _ = run(capsys, ["certify", "--input", mmatrix_file])
        assert code == 1
        assert json.loads(out)["certified"] is False

    def test_dot_output(self, capsys, system_file):
        code, out, _ = run(
            capsys, ["certify", "--input", system_file, "--format", "dot"]
        )
        assert code == 0
        assert out.startswith("digraph G {")


class TestBlockCommands:
    def test_block_solve(self, capsys, block_file):
        code, out, _ = run(capsys, ["block-solve", "--input", block_file, "--oracle"])
        assert code == 0
        payload = json.loads(out)
        assert payload["oracle_agrees"] is True

    def test_block_certify(self, capsys, block_file):
        code, out, _ = run(capsys, ["block-certify", "--input", block_file])
        assert code == 0
        payload = json.loads(out)
        assert payload["certified"] is True
        assert payload["zero_components"] == []

    def test_blocks_default_to_proposal(self, capsys, tmp_path, block_three_system):
        system, _ = block_three_system
        path = tmp_path / "noblocks.json"
        path.write_text(dump_system(system))
        code, out, _ = run(capsys, ["block-certify", "--input", str(path)])
        assert code == 0
        assert json.loads(out)["certified"] is True


class TestMttCheck:
    def test_clean_run(self, capsys):
        code, out, _ = run(capsys, ["mtt-check", "--random", "5", "--seed", "3"])
        assert code == 0
        payload = json.loads(out)
        assert payload["mismatches"] == []
        assert payload["checked"] > 0

    def test_single_node_graphs(self, capsys):
        code, out, _ = run(
            capsys, ["mtt-check", "--random", "3", "--seed", "1", "--nodes", "1"]
        )
        assert code == 0
        assert json.loads(out)["mismatches"] == []

    def test_fixed_seed_reruns_identically(self, capsys):
        argv = ["mtt-check", "--random", "4", "--seed", "9"]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second


class TestCrnParam:
    def test_end_to_end(self, capsys, tmp_path):
        net_file = tmp_path / "net.txt"
        net_file.write_text(CRN_TEXT)
        code, out, _ = run(
            capsys,
            [
                "crn-param",
                "--input", str(net_file),
                "--solve-for", "x1,x2,x3,x4,x6",
                "--parameters", "x5",
                "--conserve", "1:T1:4",
                "--drop", "5",
            ],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["certified"] is True
        assert set(payload["solution"]) == {"x1", "x2", "x3", "x4", "x6"}
        assert payload["zero_components"] == []


class TestGraphDot:
    def test_graph_json_input(self, capsys, tmp_path):
        path = tmp_path / "graph.json"
        path.write_text(
            json.dumps(
                {"nodes": 2, "edges": [{"src": 1, "tgt": 2, "label": "z1"}]}
            )
        )
        code, out, _ = run(capsys, ["graph-dot", "--input", str(path)])
        assert code == 0
        assert '1 -> 2 [label="z1"];' in out

    def test_system_json_input(self, capsys, system_file):
        code, out, _ = run(capsys, ["graph-dot", "--input", system_file])
        assert code == 0
        assert "doublecircle" in out


class TestErrors:
    def test_bad_json(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, err = run(capsys, ["certify", "--input", str(path)])
        assert code == 2
        assert "input error" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, ["solve", "--input", "/nonexistent.json"])
        assert code == 2

    def test_bad_poly_string(self, capsys, tmp_path):
        path = tmp_path / "badpoly.json"
        path.write_text(
            json.dumps({"variables": ["x1"], "A": [["z1 &"]], "b": ["0"]})
        )
        code, _, _ = run(capsys, ["solve", "--input", str(path)])
        assert code == 2

    def test_output_file(self, capsys, tmp_path, system_file):
        out_path = tmp_path / "result.json"
        code, out, _ = run(
            capsys, ["solve", "--input", system_file, "--output", str(out_path)]
        )
        assert code == 0
        assert out == ""
        assert json.loads(out_path.read_text())["solution"]
