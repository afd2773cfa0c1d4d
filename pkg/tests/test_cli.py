import pytest
from click.testing import CliRunner

from matroid_circuits.cli import cli

C4_TREE = "(2sum (graphic K3 a b d) (graphic K3 d c e) glue=d)"

K3_TEXT = """\
matroid K3 rank=2 n=3
graph:
a 1 2
b 1 3
c 2 3
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def k3_file(tmp_path):
    path = tmp_path / "k3.mtx"
    path.write_text(K3_TEXT, encoding="utf-8")
    return path


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestSynth:
    def test_inline_tree(self, runner):
        result = runner.invoke(cli, ["synth", "--tree", C4_TREE])
        assert result.exit_code == 0, result.output
        assert "output g" in result.stdout
        assert "# size=9 bound=64" in result.stdout

    def test_tree_file_and_eval(self, runner, tmp_path):
        tree = write(tmp_path, "c4.tree", C4_TREE + "\n")
        out = tmp_path / "c4.circ"
        result = runner.invoke(cli, ["synth", "--tree", tree, "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert result.stdout.splitlines()[0] == "size=9 bound=64"

        point = write(tmp_path, "p.txt", "a 1\nb 1\nc 2\ne 3\n")
        result = runner.invoke(cli, ["eval", str(out), point])
        assert result.exit_code == 0, result.output
        assert result.stdout.strip() == "17"

    def test_graph_matroid(self, runner, k3_file, tmp_path):
        out = tmp_path / "k3.circ"
        result = runner.invoke(cli, ["synth", "--matroid", str(k3_file), "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert result.stdout.splitlines()[0] == "size=5 bound=13"

    def test_auto(self, runner, tmp_path):
        bases = write(tmp_path, "u.mtx", "matroid T rank=2 n=3\nbases:\na b\na c\nb c\n")
        result = runner.invoke(cli, ["synth", "--matroid", bases, "--auto"])
        assert result.exit_code == 0, result.output
        assert "# size=" in result.stdout

    @pytest.mark.parametrize(
        "args",
        [["synth"], ["synth", "--tree", C4_TREE, "--auto"]],
    )
    def test_usage(self, runner, args):
        assert runner.invoke(cli, args).exit_code == 2

    def test_bad_interface(self, runner):
        result = runner.invoke(cli, ["synth", "--tree", "(1sum (graphic K3 a b c) (graphic K3 c d e))"])
        assert result.exit_code == 1
        assert "BadInterface: OneSum: children share ['c']" in result.stderr

    def test_parse_error(self, runner):
        result = runner.invoke(cli, ["synth", "--tree", "(2sum (graphic K3) (graphic K3))"])
        assert result.exit_code == 2
        assert "line 1: 2sum needs glue=<label>" in result.stderr


class TestTropical:
    @pytest.fixture
    def k3_circuit(self, runner, k3_file, tmp_path):
        out = tmp_path / "k3.circ"
        assert runner.invoke(cli, ["synth", "--matroid", str(k3_file), "--out", str(out)]).exit_code == 0
        return str(out)

    def test_trop_eval(self, runner, k3_circuit, tmp_path):
        point = write(tmp_path, "w.txt", "a 5\nb 2\nc 1\n")
        result = runner.invoke(cli, ["trop-eval", k3_circuit, point])
        assert result.exit_code == 0, result.output
        assert result.stdout.strip() == "7"

    def test_relu_export(self, runner, k3_circuit, tmp_path):
        out = tmp_path / "k3.relu"
        result = runner.invoke(cli, ["relu-export", k3_circuit, "--tropicalize", "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert result.stdout.strip().endswith("bound=15")
        assert out.read_text(encoding="utf-8").splitlines()[-1].startswith("readout")

    def test_relu_export_needs_tropical(self, runner, k3_circuit):
        result = runner.invoke(cli, ["relu-export", k3_circuit])
        assert result.exit_code == 2
        assert "--tropicalize" in result.output

    def test_unassigned(self, runner, k3_circuit, tmp_path):
        point = write(tmp_path, "w.txt", "a 5\n")
        assert runner.invoke(cli, ["eval", k3_circuit, point]).exit_code == 2


class TestStatsAndGen:
    def test_circuit_stats(self, runner, tmp_path):
        path = write(tmp_path, "p.circ", "g0 = input x\ng1 = input y\ng2 = mul g0 g1\noutput g2\n")
        result = runner.invoke(cli, ["stats", path])
        assert result.stdout.strip() == "size=1 depth=1 variables=2 input=2 mul=1"

    def test_matroid_stats(self, runner, k3_file):
        result = runner.invoke(cli, ["stats", str(k3_file)])
        assert result.stdout.strip() == "n=3 rank=2 bases=3"

    def test_gen_r10(self, runner, tmp_path):
        result = runner.invoke(cli, ["gen", "r10", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "r10.mtx").read_text(encoding="utf-8").splitlines()
        assert lines[:3] == ["matroid R10 rank=5 n=10", "binary:", "1 0 0 0 0 1 0 0 1 1"]
        assert (tmp_path / "r10.tree").read_text(encoding="utf-8").startswith("(r10 ")

        stats = runner.invoke(cli, ["stats", str(tmp_path / "r10.mtx")])
        assert stats.stdout.strip() == "n=10 rank=5 bases=162"

    def test_gen_then_synth(self, runner, tmp_path):
        assert runner.invoke(cli, ["gen", "k4-dsum-k4", "--out", str(tmp_path)]).exit_code == 0
        result = runner.invoke(cli, ["synth", "--tree", str(tmp_path / "k4-dsum-k4.tree")])
        assert "# size=26 bound=216" in result.stdout

    def test_gen_unknown(self, runner, tmp_path):
        result = runner.invoke(cli, ["gen", "k9", "--out", str(tmp_path)])
        assert result.exit_code == 2
        assert "unknown fixture" in result.stderr


class TestVerify:
    def test_matrices(self, runner):
        result = runner.invoke(cli, ["verify", "matrices", "--seed", "5", "--trials", "3"])
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert all(line.startswith("PASS ") for line in lines[:-1])
        assert lines[-1] == f"checks={len(lines) - 1} failed=0"

    def test_unknown_suite(self, runner):
        assert runner.invoke(cli, ["verify", "nope"]).exit_code == 2

    def test_log_level(self, runner):
        result = runner.invoke(cli, ["--log-level", "debug", "verify", "structure", "--trials", "1"])
        assert result.exit_code == 0, result.output
