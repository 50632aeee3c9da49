"""Test the command line interface."""

import pytest
import json
from pathlib import Path
import sys

from click.testing import CliRunner

# Add src to path for testing
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from heatlog.cli import cli
from heatlog.core.exceptions import ConfigurationError

SAMPLES = Path(__file__).parent / "samples"


@pytest.fixture
def runner(monkeypatch):
    for name in ("HEATLOG_SEED", "HEATLOG_TOL", "HEATLOG_THREADS", "HEATLOG_FORMAT"):
        monkeypatch.delenv(name, raising=False)
    return CliRunner()


def _json(path: str) -> dict:
    with open(path) as f:
        return json.load(f)


class TestListChecks:
    """Test the list-checks command."""

    def test_lists_every_checker(self, runner):
        """Every registered checker is shown."""
        result = runner.invoke(cli, ["list-checks"])
        assert result.exit_code == 0
        for name in ("bd", "nlc", "walks", "gadget"):
            assert name in result.output


class TestMoments:
    """Test the moments command."""

    def test_csv_header(self, runner):
        """CSV output starts with a header row."""
        with runner.isolated_filesystem():
            args = ["--format", "csv", "--out", "m.csv", "moments", "--fixture", "path2"]
            result = runner.invoke(cli, args + ["--t-max", "4"])
            assert result.exit_code == 0, result.output
            lines = Path("m.csv").read_text().splitlines()
            assert lines[0] == "instance,t,m,log2_m"
            assert len(lines) == 6

    def test_json_from_files(self, runner):
        """Files feed the moment table and are replayable from the document."""
        with runner.isolated_filesystem():
            args = [
                "--out",
                "m.json",
                "moments",
                "--kernel",
                str(SAMPLES / "path4.json"),
                "--u",
                str(SAMPLES / "e0.json"),
                "--v",
                str(SAMPLES / "e4.json"),
                "--t-max",
                "4",
                "--exact",
            ]
            result = runner.invoke(cli, args)
            assert result.exit_code == 0, result.output
            document = _json("m.json")
            assert document["run"]["command"] == "moments"
            assert document["results"][4]["m_exact"] == "1/16"
            assert document["instances"][0]["descriptor"]["name"] == "path4"

    def test_spectral_cross_check(self, runner):
        """The eigendecomposition agrees with repeated multiplication."""
        with runner.isolated_filesystem():
            args = ["--out", "m.json", "moments", "--fixture", "complete", "--spectral"]
            result = runner.invoke(cli, args)
            assert result.exit_code == 0, result.output

    def test_missing_file(self, runner):
        """Unreadable input exits with 2."""
        result = runner.invoke(cli, ["moments", "--kernel", "missing.json"])
        assert result.exit_code == 2
        assert "File not found" in result.output

    def test_no_source(self, runner):
        """Exactly one source must be chosen."""
        result = runner.invoke(cli, ["moments"])
        assert result.exit_code == 2
        assert "Choose exactly one" in result.output


class TestCheck:
    """Test the check command."""

    def test_thread_count_does_not_change_output(self, runner):
        """JSON reports are byte-identical across worker counts."""
        base = ["check", "bd", "--random", "--trials", "4", "--size", "3", "--t-max", "4"]
        with runner.isolated_filesystem():
            single = runner.invoke(cli, ["--threads", "1", "--out", "a.json"] + base)
            pooled = runner.invoke(cli, ["--threads", "3", "--out", "b.json"] + base)
            assert single.exit_code == pooled.exit_code
            assert Path("a.json").read_text() == Path("b.json").read_text()
            assert "threads" not in _json("a.json")["run"]

    def test_unknown_lemma(self, runner):
        """Checker errors exit with 1."""
        args = ["check", "walks", "--fixture", "path2", "--lemma", "triangle"]
        result = runner.invoke(cli, args)
        assert result.exit_code == 1
        assert "Unknown lemma" in result.output

    def test_epsilon_out_of_range(self, runner):
        """Epsilon at or below 7/8 is a configuration error."""
        result = runner.invoke(cli, ["check", "nlc", "--fixture", "swap", "--epsilon", "0.5"])
        assert result.exit_code == 1
        assert "7/8" in result.output


class TestContinuous:
    """Test the continuous command."""

    def test_csv_header(self, runner):
        """The profile table has t, f, logf and residual columns."""
        with runner.isolated_filesystem():
            args = ["--format", "csv", "--out", "p.csv", "continuous", "--fixture", "swap-uniform"]
            result = runner.invoke(cli, args + ["--points", "4"])
            assert result.exit_code == 0, result.output
            lines = Path("p.csv").read_text().splitlines()
            assert lines[0] == "t,f,logf,residual"
            assert len(lines) == 5


class TestTightness:
    """Test the tightness command."""

    def test_violated(self, runner):
        """t = 10 and eta = 0.5 violate the strengthened bound."""
        with runner.isolated_filesystem():
            result = runner.invoke(cli, ["--out", "t.json", "tightness"])
            assert result.exit_code == 0, result.output
            report = _json("t.json")["results"][0]
            assert report["extras"]["violated"] is True
            assert report["extras"]["walk_count"] == 64


class TestHamming:
    """Test the hamming command group."""

    def test_padding(self, runner):
        """Coordinate 0 comes first in the padded strings."""
        with runner.isolated_filesystem():
            args = ["--out", "p.json", "hamming", "padding", "0000", "1100", "--k", "2"]
            result = runner.invoke(cli, args)
            assert result.exit_code == 0, result.output
            document = _json("p.json")["results"][0]
            assert document["second"] == ["000000", "110011"]
            assert "4" in document["decision_table"]

    def test_padding_rejects_bad_strings(self, runner):
        """A and B must be bit strings of equal length."""
        result = runner.invoke(cli, ["hamming", "padding", "01", "012", "--k", "2"])
        assert result.exit_code == 2

    def test_corruption(self, runner):
        """Exhaustive search on two bits passes."""
        with runner.isolated_filesystem():
            args = ["--out", "c.json", "hamming", "corruption", "--n", "2", "--k", "2"]
            result = runner.invoke(cli, args + ["--delta", "0.05"])
            assert result.exit_code == 0, result.output
            assert _json("c.json")["results"][0]["verdict"] == "pass"


class TestConfiguration:
    """Test environment configuration through the CLI."""

    def test_invalid_format(self, runner, monkeypatch):
        """Unknown output formats are rejected."""
        monkeypatch.setenv("HEATLOG_FORMAT", "xml")
        result = runner.invoke(cli, ["tightness"])
        assert result.exit_code == 1
        assert isinstance(result.exception, ConfigurationError)

    def test_seed_from_environment(self, runner, monkeypatch):
        """HEATLOG_SEED reaches the run record."""
        monkeypatch.setenv("HEATLOG_SEED", "17")
        with runner.isolated_filesystem():
            result = runner.invoke(cli, ["--out", "t.json", "tightness"])
            assert result.exit_code == 0, result.output
            assert _json("t.json")["run"]["seed"] == 17


if __name__ == "__main__":
    pytest.main([__file__])
