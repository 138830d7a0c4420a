"""Tests for CLI module."""

import json

import pytest
from typer.testing import CliRunner

from convexhd.cli import app
from convexhd.corpus import diagram_text, load_script
from convexhd.fileformat import print_script, read_diagram

runner = CliRunner()


@pytest.fixture
def files(isolated_home):
    """Write bundled diagrams and the pipeline script into the temporary home."""
    out = {}
    for name in ("hopf_genus1", "hopf_bypass", "disconn", "ot_torus"):
        path = isolated_home / f"{name}.diag"
        path.write_text(diagram_text(name))
        out[name] = path
    script = isolated_home / "pipeline.script"
    script.write_text(print_script(load_script("pipeline")))
    out["pipeline"] = script
    return out


class TestCLI:
    """Test suite for CLI commands."""

    def test_version_command(self):
        """Test version command."""
        result = runner.invoke(app, ["version"])
        assert result.exit_code == 0
        assert "convexhd version" in result.stdout

    def test_config_set_known_key(self, isolated_home):
        """Test setting a config key with dashes."""
        result = runner.invoke(app, ["config", "set", "search-depth", "2"])

        assert result.exit_code == 0
        assert "search_depth = 2" in result.stdout

    def test_config_set_unknown_key(self, isolated_home):
        """Test setting unknown config key."""
        result = runner.invoke(app, ["config", "set", "unknown-key", "value"])

        assert result.exit_code == 1
        assert "Unknown config key" in result.stdout

    def test_config_set_bad_value(self, isolated_home):
        result = runner.invoke(app, ["config", "set", "dart_bound", "lots"])

        assert result.exit_code == 1
        assert "Error" in result.stdout

    def test_config_show(self, isolated_home):
        result = runner.invoke(app, ["config", "show"])

        assert result.exit_code == 0
        assert "dart_bound" in result.stdout


class TestCheck:
    """Test suite for the check command."""

    def test_convex_diagram(self, files):
        result = runner.invoke(app, ["check", str(files["hopf_genus1"])])

        assert result.exit_code == 0
        assert "hopf_genus1: convex" in result.stdout
        assert "Open book: page genus 0" in result.stdout

    def test_not_certified_diagram(self, files):
        result = runner.invoke(app, ["check", str(files["ot_torus"])])

        assert result.exit_code == 1
        assert "NOT_CERTIFIED" in result.stdout
        assert "U trace" in result.stdout

    def test_json_report(self, files):
        result = runner.invoke(app, ["check", str(files["hopf_genus1"]), "--format", "json"])
        report = json.loads(result.stdout)

        assert result.exit_code == 0
        assert report["schema"] == 1
        assert report["command"] == "check"
        assert report["certificate"]["convex"] is True
        assert report["open_book"]["binding_components"] == 2

    def test_unknown_format(self, files):
        result = runner.invoke(app, ["check", str(files["hopf_genus1"]), "--format", "xml"])

        assert result.exit_code == 1
        assert "Unknown format" in result.stdout

    def test_missing_file(self, isolated_home):
        result = runner.invoke(app, ["check", str(isolated_home / "nope.diag")])

        assert result.exit_code == 1
        assert "Error" in result.stdout

    def test_parse_error_names_the_position(self, isolated_home):
        path = isolated_home / "bad.diag"
        path.write_text("convexhd diagram 1\nedge 1 x\n")

        result = runner.invoke(app, ["check", str(path)])

        assert result.exit_code == 1
        assert "expected an integer" in result.stdout

    def test_check_records_history(self, files):
        runner.invoke(app, ["check", str(files["hopf_genus1"])])
        result = runner.invoke(app, ["history"])

        assert result.exit_code == 0
        assert "check" in result.stdout
        assert "convex" in result.stdout


class TestRewrites:
    def test_refine_writes_a_convex_diagram(self, files, isolated_home):
        out = isolated_home / "refined.diag"
        result = runner.invoke(app, ["refine", str(files["disconn"]), "-o", str(out)])

        assert result.exit_code == 0
        assert read_diagram(out).genus == 3

    def test_stab_json(self, files):
        result = runner.invoke(app, ["stab", str(files["hopf_genus1"]), "14", "17", "-f", "json"])

        assert result.exit_code == 0
        assert json.loads(result.stdout)["genus"] == [1, 2]

    def test_move(self, files):
        result = runner.invoke(app, ["move", str(files["hopf_genus1"]), "F", "alpha:1", "2", "13"])

        assert result.exit_code == 0
        assert "alpha:1 side U points 3 5" in result.stdout

    def test_move_outside_its_local_model(self, files):
        result = runner.invoke(app, ["move", str(files["hopf_genus1"]), "Finv", "alpha:1", "0"])

        assert result.exit_code == 1
        assert "Error" in result.stdout

    def test_bypass_needs_an_admissible_arc(self, files):
        result = runner.invoke(app, ["bypass", str(files["hopf_genus1"]), "9"])

        assert result.exit_code == 1
        assert "Error" in result.stdout


class TestReplay:
    def test_pipeline(self, files):
        script, diagram = str(files["pipeline"]), str(files["hopf_bypass"])
        result = runner.invoke(app, ["replay", script, "-d", diagram])

        assert result.exit_code == 0
        assert "Replay of pipeline.script" in result.stdout

    def test_rejected_step_json(self, isolated_home):
        path = isolated_home / "bad.script"
        path.write_text("convexhd script 1\nball\nstab 1 2\n")

        result = runner.invoke(app, ["replay", str(path), "--format", "json"])

        assert result.exit_code == 1
        assert json.loads(result.stdout)["rejected"]["index"] == 1


class TestCompare:
    def test_diagram_against_itself(self, files):
        hopf = str(files["hopf_genus1"])
        result = runner.invoke(app, ["compare", hopf, hopf, "--depth", "0"])

        assert result.exit_code == 0
        assert "depth 0/0" in result.stdout

    def test_inconclusive_exit_code(self, files):
        result = runner.invoke(
            app, ["compare", str(files["hopf_genus1"]), str(files["ot_torus"]), "--depth", "0"]
        )

        assert result.exit_code == 2
        assert "Inconclusive" in result.stdout

    def test_equivalent(self, files):
        hopf, ot = str(files["hopf_genus1"]), str(files["ot_torus"])

        assert runner.invoke(app, ["equivalent", hopf, hopf]).exit_code == 0
        assert runner.invoke(app, ["equivalent", hopf, ot]).exit_code == 1


class TestHistory:
    def test_empty_history(self, isolated_home):
        result = runner.invoke(app, ["history"])

        assert result.exit_code == 0
        assert "No verdict history yet" in result.stdout

    def test_clear(self, files):
        runner.invoke(app, ["check", str(files["hopf_genus1"])])
        result = runner.invoke(app, ["history", "clear", "-y"])

        assert result.exit_code == 0
        assert "History cleared" in result.stdout


class TestSvg:
    def test_check_renders_when_asked(self, files, isolated_home, mocker):
        render = mocker.patch("convexhd.cli.render_svg")
        out = isolated_home / "hopf.svg"

        result = runner.invoke(app, ["check", str(files["hopf_genus1"]), "--svg", str(out)])

        assert result.exit_code == 0
        render.assert_called_once()
        assert render.call_args.args[1] == out
