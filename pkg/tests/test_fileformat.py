"""Tests for the diagram and script text formats."""

import pytest

from convexhd.corpus import diagram_names, diagram_text, load_script, script_names
from convexhd.equivalence import STRICT, maps_equivalent
from convexhd.errors import NonCrossingViolation, ParseError
from convexhd.fileformat import (
    parse_diagram,
    parse_script,
    print_diagram,
    print_script,
    read_diagram,
    read_script,
)
from convexhd.replay import StepKind
from convexhd.surface import alpha


def hopf_text(old, new):
    text = diagram_text("hopf_genus1")
    assert old in text
    return text.replace(old, new)


class TestParseDiagram:
    """Test suite for parse_diagram."""

    def test_bundled_diagrams_parse(self):
        for name in diagram_names():
            assert parse_diagram(diagram_text(name), source=name).name == name

    def test_print_then_parse(self, hopf):
        again = parse_diagram(print_diagram(hopf))

        assert again.map.opposite == hopf.map.opposite
        assert again.discs == hopf.discs
        assert maps_equivalent(again.map, hopf.map, STRICT).equivalent

    def test_missing_header(self):
        with pytest.raises(ParseError) as exc_info:
            parse_diagram("edge 1 2\n")

        assert (exc_info.value.line, exc_info.value.col) == (1, 1)

    def test_wrong_format_version(self):
        with pytest.raises(ParseError) as exc_info:
            parse_diagram("convexhd diagram 2\n")

        assert exc_info.value.col == 18

    def test_unknown_keyword(self):
        with pytest.raises(ParseError) as exc_info:
            parse_diagram(hopf_text("edge 3 4", "  egde 3 4"), source="hopf.diag")

        assert exc_info.value.line == 12
        assert exc_info.value.col == 3
        assert str(exc_info.value).startswith("hopf.diag:12:3: expected a keyword")

    def test_non_integer_dart(self):
        with pytest.raises(ParseError) as exc_info:
            parse_diagram(hopf_text("edge 3 4", "edge 3 x"))

        assert (exc_info.value.line, exc_info.value.col) == (12, 8)

    def test_dart_on_two_edges(self):
        with pytest.raises(ParseError) as exc_info:
            parse_diagram(hopf_text("edge 3 4", "edge 3 1"))

        assert "not yet on an edge" in exc_info.value.expected

    def test_declared_dart_count(self):
        text = hopf_text("darts 20", "darts 22")
        with pytest.raises(ParseError) as exc_info:
            parse_diagram(text)

        assert exc_info.value.line == len(text.splitlines()) + 1
        assert "22 darts" in exc_info.value.expected

    def test_declared_genus(self):
        with pytest.raises(ParseError) as exc_info:
            parse_diagram(hopf_text("genus 1", "genus 2"))

        assert (exc_info.value.line, exc_info.value.col) == (6, 7)
        assert exc_info.value.expected == "genus 1"

    def test_incomplete_map(self):
        with pytest.raises(ParseError) as exc_info:
            parse_diagram(hopf_text("vertex 10 17 11 20\n", ""))

        assert "a complete map" in exc_info.value.expected

    def test_crossing_chords(self):
        text = hopf_text("points 3 5 chords (0 1)", "points 3 5 1 2 chords (0 2)(1 3)")

        with pytest.raises(NonCrossingViolation):
            parse_diagram(text)

    def test_bad_chord(self):
        with pytest.raises(ParseError) as exc_info:
            parse_diagram(hopf_text("chords (0 1)\ndisc beta", "chords (0 1\ndisc beta"))

        assert exc_info.value.expected == "a chord '(i j)'"

    def test_read_diagram(self, tmp_path):
        path = tmp_path / "hopf.diag"
        path.write_text(diagram_text("hopf_genus1"))

        assert read_diagram(path).disc(alpha(1)).points == (3, 5)


class TestParseScript:
    def test_bundled_scripts_parse(self):
        assert script_names() == ["pipeline"]
        assert len(load_script("pipeline")) == 4

    def test_print_script(self):
        assert print_script(load_script("pipeline")) == (
            "convexhd script 1\nstab 14 17\nmove F alpha:1 2 13\nmove Finv alpha:1 2\n"
            "bypass back 29 31 33\n"
        )

    def test_all_step_kinds(self):
        script = parse_script(
            "convexhd script 1\n"
            "ball  # start\n"
            "handle 1 1 2\n"
            "bypass back 3 4 5\n"
            "tunnel beta:2 0 2\n"
            "refine\n"
        )

        assert [s.kind for s in script.steps] == [
            StepKind.BALL,
            StepKind.HANDLE,
            StepKind.BYPASS,
            StepKind.TUNNEL,
            StepKind.REFINE,
        ]
        assert script.steps[1].handle == 1
        assert script.steps[2].side.value == "back"
        assert script.steps[3].darts == (0, 2)
        assert script.steps[2].line == 4

    def test_unknown_step(self):
        with pytest.raises(ParseError) as exc_info:
            parse_script("convexhd script 1\nstabilise 1 2\n")

        assert exc_info.value.line == 2
        assert "ball, handle, stab" in exc_info.value.expected

    def test_bypass_side(self):
        with pytest.raises(ParseError) as exc_info:
            parse_script("convexhd script 1\nbypass up 1 2\n")

        assert (exc_info.value.line, exc_info.value.col) == (2, 8)
        assert exc_info.value.expected == "front or back"

    def test_move_kind(self):
        with pytest.raises(ParseError) as exc_info:
            parse_script("convexhd script 1\nmove X alpha:1 2\n")

        assert "move kind" in exc_info.value.expected

    def test_tunnel_needs_two_points(self):
        with pytest.raises(ParseError):
            parse_script("convexhd script 1\ntunnel alpha:1 0\n")

    def test_diagram_header_is_not_a_script(self):
        with pytest.raises(ParseError):
            parse_script("convexhd diagram 1\n")

    def test_read_script_names_after_file(self, tmp_path):
        path = tmp_path / "mine.script"
        path.write_text("convexhd script 1\nball\n")

        assert read_script(path).name == "mine"
