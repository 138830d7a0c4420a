"""Tests for SVG rendering."""

from convexhd.render import diagram_graph, render_svg
from convexhd.surface import Kind


class TestRender:
    def test_graph_has_one_edge_per_map_edge(self, hopf):
        g = diagram_graph(hopf)

        assert g.number_of_nodes() == 5
        assert g.number_of_edges() == 10
        kinds = [k for _, _, k in g.edges(data="kind")]
        assert kinds.count(Kind.GAMMA) == 4

    def test_render_writes_svg(self, hopf, tmp_path):
        path = render_svg(hopf, tmp_path / "hopf.svg")

        assert path.exists()
        assert "<svg" in path.read_text()
