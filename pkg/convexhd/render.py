"""SVG pictures of diagrams: the vertex-edge graph with Γ, α, β and auxiliary layers."""

import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from convexhd.splitting import DecoratedHeegaardDiagram  # noqa: E402
from convexhd.surface import Kind  # noqa: E402

logger = logging.getLogger(__name__)

LAYER_STYLE: Dict[Kind, Tuple[str, float]] = {
    Kind.GAMMA: ("#d62728", 2.5),
    Kind.ALPHA: ("#1f77b4", 1.8),
    Kind.BETA: ("#2ca02c", 1.8),
    Kind.AUX: ("#7f7f7f", 0.8),
    Kind.BOUNDARY: ("#000000", 1.2),
}


def diagram_graph(diag: DecoratedHeegaardDiagram) -> nx.MultiGraph:
    """One node per vertex, one edge per map edge carrying its label class."""
    m = diag.map
    g = nx.MultiGraph()
    g.add_nodes_from(range(len(m.vertices)))
    for d, e in m.edges:
        g.add_edge(m.vertex_of[d], m.vertex_of[e], kind=m.labels[d].kind, dart=d)
    return g


def render_svg(diag: DecoratedHeegaardDiagram, path: Union[str, Path], seed: int = 0) -> Path:
    """Draw ``diag`` to an SVG file, one colour per curve class."""
    path = Path(path)
    g = diagram_graph(diag)
    simple = nx.Graph(g)
    try:
        pos = nx.planar_layout(simple)
    except nx.NetworkXException:
        pos = nx.spring_layout(simple, seed=seed)
    fig, ax = plt.subplots(figsize=(6, 6))
    for kind, (colour, width) in LAYER_STYLE.items():
        edges: List[Tuple[int, int]] = [(u, v) for u, v, k in g.edges(data="kind") if k is kind]
        if edges:
            nx.draw_networkx_edges(simple, pos, edgelist=edges, edge_color=colour, width=width, ax=ax, label=kind.value)
    nx.draw_networkx_nodes(simple, pos, node_size=30, node_color="black", ax=ax)
    ax.set_title(f"{diag.name or 'diagram'} (genus {diag.genus})")
    ax.legend(loc="upper right", fontsize="small")
    ax.set_axis_off()
    fig.savefig(path, format="svg")
    plt.close(fig)
    logger.debug("rendered %s to %s", diag.name or "diagram", path)
    return path
