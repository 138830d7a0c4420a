"""Labeled-map isomorphism of normalized maps.

Two maps are compared through their *curve graphs*: vertices are the darts
of curve segments at branch vertices, linked by the segment pairing and the
counter-clockwise order at each vertex, and decorated with the complementary
regions (genus, hole) they bound.  Scaffold edges never take part, so two
cellulations of the same decorated surface compare equal.
"""

import logging
from dataclasses import dataclass, field, replace
from itertools import islice
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from convexhd.errors import SearchBudgetExceeded
from convexhd.surface import SCAFFOLD, Bigon, CombinatorialMap, Kind, Label, normalize_with_trace, pieces

logger = logging.getLogger(__name__)

DEFAULT_DART_BOUND = 400
_WITNESS_CANDIDATES = 64


@dataclass(frozen=True)
class LabelPolicy:
    """Which label distinctions an equivalence check honours.

    Attributes:
        permute_alpha: α curves may be matched regardless of index.
        permute_beta: β curves may be matched regardless of index.
        ignore_aux: Named auxiliary curves are treated as scaffold.
        ignore_cross_system: Compare (Γ, α) and (Γ, β) separately, so α–β
            crossing positions are immaterial.
        dropped: Label classes erased before comparing.
    """

    permute_alpha: bool = True
    permute_beta: bool = True
    ignore_aux: bool = True
    ignore_cross_system: bool = False
    dropped: FrozenSet[Kind] = frozenset()

    def key(self, label: Label) -> Optional[str]:
        if label.kind in self.dropped or label.is_scaffold:
            return None
        if label.kind is Kind.AUX:
            return None if self.ignore_aux else str(label)
        if label.kind is Kind.ALPHA and self.permute_alpha:
            return "alpha"
        if label.kind is Kind.BETA and self.permute_beta:
            return "beta"
        if label.kind is Kind.BOUNDARY:
            inner = self.key(Label.parse(label.name)) if label.name else None
            return f"boundary:{inner or ''}"
        return str(label)


SYSTEMS = LabelPolicy()
STRICT = LabelPolicy(permute_alpha=False, permute_beta=False)
IMMATERIAL_CROSSINGS = LabelPolicy(ignore_cross_system=True)
GAMMA_ONLY = LabelPolicy(dropped=frozenset({Kind.ALPHA, Kind.BETA, Kind.AUX}))


@dataclass
class MapEquivalenceReport:
    """Outcome of :func:`maps_equivalent`.

    Attributes:
        equivalent: Whether a label-preserving isomorphism exists.
        witness: Curve-dart bijection from the first map to the second.
        reduction_trace: Bigons removed while normalizing each side.
        reason: Short explanation when not equivalent.
    """

    equivalent: bool
    witness: Optional[Dict[int, int]] = None
    reduction_trace: Tuple[List[str], List[str]] = field(default_factory=lambda: ([], []))
    reason: str = ""

    def to_dict(self) -> Dict[str, object]:
        return {
            "equivalent": self.equivalent,
            "witness": sorted(self.witness.items()) if self.witness else None,
            "reduction_trace": [list(t) for t in self.reduction_trace],
            "reason": self.reason,
        }


def _describe(bigon: Bigon) -> str:
    return f"bigon gamma/{bigon.other} at dart {bigon.key}"


def _prepare(m: CombinatorialMap, policy: LabelPolicy) -> Tuple[CombinatorialMap, List[Bigon]]:
    def erase(lab: Label) -> Label:
        if lab.kind is Kind.BOUNDARY:
            return lab
        return lab if policy.key(lab) is not None else SCAFFOLD

    return normalize_with_trace(m.relabel(erase))


def curve_graph(m: CombinatorialMap, policy: LabelPolicy = SYSTEMS) -> nx.DiGraph:
    """Build the decorated curve graph of an already normalized map."""
    curve = {d for d in m.darts if policy.key(m.labels[d]) is not None}
    g = nx.DiGraph()

    def curve_at(d: int) -> List[int]:
        return [x for x in m.rotation(d) if x in curve]

    def is_branch(d: int) -> bool:
        ds = curve_at(d)
        return len(ds) != 2 or m.labels[ds[0]] != m.labels[ds[1]]

    branch_vertices: Set[int] = {m.vertex_of[d] for d in curve if is_branch(d)}
    far_end: Dict[int, int] = {}

    def walk(d: int) -> Tuple[int, List[int]]:
        seen = [d]
        x = d
        while True:
            y = m.opposite[x]
            seen.append(y)
            if m.vertex_of[y] in branch_vertices:
                return y, seen
            x = next(z for z in curve_at(y) if z != y)
            seen.append(x)

    visited: Set[int] = set()
    for d in sorted(curve):
        if m.vertex_of[d] in branch_vertices and d not in far_end:
            end, seen = walk(d)
            far_end[d] = end
            visited.update(seen)
    for d in sorted(curve):
        if d in visited:
            continue
        branch_vertices.add(m.vertex_of[d])
        for start in curve_at(d):
            end, seen = walk(start)
            far_end[start] = end
            visited.update(seen)
        for start in sorted(curve):
            if m.vertex_of[start] in branch_vertices and start not in far_end:
                end, seen = walk(start)
                far_end[start] = end
                visited.update(seen)

    def next_curve(d: int) -> int:
        x = m.next_at_vertex[d]
        while x not in curve:
            x = m.next_at_vertex[x]
        return x

    for d in far_end:
        g.add_node(("d", d), key=f"dart:{policy.key(m.labels[d])}")
    for d, e in far_end.items():
        g.add_edge(("d", d), ("d", e), kind="opp")
        g.add_edge(("d", d), ("d", next_curve(d)), kind="next")

    # regions: faces joined across non-curve edges
    parent = list(range(len(m.faces)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for d, e in m.edges:
        if d not in curve:
            a, b = find(m.face_of[d]), find(m.face_of[e])
            parent[max(a, b)] = min(a, b)
    faces_in: Dict[int, int] = {}
    edges_in: Dict[int, int] = {}
    verts_in: Dict[int, int] = {}
    holes_in: Set[int] = set()
    for i in range(len(m.faces)):
        r = find(i)
        if i in m.hole_faces:
            holes_in.add(r)
        else:
            faces_in[r] = faces_in.get(r, 0) + 1
    for d, e in m.edges:
        if d not in curve:
            r = find(m.face_of[d])
            edges_in[r] = edges_in.get(r, 0) + 1
    for cycle in m.vertices:
        if not any(x in curve for x in cycle):
            r = find(m.face_of[cycle[0]])
            verts_in[r] = verts_in.get(r, 0) + 1
    step = {d: next_curve(e) for d, e in far_end.items()}
    walks_in: Dict[int, int] = {}
    region_of: Dict[int, int] = {}
    seen_walk: Set[int] = set()
    for d in sorted(far_end):
        r = find(m.face_of[m.next_at_vertex[far_end[d]]])
        region_of[d] = r
        if d in seen_walk:
            continue
        x = d
        while x not in seen_walk:
            seen_walk.add(x)
            x = step[x]
        walks_in[r] = walks_in.get(r, 0) + 1
    for r in sorted(set(region_of.values())):
        if r in holes_in:
            g.add_node(("r", r), key="region:hole")
            continue
        euler = faces_in.get(r, 0) - edges_in.get(r, 0) + verts_in.get(r, 0)
        genus = (2 - euler - walks_in.get(r, 0)) // 2
        g.add_node(("r", r), key=f"region:{genus}")
    for d, r in region_of.items():
        g.add_edge(("d", d), ("r", r), kind="in")
    touched = {m.component_of[d] for d in curve}
    for i, piece in enumerate(pieces(m)):
        if m.component_of[min(piece.darts)] not in touched:
            g.add_node(("s", i), key=f"bare:{piece.euler}:{piece.genus}:{piece.boundaries}")
    return g


def _match(g1: nx.DiGraph, g2: nx.DiGraph) -> Tuple[bool, Optional[Dict[int, int]], str]:
    if g1.number_of_nodes() != g2.number_of_nodes() or g1.number_of_edges() != g2.number_of_edges():
        return False, None, "curve graphs differ in size"
    h1 = nx.weisfeiler_lehman_graph_hash(g1, node_attr="key", edge_attr="kind")
    h2 = nx.weisfeiler_lehman_graph_hash(g2, node_attr="key", edge_attr="kind")
    if h1 != h2:
        return False, None, "curve graph hashes differ"
    matcher = DiGraphMatcher(
        g1,
        g2,
        node_match=lambda a, b: a["key"] == b["key"],
        edge_match=lambda a, b: a["kind"] == b["kind"],
    )
    candidates = []
    for iso in islice(matcher.isomorphisms_iter(), _WITNESS_CANDIDATES):
        candidates.append(tuple(sorted((u[1], v[1]) for u, v in iso.items() if u[0] == "d")))
    if not candidates:
        return False, None, "no label-preserving isomorphism"
    return True, dict(min(candidates)), ""


def maps_equivalent(
    a: CombinatorialMap,
    b: CombinatorialMap,
    policy: LabelPolicy = SYSTEMS,
    dart_bound: int = DEFAULT_DART_BOUND,
) -> MapEquivalenceReport:
    """Decide whether two maps are isomorphic after normalization.

    Raises:
        SearchBudgetExceeded: If either map has more darts than ``dart_bound``.
    """
    for m in (a, b):
        if len(m.darts) > dart_bound:
            raise SearchBudgetExceeded(f"{len(m.darts)} darts exceed the bound of {dart_bound}")
    if policy.ignore_cross_system:
        first = maps_equivalent(
            a, b, replace(policy, ignore_cross_system=False, dropped=policy.dropped | {Kind.BETA}), dart_bound
        )
        if not first.equivalent:
            return first
        second = maps_equivalent(
            a, b, replace(policy, ignore_cross_system=False, dropped=policy.dropped | {Kind.ALPHA}), dart_bound
        )
        if not second.equivalent:
            return second
        return first
    na, ta = _prepare(a, policy)
    nb, tb = _prepare(b, policy)
    trace = ([_describe(x) for x in ta], [_describe(x) for x in tb])
    ok, witness, reason = _match(curve_graph(na, policy), curve_graph(nb, policy))
    logger.debug("maps_equivalent: %s %s", ok, reason)
    return MapEquivalenceReport(ok, witness, trace, reason)


def map_fingerprint(m: CombinatorialMap, policy: LabelPolicy = SYSTEMS) -> str:
    """Hash of the normalized curve graph; equivalent maps share a fingerprint."""
    normal, _ = _prepare(m, policy)
    return nx.weisfeiler_lehman_graph_hash(curve_graph(normal, policy), node_attr="key", edge_attr="kind")
