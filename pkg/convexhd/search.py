"""Common positive stabilisations: route enumeration, bounded search and witnesses.

A witness is a pair of stabilisation scripts, one per diagram, whose results
are isomorphic maps.  Scripts list routes in the format of
:func:`convexhd.surface.draw_arc`, each read on the diagram produced by the
previous route.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from convexhd.convex import BypassSpec, bypass_attach, bypass_opposite_arc
from convexhd.equivalence import (
    DEFAULT_DART_BOUND,
    MapEquivalenceReport,
    map_fingerprint,
    maps_equivalent,
)
from convexhd.errors import ConvexHDError, SearchBudgetExceeded, WitnessFailed
from convexhd.splitting import DecoratedHeegaardDiagram, heegaard_stab_positive
from convexhd.surface import Kind

logger = logging.getLogger(__name__)

Route = Tuple[int, ...]
Script = Tuple[Route, ...]

#: Frontier size at which a search level gives up.
MAX_FRONTIER = 2000


@dataclass(frozen=True)
class StabilisationWitness:
    """Two stabilisation scripts whose results are equivalent."""

    left_script: Script
    right_script: Script
    equivalence: MapEquivalenceReport

    @property
    def depth(self) -> Tuple[int, int]:
        return len(self.left_script), len(self.right_script)

    def to_dict(self) -> Dict[str, object]:
        return {
            "left_script": [list(r) for r in self.left_script],
            "right_script": [list(r) for r in self.right_script],
            "depth": list(self.depth),
            "equivalence": self.equivalence.to_dict(),
        }


@dataclass(frozen=True)
class Inconclusive:
    """A bounded search that found nothing; not a proof of inequivalence."""

    depth: int
    explored: int
    reason: str

    def to_dict(self) -> Dict[str, object]:
        return {"inconclusive": True, "depth": self.depth, "explored": self.explored, "reason": self.reason}


SearchResult = Union[StabilisationWitness, Inconclusive]


def _reversed(m_opposite: Dict[int, int], route: Route) -> Route:
    inner = [m_opposite[t] for t in reversed(route[1:-1])]
    return (route[-1], *inner, route[0])


def stabilisation_routes(diag: DecoratedHeegaardDiagram, arc_faces: int = 2) -> List[Route]:
    """Candidate stabilisation arcs of ``diag`` crossing at most ``arc_faces`` faces.

    Arcs start and end on Γ and cross only α or auxiliary edges in between.
    Each arc is listed once, in the smaller of its two directions.
    """
    m = diag.map
    routes: Set[Route] = set()

    def extend(route: List[int], crossed: Set[int], faces: int) -> None:
        entered = route[-1] if len(route) == 1 else m.opposite[route[-1]]
        for t in m.face_walk(entered):
            kind = m.labels[t].kind
            if kind is Kind.GAMMA:
                candidate = (*route, t)
                routes.add(min(candidate, _reversed(m.opposite, candidate)))
            elif faces < arc_faces and kind in (Kind.ALPHA, Kind.AUX) and t != entered:
                edge = min(t, m.opposite[t])
                if edge in crossed or m.face_of[m.opposite[t]] in m.hole_faces:
                    continue
                extend([*route, t], crossed | {edge}, faces + 1)

    for s in sorted(m.darts):
        if m.labels[s].kind is Kind.GAMMA and m.face_of[s] not in m.hole_faces:
            extend([s], set(), 1)
    return sorted(routes)


def stabilise(diag: DecoratedHeegaardDiagram, script: Sequence[Route]) -> DecoratedHeegaardDiagram:
    """Apply the routes of ``script`` one after another."""
    for route in script:
        diag = heegaard_stab_positive(diag, route)
    return diag


@dataclass
class _Node:
    diag: DecoratedHeegaardDiagram
    script: Script
    fingerprint: str


@dataclass
class _Frontier:
    """Stabilisations of one diagram, grouped by number of routes."""

    root: DecoratedHeegaardDiagram
    arc_faces: int
    dart_bound: int
    levels: List[List[_Node]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.levels.append([_Node(self.root, (), map_fingerprint(self.root.map))])

    @property
    def explored(self) -> int:
        return sum(len(level) for level in self.levels)

    def level(self, k: int) -> List[_Node]:
        while len(self.levels) <= k:
            self.levels.append(self._expand(self.levels[-1]))
            logger.info(
                "stabilisation level %d from genus %d: %d diagrams",
                len(self.levels) - 1,
                self.root.genus,
                len(self.levels[-1]),
            )
        return self.levels[k]

    def _expand(self, nodes: List[_Node]) -> List[_Node]:
        buckets: Dict[str, List[_Node]] = {}
        out: List[_Node] = []
        for node in nodes:
            for route in stabilisation_routes(node.diag, self.arc_faces):
                try:
                    child = heegaard_stab_positive(node.diag, route)
                except ConvexHDError as exc:
                    logger.debug("route %s rejected: %s", list(route), exc)
                    continue
                if len(child.map.darts) > self.dart_bound:
                    raise SearchBudgetExceeded(f"stabilised map has {len(child.map.darts)} darts")
                fp = map_fingerprint(child.map)
                same = buckets.setdefault(fp, [])
                if any(maps_equivalent(x.diag.map, child.map, dart_bound=self.dart_bound).equivalent for x in same):
                    continue
                new = _Node(child, (*node.script, route), fp)
                same.append(new)
                out.append(new)
                if len(out) > MAX_FRONTIER:
                    raise SearchBudgetExceeded(f"more than {MAX_FRONTIER} distinct stabilisations")
        return out


def _meet(left: List[_Node], right: List[_Node], dart_bound: int) -> Optional[StabilisationWitness]:
    by_fp: Dict[str, List[_Node]] = {}
    for node in right:
        by_fp.setdefault(node.fingerprint, []).append(node)
    found: List[StabilisationWitness] = []
    for x in left:
        for y in by_fp.get(x.fingerprint, []):
            report = maps_equivalent(x.diag.map, y.diag.map, dart_bound=dart_bound)
            if report.equivalent:
                found.append(StabilisationWitness(x.script, y.script, report))
    if not found:
        return None
    return min(found, key=lambda w: (w.left_script, w.right_script))


def search_common_stabilisation(
    a: DecoratedHeegaardDiagram,
    b: DecoratedHeegaardDiagram,
    depth: int = 3,
    arc_faces: int = 2,
    dart_bound: int = DEFAULT_DART_BOUND,
) -> SearchResult:
    """Look for a common positive stabilisation with at most ``depth`` routes per side.

    Levels are searched in order of the larger side's script length; the
    genus difference fixes the other side.  A returned witness has been
    checked with :func:`maps_equivalent`; :class:`Inconclusive` only means
    nothing was found within the bounds.
    """
    diff = b.genus - a.genus
    if abs(diff) > depth:
        return Inconclusive(depth, 0, f"genus differs by {abs(diff)}, more than the depth")
    left = _Frontier(a, arc_faces, dart_bound)
    right = _Frontier(b, arc_faces, dart_bound)
    result: SearchResult = Inconclusive(abs(diff), 0, "no level searched")
    for k in range(abs(diff), depth + 1):
        p, q = (k, k - diff) if diff >= 0 else (k + diff, k)
        try:
            witness = _meet(left.level(p), right.level(q), dart_bound)
        except SearchBudgetExceeded as exc:
            return Inconclusive(k, left.explored + right.explored, str(exc))
        if witness is not None:
            logger.info("common stabilisation found at depth %d/%d", p, q)
            return witness
        logger.debug("no common stabilisation at depth %d/%d", p, q)
        result = Inconclusive(k, left.explored + right.explored, f"no common stabilisation at {p}/{q}")
    return result


def verify_witness(
    a: DecoratedHeegaardDiagram,
    b: DecoratedHeegaardDiagram,
    witness: StabilisationWitness,
    dart_bound: int = DEFAULT_DART_BOUND,
) -> MapEquivalenceReport:
    """Re-check ``witness`` from scratch.

    Only the scripts are trusted: each is replayed with
    :func:`heegaard_stab_positive` and the results compared again.
    """
    ends = []
    for diag, script in ((a, witness.left_script), (b, witness.right_script)):
        for i, route in enumerate(script):
            try:
                diag = heegaard_stab_positive(diag, route)
            except ConvexHDError as exc:
                return MapEquivalenceReport(False, reason=f"route {i} ({list(route)}) failed: {exc}")
        ends.append(diag)
    return maps_equivalent(ends[0].map, ends[1].map, dart_bound=dart_bound)


def attach_bypass(diag: DecoratedHeegaardDiagram, spec: BypassSpec) -> DecoratedHeegaardDiagram:
    """Attach a bypass to the Heegaard surface, keeping both disc systems.

    Raises:
        BypassObstructed: If a disc curve runs through the arc.
    """
    return diag.with_changes(surface=bypass_attach(diag.surface, spec))


def _near(diag: DecoratedHeegaardDiagram, darts: Sequence[int]) -> Set[int]:
    m = diag.map
    faces: Set[int] = set()
    for d in darts:
        for x in (*m.rotation(d), *m.rotation(m.opposite[d])):
            faces.add(m.face_of[x])
    return faces


def _local_routes(diag: DecoratedHeegaardDiagram, darts: Sequence[int], arc_faces: int) -> List[Route]:
    near = _near(diag, darts)
    m = diag.map
    return [r for r in stabilisation_routes(diag, arc_faces) if any(m.face_of[d] in near for d in r)]


def _stabilised(diag: DecoratedHeegaardDiagram, routes: Sequence[Route]) -> List[_Node]:
    out = []
    for route in routes:
        try:
            child = heegaard_stab_positive(diag, route)
        except ConvexHDError as exc:
            logger.debug("route %s rejected: %s", list(route), exc)
            continue
        out.append(_Node(child, (route,), map_fingerprint(child.map)))
    return out


def _end_routes(diag: DecoratedHeegaardDiagram, darts: Sequence[int], arc_faces: int) -> List[Route]:
    """Stabilisation routes joining the Γ edges at the two ends of an arc."""
    m = diag.map
    first, last = m.tail(darts[0]), m.head(darts[-1])

    def at(d: int, v: int) -> bool:
        return v in (m.tail(d), m.head(d))

    return [
        r
        for r in stabilisation_routes(diag, arc_faces)
        if (at(r[0], first) and at(r[-1], last)) or (at(r[0], last) and at(r[-1], first))
    ]


def bypass_common_stabilisation(
    diag: DecoratedHeegaardDiagram,
    spec: BypassSpec,
    arc_faces: int = 2,
    dart_bound: int = DEFAULT_DART_BOUND,
) -> StabilisationWitness:
    """Stabilise both sides of a bypass attachment to a common diagram.

    Both sides are stabilised along the Legendrian arc of the bypass disc: on
    ``diag`` by a route joining the ends of the bypass arc, on the attached
    diagram by one joining the ends of the opposite arc.  Routes near the two
    arcs are searched only when no such pair matches.  A bypass that leaves
    the diagram unchanged gets empty scripts.

    Raises:
        BypassObstructed: If a disc curve runs through the arc.
        WitnessFailed: If no pair of routes stabilises to a common diagram.
    """
    after = attach_bypass(diag, spec)
    direct = maps_equivalent(diag.map, after.map, dart_bound=dart_bound)
    if direct.equivalent:
        logger.info("bypass along %s is trivial", list(spec.arc.darts))
        return StabilisationWitness((), (), direct)
    opposite = bypass_opposite_arc(diag.surface, spec)
    reach = arc_faces + len(spec.arc.darts) + 1
    left = _stabilised(diag, _end_routes(diag, spec.arc.darts, reach))
    right = _stabilised(after, _end_routes(after, opposite.darts, reach))
    witness = _meet(left, right, dart_bound)
    if witness is None:
        logger.debug("no stabilisation along the bypass disc matches, searching near the arcs")
        left = _stabilised(diag, _local_routes(diag, spec.arc.darts, arc_faces))
        right = _stabilised(after, _local_routes(after, opposite.darts, arc_faces))
        witness = _meet(left, right, dart_bound)
    if witness is None:
        raise WitnessFailed(
            f"no common stabilisation among {len(left)} x {len(right)} routes near the bypass arc"
        )
    logger.info(
        "bypass %s witnessed by %s / %s",
        spec.side.value,
        list(witness.left_script[0]),
        list(witness.right_script[0]),
    )
    return witness
