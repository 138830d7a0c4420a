"""Dividing-set calculus: twisting, Giroux's criterion, edge rounding and bypasses."""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from convexhd.errors import (
    BadVertex,
    BypassObstructed,
    InvalidMap,
    NoAlternation,
    NotAdmissible,
    NotTransverse,
)
from convexhd.surface import (
    GAMMA,
    SCAFFOLD,
    CombinatorialMap,
    CurveComponent,
    Kind,
    Label,
    MapEditor,
    check_general_position,
    curve_components,
    cut_along,
    disjoint_union,
    glue_holes,
    pieces,
    separates,
)

logger = logging.getLogger(__name__)


class Side(str, Enum):
    """Co-orientation of a bypass half-disc relative to the surface."""

    FRONT = "front"
    BACK = "back"

    @property
    def opposite(self) -> "Side":
        return Side.BACK if self is Side.FRONT else Side.FRONT


@dataclass(frozen=True)
class AdmissibleArc:
    """Arc with both endpoints on Γ crossing it once in its interior."""

    darts: Tuple[int, ...]
    interior_crossings: int = 1


@dataclass(frozen=True)
class BypassSpec:
    arc: AdmissibleArc
    side: Side = Side.FRONT


def gamma_at(m: CombinatorialMap, d: int) -> List[int]:
    """Γ darts at the vertex of ``d``, counter-clockwise from ``d``."""
    return [x for x in m.rotation(d) if m.labels[x].kind is Kind.GAMMA]


@dataclass(frozen=True, eq=False)
class ConvexSurfaceData:
    """A map whose Γ-labeled edges form a dividing set.

    Construction checks general position, that Γ is embedded and that the
    regions off Γ admit a coloring flipping across every Γ edge.

    Raises:
        InvalidMap: If Γ does not divide the surface.
        NotEmbedded: If a Γ component branches.
    """

    map: CombinatorialMap

    def __post_init__(self) -> None:
        check_general_position(self.map)
        _ = self.gamma
        _ = self.signs

    @cached_property
    def gamma(self) -> List[CurveComponent]:
        return curve_components(self.map, lambda lab: lab.kind is Kind.GAMMA)

    @property
    def gamma_count(self) -> int:
        return len(self.gamma)

    @cached_property
    def regions(self) -> Dict[int, int]:
        """Face index to region index, regions being the components off Γ."""
        m = self.map
        parent = list(range(len(m.faces)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for d, e in m.edges:
            fd, fe = m.face_of[d], m.face_of[e]
            if m.labels[d].kind is Kind.GAMMA or fd in m.hole_faces or fe in m.hole_faces:
                continue
            a, b = find(fd), find(fe)
            parent[max(a, b)] = min(a, b)
        return {i: find(i) for i in range(len(m.faces)) if i not in m.hole_faces}

    @cached_property
    def signs(self) -> Dict[int, int]:
        """Face index to +1 (Σ₊) or -1 (Σ₋).

        The region holding the lowest dart of each component is positive.
        """
        m = self.map
        region = self.regions
        adjacent: Dict[int, Set[int]] = {r: set() for r in region.values()}
        for d, e in m.edges:
            if m.labels[d].kind is not Kind.GAMMA:
                continue
            fd, fe = m.face_of[d], m.face_of[e]
            if fd in m.hole_faces or fe in m.hole_faces:
                continue
            ra, rb = region[fd], region[fe]
            if ra == rb:
                raise InvalidMap(f"Γ edge {d}/{e} has the same region on both sides")
            adjacent[ra].add(rb)
            adjacent[rb].add(ra)
        color: Dict[int, int] = {}
        for d in m.darts:
            f = m.face_of[d]
            if f in m.hole_faces or region[f] in color:
                continue
            color[region[f]] = 1
            stack = [region[f]]
            while stack:
                r = stack.pop()
                for s in sorted(adjacent[r]):
                    if s not in color:
                        color[s] = -color[r]
                        stack.append(s)
                    elif color[s] == color[r]:
                        raise InvalidMap("complement of Γ is not two-colorable")
        return {f: color[r] for f, r in region.items()}

    def sign_of(self, d: int) -> int:
        return self.signs[self.map.face_of[d]]


# -- twisting and the criterion ------------------------------------------------


def _check_path(m: CombinatorialMap, darts: Sequence[int]) -> bool:
    """Validate a dart path; returns True when it closes up."""
    if not darts:
        raise InvalidMap("empty path")
    for d in darts:
        if d not in m.opposite:
            raise InvalidMap(f"unknown dart {d}")
    for a, b in zip(darts, darts[1:]):
        if m.head(a) != m.tail(b):
            raise InvalidMap(f"darts {a} and {b} are not consecutive")
    return m.head(darts[-1]) == m.tail(darts[0]) and len(darts) > 1


def _turns(m: CombinatorialMap, darts: Sequence[int], closed: bool) -> List[Tuple[int, int]]:
    turns = [(m.opposite[a], b) for a, b in zip(darts, darts[1:])]
    if closed:
        turns.append((m.opposite[darts[-1]], darts[0]))
    return turns


def _crosses_gamma(m: CombinatorialMap, arrive: int, leave: int) -> bool:
    g = gamma_at(m, leave)
    if not g:
        return False
    if len(g) != 2 or not separates(m.rotation(leave), (arrive, leave), (g[0], g[1])):
        raise NotTransverse(f"path touches Γ without crossing at dart {leave}")
    return True


def twisting(surface: ConvexSurfaceData, darts: Sequence[int]) -> Fraction:
    """Twisting of a curve or arc relative to the surface framing.

    Interior crossings with Γ count ``-1/2`` each; endpoints on Γ count half
    of that.

    Raises:
        NotTransverse: If the path runs along Γ or touches it without crossing.
    """
    m = surface.map
    if any(m.labels[d].kind is Kind.GAMMA for d in darts):
        raise NotTransverse("path runs along Γ")
    closed = _check_path(m, darts)
    interior = sum(1 for a, b in _turns(m, darts, closed) if _crosses_gamma(m, a, b))
    ends = 0
    if not closed:
        ends = int(bool(gamma_at(m, darts[0]))) + int(bool(gamma_at(m, m.opposite[darts[-1]])))
    return -Fraction(2 * interior + ends, 4)


def _bounds_disc(m: CombinatorialMap, comp: CurveComponent) -> bool:
    cut = cut_along(m, [comp])
    seam = Label(Kind.BOUNDARY, str(comp.label))
    for piece in pieces(cut):
        if piece.genus == 0 and piece.boundaries == 1 and any(cut.labels[d] == seam for d in piece.darts):
            return True
    return False


def giroux_criterion(surface: ConvexSurfaceData) -> bool:
    """Whether the surface has a tight neighbourhood.

    A sphere needs connected Γ; any other surface needs no closed
    contractible Γ component.  Every component must pass.
    """
    m = surface.map
    closed = [c for c in surface.gamma if c.is_closed]
    for index, piece in enumerate(pieces(m)):
        mine = [c for c in closed if m.component_of[c.darts[0]] == index]
        if piece.is_sphere:
            if len(mine) != 1:
                logger.debug("sphere component %d carries %d Γ circles", index, len(mine))
                return False
            continue
        for comp in mine:
            if _bounds_disc(m, comp):
                logger.debug("Γ component through dart %d is contractible", comp.darts[0])
                return False
    return True


# -- edge rounding -------------------------------------------------------------------


def edge_round(
    a: ConvexSurfaceData,
    b: ConvexSurfaceData,
    matching: Mapping[int, int],
    mirrored: bool = False,
) -> ConvexSurfaceData:
    """Glue ``b`` to ``a`` along matched holes and round the seam.

    Walking a seam in its orientation as the boundary of ``b``, each Γ
    endpoint of ``b`` joins the next Γ endpoint of ``a``; ``mirrored`` walks
    the other way.

    Raises:
        NoAlternation: If the Γ endpoints of the two sides do not alternate.
    """
    union, offset = disjoint_union(a.map, b.map)
    full = {h: k + offset for h, k in matching.items()}
    back = {k: h for h, k in full.items()}
    gamma_seam: Set[int] = set()
    seen: Set[int] = set()
    for start in sorted(back):
        if start in seen:
            continue
        walk = union.face_walk(start)
        seen.update(walk)
        n = len(walk)
        if any(h not in back for h in walk):
            raise InvalidMap("matching must cover whole hole faces")
        ends: List[Optional[str]] = []
        for i, h in enumerate(walk):
            b_end = bool(gamma_at(union, h))
            a_end = bool(gamma_at(union, back[walk[i - 1]]))
            if a_end and b_end:
                raise NoAlternation(f"Γ endpoints of both sides meet at hole dart {h}")
            ends.append("b" if b_end else "a" if a_end else None)
        marked = [(i, s) for i, s in enumerate(ends) if s]
        if len(marked) % 2 or any(marked[k][1] == marked[k - 1][1] for k in range(len(marked))):
            raise NoAlternation("Γ endpoints do not alternate along the seam")
        for i, s in marked:
            if s != "b":
                continue
            j = i
            while True:
                if mirrored:
                    j = (j - 1) % n
                    gamma_seam.add(walk[j])
                else:
                    gamma_seam.add(walk[j])
                    j = (j + 1) % n
                if ends[j] == "a":
                    break
    glued = glue_holes(union, full, check_gamma=False)
    ed = glued.editor()
    for h in back:
        ed.set_label(union.opposite[h], GAMMA if h in gamma_seam else SCAFFOLD)
    rounded = ConvexSurfaceData(ed.freeze())
    logger.debug("edge rounding joined %d seam edges into Γ", len(gamma_seam))
    return rounded


# -- non-isolating graphs --------------------------------------------------------------


def is_nonisolating(surface: ConvexSurfaceData, graph: Iterable[int]) -> bool:
    """Whether every region off Γ and ``graph`` has a boundary edge on Γ.

    ``graph`` lists darts of the graph edges (one per edge suffices).

    Raises:
        BadVertex: If a univalent vertex of the graph is off Γ.
    """
    m = surface.map
    darts = {y for x in graph for y in (x, m.opposite[x])}
    for d in darts:
        at_vertex = [x for x in m.rotation(d) if x in darts]
        if len(at_vertex) == 1 and not gamma_at(m, d):
            raise BadVertex(f"univalent graph vertex at dart {d} is off Γ")
    parent = list(range(len(m.faces)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for d, e in m.edges:
        if d in darts or m.labels[d].kind is Kind.GAMMA:
            continue
        fd, fe = m.face_of[d], m.face_of[e]
        if fd in m.hole_faces or fe in m.hole_faces:
            continue
        x, y = find(fd), find(fe)
        parent[max(x, y)] = min(x, y)
    touching = {find(m.face_of[d]) for d in m.darts if m.labels[d].kind is Kind.GAMMA}
    for i in range(len(m.faces)):
        if i not in m.hole_faces and find(i) not in touching:
            return False
    return True


# -- bypasses -----------------------------------------------------------------------------


def admissible_arc(surface: ConvexSurfaceData, darts: Sequence[int]) -> AdmissibleArc:
    """Validate ``darts`` as an admissible arc.

    Raises:
        NotAdmissible: Unless the path is embedded, starts and ends on Γ and
            crosses Γ exactly once in between.
    """
    m = surface.map
    try:
        if _check_path(m, darts):
            raise NotAdmissible("an admissible arc cannot be closed")
        if any(m.labels[d].kind is Kind.GAMMA for d in darts):
            raise NotAdmissible("arc runs along Γ")
        stops = [m.tail(d) for d in darts] + [m.head(darts[-1])]
        if len(set(stops)) != len(stops):
            raise NotAdmissible("arc is not embedded")
        if len(gamma_at(m, darts[0])) != 2 or len(gamma_at(m, m.opposite[darts[-1]])) != 2:
            raise NotAdmissible("arc endpoints must lie on Γ")
        crossings = sum(1 for a, b in _turns(m, darts, False) if _crosses_gamma(m, a, b))
    except (InvalidMap, NotTransverse) as e:
        raise NotAdmissible(str(e)) from e
    if crossings != 1:
        raise NotAdmissible(f"arc crosses Γ {crossings} times in its interior, expected 1")
    return AdmissibleArc(tuple(darts), crossings)


_NEW_STRANDS = {
    Side.FRONT: ((0, 1), (2, 5), (3, 4)),
    Side.BACK: ((0, 3), (1, 2), (4, 5)),
}
# chords met by the opposite arc, in its direction
_OPPOSITE_ROUTE = {
    Side.FRONT: ((0, 1), (2, 5), (3, 4)),
    Side.BACK: ((1, 2), (0, 3), (4, 5)),
}


def _opposite_label(m: CombinatorialMap, darts: Sequence[int]) -> Label:
    lab = m.labels[darts[0]]
    name = lab.name if lab.kind is Kind.AUX and lab.name else "c"
    name = name[: -len("^op")] if name.endswith("^op") else name + "^op"
    return Label(Kind.AUX, name)


def _strand_positions(m: CombinatorialMap, darts: Sequence[int]) -> List[int]:
    """Γ darts around the arc: right then left, ordered counter-clockwise."""
    l1, r1 = gamma_at(m, darts[0])
    r3, l3 = gamma_at(m, m.opposite[darts[-1]])
    for arrive, leave in _turns(m, darts, False):
        g = gamma_at(m, leave)
        if g:
            rot = m.rotation(leave)
            left_arc = rot[: rot.index(arrive)]
            l2 = g[0] if g[0] in left_arc else g[1]
            r2 = g[1] if l2 == g[0] else g[0]
    return [r1, r2, r3, l3, l2, l1]


def shared_corner(ed: MapEditor, ys: Sequence[int], zs: Sequence[int]) -> Tuple[int, int]:
    for y in ys:
        for z in zs:
            if ed.corner_face(y) == ed.corner_face(z):
                return y, z
    raise InvalidMap("the two vertices share no face")


def _attach(surface: ConvexSurfaceData, spec: BypassSpec) -> Tuple[ConvexSurfaceData, AdmissibleArc]:
    m = surface.map
    arc = admissible_arc(surface, spec.arc.darts)
    darts = arc.darts
    own = set(darts) | {m.opposite[d] for d in darts}
    for d in list(darts) + [m.opposite[darts[-1]]]:
        for x in m.rotation(d):
            lab = m.labels[x]
            if x not in own and lab.is_curve and lab.kind is not Kind.GAMMA:
                raise BypassObstructed(f"{lab} passes through the bypass arc at dart {x}")
    positions = _strand_positions(m, darts)
    ed = m.editor()
    for d in darts:
        ed.contract(d)
    rot = ed.rotation(positions[0])
    index = [rot.index(p) for p in positions]
    if index != sorted(index):
        raise NotAdmissible("Γ strands around the arc are not in planar order")
    groups = [rot[index[k] : (index[k + 1] if k < 5 else len(rot))] for k in range(6)]
    ring = ed.explode(groups)
    strands: Dict[Tuple[int, int], int] = {}
    for a, b in _NEW_STRANDS[spec.side]:
        strands[(a, b)] = ed.add_edge(ring[a][0], ring[b][0], GAMMA)[0]
    stops = [ed.subdivide(strands[key]) for key in _OPPOSITE_ROUTE[spec.side]]
    label = _opposite_label(m, darts)
    opposite_darts = []
    for y, z in zip(stops, stops[1:]):
        c1, c2 = shared_corner(ed, ed.rotation(y[0]), ed.rotation(z[0]))
        opposite_darts.append(ed.add_edge(c1, c2, label)[0])
    result = ConvexSurfaceData(ed.freeze())
    logger.debug(
        "bypass %s along %s: Γ components %d -> %d",
        spec.side.value,
        list(darts),
        surface.gamma_count,
        result.gamma_count,
    )
    return result, AdmissibleArc(tuple(opposite_darts), 1)


def bypass_attach(surface: ConvexSurfaceData, spec: BypassSpec) -> ConvexSurfaceData:
    """Attach a bypass along ``spec.arc`` from ``spec.side``.

    Γ changes only near the arc.  The output also carries the opposite arc as
    an ``aux`` curve named after the input arc with ``^op`` toggled.

    Raises:
        NotAdmissible: If the arc is not admissible.
        BypassObstructed: If another curve runs through the arc.
    """
    return _attach(surface, spec)[0]


def bypass_opposite_arc(surface: ConvexSurfaceData, spec: BypassSpec) -> AdmissibleArc:
    """The arc along which a bypass from the other side undoes ``spec``."""
    return _attach(surface, spec)[1]
