"""Elementary disc moves on decorated Heegaard diagrams.

Each move changes one disc of a diagram inside a small local model and
rewrites its chord diagram to match:

* ``F`` pushes a finger of the disc boundary across Γ,
* ``Finv`` removes such a finger again,
* ``T`` pushes the disc boundary across a crossing of Γ with the other system,
* ``I`` attaches a bypass to the disc from its interior,
* ``H`` slides the disc over another disc of the same side along an arc of Γ.

Moves never smooth the degree-2 vertices they leave behind, so darts named
by later steps of a script stay valid.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx

from convexhd.convex import BypassSpec, ConvexSurfaceData, admissible_arc, gamma_at
from convexhd.errors import (
    BypassObstructed,
    InvalidMap,
    LocalModelViolation,
    NonCrossingViolation,
    NotEmbedded,
    SearchBudgetExceeded,
)
from convexhd.splitting import (
    ChordDiagram,
    DecoratedHeegaardDiagram,
    Handlebody,
    drop_bigon_points,
    gaps_along,
)
from convexhd.surface import (
    GAMMA,
    CombinatorialMap,
    Kind,
    Label,
    MapEditor,
    continuation,
    find_bigons,
    remove_bigon,
)

logger = logging.getLogger(__name__)


class MoveKind(str, Enum):
    T = "T"
    F = "F"
    FINV = "Finv"
    I = "I"  # noqa: E741
    H = "H"


@dataclass(frozen=True)
class DiscMove:
    """One elementary move on ``target_disc``.

    The locus depends on the kind:

    * ``F``: a dart of the disc curve and a Γ dart on a common face, or a
      single dart of a bypass arc leaving its crossing with the disc toward
      the arc's end on Γ,
    * ``Finv``: the gap of the disc inside the finger,
    * ``T``: any dart of the triangle to push across,
    * ``I``: three gaps naming the chords met, then 0 (front) or 1 (back),
    * ``H``: the Γ path from the disc to the disc it slides over.
    """

    kind: MoveKind
    target_disc: Label
    locus: Tuple[int, ...]

    def __str__(self) -> str:
        return " ".join([self.kind.value, str(self.target_disc), *map(str, self.locus)])

    def to_dict(self) -> Dict[str, object]:
        return {"kind": self.kind.value, "disc": str(self.target_disc), "locus": list(self.locus)}

    @classmethod
    def parse(cls, text: str) -> "DiscMove":
        """Read ``<kind> <disc> <int>...`` as written by ``str``."""
        words = text.split()
        if len(words) < 2:
            raise ValueError(f"move needs a kind and a disc: {text!r}")
        return cls(MoveKind(words[0]), Label.parse(words[1]), tuple(int(w) for w in words[2:]))


def _curve_direction(diag: DecoratedHeegaardDiagram, disc: ChordDiagram) -> Dict[int, bool]:
    """For every dart of the disc curve, whether it runs along the curve."""
    m = diag.map
    comp = diag.curve_of(disc)
    out = {d: True for d in comp.darts}
    out.update({m.opposite[d]: False for d in comp.darts})
    return out


def _corner_face(ed: MapEditor, x: int, y: int, kind: str) -> Set[int]:
    if ed.next[x] == y:
        return ed.corner_face(x)
    if ed.next[y] == x:
        return ed.corner_face(y)
    raise LocalModelViolation(kind, f"darts {x} and {y} are not neighbours")


def _corner_in(ed: MapEditor, at: int, face: Set[int], kind: str) -> int:
    for c in ed.rotation(at):
        if ed.corner_face(c) == face:
            return c
    raise LocalModelViolation(kind, f"the vertex of dart {at} does not reach the expected face")


def _replace(
    diag: DecoratedHeegaardDiagram, m: Optional[CombinatorialMap], disc: ChordDiagram
) -> DecoratedHeegaardDiagram:
    discs = [disc if d.disc == disc.disc else d for d in diag.discs]
    return diag.with_changes(ConvexSurfaceData(m) if m is not None else None, discs)


# -- F and Finv ------------------------------------------------------------------


def _with_finger(disc: ChordDiagram, gap: int, first: int, second: int) -> ChordDiagram:
    """Two new points after ``points[gap]`` joined by a boundary-parallel chord."""
    points = list(disc.points[: gap + 1]) + [first, second] + list(disc.points[gap + 1 :])

    def shift(k: int) -> int:
        return k if k <= gap else k + 2

    chords = [(shift(a), shift(b)) for a, b in disc.chords] + [(gap + 1, gap + 2)]
    return ChordDiagram(disc.disc, disc.side, tuple(points), tuple(chords))


def _finger_across(
    diag: DecoratedHeegaardDiagram, disc: ChordDiagram, e: int, g: int
) -> Tuple[CombinatorialMap, int, int, int]:
    m = diag.map
    if e not in m.opposite or m.labels[e] != disc.disc:
        raise LocalModelViolation("F", f"dart {e} is not on {disc.disc}")
    if g not in m.opposite or m.labels[g] != GAMMA:
        raise LocalModelViolation("F", f"dart {g} is not on Γ")
    if m.face_of[e] != m.face_of[g] or m.face_of[e] in m.hole_faces:
        raise LocalModelViolation("F", "the finger must start in the face of both darts")
    along = _curve_direction(diag, disc)[e]
    gap = gaps_along(m, disc)[e] if disc.points else 0

    ed = m.editor()
    a1, a2 = ed.subdivide(e)
    b1, _ = ed.subdivide(a2)
    c1, c2 = ed.subdivide(g)
    d1, d2 = ed.subdivide(c2)
    if ed.corner_face(a1) != ed.corner_face(d1):
        raise LocalModelViolation("F", "no room for the finger")
    _, p2 = ed.add_edge(a1, d1, disc.disc)
    _, q2 = ed.add_edge(b1, c1, disc.disc)
    r1, r2 = ed.add_edge(d2, c2, disc.disc)
    ed.delete_edge(a2)
    first, second = (r1, q2) if along else (r2, p2)
    return ed.freeze(), gap, first, second


def _finger_off_arc(
    diag: DecoratedHeegaardDiagram, disc: ChordDiagram, start: int
) -> Tuple[CombinatorialMap, int, int, int]:
    """Push the disc off an arc by sliding its crossing past the arc's end on Γ."""
    m = diag.map
    if start not in m.opposite:
        raise LocalModelViolation("F", f"no dart {start}")
    rot = m.rotation(start)
    if len(rot) != 4 or m.labels[rot[1]] != disc.disc or m.labels[rot[3]] != disc.disc:
        raise LocalModelViolation("F", f"{disc.disc} does not cross the arc at dart {start}")
    right, left = rot[1], rot[3]
    d = start
    while not gamma_at(m, m.opposite[d]):
        ahead = m.rotation(m.opposite[d])
        if len(ahead) != 2:
            raise LocalModelViolation("F", f"the arc meets another curve after dart {d}")
        d = ahead[1]
    back = m.opposite[d]
    around = m.rotation(back)
    if len(around) != 3 or len(gamma_at(m, back)) != 2:
        raise LocalModelViolation("F", f"the arc does not end on a plain arc of Γ at dart {d}")
    g1, g2 = around[1], around[2]
    along = _curve_direction(diag, disc)[right]
    gap = gaps_along(m, disc)[right] if disc.points else 0

    ed = m.editor()
    sl, _ = ed.subdivide(left)
    sr, _ = ed.subdivide(right)
    ya, _ = ed.subdivide(g1)
    yb, _ = ed.subdivide(g2)
    face = _corner_face(ed, back, g1, "F")
    e1 = ed.add_edge(_corner_in(ed, sl, face, "F"), _corner_in(ed, ya, face, "F"), disc.disc)
    face = _corner_face(ed, g1, g2, "F")
    e2 = ed.add_edge(_corner_in(ed, ya, face, "F"), _corner_in(ed, yb, face, "F"), disc.disc)
    face = _corner_face(ed, g2, back, "F")
    e3 = ed.add_edge(_corner_in(ed, yb, face, "F"), _corner_in(ed, sr, face, "F"), disc.disc)
    ed.delete_edge(left)
    ed.delete_edge(right)
    first, second = (e2[0], e3[0]) if along else (e2[1], e1[1])
    return ed.freeze(), gap, first, second


def _finger(diag: DecoratedHeegaardDiagram, move: DiscMove) -> DecoratedHeegaardDiagram:
    disc = diag.disc(move.target_disc)
    if len(move.locus) == 2:
        new, gap, first, second = _finger_across(diag, disc, *move.locus)
    elif len(move.locus) == 1:
        new, gap, first, second = _finger_off_arc(diag, disc, move.locus[0])
    else:
        raise LocalModelViolation("F", "locus is a disc dart and a Γ dart, or one arc dart")
    return _replace(diag, new, _with_finger(disc, gap, first, second))


def _unfinger(diag: DecoratedHeegaardDiagram, move: DiscMove) -> DecoratedHeegaardDiagram:
    m = diag.map
    disc = diag.disc(move.target_disc)
    if len(move.locus) != 1:
        raise LocalModelViolation("Finv", "locus is the gap inside the finger")
    (gap,) = move.locus
    if disc.is_product:
        raise LocalModelViolation("Finv", f"{disc.disc} would no longer meet Γ")
    gaps = gaps_along(m, disc)
    for bigon in find_bigons(m):
        if bigon.other != disc.disc or gaps.get(bigon.other_run[0]) != gap:
            continue
        smaller = drop_bigon_points(m, disc, bigon)
        if smaller is None:
            raise LocalModelViolation("Finv", f"the chord at gap {gap} is not boundary parallel")
        return _replace(diag, remove_bigon(m, bigon), smaller)
    raise LocalModelViolation("Finv", f"gap {gap} of {disc.disc} bounds no empty bigon with Γ")


# -- T -----------------------------------------------------------------------------


def _triangle(diag: DecoratedHeegaardDiagram, move: DiscMove) -> DecoratedHeegaardDiagram:
    m = diag.map
    disc = diag.disc(move.target_disc)
    if len(move.locus) != 1:
        raise LocalModelViolation("T", "locus is one dart of the triangle")
    (start,) = move.locus
    if start not in m.opposite:
        raise LocalModelViolation("T", f"no dart {start}")
    walk = m.face_walk(start)
    if len(walk) != 3 or m.face_of[start] in m.hole_faces:
        raise LocalModelViolation("T", f"dart {start} does not bound a triangle")
    roles: Dict[str, int] = {}
    for d in walk:
        lab = m.labels[d]
        if lab == disc.disc:
            role = "disc"
        elif lab == GAMMA:
            role = "gamma"
        elif lab.kind in (Kind.ALPHA, Kind.BETA) and Handlebody.of(lab) is disc.side.other:
            role = "other"
        else:
            raise LocalModelViolation("T", f"the triangle has a side on {lab}")
        if role in roles:
            raise LocalModelViolation("T", f"the triangle has two sides on {lab}")
        roles[role] = d

    def ends(d: int) -> Set[int]:
        return {m.vertex_of[d], m.vertex_of[m.opposite[d]]}

    def shared(a: str, b: str) -> int:
        common = ends(roles[a]) & ends(roles[b])
        if len(common) != 1:
            raise LocalModelViolation("T", "the triangle corners are not distinct")
        return common.pop()

    u, v, z = shared("disc", "gamma"), shared("disc", "other"), shared("gamma", "other")

    def at(role: str, vertex: int) -> int:
        d = roles[role]
        return d if m.vertex_of[d] == vertex else m.opposite[d]

    def beyond(d: int) -> int:
        rot = m.rotation(d)
        same = [x for x in rot if x != d and m.labels[x] == m.labels[d]]
        if len(rot) != 4 or len(same) != 1:
            raise LocalModelViolation("T", f"the corner at dart {d} is not a transverse crossing")
        return same[0]

    disc_u, disc_v = at("disc", u), at("disc", v)
    gamma_z, other_z = at("gamma", z), at("other", z)
    out_u, out_v = beyond(disc_u), beyond(disc_v)
    gamma_out, other_out = beyond(gamma_z), beyond(other_z)
    along = _curve_direction(diag, disc)[disc_u]
    old_point = disc_u if along else out_u
    if old_point not in disc.points:
        raise LocalModelViolation("T", f"{disc.disc} does not cross Γ at the triangle corner")

    lab = disc.disc
    ed = m.editor()
    a1, _ = ed.subdivide(out_u)
    b1, _ = ed.subdivide(out_v)
    g1, _ = ed.subdivide(gamma_out)
    x1, _ = ed.subdivide(other_out)
    face = _corner_face(ed, gamma_z, other_out, "T")
    ed.add_edge(_corner_in(ed, a1, face, "T"), _corner_in(ed, x1, face, "T"), lab)
    face = _corner_face(ed, other_out, gamma_out, "T")
    corners = _corner_in(ed, x1, face, "T"), _corner_in(ed, g1, face, "T")
    _, towards_other = ed.add_edge(*corners, lab)
    face = _corner_face(ed, gamma_out, other_z, "T")
    towards_far, _ = ed.add_edge(_corner_in(ed, g1, face, "T"), _corner_in(ed, b1, face, "T"), lab)
    for d in (out_u, disc_u, out_v):
        ed.delete_edge(d)
    new = ed.freeze()

    points = list(disc.points)
    points[points.index(old_point)] = towards_far if along else towards_other
    changed = ChordDiagram(disc.disc, disc.side, tuple(points), disc.chords)
    logger.debug("pushed %s across the crossing at dart %d", disc.disc, gamma_z)
    return _replace(diag, new, changed)


# -- I -----------------------------------------------------------------------------


def _between(lo: int, hi: int, n: int) -> Set[int]:
    return {(lo + t) % n for t in range(1, (hi - lo) % n)}


def _interior_bypass(diag: DecoratedHeegaardDiagram, move: DiscMove) -> DecoratedHeegaardDiagram:
    disc = diag.disc(move.target_disc)
    n = disc.size
    if len(move.locus) != 4 or move.locus[3] not in (0, 1):
        raise LocalModelViolation("I", "locus is three gaps and a side (0 front, 1 back)")
    if any(not 0 <= g < n for g in move.locus[:3]):
        raise LocalModelViolation("I", f"gaps must lie in 0..{n - 1}")
    chosen = {disc.chord_of(g) for g in move.locus[:3]}
    if len(chosen) != 3:
        raise LocalModelViolation("I", "the bypass must meet three distinct chords")
    ends = sorted(g for c in chosen for g in c)
    for r in range(6):
        e = ends[r:] + ends[:r]
        if {tuple(sorted(p)) for p in ((e[0], e[5]), (e[1], e[4]), (e[2], e[3]))} == chosen:
            break
    else:
        raise LocalModelViolation("I", "the three chords are not parallel")
    rest = [c for c in disc.chords if c not in chosen]
    pockets = [
        (_between(e[0], e[1], n), _between(e[4], e[5], n)),
        (_between(e[1], e[2], n), _between(e[3], e[4], n)),
    ]
    for first, second in pockets:
        for a, b in rest:
            if (a in first and b in second) or (a in second and b in first):
                raise LocalModelViolation("I", f"chord ({a} {b}) separates two chosen chords")
    if move.locus[3] == 0:
        rewired = [(e[0], e[1]), (e[2], e[5]), (e[3], e[4])]
    else:
        rewired = [(e[0], e[3]), (e[1], e[2]), (e[4], e[5])]
    changed = ChordDiagram(disc.disc, disc.side, disc.points, tuple(rest + rewired))
    return diag.with_changes(discs=[changed if d.disc == disc.disc else d for d in diag.discs])


# -- H -----------------------------------------------------------------------------


def _gap_after(point: int, step: int, n: int) -> int:
    """Gap between ``point`` and its neighbour in direction ``step``."""
    return (point if step == 1 else point - 1) % n


def _check_gamma_path(m: CombinatorialMap, path: Sequence[int]) -> None:
    for d in path:
        if d not in m.opposite or m.labels[d] != GAMMA:
            raise LocalModelViolation("H", f"dart {d} is not on Γ")
    for a, b in zip(path, path[1:]):
        if continuation(m, a) != b:
            raise LocalModelViolation("H", f"dart {b} does not follow dart {a} along Γ")


def _handle_slide(diag: DecoratedHeegaardDiagram, move: DiscMove) -> DecoratedHeegaardDiagram:
    m = diag.map
    first = diag.disc(move.target_disc)
    path = list(move.locus)
    if not path:
        raise LocalModelViolation("H", "locus is a Γ path between two discs")
    _check_gamma_path(m, path)
    start, end = m.vertex_of[path[0]], m.vertex_of[m.opposite[path[-1]]]
    at_start = [k for k, p in enumerate(first.points) if m.vertex_of[p] == start]
    if not at_start:
        raise LocalModelViolation("H", f"the path does not start on {first.disc}")
    i = at_start[0]
    at_end = [
        (d, k)
        for d in diag.discs_on(first.side)
        if d.disc != first.disc
        for k, p in enumerate(d.points)
        if m.vertex_of[p] == end
    ]
    if not at_end:
        raise LocalModelViolation("H", f"the path ends on no other disc of {first.side.value}")
    second, j = at_end[0]
    same_side = {d.disc for d in diag.discs_on(first.side)}
    for d in path[1:]:
        if any(m.labels[x] in same_side for x in m.rotation(d)):
            raise LocalModelViolation("H", f"the path meets {first.side.value} discs at dart {d}")

    comp1, comp2 = diag.curve_of(first), diag.curve_of(second)
    core = set(path) | set(comp1.darts) | set(comp2.darts)
    core |= {m.opposite[d] for d in core}

    def next_core(x: int) -> Tuple[int, List[int]]:
        crossed = []
        x = m.next_at_vertex[x]
        while x not in core:
            crossed.append(x)
            x = m.next_at_vertex[x]
        return x, crossed

    # walk the boundary of a thin band around both discs and the path
    crossings: List[int] = []
    d = path[0]
    while True:
        d, crossed = next_core(m.opposite[d])
        crossings.extend(crossed)
        if d == path[0]:
            break
    if any(m.labels[x] in same_side for x in crossings):
        raise LocalModelViolation("H", f"the band meets another disc of {first.side.value}")
    s = 1 if next_core(m.opposite[path[-1]])[0] in comp2.darts else -1
    t = 1 if next_core(path[0])[0] in comp1.darts else -1
    n1, n2 = first.size, second.size
    expected = [m.vertex_of[second.points[(j + k * s) % n2]] for k in range(1, n2)]
    expected += [m.vertex_of[first.points[(i + k * t) % n1]] for k in range(1, n1)]
    if [m.vertex_of[x] for x in crossings if m.labels[x] == GAMMA] != expected:
        raise LocalModelViolation("H", "Γ does not meet the band as a single arc")

    ed = m.editor()
    cuts = [ed.subdivide(x) for x in crossings]
    slid: List[int] = []
    for k, (_, leaving) in enumerate(cuts):
        arriving = cuts[(k + 1) % len(cuts)][0]
        if ed.corner_face(leaving) != ed.corner_face(arriving):
            raise LocalModelViolation("H", f"no room for the band next to dart {crossings[k]}")
        slid.append(ed.add_edge(leaving, arriving, first.disc)[0])
    for x in comp1.darts:
        if ed.opposite[x] in ed.face_walk(x):
            raise LocalModelViolation("H", f"{first.disc} does not bound a cell at dart {x}")
        ed.delete_edge(x)
    points = tuple(slid[k] for k, x in enumerate(crossings) if m.labels[x] == GAMMA)

    # dividing arcs of both discs, joined through the band
    arcs = nx.Graph()
    arcs.add_edges_from(((1, a), (1, b)) for a, b in first.chords)
    arcs.add_edges_from(((2, a), (2, b)) for a, b in second.chords)
    for k in range(n2 - 2):
        arcs.add_edge((0, k), (2, _gap_after(j + (k + 1) * s, s, n2)))
    arcs.add_edge((0, n2 - 2), (1, _gap_after(i, t, n1)))
    for k in range(n1 - 2):
        arcs.add_edge((0, n2 - 1 + k), (1, _gap_after(i + (k + 1) * t, t, n1)))
    arcs.add_edge((0, n1 + n2 - 3), (2, _gap_after(j, s, n2)))
    arcs.add_edge((1, _gap_after(i - t, t, n1)), (2, _gap_after(j - s, s, n2)))
    chords = []
    for component in nx.connected_components(arcs):
        ends = sorted(gap for tag, gap in component if tag == 0)
        if len(ends) != 2:
            raise LocalModelViolation("H", "dividing arcs do not close up across the band")
        chords.append((ends[0], ends[1]))
    changed = ChordDiagram(first.disc, first.side, points, tuple(chords))
    logger.debug("slid %s over %s along %s", first.disc, second.disc, path)
    return _replace(diag, ed.freeze(), changed)


_MOVES: Dict[MoveKind, Callable[[DecoratedHeegaardDiagram, DiscMove], DecoratedHeegaardDiagram]] = {
    MoveKind.T: _triangle,
    MoveKind.F: _finger,
    MoveKind.FINV: _unfinger,
    MoveKind.I: _interior_bypass,
    MoveKind.H: _handle_slide,
}


def apply_move(diag: DecoratedHeegaardDiagram, move: DiscMove) -> DecoratedHeegaardDiagram:
    """Apply one elementary disc move.

    Raises:
        LocalModelViolation: If the local model of the move is not present;
            the message names the failed condition.
    """
    try:
        out = _MOVES[move.kind](diag, move)
    except (InvalidMap, NonCrossingViolation, NotEmbedded) as exc:
        raise LocalModelViolation(move.kind.value, str(exc)) from exc
    logger.debug("applied %s", move)
    return out


# -- clearing a bypass arc -------------------------------------------------------------


def _next_obstruction(diag: DecoratedHeegaardDiagram, darts: Sequence[int]) -> Optional[DiscMove]:
    """The disc crossing nearest to an end of the arc, as a finger off that end."""
    m = diag.map
    own = set(darts) | {m.opposite[d] for d in darts}
    stops = list(darts) + [m.opposite[darts[-1]]]

    def crossing(d: int) -> Set[Label]:
        return {
            m.labels[x]
            for x in m.rotation(d)
            if x not in own and m.labels[x].is_curve and m.labels[x].kind is not Kind.GAMMA
        }

    on_gamma = [k for k, d in enumerate(stops) if gamma_at(m, d)]
    for k in on_gamma:
        if crossing(stops[k]):
            raise BypassObstructed(f"{sorted(map(str, crossing(stops[k])))} meet Γ on the arc")
    middle = on_gamma[1]
    towards_start = [(k, m.opposite[darts[k - 1]]) for k in range(1, middle)]
    towards_end = [(k, darts[k]) for k in range(len(darts) - 1, middle, -1)]
    for _, d in towards_start + towards_end:
        labels = crossing(d)
        if not labels:
            continue
        lab = next(iter(labels))
        if len(labels) > 1 or lab.kind not in (Kind.ALPHA, Kind.BETA):
            raise BypassObstructed(f"{sorted(map(str, labels))} cross the arc at dart {d}")
        return DiscMove(MoveKind.F, lab, (d,))
    return None


def clear_bypass_obstructions(
    diag: DecoratedHeegaardDiagram, spec: BypassSpec, budget: int = 64
) -> Tuple[DecoratedHeegaardDiagram, List[DiscMove]]:
    """Finger every disc crossing the bypass arc off the nearest end of the arc.

    Crossings are cleared from the ends of the arc inward, so each finger
    nests inside the ones already made.

    Raises:
        NotAdmissible: If the arc itself is not admissible.
        BypassObstructed: If a disc meets the arc on Γ.
        SearchBudgetExceeded: If more than ``budget`` moves would be needed.
    """
    admissible_arc(diag.surface, spec.arc.darts)
    log: List[DiscMove] = []
    while True:
        move = _next_obstruction(diag, spec.arc.darts)
        if move is None:
            return diag, log
        if len(log) >= budget:
            raise SearchBudgetExceeded(f"bypass arc still obstructed after {budget} moves")
        diag = apply_move(diag, move)
        log.append(move)
        logger.debug("cleared %s off the bypass arc", move.target_disc)
