"""Contact refinement: x-arcs on discs, tunnels, and the refined splitting.

Every disc of a tight diagram is cut by a set of x-arcs into subdiscs holding
one chord each.  Tunnelling along each arc moves a 1-handle to the other side
and breaks the discs into Γ product discs, which makes the splitting convex.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Sequence, Set, Tuple

from convexhd.convex import ConvexSurfaceData, gamma_at
from convexhd.errors import (
    ArcMeetsChord,
    InvalidMap,
    NoChords,
    NonCrossingViolation,
    NotAdjacent,
    NotAdmissible,
    NotConvexSplitting,
)
from convexhd.splitting import (
    ChordDiagram,
    ConvexityCertificate,
    DecoratedHeegaardDiagram,
    Handlebody,
    chords_cross,
    is_convex_splitting,
    normalize_diagram,
    product_disc,
)
from convexhd.surface import GAMMA, Kind, Label, MapEditor

logger = logging.getLogger(__name__)

Arc = Tuple[int, int]


def _arc(x: int, y: int) -> Arc:
    if x == y:
        raise InvalidMap(f"x-arc joins point {x} to itself")
    return (x, y) if x < y else (y, x)


def arc_gaps(arc: Arc, n: int) -> FrozenSet[int]:
    """Gaps on the side of ``arc`` walked forward from its first endpoint."""
    x, y = arc
    return frozenset((x + t) % n for t in range((y - x) % n))


def leftmost_gap_arcs(disc: ChordDiagram) -> List[Arc]:
    """One arc per chord, closing it off from the chord through gap 0.

    Raises:
        NoChords: If the disc carries no chords.
    """
    if not disc.chords:
        raise NoChords(f"{disc.disc} carries no chords")
    n = disc.size
    return [_arc(i, (j + 1) % n) for i, j in disc.chords if 0 not in (i, j)]


def check_x_arcs(disc: ChordDiagram, arcs: Sequence[Arc]) -> None:
    """Check that ``arcs`` cut ``disc`` into subdiscs with one chord each.

    Raises:
        NonCrossingViolation: If two arcs cross.
        ArcMeetsChord: If an arc separates the two ends of a chord.
        InvalidMap: If some subdisc holds no chord or several.
    """
    n = disc.size
    for x, y in arcs:
        if not (0 <= x < n and 0 <= y < n) or x == y:
            raise InvalidMap(f"x-arc ({x} {y}) is not an arc between points of {disc.disc}")
    if len(set(arcs)) != len(arcs):
        raise InvalidMap(f"{disc.disc} lists an x-arc twice")
    for i, a in enumerate(arcs):
        for b in arcs[i + 1 :]:
            if chords_cross(a, b):
                raise NonCrossingViolation(f"x-arcs {a} and {b} of {disc.disc} cross")
    sides = [arc_gaps(a, n) for a in arcs]
    for a, inside in zip(arcs, sides):
        for c in disc.chords:
            if (c[0] in inside) != (c[1] in inside):
                raise ArcMeetsChord(f"x-arc {a} of {disc.disc} meets chord {c}")
    classes: Dict[Tuple[bool, ...], Set[int]] = {}
    for g in range(n):
        classes.setdefault(tuple(g in s for s in sides), set()).add(g)
    if sorted(map(sorted, classes.values())) != sorted(map(list, disc.chords)):
        raise InvalidMap(f"x-arcs of {disc.disc} do not leave exactly one chord per subdisc")


@dataclass(frozen=True, eq=False)
class RefinementPlan:
    """Diagram plus the x-arcs chosen on each of its discs.

    Arcs are pairs of point indices.  Product discs carry no arcs.
    """

    diagram: DecoratedHeegaardDiagram
    x_arcs: Mapping[Label, Tuple[Arc, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        arcs = {lab: tuple(sorted(_arc(*a) for a in self.x_arcs.get(lab, ()))) for lab in self.labels}
        unknown = set(self.x_arcs) - set(arcs)
        if unknown:
            raise InvalidMap(f"x-arcs given for unknown discs {sorted(map(str, unknown))}")
        object.__setattr__(self, "x_arcs", arcs)
        for disc in self.diagram.discs:
            check_x_arcs(disc, arcs[disc.disc])

    @property
    def labels(self) -> List[Label]:
        return [d.disc for d in self.diagram.discs]

    def arcs_on(self, label: Label) -> Tuple[Arc, ...]:
        return self.x_arcs[label]

    @property
    def size(self) -> int:
        return sum(len(a) for a in self.x_arcs.values())

    def key(self) -> Tuple[Tuple[str, Tuple[Arc, ...]], ...]:
        return tuple((str(lab), self.x_arcs[lab]) for lab in self.labels)

    def to_dict(self) -> Dict[str, List[List[int]]]:
        return {str(lab): [list(a) for a in self.x_arcs[lab]] for lab in self.labels}


def choose_x_arcs(diag: DecoratedHeegaardDiagram, remove_bigon_points: bool = True) -> RefinementPlan:
    """Pick x-arcs on every disc by the leftmost-gap rule.

    With ``remove_bigon_points`` the diagram is normalized first, removing Γ
    crossings trapped in bigons with a boundary-parallel chord; the plan then
    refers to the normalized diagram.

    Raises:
        NoChords: If some disc carries no chords.
    """
    if remove_bigon_points:
        diag, _ = normalize_diagram(diag)
    arcs = {d.disc: tuple(leftmost_gap_arcs(d)) for d in diag.discs}
    plan = RefinementPlan(diag, arcs)
    logger.debug("chose %d x-arcs on %d discs", plan.size, len(arcs))
    return plan


def arc_slide(plan: RefinementPlan, disc: Label, moving: Arc, over: Arc) -> RefinementPlan:
    """Slide ``moving`` over ``over`` across their shared endpoint.

    ``{s, u}`` slid over ``{s, t}`` becomes ``{t, u}``.

    Raises:
        NotAdjacent: If the arcs share no endpoint or the slid arcs no
            longer cut the disc into one-chord subdiscs.
    """
    arcs = list(plan.arcs_on(disc))
    moving, over = _arc(*moving), _arc(*over)
    if moving not in arcs or over not in arcs or moving == over:
        raise NotAdjacent(f"{moving} and {over} are not two x-arcs of {disc}")
    shared = set(moving) & set(over)
    if len(shared) != 1:
        raise NotAdjacent(f"x-arcs {moving} and {over} share no endpoint")
    (s,) = shared
    (u,) = set(moving) - shared
    (t,) = set(over) - shared
    if t == u:
        raise NotAdjacent(f"sliding {moving} over {over} collapses it")
    arcs[arcs.index(moving)] = _arc(t, u)
    changed = dict(plan.x_arcs)
    changed[disc] = tuple(arcs)
    try:
        return RefinementPlan(plan.diagram, changed)
    except (InvalidMap, ArcMeetsChord, NonCrossingViolation) as e:
        raise NotAdjacent(f"sliding {moving} over {over} breaks the plan: {e}") from e


def slide_orbit(plan: RefinementPlan, disc: Label, limit: int = 1000) -> List[RefinementPlan]:
    """Every plan reachable from ``plan`` by arc slides on one disc, in BFS order."""
    seen = {plan.arcs_on(disc)}
    out = [plan]
    queue = deque([plan])
    while queue and len(out) < limit:
        current = queue.popleft()
        arcs = current.arcs_on(disc)
        for moving in arcs:
            for over in arcs:
                if moving == over or not set(moving) & set(over):
                    continue
                try:
                    slid = arc_slide(current, disc, moving, over)
                except NotAdjacent:
                    continue
                if slid.arcs_on(disc) not in seen:
                    seen.add(slid.arcs_on(disc))
                    out.append(slid)
                    queue.append(slid)
    return out


# -- tunnels ---------------------------------------------------------------------


@dataclass(frozen=True)
class TunnelStep:
    """One tunnel of a refinement.

    Attributes:
        disc: Disc tunnelled through; keeps the part holding gap ``arc[0]``.
        arc: Point indices of the arc on the disc at tunnelling time.
        split: Label of the second disc the tunnel leaves behind.
        meridian: Label of the new co-core disc on the other side.
        feet: The new crossing darts on ``disc`` and ``split``.
    """

    disc: Label
    arc: Arc
    split: Label
    meridian: Label
    feet: Tuple[int, int]

    def to_dict(self) -> Dict[str, object]:
        return {
            "disc": str(self.disc),
            "arc": list(self.arc),
            "split": str(self.split),
            "meridian": str(self.meridian),
        }


def _explode(ed: MapEditor, d: int) -> Dict[int, int]:
    """Explode the vertex of ``d``; maps every dart there to its ring corner."""
    rot = ed.rotation(d)
    ring = ed.explode([[x] for x in rot])
    return {x: ring[i][0] for i, x in enumerate(rot)}


def _join(ed: MapEditor, c1: int, c2: int, label: Label) -> int:
    if ed.next[c2] not in ed.corner_face(c1):
        raise InvalidMap("tunnel strands do not share a face")
    return ed.add_edge(c1, c2, label)[0]


def _corner_towards(ed: MapEditor, start: int, targets: Sequence[int]) -> int:
    """A corner among ``targets`` in the face of the corner after ``start``."""
    face = ed.corner_face(start)
    for t in targets:
        if ed.next[t] in face:
            return t
    raise InvalidMap("no Γ strand of the tube shares a face with the tunnel foot")


def _cross(ed: MapEditor, start: int, foot: int, targets: Sequence[int]) -> int:
    """Run Γ from ``start`` across the edge at ``foot`` on to one of ``targets``."""
    pair = [foot, ed.next[foot]]
    near = _corner_towards(ed, start, pair)
    far = pair[1] if near == pair[0] else pair[0]
    ed.add_edge(start, near, GAMMA)
    end = _corner_towards(ed, far, targets)
    ed.add_edge(far, end, GAMMA)
    return end


def _inherit(disc: ChordDiagram, label: Label, first: int, points: Sequence[int]) -> ChordDiagram:
    """Chords of the part of ``disc`` starting at gap ``first``.

    The part's points are ``points``: the old points strictly between the
    feet followed by the new foot, so gap ``first`` becomes the last gap.
    """
    n, size = disc.size, len(points)
    new_gap = {}
    for t in range(size - 1):
        new_gap[(first + 1 + t) % n] = t
    new_gap[first] = size - 1
    chords = [(new_gap[a], new_gap[b]) for a, b in disc.chords if a in new_gap]
    return ChordDiagram(label, disc.side, tuple(points), tuple(chords))


def _tunnel(diag: DecoratedHeegaardDiagram, label: Label, arc: Arc) -> Tuple[DecoratedHeegaardDiagram, TunnelStep]:
    disc = diag.disc(label)
    n = disc.size
    a, b = arc
    if not (0 <= a < n and 0 <= b < n) or a == b:
        raise InvalidMap(f"({a} {b}) is not an arc between points of {label}")
    inside = arc_gaps((a, b), n)
    for c in disc.chords:
        if (c[0] in inside) != (c[1] in inside):
            raise ArcMeetsChord(f"x-arc ({a} {b}) of {label} meets chord {c}")
    m = diag.map
    comp = diag.curve_of(disc)
    position = {d: i for i, d in enumerate(comp.darts)}
    points = disc.points

    def arriving(p: int) -> int:
        return comp.darts[position[p] - 1]

    for p in (points[a], points[b]):
        extra = [x for x in m.rotation(p) if m.labels[x].is_curve and m.labels[x] not in (label, GAMMA)]
        if extra:
            raise NotAdmissible(f"{m.labels[extra[0]]} passes through the tunnel foot at dart {p}")
    kind = label.kind
    other = Kind.BETA if kind is Kind.ALPHA else Kind.ALPHA
    split = Label(kind, str(diag.next_index(kind)))
    meridian = Label(other, str(diag.next_index(other)))

    ed = m.editor()
    # the part from foot b round to foot a becomes the split disc
    i, stop = position[points[b]], position[arriving(points[a])]
    while True:
        ed.set_label(comp.darts[i], split)
        if i == stop:
            break
        i = (i + 1) % len(comp.darts)

    gamma_a = gamma_at(m, points[a])
    gamma_b = gamma_at(m, points[b])
    ring_a = _explode(ed, points[a])
    ring_b = _explode(ed, points[b])
    e_ab = m.opposite[arriving(points[a])]
    e_ba = m.opposite[arriving(points[b])]
    back = ed.add_edge(ring_a[e_ab], ring_b[points[b]], split)[0]
    for x in m.rotation(points[b]):
        ed.set_label(ring_b[x], meridian)
    _, foot_split = ed.subdivide(back)
    core = _join(ed, ring_a[points[a]], ring_b[e_ba], label)
    foot_disc, _ = ed.subdivide(core)

    feet_b = [ring_b[g] for g in gamma_b]
    used = _cross(ed, ring_a[gamma_a[0]], foot_disc, feet_b)
    _cross(ed, ring_a[gamma_a[1]], foot_split, [f for f in feet_b if f != used])

    new = ed.freeze()
    first = [points[(a + 1 + t) % n] for t in range((b - a) % n - 1)] + [foot_disc]
    second = [points[(b + 1 + t) % n] for t in range((a - b) % n - 1)] + [foot_split]
    side = disc.side
    discs = []
    for d in diag.discs:
        discs.append(_inherit(disc, label, a, first) if d.disc == label else d)
    discs.append(_inherit(disc, split, b, second))
    discs.append(product_disc(new, ring_b[points[b]], side.other))
    result = diag.with_changes(ConvexSurfaceData(new), discs)
    logger.debug("tunnelled %s along (%d %d): split off %s, co-core %s", label, a, b, split, meridian)
    return result, TunnelStep(label, (a, b), split, meridian, (foot_disc, foot_split))


def tunnel(diag: DecoratedHeegaardDiagram, disc: Label, arc: Arc) -> DecoratedHeegaardDiagram:
    """Tunnel along the x-arc joining points ``arc`` of ``disc``.

    A neighbourhood of the arc moves to the other handlebody: the genus goes
    up by one, the disc splits into two discs inheriting its chords, and the
    co-core of the tunnel is a new Γ product disc on the other side.  Γ runs
    over the tunnel in two strands, one across each half of the old disc.

    Raises:
        ArcMeetsChord: If the arc separates the ends of a chord.
        NotAdmissible: If another curve passes through a foot of the arc.
    """
    return _tunnel(diag, disc, arc)[0]


@dataclass(frozen=True, eq=False)
class RefinementResult:
    refined: DecoratedHeegaardDiagram
    tunnel_log: Tuple[TunnelStep, ...]
    convexity: ConvexityCertificate

    def to_dict(self) -> Dict[str, object]:
        return {
            "genus": self.refined.genus,
            "tunnels": [step.to_dict() for step in self.tunnel_log],
            "convexity": self.convexity.to_dict(),
        }


def refine(plan: RefinementPlan, mirrored: bool = False, strict: bool = True) -> RefinementResult:
    """Tunnel along every x-arc of ``plan`` and certify the result.

    α discs are tunnelled before β discs, each in disc order with arcs in
    plan order.  Arcs are tracked by their end darts, so an arc ending at a
    foot of an earlier tunnel moves to the new crossing on its own half.

    With ``strict`` off, a refined diagram that fails the convexity check is
    returned with its failing certificate instead of raising.

    Raises:
        NotConvexSplitting: If ``strict`` and the refined diagram is not a
            convex splitting, e.g. because a side of the plan was overtwisted.
    """
    diag = plan.diagram
    pending: List[Tuple[Handlebody, int, int]] = []
    for side in (Handlebody.U, Handlebody.V):
        for disc in diag.discs_on(side):
            for x, y in plan.arcs_on(disc.disc):
                pending.append((side, disc.points[x], disc.points[y]))
    log: List[TunnelStep] = []
    while pending:
        side, p, q = pending.pop(0)
        current = _holding(diag, side, p, q)
        index = {d: i for i, d in enumerate(current.points)}
        diag, step = _tunnel(diag, current.disc, (index[p], index[q]))
        log.append(step)
        kept = set(diag.disc(step.disc).points)

        def moved(d: int, partner: int) -> int:
            if d not in (p, q):
                return d
            return step.feet[0] if partner in kept else step.feet[1]

        pending = [(s, moved(x, y), moved(y, x)) for s, x, y in pending]
    refined, _ = normalize_diagram(diag)
    convexity = is_convex_splitting(refined, mirrored)
    logger.info("refined with %d tunnels to genus %d, convex: %s", len(log), refined.genus, convexity.flag)
    if strict and not convexity.flag:
        raise NotConvexSplitting("refined diagram is not convex: " + "; ".join(convexity.failures))
    return RefinementResult(refined, tuple(log), convexity)


def _holding(diag: DecoratedHeegaardDiagram, side: Handlebody, p: int, q: int) -> ChordDiagram:
    for disc in diag.discs_on(side):
        if p in disc.points and q in disc.points:
            return disc
    raise InvalidMap(f"no disc on side {side.value} has both ends {p} and {q} of an x-arc")
