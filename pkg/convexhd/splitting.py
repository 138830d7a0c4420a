"""Decorated Heegaard diagrams, chord diagrams and their certificates."""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from convexhd.convex import ConvexSurfaceData, edge_round, gamma_at, twisting
from convexhd.errors import (
    BadAttachingRegion,
    BadTwisting,
    InvalidMap,
    MalformedDiagram,
    NonCrossingViolation,
    NotAdmissible,
)
from convexhd.surface import (
    GAMMA,
    SCAFFOLD,
    Bigon,
    CombinatorialMap,
    CurveComponent,
    Kind,
    Label,
    MapEditor,
    alpha,
    beta,
    cap_disc,
    curve_through,
    cut_along_with_seams,
    draw_arc,
    draw_loop,
    find_bigons,
    glue_along_boundary,
    pieces,
    remove_bigon,
    seam_matching,
    smooth_all,
    strip_scaffold,
    trace_curve,
)

logger = logging.getLogger(__name__)


class Handlebody(str, Enum):
    """The two sides of the splitting surface; α discs live in U, β discs in V."""

    U = "U"
    V = "V"

    @property
    def kind(self) -> Kind:
        return Kind.ALPHA if self is Handlebody.U else Kind.BETA

    @property
    def other(self) -> "Handlebody":
        return Handlebody.V if self is Handlebody.U else Handlebody.U

    @classmethod
    def of(cls, label: Label) -> "Handlebody":
        if label.kind is Kind.ALPHA:
            return cls.U
        if label.kind is Kind.BETA:
            return cls.V
        raise InvalidMap(f"{label} is not a disc curve")


def chords_cross(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    (p, q), (r, s) = sorted(a), sorted(b)
    return (p < r < q < s) or (r < p < s < q)


@dataclass(frozen=True)
class ChordDiagram:
    """Dividing arcs of one compressing disc, recorded along its boundary.

    Attributes:
        disc: Label of the boundary curve.
        side: Handlebody holding the disc.
        points: Curve darts leaving the Γ crossings, in curve order.
        chords: Perfect non-crossing matching on the gaps; gap ``k`` lies
            between ``points[k]`` and ``points[k + 1]``.

    Raises:
        NonCrossingViolation: If two chords cross.
        InvalidMap: If the chords are not a perfect matching on the gaps.
    """

    disc: Label
    side: Handlebody
    points: Tuple[int, ...]
    chords: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        chords = tuple(sorted(tuple(sorted(c)) for c in self.chords))
        object.__setattr__(self, "chords", chords)
        object.__setattr__(self, "points", tuple(self.points))
        n = len(self.points)
        if n % 2:
            raise InvalidMap(f"{self.disc} meets Γ an odd number of times ({n})")
        ends = [g for c in chords for g in c]
        if sorted(ends) != list(range(n)):
            raise InvalidMap(f"chords of {self.disc} are not a perfect matching on {n} gaps")
        for i in range(len(chords)):
            for j in range(i + 1, len(chords)):
                if chords_cross(chords[i], chords[j]):
                    raise NonCrossingViolation(f"chords {chords[i]} and {chords[j]} of {self.disc} cross")

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def is_product(self) -> bool:
        return len(self.points) == 2

    def chord_of(self, gap: int) -> Tuple[int, int]:
        return next(c for c in self.chords if gap in c)

    def partner(self, gap: int) -> int:
        a, b = self.chord_of(gap)
        return b if a == gap else a

    def __str__(self) -> str:
        chords = "".join(f"({a} {b})" for a, b in self.chords)
        return f"{self.disc} side {self.side.value} points {' '.join(map(str, self.points))} chords {chords}"


def crossing_points(m: CombinatorialMap, comp: CurveComponent) -> Tuple[int, ...]:
    """Darts of ``comp`` leaving a vertex where it crosses Γ, in curve order."""
    return tuple(d for d in comp.darts if gamma_at(m, d))


def product_disc(m: CombinatorialMap, start: int, side: Handlebody) -> ChordDiagram:
    """Chord diagram of a disc meeting Γ twice, traced from ``start``."""
    comp = trace_curve(m, start)
    points = crossing_points(m, comp)
    return ChordDiagram(comp.label, side, points, ((0, 1),) if points else ())


@dataclass(frozen=True, eq=False)
class DecoratedHeegaardDiagram:
    """Splitting surface with dividing set and compressing-disc data.

    β data conceptually lives on a parallel copy of the surface, so α–β
    crossings carry no contact information.

    Raises:
        InvalidMap: If a disc curve lacks chord data, or its points no longer
            match its Γ crossings.
        MalformedDiagram: If a disc curve misses Γ or crosses it an odd
            number of times.
    """

    surface: ConvexSurfaceData
    discs: Tuple[ChordDiagram, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "discs", tuple(self.discs))
        m = self.map
        labels = [d.disc for d in self.discs]
        if len(set(labels)) != len(labels):
            raise InvalidMap("a disc curve carries two chord diagrams")
        present = {lab for lab in m.labels.values() if lab.kind in (Kind.ALPHA, Kind.BETA)}
        if present != set(labels):
            missing = sorted(str(x) for x in present ^ set(labels))
            raise InvalidMap(f"disc curves and chord diagrams disagree on {missing}")
        for disc in self.discs:
            if disc.side is not Handlebody.of(disc.disc):
                raise InvalidMap(f"{disc.disc} cannot bound a disc in {disc.side.value}")
            if not disc.points or disc.size % 2:
                raise MalformedDiagram(f"{disc.disc} crosses Γ {disc.size} times, not a positive even number")
            comp = self.curve_of(disc)
            if not comp.is_closed:
                raise InvalidMap(f"{disc.disc} is not a closed curve")
            found = crossing_points(m, comp)
            if found != disc.points:
                raise InvalidMap(f"points of {disc.disc} are {list(disc.points)}, curve crosses Γ at {list(found)}")

    @property
    def map(self) -> CombinatorialMap:
        return self.surface.map

    @cached_property
    def genus(self) -> int:
        return sum(p.genus for p in pieces(self.map))

    def curve_of(self, disc: ChordDiagram) -> CurveComponent:
        if disc.points:
            return trace_curve(self.map, disc.points[0])
        return curve_through(self.map, disc.disc)

    def disc(self, label: Label) -> ChordDiagram:
        for d in self.discs:
            if d.disc == label:
                return d
        raise InvalidMap(f"no disc {label}")

    def discs_on(self, side: Handlebody) -> List[ChordDiagram]:
        return [d for d in self.discs if d.side is side]

    @property
    def alphas(self) -> List[CurveComponent]:
        return [self.curve_of(d) for d in self.discs_on(Handlebody.U)]

    @property
    def betas(self) -> List[CurveComponent]:
        return [self.curve_of(d) for d in self.discs_on(Handlebody.V)]

    @property
    def is_complete(self) -> bool:
        return len(self.alphas) == len(self.betas) == self.genus

    def next_index(self, kind: Kind) -> int:
        used = [int(lab.name) for lab in self.map.labels.values() if lab.kind is kind and lab.name.isdigit()]
        return max(used, default=0) + 1

    def with_changes(
        self, surface: Optional[ConvexSurfaceData] = None, discs: Optional[Iterable[ChordDiagram]] = None
    ) -> "DecoratedHeegaardDiagram":
        return replace(
            self,
            surface=surface if surface is not None else self.surface,
            discs=tuple(discs) if discs is not None else self.discs,
        )

    def gamma_meets_both(self) -> Dict[int, Tuple[bool, bool]]:
        """Per Γ component (by lowest dart): does it meet the α and the β system?"""
        m = self.map
        out: Dict[int, Tuple[bool, bool]] = {}
        for comp in self.surface.gamma:
            kinds = {m.labels[x].kind for d in comp.darts for x in m.rotation(d)}
            out[min(comp.darts)] = (Kind.ALPHA in kinds, Kind.BETA in kinds)
        return out


# -- normalization keeping chord data ------------------------------------------------


def gaps_along(m: CombinatorialMap, disc: ChordDiagram) -> Dict[int, int]:
    """Gap index of every dart (both orientations) of the disc curve."""
    comp = trace_curve(m, disc.points[0])
    index = {p: k for k, p in enumerate(disc.points)}
    gaps: Dict[int, int] = {}
    current = 0
    for d in comp.darts:
        current = index.get(d, current)
        gaps[d] = gaps[m.opposite[d]] = current
    return gaps


def drop_bigon_points(m: CombinatorialMap, disc: ChordDiagram, bigon: Bigon) -> Optional[ChordDiagram]:
    """Chord diagram left after removing ``bigon`` from the disc curve.

    Only bigons whose gap carries a boundary-parallel chord may go; the chord
    goes with them.  Returns None when the bigon must stay, which includes
    the last pair of points of a product disc.
    """
    n = disc.size
    if n <= 2:
        return None
    at = {m.tail(p): k for k, p in enumerate(disc.points)}
    corners = [at.get(m.vertex_of[c[1]]) for c in bigon.corners]
    if None in corners:
        return None
    gap = gaps_along(m, disc)[bigon.other_run[0]]
    if sorted(corners) != sorted({gap, (gap + 1) % n}):
        return None
    if disc.partner(gap) not in ((gap + 1) % n, (gap - 1) % n):
        return None
    dropped = {gap, (gap + 1) % n}
    remaining = [k for k in range(n) if k not in dropped]
    new_index = {k: i for i, k in enumerate(remaining)}

    def gap_map(g: int) -> int:
        k = g
        while k not in new_index:
            k = (k - 1) % n
        return new_index[k]

    chords = [(gap_map(a), gap_map(b)) for a, b in disc.chords if gap not in (a, b)]
    points = tuple(disc.points[k] for k in remaining)
    return ChordDiagram(disc.disc, disc.side, points, tuple(chords))


def normalize_diagram(diag: DecoratedHeegaardDiagram) -> Tuple[DecoratedHeegaardDiagram, List[str]]:
    """Normalize the surface while keeping every chord diagram consistent.

    Bigons on disc curves are removed only when their gap carries a
    boundary-parallel chord; those two points and the chord disappear.
    """
    m = diag.map
    discs = {d.disc: d for d in diag.discs}
    trace: List[str] = []
    while True:
        m = smooth_all(strip_scaffold(m))
        chosen: Optional[Bigon] = None
        update: Optional[ChordDiagram] = None
        for bigon in find_bigons(m):
            if bigon.other in discs:
                update = drop_bigon_points(m, discs[bigon.other], bigon)
                if update is None:
                    continue
            chosen = bigon
            break
        if chosen is None:
            break
        trace.append(f"removed bigon of Γ with {chosen.other} at dart {chosen.key}")
        logger.debug(trace[-1])
        m = remove_bigon(m, chosen)
        if update is not None:
            discs[chosen.other] = update
    ordered = [discs[d.disc] for d in diag.discs]
    return diag.with_changes(ConvexSurfaceData(m), ordered), trace


# -- tightness -------------------------------------------------------------------------


class Verdict(str, Enum):
    TIGHT = "TIGHT"
    NOT_CERTIFIED = "NOT_CERTIFIED"


@dataclass(frozen=True)
class TightnessCertificate:
    """Outcome of cutting one side along its discs and rounding the result.

    Attributes:
        side: The handlebody examined.
        sphere_gamma_components: Γ components over all capped pieces.
        per_piece: ``(genus, Γ components)`` per capped piece.
        verdict: TIGHT iff every piece is a sphere with connected Γ.
        trace: Human-readable steps of the computation.
    """

    side: Handlebody
    sphere_gamma_components: int
    per_piece: Tuple[Tuple[int, int], ...]
    verdict: Verdict
    trace: Tuple[str, ...] = ()

    @property
    def tight(self) -> bool:
        return self.verdict is Verdict.TIGHT

    def to_dict(self) -> Dict[str, object]:
        return {
            "side": self.side.value,
            "verdict": self.verdict.value,
            "sphere_gamma_components": self.sphere_gamma_components,
            "pieces": [{"genus": g, "gamma": c} for g, c in self.per_piece],
            "trace": list(self.trace),
        }


def _crossing_ends(
    m: CombinatorialMap, comp: CurveComponent, disc_index: int, disc: ChordDiagram
) -> Dict[int, Tuple[int, int, str]]:
    """Γ darts at the crossings of ``comp``, keyed to ``(disc, point, side)``."""
    ends: Dict[int, Tuple[int, int, str]] = {}
    position = {d: i for i, d in enumerate(comp.darts)}
    for k, q in enumerate(disc.points):
        p = m.opposite[comp.darts[position[q] - 1]]
        rot = m.rotation(p)
        right = set(rot[1 : rot.index(q)])
        for g in gamma_at(m, q):
            ends[g] = (disc_index, k, "R" if g in right else "L")
    return ends


def _cap_for(
    m: CombinatorialMap, walk: Sequence[int], ends: Dict[int, Tuple[int, int, str]], discs: Sequence[ChordDiagram]
) -> Tuple[ChordDiagram, CombinatorialMap]:
    """Cap disc for one hole left by cutting along a disc curve.

    The left copy puts the end of gap ``k`` next to point ``k``, the right
    copy next to point ``k + 1``.  Points sit on every other hole vertex, so
    each gap end lands on the midpoint following its point.
    """
    pos: Dict[int, int] = {}
    copy = "L"
    t = 0
    for i, d in enumerate(walk):
        for g in gamma_at(m, d):
            t, k, copy = ends[g]
            pos[k] = i
    disc = discs[t]
    n, size = len(walk), disc.size
    anchor = [pos[g] if copy == "L" else pos[(g + 1) % size] for g in range(size)]
    chords = [((-anchor[a]) % n, (-anchor[b]) % n) for a, b in disc.chords]
    return disc, cap_disc(n, chords)


def cut_and_smooth(
    diag: DecoratedHeegaardDiagram, side: Handlebody, mirrored: bool = False
) -> TightnessCertificate:
    """Cut one side along its disc curves, cap with the chord discs and round.

    Each capped piece is inspected: the side is certified tight when every
    piece is a sphere whose rounded dividing set is connected.  Along each
    cut curve the left copy joins gap ``k`` to point ``k`` and the right copy
    to point ``k + 1``; ``mirrored`` swaps the two.
    """
    diag, steps = normalize_diagram(diag)
    trace = list(steps)
    m = diag.map
    discs = diag.discs_on(side)
    comps = [diag.curve_of(d) for d in discs]
    surface = diag.surface
    if comps:
        ends: Dict[int, Tuple[int, int, str]] = {}
        for t, (disc, comp) in enumerate(zip(discs, comps)):
            ends.update(_crossing_ends(m, comp, t, disc))
        cut, _ = cut_along_with_seams(m, comps)
        ed = cut.editor()
        for h in sorted(cut.holes):
            ed.subdivide(h)
        cut = ed.freeze()
        surface = ConvexSurfaceData(cut)
        for i in sorted(cut.hole_faces):
            walk = cut.faces[i]
            disc, cap = _cap_for(cut, walk, ends, discs)
            matching = seam_matching(surface.map, walk[0], cap, 1)
            surface = edge_round(surface, ConvexSurfaceData(cap), matching, mirrored)
            trace.append(f"capped {disc.disc} with {len(disc.chords)} chords and rounded the seam")
    capped = surface.map
    parts = pieces(capped)
    counts = [0] * len(parts)
    for comp in surface.gamma:
        counts[capped.component_of[comp.darts[0]]] += 1
    per_piece = tuple((p.genus, counts[i]) for i, p in enumerate(parts))
    for i, (genus, count) in enumerate(per_piece):
        shape = "sphere" if genus == 0 else f"genus {genus} surface"
        trace.append(f"piece {i}: {shape} with {count} Γ component(s)")
    tight = all(genus == 0 and count == 1 for genus, count in per_piece)
    verdict = Verdict.TIGHT if tight else Verdict.NOT_CERTIFIED
    logger.info("side %s: %s", side.value, verdict.value)
    return TightnessCertificate(side, sum(counts), per_piece, verdict, tuple(trace))


def is_product_disc(diag: DecoratedHeegaardDiagram, disc: Label) -> bool:
    """Whether the disc meets Γ exactly twice after normalization."""
    normal, _ = normalize_diagram(diag)
    return normal.disc(disc).is_product


@dataclass(frozen=True)
class ConvexityCertificate:
    """Both tightness certificates plus the product-disc check per disc."""

    u: TightnessCertificate
    v: TightnessCertificate
    products: Tuple[Tuple[str, bool], ...]

    @property
    def tight(self) -> bool:
        return self.u.tight and self.v.tight

    @property
    def flag(self) -> bool:
        return self.tight and all(ok for _, ok in self.products)

    @property
    def failures(self) -> List[str]:
        """One line per failed check, empty when the splitting is convex."""
        out = [f"{c.side.value}: {c.verdict.value}" for c in (self.u, self.v) if not c.tight]
        return out + [f"{name} is not a product disc" for name, ok in self.products if not ok]

    def to_dict(self) -> Dict[str, object]:
        return {
            "convex": self.flag,
            "U": self.u.to_dict(),
            "V": self.v.to_dict(),
            "product_discs": dict(self.products),
        }


def is_convex_splitting(diag: DecoratedHeegaardDiagram, mirrored: bool = False) -> ConvexityCertificate:
    """Both sides tight and every disc a Γ product disc."""
    normal, _ = normalize_diagram(diag)
    products = tuple((str(d.disc), d.is_product) for d in normal.discs)
    return ConvexityCertificate(
        cut_and_smooth(normal, Handlebody.U, mirrored),
        cut_and_smooth(normal, Handlebody.V, mirrored),
        products,
    )


def tightening_check(diag: DecoratedHeegaardDiagram, mirrored: bool = False) -> bool:
    """Whether the disc systems cut both sides into tight balls."""
    cert = is_convex_splitting(diag, mirrored)
    balls = all(g == 0 for g, _ in cert.u.per_piece + cert.v.per_piece)
    return cert.tight and balls and diag.is_complete


# -- stabilisation and handles ------------------------------------------------------


def _tube(ed: MapEditor, foot_p: int, foot_q: int, core: Label, meridian: Label) -> List[Tuple[int, int]]:
    """Attach a tube between the vertices of ``foot_p`` and ``foot_q``.

    Both feet sit on Γ.  The core edge runs from the ring at ``foot_p`` to the
    ring at ``foot_q`` and is crossed twice by the two Γ strands that now run
    over the tube.  The ring at ``foot_p`` becomes the ``meridian`` curve.

    Returns:
        The ring edges around ``foot_p``.
    """
    rot_p, rot_q = ed.rotation(foot_p), ed.rotation(foot_q)
    ring_p = ed.explode([[x] for x in rot_p])
    ring_q = ed.explode([[x] for x in rot_q])
    n1, _ = ed.add_edge(ring_p[0][0], ring_q[0][0], core)
    for p, _ in ring_p:
        ed.set_label(p, meridian)
    up_r, down_r = ed.subdivide(n1)
    up_l, down_l = ed.subdivide(down_r)
    walk = ed.face_walk(n1)
    position = {ed.opposite[walk[t - 1]]: t for t in range(len(walk))}

    def feet(ring: List[Tuple[int, int]], rot: List[int]) -> List[int]:
        return [ring[i][0] for i, x in enumerate(rot) if ed.labels[x].kind is Kind.GAMMA]

    feet_p, feet_q = feet(ring_p, rot_p), feet(ring_q, rot_q)
    if len(feet_p) != 2 or len(feet_q) != 2:
        raise NotAdmissible("a tube needs both feet on a single strand of Γ")
    for a in permutations(feet_p):
        for b in permutations(feet_q):
            links = [(a[0], up_r), (a[1], up_l), (b[0], down_r), (b[1], down_l)]
            spans = [(position[u], position[v]) for u, v in links]
            if any(chords_cross(s, t) for i, s in enumerate(spans) for t in spans[i + 1 :]):
                continue
            for u, v in links:
                ed.add_edge(u, v, GAMMA)
            return ring_p
    raise InvalidMap("Γ cannot be routed over the tube without crossing itself")


def heegaard_stab_positive(diag: DecoratedHeegaardDiagram, route: Sequence[int]) -> DecoratedHeegaardDiagram:
    """Positively stabilise along the arc drawn through ``route``.

    The arc runs from a point of Γ to another point of Γ without meeting Γ or
    any β curve in between, so its twisting is -1/2.  A tube is attached
    along it; its meridian becomes a new α curve and the arc closed over the
    tube a new β curve, both Γ product discs crossing each other once.

    Raises:
        NotAdmissible: If the arc meets a β curve or does not end on Γ.
        BadTwisting: If the arc twists by anything but -1/2.
    """
    m = diag.map
    for d in route[1:-1]:
        if m.labels[d].kind is Kind.BETA:
            raise NotAdmissible(f"stabilisation arc crosses {m.labels[d]}")
    drawn, path = draw_arc(m, route)
    tw = twisting(ConvexSurfaceData(drawn), path)
    if tw != Fraction(-1, 2):
        raise BadTwisting(f"stabilisation arc has twisting {tw}, expected -1/2")
    if m.labels[route[0]].kind is not Kind.GAMMA or m.labels[route[-1]].kind is not Kind.GAMMA:
        raise NotAdmissible("stabilisation arcs start and end on Γ")
    a, b = alpha(diag.next_index(Kind.ALPHA)), beta(diag.next_index(Kind.BETA))
    ed = drawn.editor()
    for d in path:
        ed.set_label(d, b)
    ring = _tube(ed, path[0], ed.opposite[path[-1]], b, a)
    new = ed.freeze()
    surface = ConvexSurfaceData(new)
    added = [product_disc(new, ring[0][0], Handlebody.U), product_disc(new, path[0], Handlebody.V)]
    for disc in added:
        if not disc.is_product:
            raise InvalidMap(f"{disc.disc} meets Γ {disc.size} times after stabilising")
    logger.info("stabilised along %d darts: added %s and %s", len(path), a, b)
    return diag.with_changes(surface, list(diag.discs) + added)


def ball() -> DecoratedHeegaardDiagram:
    """The boundary of a contact 0-handle: a sphere split by one Γ circle."""
    m = CombinatorialMap({1: 2, 2: 1}, {1: 2, 2: 1}, {1: GAMMA, 2: GAMMA})
    return DecoratedHeegaardDiagram(ConvexSurfaceData(m), (), name="ball")


def _one_handle(diag: DecoratedHeegaardDiagram, feet: Sequence[int]) -> DecoratedHeegaardDiagram:
    m = diag.map
    if len(feet) != 2 or any(m.labels[d].kind is not Kind.GAMMA for d in feet):
        raise BadAttachingRegion("a contact 1-handle attaches at two points of Γ")
    ed = m.editor()
    spurs = []
    for d in feet:
        foot = ed.subdivide(d)[0]
        spurs.append(ed.add_pendant(foot, SCAFFOLD)[0])
    a = alpha(diag.next_index(Kind.ALPHA))
    ring = _tube(ed, spurs[0], spurs[1], SCAFFOLD, a)
    new = ed.freeze()
    disc = product_disc(new, ring[0][0], Handlebody.U)
    logger.info("attached a contact 1-handle with co-core %s", a)
    return diag.with_changes(ConvexSurfaceData(new), list(diag.discs) + [disc])


def _two_handle(diag: DecoratedHeegaardDiagram, route: Sequence[int]) -> DecoratedHeegaardDiagram:
    """Surger the surface along an attaching circle meeting Γ twice.

    The circle is cut out and both holes are capped by discs carrying one Γ
    arc each.  An α curve crossed once by the circle is cancelled with it.
    """
    m = diag.map
    if any(m.labels[d].kind is Kind.BETA for d in route):
        raise BadAttachingRegion("attaching circles must avoid the β curves")
    crossed = [m.labels[d] for d in route if m.labels[d].kind is Kind.ALPHA]
    if len(crossed) > 1:
        raise BadAttachingRegion(f"attaching circle crosses α {len(crossed)} times, at most once is allowed")
    drawn, path = draw_loop(m, route, Label(Kind.AUX, "attaching"))
    circle = trace_curve(drawn, path[0])
    hits = len(crossing_points(drawn, circle))
    if hits != 2:
        raise BadAttachingRegion(f"attaching circle meets Γ {hits} times, a contact 2-handle needs 2")
    cut, _ = cut_along_with_seams(drawn, [circle])
    walks = [cut.faces[i] for i in sorted(cut.hole_faces)]
    surgered = cut
    for walk in walks:
        n = len(walk)
        ends = [i for i, d in enumerate(walk) if gamma_at(cut, d)]
        cap = cap_disc(n, [((1 - ends[0]) % n, (1 - ends[1]) % n)])
        surgered = glue_along_boundary(surgered, cap, seam_matching(surgered, walk[0], cap, 1))
    cancelled = set(crossed)
    surgered = surgered.relabel(lambda lab: SCAFFOLD if lab in cancelled else lab)
    discs = [d for d in diag.discs if d.disc not in cancelled]
    logger.info("attached a contact 2-handle cancelling %s", ", ".join(map(str, cancelled)) or "nothing")
    return diag.with_changes(ConvexSurfaceData(surgered), discs)


def _three_handle(diag: DecoratedHeegaardDiagram) -> DecoratedHeegaardDiagram:
    cert = cut_and_smooth(diag, Handlebody.V)
    if any(genus for genus, _ in cert.per_piece):
        raise BadAttachingRegion("3-handles cap spheres; the β discs leave a surface of positive genus")
    if not cert.tight:
        raise BadAttachingRegion("a contact 3-handle needs connected Γ on every sphere it caps")
    return diag


def contact_handle_attach(
    diag: Optional[DecoratedHeegaardDiagram], index: int, region: Sequence[int] = ()
) -> DecoratedHeegaardDiagram:
    """Attach a contact handle and return the new decorated boundary.

    ``region`` is the attaching data: two Γ darts for the feet of a 1-handle,
    or a loop route for the attaching circle of a 2-handle.  0-handles start
    from nothing and 3-handles only check that they cap tight spheres.

    Raises:
        BadAttachingRegion: If the attaching data does not meet Γ as the
            handle's model requires.
    """
    if index == 0:
        return ball()
    if diag is None:
        raise BadAttachingRegion(f"a {index}-handle needs a diagram to attach to")
    if index == 1:
        return _one_handle(diag, region)
    if index == 2:
        return _two_handle(diag, region)
    if index == 3:
        return _three_handle(diag)
    raise BadAttachingRegion(f"no contact handle of index {index}")
