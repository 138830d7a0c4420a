"""Combinatorial maps: oriented surfaces with labeled curve systems.

A map is a set of integer darts with two permutations.  ``opposite`` pairs
the two darts of every edge and ``next_at_vertex`` cycles the darts leaving a
vertex counter-clockwise.  Faces are the orbits of
``next_at_vertex o opposite``; walking a face keeps it on the right.

Faces listed in ``holes`` are boundary components of the surface rather than
2-cells.  Every edge carries a :class:`Label`; ``AUX`` edges with an empty
name are scaffold that only keeps the map cellular.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from convexhd.errors import GammaMismatch, InvalidMap, NotEmbedded

logger = logging.getLogger(__name__)


class Kind(str, Enum):
    """Label classes of edges."""

    GAMMA = "gamma"
    ALPHA = "alpha"
    BETA = "beta"
    AUX = "aux"
    BOUNDARY = "boundary"


@dataclass(frozen=True, order=True)
class Label:
    """Edge label: a class plus an optional name (curve index, provenance)."""

    kind: Kind
    name: str = ""

    @property
    def is_scaffold(self) -> bool:
        return self.kind is Kind.AUX and not self.name

    @property
    def is_curve(self) -> bool:
        return not self.is_scaffold and self.kind is not Kind.BOUNDARY

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.name}" if self.name else self.kind.value

    @classmethod
    def parse(cls, text: str) -> "Label":
        kind, _, name = text.partition(":")
        try:
            return cls(Kind(kind.lower()), name)
        except ValueError as e:
            raise InvalidMap(f"unknown label class '{kind}'") from e


GAMMA = Label(Kind.GAMMA)
SCAFFOLD = Label(Kind.AUX)


def alpha(index: int) -> Label:
    return Label(Kind.ALPHA, str(index))


def beta(index: int) -> Label:
    return Label(Kind.BETA, str(index))


def boundary_of(label: Label) -> Label:
    """Label for the seam left behind when cutting along ``label``."""
    return Label(Kind.BOUNDARY, str(label))


def _orbits(perm: Mapping[int, int]) -> List[Tuple[int, ...]]:
    seen: Set[int] = set()
    cycles: List[Tuple[int, ...]] = []
    for start in sorted(perm):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        d = perm[start]
        while d != start:
            cycle.append(d)
            seen.add(d)
            d = perm[d]
        cycles.append(tuple(cycle))
    return cycles


@dataclass(frozen=True, eq=False)
class CombinatorialMap:
    """Immutable rotation-system encoding of an oriented surface.

    Attributes:
        opposite: Fixed-point-free involution pairing the darts of each edge.
        next_at_vertex: Counter-clockwise successor of each dart at its vertex.
        labels: Label of every dart; both darts of an edge agree.
        holes: Darts of faces that are boundary components.
        orientation: Global orientation flag (+1 or -1).
    """

    opposite: Mapping[int, int]
    next_at_vertex: Mapping[int, int]
    labels: Mapping[int, Label]
    holes: FrozenSet[int] = frozenset()
    orientation: int = 1

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        """Check the permutation and labeling invariants.

        Raises:
            InvalidMap: If the involution, rotation or labels are inconsistent.
        """
        darts = set(self.opposite)
        if set(self.next_at_vertex) != darts or set(self.labels) != darts:
            raise InvalidMap("opposite, rotation and labels must cover the same darts")
        if set(self.next_at_vertex.values()) != darts:
            raise InvalidMap("rotation is not a permutation")
        for d, e in self.opposite.items():
            if d == e or e not in darts or self.opposite[e] != d:
                raise InvalidMap(f"opposite is not a fixed-point-free involution at dart {d}")
            if self.labels[d] != self.labels[e]:
                raise InvalidMap(f"edge {d}/{e} carries two labels")
        if not self.holes <= darts:
            raise InvalidMap("hole darts are not darts of the map")
        for d in self.holes:
            if self.face_step(d) not in self.holes:
                raise InvalidMap(f"hole face through dart {d} is not closed")

    # -- permutations -------------------------------------------------

    def face_step(self, d: int) -> int:
        return self.next_at_vertex[self.opposite[d]]

    @cached_property
    def darts(self) -> Tuple[int, ...]:
        return tuple(sorted(self.opposite))

    @cached_property
    def previous_at_vertex(self) -> Dict[int, int]:
        return {v: k for k, v in self.next_at_vertex.items()}

    @cached_property
    def vertices(self) -> List[Tuple[int, ...]]:
        return _orbits(self.next_at_vertex)

    @cached_property
    def faces(self) -> List[Tuple[int, ...]]:
        return _orbits({d: self.face_step(d) for d in self.darts})

    @cached_property
    def edges(self) -> List[Tuple[int, int]]:
        return [(d, e) for d, e in sorted(self.opposite.items()) if d < e]

    @cached_property
    def vertex_of(self) -> Dict[int, int]:
        return {d: i for i, cycle in enumerate(self.vertices) for d in cycle}

    @cached_property
    def face_of(self) -> Dict[int, int]:
        return {d: i for i, cycle in enumerate(self.faces) for d in cycle}

    @cached_property
    def hole_faces(self) -> FrozenSet[int]:
        return frozenset(self.face_of[d] for d in self.holes)

    def head(self, d: int) -> int:
        """Vertex index the dart points to."""
        return self.vertex_of[self.opposite[d]]

    def tail(self, d: int) -> int:
        return self.vertex_of[d]

    def rotation(self, d: int) -> Tuple[int, ...]:
        """Darts at the vertex of ``d``, counter-clockwise, starting at ``d``."""
        out = [d]
        x = self.next_at_vertex[d]
        while x != d:
            out.append(x)
            x = self.next_at_vertex[x]
        return tuple(out)

    def face_walk(self, d: int) -> Tuple[int, ...]:
        out = [d]
        x = self.face_step(d)
        while x != d:
            out.append(x)
            x = self.face_step(x)
        return tuple(out)

    def darts_with(self, predicate: Callable[[Label], bool]) -> List[int]:
        return [d for d in self.darts if predicate(self.labels[d])]

    @cached_property
    def component_of(self) -> Dict[int, int]:
        """Connected component index of every dart."""
        parent = {d: d for d in self.darts}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d in self.darts:
            for e in (self.opposite[d], self.next_at_vertex[d]):
                ra, rb = find(d), find(e)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        roots = sorted({find(d) for d in self.darts})
        index = {r: i for i, r in enumerate(roots)}
        return {d: index[find(d)] for d in self.darts}

    @property
    def component_count(self) -> int:
        return len(set(self.component_of.values()))

    # -- construction -------------------------------------------------

    @classmethod
    def from_faces(
        cls,
        edges: Iterable[Tuple[int, int]],
        faces: Iterable[Sequence[int]],
        labels: Mapping[int, Label],
        holes: Iterable[int] = (),
        orientation: int = 1,
    ) -> "CombinatorialMap":
        """Build a map from its edges and clockwise face walks.

        The rotation is recovered as ``next_at_vertex = face o opposite``.
        ``labels`` may name one dart per edge.
        """
        opposite: Dict[int, int] = {}
        for d, e in edges:
            opposite[d] = e
            opposite[e] = d
        step: Dict[int, int] = {}
        for walk in faces:
            walk = list(walk)
            for i, d in enumerate(walk):
                if d in step:
                    raise InvalidMap(f"dart {d} appears in two faces")
                step[d] = walk[(i + 1) % len(walk)]
        if set(step) != set(opposite):
            missing = sorted(set(opposite) ^ set(step))
            raise InvalidMap(f"faces and edges disagree on darts {missing[:6]}")
        rotation = {d: step[opposite[d]] for d in opposite}
        full = _complete_labels(opposite, labels)
        hole_darts: Set[int] = set()
        for d in holes:
            x = d
            while True:
                hole_darts.add(x)
                x = step[x]
                if x == d:
                    break
        return cls(opposite, rotation, full, frozenset(hole_darts), orientation)

    def editor(self) -> "MapEditor":
        return MapEditor(self)

    def relabel(self, mapping: Callable[[Label], Label]) -> "CombinatorialMap":
        return CombinatorialMap(
            self.opposite,
            self.next_at_vertex,
            {d: mapping(lab) for d, lab in self.labels.items()},
            self.holes,
            self.orientation,
        )

    def mirror(self) -> "CombinatorialMap":
        """Same surface with the opposite orientation."""
        holes = frozenset(self.opposite[d] for d in self.holes)
        return CombinatorialMap(
            self.opposite, dict(self.previous_at_vertex), self.labels, holes, -self.orientation
        )


def _complete_labels(opposite: Mapping[int, int], labels: Mapping[int, Label]) -> Dict[int, Label]:
    full: Dict[int, Label] = {}
    for d, e in opposite.items():
        lab = labels.get(d, labels.get(e, SCAFFOLD))
        full[d] = lab
    return full


@dataclass(frozen=True)
class CurveComponent:
    """One component of a labeled curve system.

    Attributes:
        label: Label shared by all darts of the component.
        darts: Darts in traversal order; each leaves the vertex the previous
            one points to.
        is_closed: True for cycles, False for arcs.
    """

    label: Label
    darts: Tuple[int, ...]
    is_closed: bool

    @property
    def length(self) -> int:
        return len(self.darts)

    def reversed(self, m: CombinatorialMap) -> "CurveComponent":
        return CurveComponent(
            self.label, tuple(m.opposite[d] for d in reversed(self.darts)), self.is_closed
        )


def continuation(m: CombinatorialMap, d: int) -> Optional[int]:
    """Dart continuing the curve of ``d`` past its head, or None at an endpoint.

    Raises:
        NotEmbedded: If the curve branches at the head vertex.
    """
    arrive = m.opposite[d]
    lab = m.labels[d]
    others = [x for x in m.rotation(arrive) if x != arrive and m.labels[x] == lab]
    if len(others) > 1:
        raise NotEmbedded(f"{lab} branches at the vertex of dart {arrive}")
    return others[0] if others else None


def trace_curve(m: CombinatorialMap, start: int) -> CurveComponent:
    """Follow the curve through ``start`` forward (and backward for arcs)."""
    lab = m.labels[start]
    forward = [start]
    seen_vertices = [m.tail(start)]
    d = start
    while True:
        nxt = continuation(m, d)
        if nxt is None:
            break
        if nxt == start:
            return CurveComponent(lab, tuple(forward), True)
        if m.tail(nxt) in seen_vertices:
            raise NotEmbedded(f"{lab} revisits a vertex at dart {nxt}")
        seen_vertices.append(m.tail(nxt))
        forward.append(nxt)
        d = nxt
    backward: List[int] = []
    d = m.opposite[start]
    while True:
        nxt = continuation(m, d)
        if nxt is None:
            break
        backward.append(m.opposite[nxt])
        d = nxt
    return CurveComponent(lab, tuple(reversed(backward)) + tuple(forward), False)


def curve_components(
    m: CombinatorialMap, predicate: Optional[Callable[[Label], bool]] = None
) -> List[CurveComponent]:
    """All curve components whose label satisfies ``predicate``.

    Closed components start at their lowest dart and run in its direction.
    """
    predicate = predicate or (lambda lab: lab.is_curve)
    seen: Set[int] = set()
    out: List[CurveComponent] = []
    for d in m.darts:
        if d in seen or not predicate(m.labels[d]):
            continue
        comp = trace_curve(m, d)
        if comp.is_closed:
            k = comp.darts.index(d)
            comp = CurveComponent(comp.label, comp.darts[k:] + comp.darts[:k], True)
        seen.update(comp.darts)
        seen.update(m.opposite[x] for x in comp.darts)
        out.append(comp)
    return out


def curve_through(m: CombinatorialMap, label: Label) -> CurveComponent:
    comps = curve_components(m, lambda lab: lab == label)
    if len(comps) != 1:
        raise InvalidMap(f"expected one component labeled {label}, found {len(comps)}")
    return comps[0]


def separates(rotation: Sequence[int], a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    """True when the pair ``a`` alternates with the pair ``b`` around a vertex."""
    pos = {d: i for i, d in enumerate(rotation)}
    lo, hi = sorted((pos[a[0]], pos[a[1]]))
    inside = [lo < pos[x] < hi for x in b]
    return inside[0] != inside[1]


def crossing_darts(m: CombinatorialMap, d: int, other: Callable[[Label], bool]) -> Optional[Tuple[int, int]]:
    """The two ``other``-labeled darts crossing the curve of ``d`` at its tail.

    ``d`` must be a curve dart whose predecessor along the curve arrives at the
    same vertex.  Returns None when no such crossing exists.
    """
    rot = m.rotation(d)
    lab = m.labels[d]
    mine = [x for x in rot if m.labels[x] == lab]
    theirs = [x for x in rot if other(m.labels[x]) and m.labels[x] != lab]
    if len(mine) != 2 or len(theirs) != 2:
        return None
    if not separates(rot, (mine[0], mine[1]), (theirs[0], theirs[1])):
        return None
    return theirs[0], theirs[1]


def check_general_position(m: CombinatorialMap) -> None:
    """Reject tangencies: two curves meeting at a vertex must cross.

    Raises:
        NotEmbedded: If a curve label meets a vertex more than twice.
        InvalidMap: If two curves touch without crossing.
    """
    for cycle in m.vertices:
        by_label: Dict[Label, List[int]] = {}
        for d in cycle:
            lab = m.labels[d]
            if lab.is_curve:
                by_label.setdefault(lab, []).append(d)
        for lab, ds in by_label.items():
            if len(ds) > 2:
                raise NotEmbedded(f"{lab} meets a vertex {len(ds)} times")
        pairs = [tuple(ds) for ds in by_label.values() if len(ds) == 2]
        for i in range(len(pairs)):
            for j in range(i + 1, len(pairs)):
                if not separates(cycle, pairs[i], pairs[j]):
                    raise InvalidMap(f"tangency at the vertex of dart {cycle[0]}")


class MapEditor:
    """Mutable working copy of a map used by rewrite operations.

    Every primitive keeps the rotation system consistent; ``freeze`` builds a
    validated :class:`CombinatorialMap` again.
    """

    def __init__(self, m: CombinatorialMap) -> None:
        self.opposite: Dict[int, int] = dict(m.opposite)
        self.next: Dict[int, int] = dict(m.next_at_vertex)
        self.labels: Dict[int, Label] = dict(m.labels)
        self.holes: Set[int] = set(m.holes)
        self.orientation = m.orientation
        self._next_id = max(m.darts, default=0) + 1

    def fresh(self) -> int:
        d = self._next_id
        self._next_id += 1
        return d

    def freeze(self) -> CombinatorialMap:
        return CombinatorialMap(
            dict(self.opposite), dict(self.next), dict(self.labels), frozenset(self.holes), self.orientation
        )

    # -- queries ------------------------------------------------------

    def prev(self, d: int) -> int:
        x = d
        while self.next[x] != d:
            x = self.next[x]
        return x

    def rotation(self, d: int) -> List[int]:
        out = [d]
        x = self.next[d]
        while x != d:
            out.append(x)
            x = self.next[x]
        return out

    def face_step(self, d: int) -> int:
        return self.next[self.opposite[d]]

    def face_walk(self, d: int) -> List[int]:
        out = [d]
        x = self.face_step(d)
        while x != d:
            out.append(x)
            x = self.face_step(x)
        return out

    def corner_face(self, c: int) -> Set[int]:
        """Darts of the face containing the corner after ``c``."""
        return set(self.face_walk(self.next[c]))

    # -- primitives ---------------------------------------------------

    def set_label(self, d: int, label: Label) -> None:
        self.labels[d] = label
        self.labels[self.opposite[d]] = label

    def subdivide(self, d: int) -> Tuple[int, int]:
        """Insert a degree-2 vertex on the edge of ``d``.

        Returns:
            ``(m1, m2)`` where ``m1`` points back to the tail of ``d`` and
            ``m2`` points on to the old head.
        """
        e = self.opposite[d]
        m1, m2 = self.fresh(), self.fresh()
        self.opposite[d], self.opposite[m1] = m1, d
        self.opposite[e], self.opposite[m2] = m2, e
        self.next[m1], self.next[m2] = m2, m1
        self.labels[m1] = self.labels[m2] = self.labels[d]
        if d in self.holes:
            self.holes.add(m2)
        if e in self.holes:
            self.holes.add(m1)
        return m1, m2

    def add_edge(self, c1: int, c2: int, label: Label) -> Tuple[int, int]:
        """Draw an edge from the corner after ``c1`` to the corner after ``c2``.

        Returns:
            ``(n1, n2)``: the new dart at the vertex of ``c1`` and its opposite.
        """
        if c1 == c2:
            raise InvalidMap("an edge needs two distinct corners")
        if self.next[c1] in self.holes or self.next[c2] in self.holes:
            raise InvalidMap("cannot draw an edge inside a hole")
        n1, n2 = self.fresh(), self.fresh()
        self.opposite[n1], self.opposite[n2] = n2, n1
        self.labels[n1] = self.labels[n2] = label
        self.next[n1] = self.next[c1]
        self.next[c1] = n1
        self.next[n2] = self.next[c2]
        self.next[c2] = n2
        return n1, n2

    def add_pendant(self, c: int, label: Label) -> Tuple[int, int]:
        """Hang a new edge with a new univalent vertex in the corner after ``c``."""
        n1, n2 = self.fresh(), self.fresh()
        self.opposite[n1], self.opposite[n2] = n2, n1
        self.labels[n1] = self.labels[n2] = label
        self.next[n1] = self.next[c]
        self.next[c] = n1
        self.next[n2] = n2
        return n1, n2

    def _detach(self, d: int) -> None:
        p = self.prev(d)
        if p != d:
            self.next[p] = self.next[d]
        del self.next[d]
        del self.labels[d]
        self.holes.discard(d)

    def delete_edge(self, d: int) -> None:
        e = self.opposite[d]
        self._detach(d)
        self._detach(e)
        del self.opposite[d]
        del self.opposite[e]

    def swap_successors(self, a: int, b: int) -> None:
        self.next[a], self.next[b] = self.next[b], self.next[a]

    def smooth(self, d: int) -> None:
        """Erase the degree-2 vertex of ``d``, merging its two edges."""
        y = self.next[d]
        if self.next[y] != d or y == d:
            raise InvalidMap("smoothing needs a degree-2 vertex")
        a, b = self.opposite[d], self.opposite[y]
        if a == y:
            raise InvalidMap("cannot smooth a loop")
        for x in (d, y):
            del self.next[x]
            del self.opposite[x]
            del self.labels[x]
            self.holes.discard(x)
        self.opposite[a], self.opposite[b] = b, a

    def expand_corner(self, u: int, s: int, partner: int) -> Tuple[int, int]:
        """Split the vertex of ``u`` into two joined by a scaffold edge.

        ``s`` follows ``u``; the darts from ``partner`` through ``u`` stay on
        one side, the darts from ``s`` up to ``partner`` move to the other.
        """
        if self.next[u] != s:
            raise InvalidMap("expand_corner expects consecutive darts")
        block2_last = self.prev(partner)
        n1, n2 = self.fresh(), self.fresh()
        self.opposite[n1], self.opposite[n2] = n2, n1
        self.labels[n1] = self.labels[n2] = SCAFFOLD
        self.next[u] = n1
        self.next[n1] = partner
        self.next[block2_last] = n2
        self.next[n2] = s
        return n1, n2

    def contract(self, d: int) -> None:
        """Shrink the edge of ``d`` to a point, merging its two end vertices."""
        e = self.opposite[d]
        if e in self.rotation(d):
            raise InvalidMap("cannot contract a loop")
        us = self.rotation(d)[1:]
        vs = self.rotation(e)[1:]
        merged = us + vs
        for x in (d, e):
            del self.next[x]
            del self.opposite[x]
            del self.labels[x]
            self.holes.discard(x)
        for i, x in enumerate(merged):
            self.next[x] = merged[(i + 1) % len(merged)]

    def explode(self, groups: Sequence[Sequence[int]]) -> List[Tuple[int, int]]:
        """Replace a vertex by a ring of scaffold edges, one ring vertex per group.

        ``groups`` split the rotation of the vertex into consecutive blocks,
        counter-clockwise.  Returns ``(p_i, q_i)`` per ring edge: ``p_i`` leaves
        ring vertex ``i`` toward ``i + 1``.  The darts ``q_i`` walk the new
        inner face.
        """
        k = len(groups)
        ring = [(self.fresh(), self.fresh()) for _ in range(k)]
        for p, q in ring:
            self.opposite[p], self.opposite[q] = q, p
            self.labels[p] = self.labels[q] = SCAFFOLD
        for i, block in enumerate(groups):
            p, q_prev = ring[i][0], ring[i - 1][1]
            seq = list(block) + [p, q_prev]
            for j, x in enumerate(seq):
                self.next[x] = seq[(j + 1) % len(seq)]
        return ring


# -- invariants ----------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """Summary of one connected component of a map."""

    euler: int
    genus: int
    boundaries: int
    darts: FrozenSet[int]

    @property
    def is_sphere(self) -> bool:
        return self.genus == 0 and self.boundaries == 0

    @property
    def is_disc(self) -> bool:
        return self.genus == 0 and self.boundaries == 1


def pieces(m: CombinatorialMap) -> List[Piece]:
    """Per-component euler characteristic, genus and boundary count.

    Raises:
        InvalidMap: If a component has an impossible euler characteristic.
    """
    comp = m.component_of
    out: List[Piece] = []
    for c in sorted(set(comp.values())):
        darts = frozenset(d for d in m.darts if comp[d] == c)
        v = sum(1 for cycle in m.vertices if comp[cycle[0]] == c)
        f_all = [i for i, cycle in enumerate(m.faces) if comp[cycle[0]] == c]
        b = sum(1 for i in f_all if i in m.hole_faces)
        e = len(darts) // 2
        euler = v - e + len(f_all) - b
        twice_genus = 2 - euler - b
        if twice_genus < 0 or twice_genus % 2:
            raise InvalidMap(f"component {c} has euler {euler} with {b} boundaries")
        out.append(Piece(euler, twice_genus // 2, b, darts))
    return out


def euler_and_genus(m: CombinatorialMap) -> Tuple[int, int, int]:
    """Return ``(euler, genus, components)`` of the map.

    Genus is summed over components; hole faces are not counted as 2-cells.
    """
    ps = pieces(m)
    return sum(p.euler for p in ps), sum(p.genus for p in ps), len(ps)


def boundary_count(m: CombinatorialMap) -> int:
    return len(m.hole_faces)


# -- cutting and gluing ----------------------------------------------------


def _cut_one(ed: MapEditor, m: CombinatorialMap, comp: CurveComponent, seams: Dict[int, int]) -> None:
    if not comp.is_closed:
        raise InvalidMap(f"only closed curves can be cut, {comp.label} is an arc")
    n = comp.length
    cs = comp.darts
    ps = [m.opposite[cs[i - 1]] for i in range(n)]
    s1: List[List[int]] = []
    s2: List[List[int]] = []
    for i in range(n):
        rot = list(m.rotation(ps[i]))
        k = rot.index(cs[i])
        s1.append(rot[1:k])
        s2.append(rot[k + 1 :])
    qy = [ed.fresh() for _ in range(n)]
    py = [ed.fresh() for _ in range(n)]
    seam = boundary_of(comp.label)
    for i in range(n):
        p, q = ps[i], cs[i]
        ed.next[p] = s1[i][0] if s1[i] else q
        ed.next[q] = p
        ed.next[qy[i]] = s2[i][0] if s2[i] else py[i]
        if s2[i]:
            ed.next[s2[i][-1]] = py[i]
        ed.next[py[i]] = qy[i]
    for i in range(n):
        j = (i + 1) % n
        ed.opposite[qy[i]], ed.opposite[py[j]] = py[j], qy[i]
        for d in (cs[i], ps[j], qy[i], py[j]):
            ed.labels[d] = seam
        ed.holes.add(ps[j])
        ed.holes.add(qy[i])
        seams[ps[j]] = qy[i]


def cut_along_with_seams(
    m: CombinatorialMap, system: Iterable[CurveComponent]
) -> Tuple[CombinatorialMap, Dict[int, int]]:
    """Cut along closed curves, returning the cut map and the re-gluing matching.

    The right-hand side of each curve keeps the original darts; the left-hand
    side gets fresh copies.  The matching sends every right-side hole dart to
    the left-side hole dart of the same edge.
    """
    ed = m.editor()
    seams: Dict[int, int] = {}
    for comp in system:
        _cut_one(ed, m, comp, seams)
    cut = ed.freeze()
    logger.debug("cut along %d seam edges", len(seams))
    return cut, seams


def cut_along(m: CombinatorialMap, system: Iterable[CurveComponent]) -> CombinatorialMap:
    """Cut the surface along each curve of ``system``.

    Each cut edge becomes two boundary edges labeled ``boundary:<label>``.

    Raises:
        NotEmbedded: If a component self-crosses.
    """
    return cut_along_with_seams(m, list(system))[0]


def _seam_label(a: Label, b: Label) -> Label:
    if a == b and a.kind is Kind.BOUNDARY:
        return Label.parse(a.name) if a.name else SCAFFOLD
    if a == b:
        return a
    return SCAFFOLD


def _has_gamma(m: CombinatorialMap, d: int) -> bool:
    return any(m.labels[x].kind is Kind.GAMMA for x in m.rotation(d))


def glue_holes(m: CombinatorialMap, matching: Mapping[int, int], check_gamma: bool = True) -> CombinatorialMap:
    """Glue hole faces of ``m`` to each other along ``matching``.

    ``matching`` pairs hole darts edge by edge and must reverse orientation:
    walking one hole forward walks its partner backward.

    Raises:
        InvalidMap: If the matching is not an orientation-reversing pairing of
            whole hole faces.
        GammaMismatch: If dividing-set endpoints do not meet across the seam.
    """
    full: Dict[int, int] = {}
    for h, k in matching.items():
        full[h] = k
        full[k] = h
    if len(full) != 2 * len(matching) or not set(full) <= m.holes:
        raise InvalidMap("matching must pair distinct hole darts")
    step = m.face_step
    back = {step(d): d for d in m.holes}
    for h in full:
        if step(h) not in full:
            raise InvalidMap("matching must cover whole hole faces")
        if full[step(h)] != back[full[h]]:
            raise InvalidMap("matching does not reverse orientation")
        if sum(1 for x in m.rotation(h) if x in m.holes) != 1:
            raise InvalidMap("hole vertices must carry a single hole dart")
    partner = {h: full[back[h]] for h in full}
    if check_gamma:
        for h in matching:
            if _has_gamma(m, h) != _has_gamma(m, partner[h]):
                raise GammaMismatch(f"dividing-set endpoints disagree at hole dart {h}")
    ed = m.editor()
    old_next = dict(m.next_at_vertex)
    prev = m.previous_at_vertex
    done: Set[int] = set()
    for h in sorted(full):
        if h in done:
            continue
        k = partner[h]
        ed.next[prev[h]] = old_next[k]
        ed.next[prev[k]] = old_next[h]
        done.update((h, k))
    for h, k in matching.items():
        a, b = m.opposite[h], m.opposite[k]
        lab = _seam_label(m.labels[a], m.labels[b])
        ed.opposite[a], ed.opposite[b] = b, a
        ed.labels[a] = ed.labels[b] = lab
    for h in full:
        del ed.opposite[h]
        del ed.next[h]
        del ed.labels[h]
        ed.holes.discard(h)
    return ed.freeze()


def disjoint_union(a: CombinatorialMap, b: CombinatorialMap) -> Tuple[CombinatorialMap, int]:
    """Place ``b`` beside ``a``; returns the union and the offset added to ``b``'s darts."""
    offset = max(a.darts, default=0) - min(b.darts, default=1) + 1
    shift = lambda d: d + offset  # noqa: E731
    opposite = dict(a.opposite)
    rotation = dict(a.next_at_vertex)
    labels = dict(a.labels)
    for d in b.darts:
        opposite[shift(d)] = shift(b.opposite[d])
        rotation[shift(d)] = shift(b.next_at_vertex[d])
        labels[shift(d)] = b.labels[d]
    holes = frozenset(a.holes | {shift(d) for d in b.holes})
    return CombinatorialMap(opposite, rotation, labels, holes, a.orientation), offset


def seam_matching(a: CombinatorialMap, hole_a: int, b: CombinatorialMap, hole_b: int) -> Dict[int, int]:
    """Orientation-reversing matching of the hole of ``hole_a`` onto that of ``hole_b``.

    ``hole_a`` is paired with ``hole_b``; the rest follows by walking one hole
    forward and the other backward.

    Raises:
        InvalidMap: If the two holes have different lengths.
    """
    walk_a = a.face_walk(hole_a)
    walk_b = b.face_walk(hole_b)
    if len(walk_a) != len(walk_b):
        raise InvalidMap(f"holes of length {len(walk_a)} and {len(walk_b)} cannot be matched")
    n = len(walk_a)
    return {walk_a[i]: walk_b[-i % n] for i in range(n)}


def glue_along_boundary(
    a: CombinatorialMap, b: CombinatorialMap, matching: Mapping[int, int]
) -> CombinatorialMap:
    """Glue hole darts of ``a`` to hole darts of ``b``.

    Raises:
        GammaMismatch: If dividing-set endpoints do not correspond.
    """
    union, offset = disjoint_union(a, b)
    return glue_holes(union, {h: k + offset for h, k in matching.items()})


def cap_disc(length: int, chords: Iterable[Tuple[int, int]] = ()) -> CombinatorialMap:
    """A disc bounded by a hole of ``length`` edges, with Γ chords between its vertices.

    Vertex ``k`` is the tail of hole dart ``2k + 1`` and the hole walks
    ``1, 3, 5, ...``.  Chords must not cross and take each vertex at most once.
    """
    opposite: Dict[int, int] = {}
    rotation: Dict[int, int] = {}
    for k in range(length):
        out, back = 2 * k + 1, 2 * k + 2
        opposite[out], opposite[back] = back, out
        rotation[out] = 2 * ((k - 1) % length) + 2
        rotation[rotation[out]] = out
    labels = {d: SCAFFOLD for d in opposite}
    ed = CombinatorialMap(opposite, rotation, labels, frozenset(range(1, 2 * length, 2))).editor()
    for u, v in chords:
        ed.add_edge(2 * u + 1, 2 * v + 1, GAMMA)
    return ed.freeze()


# -- normalization -----------------------------------------------------------


@dataclass(frozen=True)
class Bigon:
    """An empty bigon face between a Γ run and one other curve run."""

    gamma_run: Tuple[int, ...]
    other_run: Tuple[int, ...]
    other: Label
    corners: Tuple[Tuple[int, int], Tuple[int, int]] = field(compare=False)

    @property
    def key(self) -> int:
        return min(self.gamma_run + self.other_run)


def _reducible_label(lab: Label) -> bool:
    return lab.kind in (Kind.ALPHA, Kind.BETA) or (lab.kind is Kind.AUX and bool(lab.name))


def _pair_crosses(m: CombinatorialMap, d: int) -> bool:
    rot = m.rotation(d)
    by_label: Dict[Label, List[int]] = {}
    for x in rot:
        by_label.setdefault(m.labels[x], []).append(x)
    g = by_label.get(GAMMA, [])
    others = [ds for lab, ds in by_label.items() if lab != GAMMA and lab.is_curve]
    if len(g) != 2 or len(others) != 1 or len(others[0]) != 2:
        return False
    return separates(rot, (g[0], g[1]), (others[0][0], others[0][1]))


def find_bigons(m: CombinatorialMap) -> List[Bigon]:
    """Empty Γ bigons of the map, ordered by lowest dart id."""
    out: List[Bigon] = []
    for walk in m.faces:
        if len(walk) < 2 or m.face_of[walk[0]] in m.hole_faces:
            continue
        labs = [m.labels[d] for d in walk]
        if len(set(labs)) != 2 or GAMMA not in labs:
            continue
        other = next(lab for lab in labs if lab != GAMMA)
        if not _reducible_label(other):
            continue
        n = len(walk)
        starts = [i for i in range(n) if labs[i] != labs[i - 1]]
        if len(starts) != 2:
            continue
        runs: Dict[Label, Tuple[int, ...]] = {}
        for k, i in enumerate(starts):
            j = starts[(k + 1) % 2]
            span = (j - i) % n or n
            runs[labs[i]] = tuple(walk[(i + t) % n] for t in range(span))
        g_run, x_run = runs[GAMMA], runs[other]
        p_corner = (m.opposite[x_run[-1]], g_run[0])
        q_corner = (m.opposite[g_run[-1]], x_run[0])
        if m.vertex_of[p_corner[1]] == m.vertex_of[q_corner[1]]:
            continue
        if not (_pair_crosses(m, p_corner[1]) and _pair_crosses(m, q_corner[1])):
            continue
        out.append(Bigon(g_run, x_run, other, (p_corner, q_corner)))
    return sorted(out, key=lambda b: b.key)


def remove_bigon(m: CombinatorialMap, bigon: Bigon) -> CombinatorialMap:
    """Slide the other curve across Γ, removing both corner crossings.

    The two runs exchange labels and each corner vertex is expanded into a
    scaffold edge separating the now tangent strands.
    """
    ed = m.editor()
    partners = []
    for u, s in bigon.corners:
        lab = m.labels[s]
        partners.append(next(x for x in m.rotation(s) if x != s and m.labels[x] == lab))
    for d in bigon.gamma_run:
        ed.set_label(d, bigon.other)
    for d in bigon.other_run:
        ed.set_label(d, GAMMA)
    for (u, s), partner in zip(bigon.corners, partners):
        ed.expand_corner(u, s, partner)
    return ed.freeze()


def strip_scaffold(m: CombinatorialMap) -> CombinatorialMap:
    """Delete scaffold edges that separate distinct cells and prune scaffold spurs."""
    ed = m.editor()
    face_of = dict(m.face_of)
    parent: Dict[int, int] = {}

    def find(f: int) -> int:
        while parent.get(f, f) != f:
            f = parent[f]
        return f

    for d, e in m.edges:
        if not m.labels[d].is_scaffold:
            continue
        fd, fe = find(face_of[d]), find(face_of[e])
        if fd == fe or face_of[d] in m.hole_faces or face_of[e] in m.hole_faces:
            continue
        ed.delete_edge(d)
        parent[max(fd, fe)] = min(fd, fe)
    changed = True
    while changed:
        changed = False
        for d in sorted(ed.opposite):
            if d not in ed.opposite or not ed.labels[d].is_scaffold:
                continue
            e = ed.opposite[d]
            if ed.next[d] == d and ed.next[e] != e:
                ed.delete_edge(d)
                changed = True
    return ed.freeze()


def smooth_all(m: CombinatorialMap) -> CombinatorialMap:
    """Erase every degree-2 vertex whose two edges carry the same label."""
    ed = m.editor()
    for d in m.darts:
        if d not in ed.next:
            continue
        y = ed.next[d]
        if y == d or ed.next[y] != d or ed.labels[d] != ed.labels[y]:
            continue
        if ed.opposite[d] == y:
            continue
        ed.smooth(d)
    return ed.freeze()


def normalize_with_trace(
    m: CombinatorialMap, allow: Optional[Callable[[CombinatorialMap, Bigon], bool]] = None
) -> Tuple[CombinatorialMap, List[Bigon]]:
    """Normalize and report the bigons removed, innermost-first by lowest dart id.

    ``allow`` may veto individual bigons (disc-aware callers use it to keep
    crossings whose chord data would not survive the removal).
    """
    trace: List[Bigon] = []
    while True:
        m = smooth_all(strip_scaffold(m))
        candidates = [b for b in find_bigons(m) if allow is None or allow(m, b)]
        if not candidates:
            return m, trace
        bigon = candidates[0]
        logger.debug("removing bigon of Γ with %s at dart %d", bigon.other, bigon.key)
        trace.append(bigon)
        m = remove_bigon(m, bigon)


def normalize(m: CombinatorialMap) -> CombinatorialMap:
    """Remove scaffold where possible, smooth degree-2 vertices and all empty Γ bigons."""
    return normalize_with_trace(m)[0]


# -- drawing arcs ------------------------------------------------------------


def draw_arc(m: CombinatorialMap, route: Sequence[int], label: Label = SCAFFOLD) -> Tuple[CombinatorialMap, List[int]]:
    """Draw an arc across faces, from the middle of one edge to another.

    ``route`` is ``[s, t_1, ..., t_k]``: the arc starts on the edge of ``s``
    inside the face of ``s``, crosses the edges of ``t_1 .. t_{k-1}`` (each
    from the face of ``t_i`` into the face of its opposite) and ends on the
    edge of ``t_k``.  An edge listed twice is split closer to its tail the
    second time.

    Returns:
        The new map and the arc as a dart path from start to end.

    Raises:
        InvalidMap: If consecutive route darts do not share a face, or the
            arc would have to cross itself.
    """
    if len(route) < 2:
        raise InvalidMap("an arc route needs a start and an end edge")
    for d in route:
        if d not in m.opposite:
            raise InvalidMap(f"unknown dart {d}")
    face = m.face_of
    if face[route[0]] != face[route[1]]:
        raise InvalidMap(f"darts {route[0]} and {route[1]} do not share a face")
    for a, b in zip(route[1:], route[2:]):
        if face[m.opposite[a]] != face[b]:
            raise InvalidMap(f"darts {m.opposite[a]} and {b} do not share a face")
    if any(face[d] in m.hole_faces for d in route):
        raise InvalidMap("arcs cannot run through a hole")
    ed = m.editor()
    start = ed.subdivide(route[0])[0]
    path: List[int] = []
    for t in route[1:-1]:
        enter, leave = ed.subdivide(t)
        path.append(_join(ed, start, enter, label))
        start = leave
    end = ed.subdivide(route[-1])[0]
    path.append(_join(ed, start, end, label))
    return ed.freeze(), path


def _join(ed: MapEditor, c1: int, c2: int, label: Label) -> int:
    if ed.next[c2] not in ed.corner_face(c1):
        raise InvalidMap("arc route crosses itself")
    return ed.add_edge(c1, c2, label)[0]


def draw_loop(m: CombinatorialMap, route: Sequence[int], label: Label) -> Tuple[CombinatorialMap, List[int]]:
    """Draw a closed curve crossing the edges of ``route`` in order.

    The curve crosses each ``t_i`` from its face into the face of its
    opposite, and closes up through the face shared by the opposite of the
    last dart and the first dart.

    Raises:
        InvalidMap: If consecutive darts do not share a face or the loop
            would cross itself.
    """
    if not route:
        raise InvalidMap("a loop must cross at least one edge")
    for d in route:
        if d not in m.opposite:
            raise InvalidMap(f"unknown dart {d}")
    face = m.face_of
    closing = list(route[1:]) + [route[0]]
    for a, b in zip(route, closing):
        if face[m.opposite[a]] != face[b]:
            raise InvalidMap(f"darts {m.opposite[a]} and {b} do not share a face")
    ed = m.editor()
    corners = [ed.subdivide(t) for t in route]
    path = [_join(ed, corners[i][1], corners[(i + 1) % len(route)][0], label) for i in range(len(route))]
    return ed.freeze(), path
