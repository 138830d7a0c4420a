"""Open books read off convex splittings, and their positive stabilisation."""

import logging
from dataclasses import dataclass
from typing import Dict, Sequence, Set, Tuple

from convexhd.convex import ConvexSurfaceData
from convexhd.errors import NotAdmissible, NotConvexSplitting
from convexhd.splitting import DecoratedHeegaardDiagram, heegaard_stab_positive, is_convex_splitting
from convexhd.surface import Kind

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OpenBookData:
    """The open book whose binding is Γ and whose pages are the halves of Σ.

    Attributes:
        page_genus: Genus of a page.
        binding_components: Number of binding circles, one per Γ component.
        page_euler: Euler characteristic of a page.
        source: The convex diagram the data was read from.
    """

    page_genus: int
    binding_components: int
    page_euler: int
    source: DecoratedHeegaardDiagram

    def to_dict(self) -> Dict[str, int]:
        return {
            "page_genus": self.page_genus,
            "binding_components": self.binding_components,
            "page_euler": self.page_euler,
        }


def _halves(surface: ConvexSurfaceData) -> Dict[int, Tuple[int, int]]:
    """Euler characteristic and region count of Σ₊ (key 1) and Σ₋ (key -1).

    Γ is a union of circles, so the closed halves have the euler
    characteristic of the open cells off Γ.
    """
    m = surface.map
    signs = surface.signs
    euler = {1: 0, -1: 0}
    for sign in signs.values():
        euler[sign] += 1
    for d, _ in m.edges:
        if m.labels[d].kind is not Kind.GAMMA:
            euler[signs[m.face_of[d]]] -= 1
    for cycle in m.vertices:
        if all(m.labels[x].kind is not Kind.GAMMA for x in cycle):
            euler[signs[m.face_of[cycle[0]]]] += 1
    regions: Dict[int, Set[int]] = {1: set(), -1: set()}
    for face, region in surface.regions.items():
        regions[signs[face]].add(region)
    return {s: (euler[s], len(regions[s])) for s in (1, -1)}


def open_book_of(diag: DecoratedHeegaardDiagram, mirrored: bool = False) -> OpenBookData:
    """Read the supported open book off a convex splitting.

    Raises:
        NotConvexSplitting: If the diagram is not certified convex, or its
            two halves are not matching connected pages.
    """
    cert = is_convex_splitting(diag, mirrored)
    if not cert.flag:
        raise NotConvexSplitting("; ".join(cert.failures))
    halves = _halves(diag.surface)
    (plus, n_plus), (minus, n_minus) = halves[1], halves[-1]
    if n_plus != 1 or n_minus != 1:
        raise NotConvexSplitting(f"pages are disconnected: {n_plus} positive, {n_minus} negative regions")
    if plus != minus:
        raise NotConvexSplitting(f"Σ₊ and Σ₋ differ: euler {plus} and {minus}")
    binding = diag.surface.gamma_count
    genus = (2 - plus - binding) // 2
    logger.debug("open book: page genus %d with %d binding components", genus, binding)
    return OpenBookData(genus, binding, plus, diag)


def ob_stabilise(diag: DecoratedHeegaardDiagram, gamma_arc: Sequence[int]) -> DecoratedHeegaardDiagram:
    """Positively stabilise the open book along an arc on the positive page.

    The arc is given as a route (see :func:`convexhd.surface.draw_arc`) and
    is drawn as a Heegaard stabilisation arc, plumbing a positive Hopf band
    onto the page.

    Raises:
        NotAdmissible: If the arc leaves Σ₊.
    """
    surface = diag.surface
    m = surface.map
    faces = [m.face_of[gamma_arc[0]]] + [m.face_of[m.opposite[t]] for t in gamma_arc[1:-1]]
    if any(surface.signs[f] != 1 for f in faces):
        raise NotAdmissible("open book stabilisation arcs lie on the positive page")
    stabilised = heegaard_stab_positive(diag, gamma_arc)
    logger.info("open book stabilised along %s", list(gamma_arc))
    return stabilised
