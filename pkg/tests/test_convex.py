"""Tests for convex surfaces: dividing sets, twisting and the tightness criterion."""

from fractions import Fraction

import pytest

from convexhd.convex import (
    AdmissibleArc,
    BypassSpec,
    ConvexSurfaceData,
    Side,
    admissible_arc,
    bypass_attach,
    bypass_opposite_arc,
    edge_round,
    giroux_criterion,
    is_nonisolating,
    twisting,
)
from convexhd.errors import BadVertex, InvalidMap, NoAlternation, NotAdmissible, NotTransverse
from convexhd.surface import GAMMA, SCAFFOLD, CombinatorialMap, Kind, Label, euler_and_genus


def two_circle_sphere():
    """Two Γ loops on a sphere joined by a scaffold edge."""
    opposite = {1: 2, 2: 1, 3: 4, 4: 3, 5: 6, 6: 5}
    rotation = {1: 2, 2: 5, 5: 1, 3: 4, 4: 6, 6: 3}
    labels = {1: GAMMA, 2: GAMMA, 3: GAMMA, 4: GAMMA, 5: SCAFFOLD, 6: SCAFFOLD}
    return ConvexSurfaceData(CombinatorialMap(opposite, rotation, labels))


def square():
    """A square disc bounded by the hole 1, 3, 5, 7; Γ joins the tails of 1 and 5."""
    opposite = {1: 2, 2: 1, 3: 4, 4: 3, 5: 6, 6: 5, 7: 8, 8: 7, 9: 10, 10: 9}
    rotation = {1: 9, 9: 8, 8: 1, 3: 2, 2: 3, 10: 4, 4: 5, 5: 10, 7: 6, 6: 7}
    labels = {d: GAMMA if d > 8 else SCAFFOLD for d in opposite}
    return ConvexSurfaceData(CombinatorialMap(opposite, rotation, labels, frozenset({1, 3, 5, 7})))


class TestConvexSurfaceData:
    def test_signs_alternate_across_gamma(self):
        surface = two_circle_sphere()
        m = surface.map

        assert surface.gamma_count == 2
        assert surface.sign_of(2) == surface.sign_of(4)
        assert surface.sign_of(1) == -surface.sign_of(2)
        assert m.face_of[1] == m.face_of[3]

    def test_nonseparating_gamma_is_rejected(self):
        """A single nonseparating Γ loop on a torus does not divide it."""
        opposite = {1: 2, 2: 1, 3: 4, 4: 3}
        rotation = {1: 3, 3: 2, 2: 4, 4: 1}
        labels = {1: GAMMA, 2: GAMMA, 3: SCAFFOLD, 4: SCAFFOLD}

        with pytest.raises(InvalidMap):
            ConvexSurfaceData(CombinatorialMap(opposite, rotation, labels))

    def test_side_opposite(self):
        assert Side.FRONT.opposite is Side.BACK
        assert Side.BACK.opposite is Side.FRONT


class TestGirouxCriterion:
    """Test suite for the tightness criterion."""

    def test_sphere_with_one_circle_is_tight(self, sphere):
        assert giroux_criterion(sphere.surface)

    def test_sphere_with_two_circles_is_not(self):
        assert not giroux_criterion(two_circle_sphere())

    def test_torus_with_essential_gamma_is_tight(self, hopf):
        assert giroux_criterion(hopf.surface)


class TestTwisting:
    def test_alpha_crosses_gamma_twice(self, hopf):
        assert twisting(hopf.surface, [1, 3, 5]) == Fraction(-1)

    def test_path_along_gamma(self, hopf):
        with pytest.raises(NotTransverse):
            twisting(hopf.surface, [13, 15])


class TestAdmissibleArc:
    def test_closed_curve_is_not_an_arc(self, hopf):
        with pytest.raises(NotAdmissible):
            admissible_arc(hopf.surface, [1, 3, 5])

    def test_arc_without_interior_crossing(self, hopf):
        """β from P to Q has both ends on Γ but never crosses it in between."""
        with pytest.raises(NotAdmissible):
            admissible_arc(hopf.surface, [9])


class TestNonisolating:
    def test_alpha_curve_does_not_isolate(self, hopf):
        assert is_nonisolating(hopf.surface, [1, 3, 5])

    def test_univalent_vertex_off_gamma(self, hopf):
        with pytest.raises(BadVertex):
            is_nonisolating(hopf.surface, [1])


class TestEdgeRound:
    """Test suite for edge rounding."""

    def test_alternating_ends_close_up(self):
        a = square()

        rounded = edge_round(a, a, {1: 1, 3: 7, 5: 5, 7: 3})

        assert rounded.gamma_count == 1
        assert rounded.map.hole_faces == frozenset()
        assert euler_and_genus(rounded.map)[:2] == (2, 0)

    def test_endpoints_meeting_across_the_seam(self):
        a = square()

        with pytest.raises(NoAlternation, match="both sides meet"):
            edge_round(a, a, {1: 3, 3: 1, 5: 7, 7: 5})

    def test_matching_must_cover_the_hole(self):
        a = square()

        with pytest.raises(InvalidMap):
            edge_round(a, a, {1: 1, 3: 7})


class TestBypassAttach:
    """Test suite for bypass attachment."""

    SPEC = BypassSpec(AdmissibleArc((7, 9)), Side.FRONT)

    def test_bypass_joins_three_parallel_circles(self, three_circles):
        before = three_circles.surface

        after = bypass_attach(before, self.SPEC)

        assert before.gamma_count == 3
        assert not giroux_criterion(before)
        assert after.gamma_count == 1
        assert giroux_criterion(after)

    def test_both_sides_join_parallel_circles(self, three_circles):
        back = BypassSpec(self.SPEC.arc, Side.BACK)

        assert bypass_attach(three_circles.surface, back).gamma_count == 1

    def test_opposite_arc_is_recorded(self, three_circles):
        after = bypass_attach(three_circles.surface, self.SPEC)
        arc = bypass_opposite_arc(three_circles.surface, self.SPEC)

        assert len(arc.darts) == 2
        assert {after.map.labels[d] for d in arc.darts} == {Label(Kind.AUX, "c^op")}

    def test_bypass_from_the_other_side_undoes_it(self, three_circles):
        before = three_circles.surface
        after = bypass_attach(before, self.SPEC)
        arc = bypass_opposite_arc(before, self.SPEC)

        undone = bypass_attach(after, BypassSpec(arc, Side.BACK))

        assert undone.gamma_count == 3
        assert not giroux_criterion(undone)

    def test_arc_must_be_admissible(self, three_circles):
        with pytest.raises(NotAdmissible):
            bypass_attach(three_circles.surface, BypassSpec(AdmissibleArc((7,)), Side.FRONT))
