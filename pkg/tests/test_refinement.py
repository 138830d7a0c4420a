"""Tests for x-arcs, tunnels and contact refinement."""

from dataclasses import replace

import pytest

from convexhd import refinement
from convexhd.errors import (
    ArcMeetsChord,
    InvalidMap,
    NoChords,
    NonCrossingViolation,
    NotAdjacent,
    NotConvexSplitting,
)
from convexhd.refinement import (
    RefinementPlan,
    arc_gaps,
    arc_slide,
    check_x_arcs,
    choose_x_arcs,
    leftmost_gap_arcs,
    refine,
    slide_orbit,
    tunnel,
)
from convexhd.splitting import ChordDiagram, Handlebody, is_convex_splitting
from convexhd.surface import alpha, beta


def disc_of(*chords):
    n = 2 * len(chords)
    return ChordDiagram(alpha(1), Handlebody.U, tuple(range(1, n + 1)), chords)


def plan_on(mocker, disc, arcs):
    diagram = mocker.Mock(discs=(disc,))
    return RefinementPlan(diagram, {disc.disc: arcs})


class TestXArcs:
    """Test suite for choosing and checking x-arcs."""

    def test_arc_gaps_wrap_around(self):
        assert arc_gaps((1, 3), 4) == {1, 2}
        assert arc_gaps((0, 2), 4) == {0, 1}

    def test_product_disc_needs_no_arcs(self):
        assert leftmost_gap_arcs(disc_of((0, 1))) == []

    def test_leftmost_gap_rule(self):
        assert leftmost_gap_arcs(disc_of((0, 1), (2, 3))) == [(0, 2)]
        assert leftmost_gap_arcs(disc_of((0, 3), (1, 2))) == [(1, 3)]
        assert leftmost_gap_arcs(disc_of((0, 1), (2, 3), (4, 5))) == [(2, 4), (0, 4)]

    def test_no_chords(self):
        empty = ChordDiagram(alpha(1), Handlebody.U, (), ())

        with pytest.raises(NoChords):
            leftmost_gap_arcs(empty)

    def test_chosen_arcs_pass_the_check(self):
        disc = disc_of((0, 1), (2, 3), (4, 5))

        check_x_arcs(disc, leftmost_gap_arcs(disc))
        check_x_arcs(disc, [(0, 2), (0, 4)])

    def test_arc_meets_chord(self):
        with pytest.raises(ArcMeetsChord):
            check_x_arcs(disc_of((0, 1), (2, 3)), [(1, 3)])

    def test_crossing_arcs(self):
        with pytest.raises(NonCrossingViolation):
            check_x_arcs(disc_of((0, 1), (2, 3), (4, 5)), [(0, 2), (1, 3)])

    def test_too_few_arcs(self):
        with pytest.raises(InvalidMap):
            check_x_arcs(disc_of((0, 1), (2, 3)), [])


class TestRefinementPlan:
    def test_convex_diagram_has_empty_plan(self, hopf):
        plan = choose_x_arcs(hopf)

        assert plan.size == 0
        assert plan.to_dict() == {"alpha:1": [], "beta:1": []}

    def test_disconn_gets_one_arc_per_disc(self, disconn):
        plan = choose_x_arcs(disconn)

        assert plan.arcs_on(alpha(1)) == ((0, 2),)
        assert plan.arcs_on(beta(1)) == ((0, 2),)

    def test_fingered_product_disc_needs_no_arcs(self, ot_torus):
        plan = choose_x_arcs(ot_torus)

        assert plan.size == 0
        assert plan.diagram.disc(alpha(1)).size == 2

    def test_unknown_disc(self, hopf):
        with pytest.raises(InvalidMap):
            RefinementPlan(hopf, {alpha(9): ()})

    def test_slide_needs_two_arcs(self, disconn):
        plan = choose_x_arcs(disconn)

        with pytest.raises(NotAdjacent):
            arc_slide(plan, alpha(1), (0, 2), (0, 2))
        assert slide_orbit(plan, alpha(1)) == [plan]


class TestArcSlides:
    """Test suite for arc slides and slide orbits."""

    PARALLEL = ((0, 1), (2, 3), (4, 5))

    def test_slide_replaces_the_moving_arc(self, mocker):
        plan = plan_on(mocker, disc_of(*self.PARALLEL), [(2, 4), (0, 4)])

        slid = arc_slide(plan, alpha(1), (0, 4), (2, 4))

        assert slid.arcs_on(alpha(1)) == ((0, 2), (2, 4))

    def test_slide_then_slide_back(self, mocker):
        plan = plan_on(mocker, disc_of(*self.PARALLEL), [(2, 4), (0, 4)])

        slid = arc_slide(plan, alpha(1), (0, 4), (2, 4))
        back = arc_slide(slid, alpha(1), (0, 2), (2, 4))

        assert back.arcs_on(alpha(1)) == plan.arcs_on(alpha(1))

    def test_orbit_of_three_parallel_chords(self, mocker):
        disc = disc_of(*self.PARALLEL)
        plan = plan_on(mocker, disc, leftmost_gap_arcs(disc))

        orbit = [p.arcs_on(alpha(1)) for p in slide_orbit(plan, alpha(1))]

        assert orbit == [((0, 4), (2, 4)), ((0, 2), (2, 4)), ((0, 2), (0, 4))]

    def test_every_plan_in_the_orbit_is_valid(self, mocker):
        disc = disc_of((0, 7), (1, 2), (3, 4), (5, 6))
        plan = plan_on(mocker, disc, leftmost_gap_arcs(disc))

        orbit = slide_orbit(plan, alpha(1))

        assert len(orbit) > 1
        for other in orbit:
            check_x_arcs(disc, other.arcs_on(alpha(1)))
            assert len(other.arcs_on(alpha(1))) == 3

    def test_arcs_sharing_no_endpoint(self, mocker):
        disc = disc_of((0, 1), (2, 3), (4, 5), (6, 7))
        plan = plan_on(mocker, disc, [(0, 2), (4, 6), (0, 4)])

        with pytest.raises(NotAdjacent, match="share no endpoint"):
            arc_slide(plan, alpha(1), (0, 2), (4, 6))


class TestTunnel:
    def test_tunnel_splits_the_disc(self, disconn):
        tunnelled = tunnel(disconn, alpha(1), (0, 2))

        assert tunnelled.genus == 2
        assert len(tunnelled.discs) == 4
        assert tunnelled.disc(alpha(1)).is_product
        assert tunnelled.disc(alpha(2)).is_product
        assert tunnelled.disc(beta(2)).is_product
        assert tunnelled.disc(beta(2)).side is Handlebody.V

    def test_tunnel_across_a_chord(self, disconn):
        with pytest.raises(ArcMeetsChord):
            tunnel(disconn, alpha(1), (1, 3))


class TestRefine:
    def test_refined_disconn_is_convex(self, disconn):
        result = refine(choose_x_arcs(disconn))

        assert len(result.tunnel_log) == 2
        assert result.refined.genus == 3
        assert result.convexity.flag
        assert result.to_dict()["genus"] == 3
        assert all(d.is_product for d in result.refined.discs)
        assert len(result.refined.discs) == 6

    def test_refining_a_convex_diagram_changes_nothing(self, hopf):
        result = refine(choose_x_arcs(hopf))

        assert result.tunnel_log == ()
        assert result.refined.genus == 1
        assert result.convexity.flag

    def test_non_convex_result_raises(self, mocker, hopf):
        failing = replace(is_convex_splitting(hopf), products=(("alpha:1", False),))
        mocker.patch.object(refinement, "is_convex_splitting", return_value=failing)

        with pytest.raises(NotConvexSplitting, match="alpha:1 is not a product disc"):
            refine(choose_x_arcs(hopf))
        assert not refine(choose_x_arcs(hopf), strict=False).convexity.flag
