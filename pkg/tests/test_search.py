"""Tests for the bounded common-stabilisation search."""

import pytest

from convexhd import search
from convexhd.convex import AdmissibleArc, BypassSpec, ConvexSurfaceData, Side
from convexhd.equivalence import MapEquivalenceReport
from convexhd.errors import NotAdmissible, SearchBudgetExceeded, WitnessFailed
from convexhd.search import (
    Inconclusive,
    StabilisationWitness,
    attach_bypass,
    bypass_common_stabilisation,
    search_common_stabilisation,
    stabilisation_routes,
    stabilise,
    verify_witness,
)
from convexhd.splitting import DecoratedHeegaardDiagram
from convexhd.surface import GAMMA, SCAFFOLD, CombinatorialMap, Kind


class TestRoutes:
    def test_sphere_has_one_route_per_side_of_gamma(self, sphere):
        assert stabilisation_routes(sphere) == [(1, 1), (2, 2)]

    def test_routes_start_and_end_on_gamma(self, hopf):
        m = hopf.map
        routes = stabilisation_routes(hopf)

        assert (14, 17) in routes
        for route in routes:
            assert m.labels[route[0]].kind is Kind.GAMMA
            assert m.labels[route[-1]].kind is Kind.GAMMA
            assert all(m.labels[t].kind is not Kind.BETA for t in route[1:-1])

    def test_more_faces_give_more_routes(self, hopf):
        assert set(stabilisation_routes(hopf, 1)) <= set(stabilisation_routes(hopf, 2))

    def test_stabilise_applies_routes_in_order(self, hopf):
        assert stabilise(hopf, [(14, 17)]).genus == 2
        assert stabilise(hopf, []) is hopf


class TestSearch:
    """Test suite for search_common_stabilisation."""

    def test_diagram_against_itself(self, hopf):
        result = search_common_stabilisation(hopf, hopf, depth=1)

        assert isinstance(result, StabilisationWitness)
        assert result.depth == (0, 0)
        assert result.to_dict()["left_script"] == []

    def test_stabilised_diagram_one_level_down(self, hopf):
        stabilised = stabilise(hopf, [(14, 17)])

        result = search_common_stabilisation(stabilised, hopf, depth=1)

        assert isinstance(result, StabilisationWitness)
        assert result.depth == (0, 1)
        assert verify_witness(stabilised, hopf, result).equivalent

    def test_genus_gap_beyond_depth(self, sphere, hopf):
        result = search_common_stabilisation(sphere, hopf, depth=0)

        assert isinstance(result, Inconclusive)
        assert result.explored == 0
        assert result.to_dict()["inconclusive"] is True

    def test_nothing_found_at_depth_zero(self, hopf, ot_torus):
        result = search_common_stabilisation(hopf, ot_torus, depth=0)

        assert isinstance(result, Inconclusive)
        assert result.explored == 2
        assert "0/0" in result.reason

    def test_every_level_up_to_depth_is_tried(self, mocker, hopf):
        mocker.patch.object(search._Frontier, "level", return_value=[])
        meet = mocker.patch.object(search, "_meet", return_value=None)

        result = search_common_stabilisation(hopf, hopf, depth=2)

        assert meet.call_count == 3
        assert isinstance(result, Inconclusive)
        assert result.depth == 2
        assert "2/2" in result.reason

    def test_budget_stops_the_deepening(self, mocker, hopf):
        meet = mocker.patch.object(search, "_meet", side_effect=SearchBudgetExceeded("too many darts"))

        result = search_common_stabilisation(hopf, hopf, depth=3)

        assert meet.call_count == 1
        assert isinstance(result, Inconclusive)
        assert result.reason == "too many darts"


class TestVerifyWitness:
    def test_empty_scripts(self, hopf):
        witness = StabilisationWitness((), (), MapEquivalenceReport(True))

        assert verify_witness(hopf, hopf, witness).equivalent

    def test_broken_route_is_reported(self, hopf):
        witness = StabilisationWitness(((7, 2),), (), MapEquivalenceReport(True))
        report = verify_witness(hopf, hopf, witness)

        assert not report.equivalent
        assert report.reason.startswith("route 0")

    def test_same_route_on_both_sides(self, hopf):
        witness = StabilisationWitness(((14, 17),), ((14, 17),), MapEquivalenceReport(True))

        assert verify_witness(hopf, hopf, witness).equivalent

    def test_scripts_ending_apart(self, hopf):
        witness = StabilisationWitness(((14, 17),), (), MapEquivalenceReport(True))

        assert not verify_witness(hopf, hopf, witness).equivalent


class TestAttachBypass:
    def test_arc_must_be_admissible(self, hopf):
        with pytest.raises(NotAdmissible):
            attach_bypass(hopf, BypassSpec(AdmissibleArc((9,))))


def triangle_sphere():
    """One Γ triangle on the sphere; scaffold 7 runs outside from its first corner, 9 inside."""
    opposite = {1: 2, 2: 1, 3: 4, 4: 3, 5: 6, 6: 5, 7: 8, 8: 7, 9: 10, 10: 9}
    rotation = {1: 6, 6: 7, 7: 1, 3: 9, 9: 2, 2: 8, 8: 3, 5: 10, 10: 4, 4: 5}
    labels = {d: GAMMA if d <= 6 else SCAFFOLD for d in opposite}
    return DecoratedHeegaardDiagram(ConvexSurfaceData(CombinatorialMap(opposite, rotation, labels)))


class TestBypassCommonStabilisation:
    WITNESS = StabilisationWitness(((14, 17),), ((14, 17),), MapEquivalenceReport(True))
    SPEC = BypassSpec(AdmissibleArc((7, 9)), Side.FRONT)

    def test_trivial_bypass_needs_no_stabilisation(self):
        witness = bypass_common_stabilisation(triangle_sphere(), self.SPEC)

        assert witness.depth == (0, 0)
        assert witness.equivalence.equivalent

    def test_no_route_joins_arc_ends_across_gamma(self, three_circles):
        assert search._end_routes(three_circles, (7, 9), 5) == []

    def test_routes_along_the_bypass_disc_come_first(self, mocker, three_circles):
        meet = mocker.patch.object(search, "_meet", return_value=self.WITNESS)
        local = mocker.spy(search, "_local_routes")

        witness = bypass_common_stabilisation(three_circles, self.SPEC)

        assert witness is self.WITNESS
        assert meet.call_count == 1
        assert local.call_count == 0

    def test_local_search_is_the_fallback(self, mocker, three_circles):
        mocker.patch.object(search, "_meet", return_value=None)
        local = mocker.spy(search, "_local_routes")

        with pytest.raises(WitnessFailed):
            bypass_common_stabilisation(three_circles, self.SPEC)
        assert local.call_count == 2
