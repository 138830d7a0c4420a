"""Tests for map equivalence up to isotopy and bigon removal."""

import pytest

from convexhd.equivalence import (
    GAMMA_ONLY,
    STRICT,
    SYSTEMS,
    map_fingerprint,
    maps_equivalent,
)
from convexhd.errors import SearchBudgetExceeded
from convexhd.surface import GAMMA, SCAFFOLD, CombinatorialMap, Kind, Label, alpha


def renumber_alpha(m, index):
    return m.relabel(lambda lab: Label(Kind.ALPHA, str(index)) if lab.kind is Kind.ALPHA else lab)


def shift_darts(m, by):
    """The same map with every dart id moved by ``by``."""
    return CombinatorialMap(
        {d + by: e + by for d, e in m.opposite.items()},
        {d + by: e + by for d, e in m.next_at_vertex.items()},
        {d + by: lab for d, lab in m.labels.items()},
        frozenset(d + by for d in m.holes),
        m.orientation,
    )


class TestLabelPolicy:
    def test_systems_forget_indices(self):
        assert SYSTEMS.key(alpha(3)) == "alpha"
        assert STRICT.key(alpha(3)) == "alpha:3"

    def test_scaffold_and_dropped_classes_vanish(self):
        assert SYSTEMS.key(SCAFFOLD) is None
        assert GAMMA_ONLY.key(alpha(1)) is None
        assert GAMMA_ONLY.key(GAMMA) == "gamma"


class TestMapsEquivalent:
    """Test suite for maps_equivalent."""

    def test_map_is_equivalent_to_itself(self, hopf):
        report = maps_equivalent(hopf.map, hopf.map)

        assert report.equivalent
        assert report.witness
        assert report.to_dict()["equivalent"] is True

    def test_different_crossing_patterns(self, hopf, ot_torus):
        report = maps_equivalent(hopf.map, ot_torus.map)

        assert not report.equivalent
        assert report.reason

    def test_index_permutation_depends_on_policy(self, hopf):
        renamed = renumber_alpha(hopf.map, 2)

        assert maps_equivalent(hopf.map, renamed, SYSTEMS).equivalent
        assert not maps_equivalent(hopf.map, renamed, STRICT).equivalent

    def test_symmetric(self, hopf, ot_torus, hopf_bypass):
        for a, b in ((hopf, ot_torus), (hopf, hopf_bypass)):
            forward = maps_equivalent(a.map, b.map).equivalent

            assert maps_equivalent(b.map, a.map).equivalent == forward

    def test_dart_ids_do_not_matter(self, hopf):
        assert maps_equivalent(hopf.map, shift_darts(hopf.map, 100), STRICT).equivalent
        assert maps_equivalent(shift_darts(hopf.map, 100), hopf.map, STRICT).equivalent

    def test_scaffold_arc_is_isotopic_away(self, hopf, hopf_bypass):
        assert maps_equivalent(hopf.map, hopf_bypass.map, STRICT).equivalent

    def test_dart_bound(self, hopf):
        with pytest.raises(SearchBudgetExceeded):
            maps_equivalent(hopf.map, hopf.map, dart_bound=10)


class TestFingerprint:
    def test_equivalent_maps_share_a_fingerprint(self, hopf):
        assert map_fingerprint(hopf.map) == map_fingerprint(renumber_alpha(hopf.map, 7))

    def test_fingerprint_is_a_string(self, sphere):
        assert isinstance(map_fingerprint(sphere.map), str)
