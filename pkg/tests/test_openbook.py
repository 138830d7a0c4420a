"""Tests for open books read off convex splittings."""

import pytest

from convexhd.errors import NotAdmissible, NotConvexSplitting
from convexhd.openbook import ob_stabilise, open_book_of


class TestOpenBookOf:
    """Test suite for open_book_of."""

    def test_sphere_gives_the_disc_open_book(self, sphere):
        book = open_book_of(sphere)

        assert book.to_dict() == {"page_genus": 0, "binding_components": 1, "page_euler": 1}
        assert book.source is sphere

    def test_hopf_gives_annulus_pages(self, hopf):
        book = open_book_of(hopf)

        assert book.page_genus == 0
        assert book.binding_components == 2
        assert book.page_euler == 0

    def test_needs_a_convex_splitting(self, disconn):
        with pytest.raises(NotConvexSplitting) as exc_info:
            open_book_of(disconn)

        assert "product disc" in str(exc_info.value)

    def test_not_certified_side_is_named(self, ot_torus):
        with pytest.raises(NotConvexSplitting) as exc_info:
            open_book_of(ot_torus)

        assert "U: NOT_CERTIFIED" in str(exc_info.value)


class TestObStabilise:
    def test_arc_on_the_negative_page(self, hopf):
        with pytest.raises(NotAdmissible):
            ob_stabilise(hopf, (14, 17))

    def test_arc_on_the_positive_page(self, hopf):
        assert ob_stabilise(hopf, (15, 18)).genus == 2

    def test_hopf_band_lowers_the_page_euler(self, hopf):
        before = open_book_of(hopf)
        after = open_book_of(ob_stabilise(hopf, (15, 18)))

        assert after.page_euler == before.page_euler - 1
        assert abs(after.binding_components - before.binding_components) == 1

    def test_band_between_two_binding_circles(self, hopf):
        book = open_book_of(ob_stabilise(hopf, (15, 18)))

        assert book.to_dict() == {"page_genus": 1, "binding_components": 1, "page_euler": -1}
