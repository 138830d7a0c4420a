"""Tests for elementary disc moves."""

import pytest

from convexhd.convex import AdmissibleArc, BypassSpec, Side
from convexhd.errors import LocalModelViolation
from convexhd.moves import DiscMove, MoveKind, apply_move, clear_bypass_obstructions
from convexhd.splitting import ChordDiagram, Handlebody, is_convex_splitting
from convexhd.surface import alpha, beta

FINGER = DiscMove(MoveKind.F, alpha(1), (2, 13))


def nested(n):
    """Disc of ``2n`` points whose chords are nested around gap 0."""
    points = tuple(range(1, 2 * n + 1))
    return ChordDiagram(alpha(1), Handlebody.U, points, tuple((k, 2 * n - 1 - k) for k in range(n)))


def interior_bypass(mocker, disc, *locus):
    diag = mocker.Mock()
    diag.disc.return_value = disc
    diag.discs = (disc,)
    apply_move(diag, DiscMove(MoveKind.I, alpha(1), locus))
    (changed,) = diag.with_changes.call_args.kwargs["discs"]
    return changed


class TestDiscMove:
    def test_str_and_parse(self):
        move = DiscMove.parse("Finv alpha:1 2")

        assert move == DiscMove(MoveKind.FINV, alpha(1), (2,))
        assert str(move) == "Finv alpha:1 2"
        assert move.to_dict() == {"kind": "Finv", "disc": "alpha:1", "locus": [2]}

    def test_parse_needs_a_disc(self):
        with pytest.raises(ValueError):
            DiscMove.parse("F")


class TestFinger:
    """Test suite for F and Finv."""

    def test_finger_adds_a_boundary_parallel_chord(self, hopf):
        fingered = apply_move(hopf, FINGER)
        disc = fingered.disc(alpha(1))

        assert disc.size == 4
        assert disc.chords == ((0, 1), (2, 3))
        assert disc.points[:2] == (3, 5)

    def test_finger_keeps_tightness(self, hopf):
        assert is_convex_splitting(apply_move(hopf, FINGER)).tight

    def test_unfinger_undoes_the_finger(self, hopf):
        fingered = apply_move(hopf, FINGER)
        restored = apply_move(fingered, DiscMove(MoveKind.FINV, alpha(1), (2,)))

        assert restored.disc(alpha(1)).size == 2
        assert restored.genus == 1

    def test_unfinger_needs_a_bigon(self, hopf):
        with pytest.raises(LocalModelViolation) as exc_info:
            apply_move(hopf, DiscMove(MoveKind.FINV, alpha(1), (0,)))

        assert exc_info.value.kind == "Finv"


class TestLocalModels:
    def test_finger_locus_shape(self, hopf):
        with pytest.raises(LocalModelViolation):
            apply_move(hopf, DiscMove(MoveKind.F, alpha(1), (2, 13, 14)))

    def test_triangle_locus_shape(self, hopf):
        with pytest.raises(LocalModelViolation):
            apply_move(hopf, DiscMove(MoveKind.T, alpha(1), (1, 2)))

    def test_unknown_disc(self, hopf):
        with pytest.raises(LocalModelViolation) as exc_info:
            apply_move(hopf, DiscMove(MoveKind.F, alpha(5), (2, 13)))

        assert "alpha:5" in exc_info.value.clause


class TestTriangle:
    def test_push_across_a_crossing(self, hopf):
        moved = apply_move(hopf, DiscMove(MoveKind.T, alpha(1), (2,)))
        disc = moved.disc(alpha(1))

        assert disc.size == 2
        assert disc.points[1] == 5
        assert 3 not in disc.points
        assert moved.genus == 1
        assert is_convex_splitting(moved).tight


class TestInteriorBypass:
    """Test suite for I."""

    def test_front_rewiring(self, mocker):
        changed = interior_bypass(mocker, nested(3), 0, 1, 2, 0)

        assert changed.chords == ((0, 1), (2, 5), (3, 4))
        assert changed.points == nested(3).points

    def test_back_rewiring(self, mocker):
        changed = interior_bypass(mocker, nested(3), 0, 1, 2, 1)

        assert changed.chords == ((0, 3), (1, 2), (4, 5))

    def test_needs_three_chords(self, mocker):
        with pytest.raises(LocalModelViolation, match="three distinct chords"):
            interior_bypass(mocker, nested(3), 0, 5, 2, 0)

    def test_chords_must_be_parallel(self, mocker):
        disc = ChordDiagram(alpha(1), Handlebody.U, tuple(range(8)), ((0, 7), (1, 4), (2, 3), (5, 6)))

        with pytest.raises(LocalModelViolation, match="not parallel"):
            interior_bypass(mocker, disc, 0, 2, 5, 0)

    def test_separating_chord(self, mocker):
        with pytest.raises(LocalModelViolation, match=r"chord \(1 6\) separates"):
            interior_bypass(mocker, nested(4), 0, 2, 3, 0)

    def test_side_flag(self, mocker):
        with pytest.raises(LocalModelViolation):
            interior_bypass(mocker, nested(3), 0, 1, 2, 2)


class TestHandleSlide:
    """Test suite for H."""

    def test_path_must_follow_gamma(self, hopf):
        with pytest.raises(LocalModelViolation, match="dart 1 is not on Γ"):
            apply_move(hopf, DiscMove(MoveKind.H, alpha(1), (1,)))

    def test_path_starts_on_the_disc(self, hopf):
        with pytest.raises(LocalModelViolation, match="does not start on alpha:1"):
            apply_move(hopf, DiscMove(MoveKind.H, alpha(1), (13,)))

    def test_needs_a_second_disc(self, hopf):
        with pytest.raises(LocalModelViolation, match="no other disc of U"):
            apply_move(hopf, DiscMove(MoveKind.H, alpha(1), (14,)))


class TestClearBypassObstructions:
    SPEC = BypassSpec(AdmissibleArc((29, 31, 33)), Side.BACK)

    def test_fingers_beta_off_the_arc(self, hopf_bypass):
        cleared, log = clear_bypass_obstructions(hopf_bypass, self.SPEC)

        assert log == [DiscMove(MoveKind.F, beta(1), (30,))]
        assert cleared.disc(beta(1)).size == 4
        assert cleared.map.rotation(30) == (30, 31)

    def test_clear_arc_needs_no_moves(self, hopf_bypass):
        cleared, _ = clear_bypass_obstructions(hopf_bypass, self.SPEC)

        again, log = clear_bypass_obstructions(cleared, self.SPEC)

        assert log == []
        assert again is cleared
