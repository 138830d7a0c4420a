"""Pytest configuration and shared fixtures."""

from pathlib import Path

import pytest

from convexhd.convex import ConvexSurfaceData
from convexhd.corpus import load_diagram
from convexhd.splitting import DecoratedHeegaardDiagram
from convexhd.surface import GAMMA, SCAFFOLD, CombinatorialMap


@pytest.fixture
def isolated_home(tmp_path, monkeypatch):
    """Point ~ at a temporary directory and clear CONVEXHD_* overrides."""
    monkeypatch.setattr(Path, "home", lambda: tmp_path)
    for key in ("DART_BOUND", "SEARCH_DEPTH", "ARC_FACES", "MIRRORED_ROUNDING", "REMOVE_BIGON_POINTS"):
        monkeypatch.delenv(f"CONVEXHD_{key}", raising=False)
    return tmp_path


@pytest.fixture
def sphere():
    """Genus-0 diagram: one Γ loop on the sphere."""
    return load_diagram("sphere_genus0")


@pytest.fixture
def hopf():
    """Genus-1 splitting whose α and β discs each carry one chord."""
    return load_diagram("hopf_genus1")


@pytest.fixture
def disconn():
    """Genus-1 splitting that is tight on both sides but has disconnected Γ pieces."""
    return load_diagram("disconn")


@pytest.fixture
def ot_torus():
    """Genus-1 diagram whose fingered α disc leaves U uncertified."""
    return load_diagram("ot_torus")


@pytest.fixture
def three_circles():
    """Three parallel Γ loops on the sphere, the scaffold path 7, 9 runs across all three."""
    opposite = {1: 2, 2: 1, 3: 4, 4: 3, 5: 6, 6: 5, 7: 8, 8: 7, 9: 10, 10: 9}
    rotation = {7: 1, 1: 2, 2: 7, 9: 3, 3: 8, 8: 4, 4: 9, 5: 10, 10: 6, 6: 5}
    labels = {d: GAMMA if d <= 6 else SCAFFOLD for d in opposite}
    surface = ConvexSurfaceData(CombinatorialMap(opposite, rotation, labels))
    return DecoratedHeegaardDiagram(surface, name="three_circles")


@pytest.fixture
def hopf_bypass():
    """hopf_genus1 with a zig-zag admissible arc that β:1 crosses once."""
    return load_diagram("hopf_bypass")
