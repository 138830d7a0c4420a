"""Bundled example diagrams and scripts."""

from importlib.resources import files
from typing import List

from convexhd.fileformat import parse_diagram, parse_script
from convexhd.replay import MoveScript
from convexhd.splitting import DecoratedHeegaardDiagram

_DATA = files("convexhd") / "data"


def diagram_names() -> List[str]:
    return sorted(p.name[: -len(".diag")] for p in _DATA.iterdir() if p.name.endswith(".diag"))


def script_names() -> List[str]:
    return sorted(p.name[: -len(".script")] for p in _DATA.iterdir() if p.name.endswith(".script"))


def diagram_text(name: str) -> str:
    return (_DATA / f"{name}.diag").read_text(encoding="utf-8")


def load_diagram(name: str) -> DecoratedHeegaardDiagram:
    """Parse the bundled diagram ``name`` (without the ``.diag`` suffix)."""
    return parse_diagram(diagram_text(name), source=f"{name}.diag")


def load_script(name: str) -> MoveScript:
    text = (_DATA / f"{name}.script").read_text(encoding="utf-8")
    return parse_script(text, source=f"{name}.script", name=name)
