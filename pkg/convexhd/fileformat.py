"""Line-oriented text formats for decorated diagrams and move scripts.

Diagram files::

    convexhd diagram 1
    name hopf
    genus 1
    orientation 1
    darts 4
    edge 1 2
    vertex 1 2 3 4
    label gamma - 1 3
    hole 5 6
    disc alpha:1 side U points 3 5 chords (0 1)

``label`` lines give a class, a name (``-`` for none) and darts; one dart per
edge is enough.  Unlabeled edges are scaffold.  Script files start with
``convexhd script 1`` followed by one step per line.  ``#`` starts a comment.
"""

import logging
import re
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Set, Tuple, Union

from convexhd.convex import ConvexSurfaceData, Side
from convexhd.errors import InvalidMap, ParseError
from convexhd.moves import MoveKind
from convexhd.replay import MoveScript, ScriptStep, StepKind
from convexhd.splitting import ChordDiagram, DecoratedHeegaardDiagram, Handlebody
from convexhd.surface import SCAFFOLD, CombinatorialMap, Kind, Label

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

_WORD = re.compile(r"\S+")
_DISC = re.compile(r"disc\s+(\S+)\s+side\s+(\S+)\s+points\b(.*?)\bchords\b(.*)$")
_CHORD = re.compile(r"\s*\(\s*(\d+)\s+(\d+)\s*\)")

Word = Tuple[str, int]


def _lines(text: str) -> Iterator[Tuple[int, List[Word]]]:
    """Non-empty lines as ``(line number, [(word, column), ...])``."""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        words = [(m.group(), m.start() + 1) for m in _WORD.finditer(line)]
        if words:
            yield number, words


class _Reader:
    def __init__(self, text: str, source: Optional[str]) -> None:
        self.text = text
        self.source = source
        self.last = len(text.splitlines()) + 1

    def error(self, line: int, col: int, expected: str) -> ParseError:
        return ParseError(line, col, expected, self.source)

    def integer(self, line: int, word: Word) -> int:
        try:
            return int(word[0])
        except ValueError:
            raise self.error(line, word[1], f"an integer, got '{word[0]}'") from None

    def integers(self, line: int, words: List[Word]) -> List[int]:
        return [self.integer(line, w) for w in words]

    def header(self, lines: Iterator[Tuple[int, List[Word]]], kind: str) -> None:
        first = next(lines, None)
        if first is None:
            raise self.error(self.last, 1, f"'convexhd {kind} {FORMAT_VERSION}'")
        line, words = first
        if [w for w, _ in words[:2]] != ["convexhd", kind] or len(words) != 3:
            raise self.error(line, words[0][1], f"'convexhd {kind} {FORMAT_VERSION}'")
        if self.integer(line, words[2]) != FORMAT_VERSION:
            raise self.error(line, words[2][1], f"format version {FORMAT_VERSION}")

    def disc(self, line: int, raw: str) -> ChordDiagram:
        match = _DISC.match(raw.strip())
        indent = len(raw) - len(raw.lstrip())
        if match is None:
            raise self.error(line, indent + 1, "'disc <curve> side <U|V> points <darts> chords (i j)...'")
        try:
            label = Label.parse(match.group(1))
        except InvalidMap:
            raise self.error(line, indent + match.start(1) + 1, "a curve label such as alpha:1") from None
        try:
            side = Handlebody(match.group(2))
        except ValueError:
            raise self.error(line, indent + match.start(2) + 1, "side U or V") from None
        base = indent + match.start(3) + 1
        points = [
            self.integer(line, (m.group(), base + m.start())) for m in _WORD.finditer(match.group(3))
        ]
        chords: List[Tuple[int, int]] = []
        rest, at = match.group(4), indent + match.start(4) + 1
        pos = 0
        while rest[pos:].strip():
            chord = _CHORD.match(rest, pos)
            if chord is None:
                raise self.error(line, at + pos, "a chord '(i j)'")
            chords.append((int(chord.group(1)), int(chord.group(2))))
            pos = chord.end()
        return ChordDiagram(label, side, tuple(points), tuple(chords))


def parse_diagram(text: str, source: Optional[str] = None) -> DecoratedHeegaardDiagram:
    """Parse a diagram file.

    Raises:
        ParseError: With ``line:col`` of the first malformed token.
        NonCrossingViolation: If a disc has crossing chords.
        InvalidMap: If the data parse but do not form a valid diagram.
    """
    reader = _Reader(text, source)
    raw_lines = text.splitlines()
    lines = _lines(text)
    reader.header(lines, "diagram")
    name = ""
    genus: Optional[Tuple[int, int, int]] = None
    declared: Optional[int] = None
    orientation = 1
    opposite: Dict[int, int] = {}
    rotation: Dict[int, int] = {}
    labeled: List[Tuple[int, Word, Label]] = []
    holes: Set[int] = set()
    disc_lines: List[int] = []
    for line, words in lines:
        key, args = words[0][0], words[1:]
        if key == "name":
            name = " ".join(w for w, _ in args)
        elif key in ("genus", "orientation", "darts"):
            if len(args) != 1:
                raise reader.error(line, words[0][1] + len(key) + 1, f"one integer after '{key}'")
            value = reader.integer(line, args[0])
            if key == "genus":
                genus = (value, line, args[0][1])
            elif key == "darts":
                declared = value
            else:
                orientation = value
        elif key == "edge":
            if len(args) != 2:
                raise reader.error(line, words[0][1], "'edge <dart> <dart>'")
            d, e = reader.integers(line, args)
            for x, w in zip((d, e), args):
                if x in opposite or d == e:
                    raise reader.error(line, w[1], f"a dart not yet on an edge, got {x}")
            opposite[d], opposite[e] = e, d
        elif key == "vertex":
            cycle = reader.integers(line, args)
            if not cycle:
                raise reader.error(line, words[0][1] + len(key) + 1, "the darts around the vertex")
            for d, w in zip(cycle, args):
                if d in rotation:
                    raise reader.error(line, w[1], f"a dart not yet at a vertex, got {d}")
                rotation[d] = cycle[(cycle.index(d) + 1) % len(cycle)]
        elif key == "label":
            if len(args) < 3:
                raise reader.error(line, words[0][1], "'label <class> <name|-> <dart>...'")
            try:
                label = Label(Kind(args[0][0].lower()), "" if args[1][0] == "-" else args[1][0])
            except ValueError:
                raise reader.error(line, args[0][1], "a label class (gamma, alpha, beta, aux, boundary)") from None
            labeled.extend((line, w, label) for w in args[2:])
        elif key == "hole":
            holes.update(reader.integers(line, args))
        elif key == "disc":
            disc_lines.append(line)
        else:
            raise reader.error(line, words[0][1], f"a keyword, got '{key}'")
    if declared is not None and declared != len(opposite):
        raise reader.error(reader.last, 1, f"{declared} darts on edges, found {len(opposite)}")
    labels = {d: SCAFFOLD for d in opposite}
    for line, word, label in labeled:
        d = reader.integer(line, word)
        if d not in opposite:
            raise reader.error(line, word[1], f"a dart on an edge, got {d}")
        labels[d] = labels[opposite[d]] = label
    try:
        m = CombinatorialMap(opposite, rotation, labels, frozenset(holes), orientation)
    except InvalidMap as exc:
        raise reader.error(reader.last, 1, f"a complete map ({exc})") from None
    surface = ConvexSurfaceData(m)
    discs = [reader.disc(line, raw_lines[line - 1].split("#", 1)[0]) for line in disc_lines]
    diag = DecoratedHeegaardDiagram(surface, tuple(discs), name)
    if genus is not None and genus[0] != diag.genus:
        raise reader.error(genus[1], genus[2], f"genus {diag.genus}")
    logger.debug("parsed %s: %d darts, genus %d", source or name or "diagram", len(m.darts), diag.genus)
    return diag


def print_diagram(diag: DecoratedHeegaardDiagram) -> str:
    """Render ``diag`` in the diagram format; parsing the output gives back an equal map."""
    m = diag.map
    out = [f"convexhd diagram {FORMAT_VERSION}"]
    if diag.name:
        out.append(f"name {diag.name}")
    out += [f"genus {diag.genus}", f"orientation {m.orientation}", f"darts {len(m.darts)}"]
    out += [f"edge {d} {e}" for d, e in m.edges]
    out += ["vertex " + " ".join(map(str, cycle)) for cycle in m.vertices]
    by_label: Dict[Label, List[int]] = {}
    for d, _ in m.edges:
        if not m.labels[d].is_scaffold:
            by_label.setdefault(m.labels[d], []).append(d)
    for label in sorted(by_label):
        name = label.name or "-"
        out.append(f"label {label.kind.value} {name} " + " ".join(map(str, by_label[label])))
    if m.holes:
        out.append("hole " + " ".join(map(str, sorted(m.holes))))
    out += [f"disc {disc}" for disc in diag.discs]
    return "\n".join(out) + "\n"


def _step(reader: _Reader, line: int, words: List[Word]) -> ScriptStep:
    key, args = words[0][0], words[1:]
    try:
        kind = StepKind(key)
    except ValueError:
        expected = ", ".join(k.value for k in StepKind)
        raise reader.error(line, words[0][1], f"a step ({expected}), got '{key}'") from None
    end = words[-1][1] + len(words[-1][0])
    move: Optional[MoveKind] = None
    if kind in (StepKind.BALL, StepKind.REFINE):
        if args:
            raise reader.error(line, args[0][1], "end of line")
        return ScriptStep(kind, line=line)
    if kind is StepKind.STAB:
        if len(args) < 2:
            raise reader.error(line, end, "a route of at least two darts")
        return ScriptStep(kind, tuple(reader.integers(line, args)), line=line)
    if not args:
        raise reader.error(line, end, f"arguments for '{key}'")
    head, rest = args[0], args[1:]
    if kind is StepKind.HANDLE:
        return ScriptStep(kind, tuple(reader.integers(line, rest)), handle=reader.integer(line, head), line=line)
    if kind is StepKind.BYPASS:
        try:
            side = Side(head[0])
        except ValueError:
            raise reader.error(line, head[1], "front or back") from None
        if not rest:
            raise reader.error(line, end, "the darts of the bypass arc")
        return ScriptStep(kind, tuple(reader.integers(line, rest)), side=side, line=line)
    if kind is StepKind.MOVE:
        try:
            move = MoveKind(head[0])
        except ValueError:
            raise reader.error(line, head[1], "a move kind (T, F, Finv, I, H)") from None
        if not rest:
            raise reader.error(line, end, "the target disc")
        head, rest = rest[0], rest[1:]
    try:
        disc = Label.parse(head[0])
    except InvalidMap:
        raise reader.error(line, head[1], "a curve label such as alpha:1") from None
    if kind is StepKind.TUNNEL:
        if len(rest) != 2:
            raise reader.error(line, end, "two point indices")
        return ScriptStep(kind, tuple(reader.integers(line, rest)), disc=disc, line=line)
    return ScriptStep(kind, tuple(reader.integers(line, rest)), disc=disc, move=move, line=line)


def parse_script(text: str, source: Optional[str] = None, name: str = "") -> MoveScript:
    """Parse a move script.

    Raises:
        ParseError: With ``line:col`` of the first malformed token.
    """
    reader = _Reader(text, source)
    lines = _lines(text)
    reader.header(lines, "script")
    steps = tuple(_step(reader, line, words) for line, words in lines)
    return MoveScript(steps, name)


def print_script(script: MoveScript) -> str:
    return f"convexhd script {FORMAT_VERSION}\n{script}"


def read_diagram(path: Union[str, Path]) -> DecoratedHeegaardDiagram:
    path = Path(path)
    return parse_diagram(path.read_text(encoding="utf-8"), source=str(path))


def read_script(path: Union[str, Path]) -> MoveScript:
    path = Path(path)
    return parse_script(path.read_text(encoding="utf-8"), source=str(path), name=path.stem)
