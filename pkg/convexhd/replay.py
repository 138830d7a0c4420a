"""Move scripts and their audited replay."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from convexhd.convex import AdmissibleArc, BypassSpec, Side
from convexhd.equivalence import DEFAULT_DART_BOUND
from convexhd.errors import ConvexHDError, StepRejected
from convexhd.moves import DiscMove, MoveKind, apply_move, clear_bypass_obstructions
from convexhd.refinement import choose_x_arcs, refine, tunnel
from convexhd.search import (
    StabilisationWitness,
    attach_bypass,
    bypass_common_stabilisation,
    verify_witness,
)
from convexhd.splitting import (
    ConvexityCertificate,
    DecoratedHeegaardDiagram,
    ball,
    contact_handle_attach,
    heegaard_stab_positive,
    is_convex_splitting,
)
from convexhd.surface import Label

logger = logging.getLogger(__name__)


class StepKind(str, Enum):
    BALL = "ball"
    HANDLE = "handle"
    STAB = "stab"
    BYPASS = "bypass"
    TUNNEL = "tunnel"
    MOVE = "move"
    REFINE = "refine"


@dataclass(frozen=True)
class ScriptStep:
    """One line of a move script.

    Darts are read on the diagram the previous steps produced.  ``tunnel``
    steps name two point indices of ``disc``; ``move`` steps carry the move's
    locus in ``darts``.
    """

    kind: StepKind
    darts: Tuple[int, ...] = ()
    side: Optional[Side] = None
    disc: Optional[Label] = None
    move: Optional[MoveKind] = None
    handle: Optional[int] = None
    line: int = field(default=0, compare=False)

    def as_move(self) -> DiscMove:
        if self.move is None or self.disc is None:
            raise ValueError("not a move step")
        return DiscMove(self.move, self.disc, self.darts)

    def __str__(self) -> str:
        words: List[str] = [self.kind.value]
        if self.kind is StepKind.HANDLE:
            words.append(str(self.handle))
        elif self.kind is StepKind.BYPASS and self.side is not None:
            words.append(self.side.value)
        elif self.kind is StepKind.TUNNEL:
            words.append(str(self.disc))
        elif self.kind is StepKind.MOVE:
            return f"move {self.as_move()}"
        words.extend(str(d) for d in self.darts)
        return " ".join(words)


@dataclass(frozen=True)
class MoveScript:
    steps: Tuple[ScriptStep, ...]
    name: str = ""

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return "".join(f"{step}\n" for step in self.steps)


@dataclass(frozen=True)
class StepAudit:
    index: int
    step: str
    detail: str
    witness: Optional[StabilisationWitness] = None
    moves: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, object]:
        return {
            "index": self.index,
            "step": self.step,
            "detail": self.detail,
            "witness": self.witness.to_dict() if self.witness else None,
            "moves": list(self.moves),
        }


@dataclass(frozen=True, eq=False)
class ReplayResult:
    final: DecoratedHeegaardDiagram
    audit: Tuple[StepAudit, ...]
    convexity: ConvexityCertificate

    def to_dict(self) -> Dict[str, object]:
        return {
            "steps": [a.to_dict() for a in self.audit],
            "genus": self.final.genus,
            "convexity": self.convexity.to_dict(),
        }


_Outcome = Tuple[DecoratedHeegaardDiagram, StepAudit]


@dataclass
class _Replayer:
    dart_bound: int
    arc_faces: int
    mirrored: bool
    remove_bigon_points: bool

    def run(self, diag: Optional[DecoratedHeegaardDiagram], step: ScriptStep) -> _Outcome:
        if step.kind is StepKind.BALL:
            return ball(), StepAudit(0, str(step), "contact 0-handle")
        if step.kind is StepKind.HANDLE:
            new = contact_handle_attach(diag, step.handle or 0, step.darts)
            return new, StepAudit(0, str(step), f"contact {step.handle}-handle, genus {new.genus}")
        if diag is None:
            raise StepRejected(0, "no diagram to act on; start the script with ball")
        handler = getattr(self, f"_{step.kind.value}")
        return handler(diag, step)

    def _stab(self, diag: DecoratedHeegaardDiagram, step: ScriptStep) -> _Outcome:
        new = heegaard_stab_positive(diag, step.darts)
        return new, StepAudit(0, str(step), f"genus {diag.genus} -> {new.genus}")

    def _bypass(self, diag: DecoratedHeegaardDiagram, step: ScriptStep) -> _Outcome:
        spec = BypassSpec(AdmissibleArc(step.darts), step.side or Side.FRONT)
        cleared, log = clear_bypass_obstructions(diag, spec)
        witness = bypass_common_stabilisation(cleared, spec, self.arc_faces, self.dart_bound)
        after = attach_bypass(cleared, spec)
        check = verify_witness(cleared, after, witness, self.dart_bound)
        if not check.equivalent:
            raise StepRejected(0, f"bypass witness does not verify: {check.reason}")
        before, now = cleared.surface.gamma_count, after.surface.gamma_count
        detail = f"{len(log)} finger moves, Γ components {before} -> {now}"
        return after, StepAudit(0, str(step), detail, witness, tuple(str(m) for m in log))

    def _tunnel(self, diag: DecoratedHeegaardDiagram, step: ScriptStep) -> _Outcome:
        if step.disc is None or len(step.darts) != 2:
            raise StepRejected(0, "tunnel needs a disc and two point indices")
        new = tunnel(diag, step.disc, (step.darts[0], step.darts[1]))
        return new, StepAudit(0, str(step), f"genus {diag.genus} -> {new.genus}")

    def _move(self, diag: DecoratedHeegaardDiagram, step: ScriptStep) -> _Outcome:
        before = is_convex_splitting(diag, self.mirrored)
        new = apply_move(diag, step.as_move())
        after = is_convex_splitting(new, self.mirrored)
        for side, was, now in (("U", before.u, after.u), ("V", before.v, after.v)):
            if was.tight and not now.tight:
                raise StepRejected(0, f"move lost the tightness certificate of {side}")
        return new, StepAudit(0, str(step), f"tight U/V: {after.u.verdict.value}/{after.v.verdict.value}")

    def _refine(self, diag: DecoratedHeegaardDiagram, step: ScriptStep) -> _Outcome:
        result = refine(choose_x_arcs(diag, self.remove_bigon_points), self.mirrored)
        detail = f"{len(result.tunnel_log)} tunnels, genus {result.refined.genus}, convex"
        return result.refined, StepAudit(0, str(step), detail)


def replay_script(
    initial: Optional[DecoratedHeegaardDiagram],
    script: MoveScript,
    dart_bound: int = DEFAULT_DART_BOUND,
    arc_faces: int = 2,
    mirrored: bool = False,
    remove_bigon_points: bool = True,
) -> ReplayResult:
    """Replay ``script`` on ``initial`` and audit every step.

    Bypass steps first clear disc curves off the arc with finger moves, then
    carry a common-stabilisation witness that is re-verified independently.
    Move steps must keep every tightness certificate that held before.

    Raises:
        StepRejected: With the index of the first step that fails.
    """
    replayer = _Replayer(dart_bound, arc_faces, mirrored, remove_bigon_points)
    diag = initial
    audit: List[StepAudit] = []
    for i, step in enumerate(script.steps):
        try:
            diag, entry = replayer.run(diag, step)
        except StepRejected as exc:
            raise StepRejected(i, exc.reason) from exc
        except ConvexHDError as exc:
            raise StepRejected(i, f"{step}: {exc}") from exc
        audit.append(StepAudit(i, entry.step, entry.detail, entry.witness, entry.moves))
        logger.info("step %d %s: %s", i, step, entry.detail)
    if diag is None:
        raise StepRejected(0, "empty script and no starting diagram")
    return ReplayResult(diag, tuple(audit), is_convex_splitting(diag, mirrored))
