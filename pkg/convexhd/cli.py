"""CLI interface for convexhd."""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.prompt import Confirm
from rich.table import Table

from convexhd.config import DEFAULTS, Config
from convexhd.convex import AdmissibleArc, BypassSpec, Side
from convexhd.equivalence import maps_equivalent
from convexhd.errors import ConvexHDError, StepRejected
from convexhd.fileformat import print_diagram, read_diagram, read_script
from convexhd.moves import DiscMove, MoveKind, apply_move
from convexhd.openbook import open_book_of
from convexhd.refinement import choose_x_arcs, refine
from convexhd.render import render_svg
from convexhd.replay import replay_script
from convexhd.search import (
    Inconclusive,
    attach_bypass,
    bypass_common_stabilisation,
    search_common_stabilisation,
    verify_witness,
)
from convexhd.splitting import (
    ConvexityCertificate,
    DecoratedHeegaardDiagram,
    heegaard_stab_positive,
    is_convex_splitting,
    tightening_check,
)
from convexhd.surface import Label

app = typer.Typer(help="Convex Heegaard splittings: certificates, refinement, moves and stabilisation search")
config_app = typer.Typer(help="Configuration commands")
history_app = typer.Typer(help="Verdict history commands")

app.add_typer(config_app, name="config")
app.add_typer(history_app, name="history")

console = Console()
err_console = Console(stderr=True)

REPORT_SCHEMA = 1
EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE = 0, 1, 2

FormatOption = typer.Option("text", "--format", "-f", help="Report format (text or json)")
SvgOption = typer.Option(None, "--svg", help="Also render the resulting diagram to this SVG file")
OutputOption = typer.Option(None, "--output", "-o", help="Write the resulting diagram to this file")


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log engine steps to stderr"),
) -> None:
    """Certify, refine and compare decorated Heegaard diagrams."""
    if verbose:
        logging.basicConfig(
            level=logging.DEBUG,
            format="%(message)s",
            handlers=[RichHandler(console=err_console, show_path=False)],
        )


def _fail(exc: Exception) -> NoReturn:
    console.print(f"[red]Error: {exc}[/red]")
    raise typer.Exit(EXIT_REFUTED) from exc


def _load(path: Path) -> DecoratedHeegaardDiagram:
    try:
        return read_diagram(path)
    except OSError as e:
        _fail(e)
    except ConvexHDError as e:
        _fail(e)


def _check_format(output_format: str) -> None:
    if output_format not in ("text", "json"):
        console.print(f"[red]Error: Unknown format '{output_format}', use text or json[/red]")
        raise typer.Exit(EXIT_REFUTED)


def output_json(command: str, report: Dict[str, Any]) -> None:
    """Print a versioned JSON report on standard output."""
    payload = {"schema": REPORT_SCHEMA, "command": command, **report}
    print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))


def _finish(diag: DecoratedHeegaardDiagram, output: Optional[Path], svg: Optional[Path]) -> None:
    if output is not None:
        output.write_text(print_diagram(diag), encoding="utf-8")
        err_console.print(f"[green]✓[/green] Diagram written to {output}")
    if svg is not None:
        render_svg(diag, svg)
        err_console.print(f"[green]✓[/green] Picture written to {svg}")


def _certificate_table(cert: ConvexityCertificate) -> Table:
    table = Table(title="Tightness certificates", border_style="cyan")
    table.add_column("Side", style="bold")
    table.add_column("Verdict")
    table.add_column("Pieces (genus, Γ)")
    for side in (cert.u, cert.v):
        style = "green" if side.tight else "red"
        pieces = ", ".join(f"({g}, {c})" for g, c in side.per_piece)
        table.add_row(side.side.value, f"[{style}]{side.verdict.value}[/{style}]", pieces)
    return table


@app.command("check")
def check(
    diagram: Path = typer.Argument(..., help="Diagram file"),
    output_format: str = FormatOption,
    svg: Optional[Path] = SvgOption,
) -> None:
    """Certify tightness and convexity of a diagram.

    Exits 0 for a convex splitting and 1 otherwise.

    Example:
        $ convexhd check hopf_genus1.diag
    """
    _check_format(output_format)
    config = Config()
    diag = _load(diagram)
    mirrored = config.get("mirrored_rounding")
    try:
        cert = is_convex_splitting(diag, mirrored)
        tightening = tightening_check(diag, mirrored)
        book = open_book_of(diag, mirrored) if cert.flag else None
    except ConvexHDError as e:
        _fail(e)
    meets = diag.gamma_meets_both()
    verdict = "convex" if cert.flag else ("tight" if cert.tight else "not certified")
    config.save_to_history("check", str(diagram), verdict)

    if output_format == "json":
        output_json(
            "check",
            {
                "diagram": diag.name or str(diagram),
                "genus": diag.genus,
                "gamma_components": diag.surface.gamma_count,
                "certificate": cert.to_dict(),
                "tightening_system": tightening,
                "gamma_meets_both": {str(k): list(v) for k, v in sorted(meets.items())},
                "open_book": book.to_dict() if book else None,
            },
        )
    else:
        console.print()
        console.print(_certificate_table(cert))
        for side in (cert.u, cert.v):
            if not side.tight:
                console.print(Panel("\n".join(side.trace), title=f"[red]{side.side.value} trace[/red]"))
        lonely = [k for k, (a, b) in sorted(meets.items()) if not (a and b)]
        if lonely:
            console.print(f"[yellow]Γ components missing a disc system: {lonely}[/yellow]")
        if book:
            console.print(
                f"Open book: page genus {book.page_genus}, "
                f"{book.binding_components} binding components, page euler {book.page_euler}"
            )
        style = "green" if cert.flag else "red"
        console.print(f"[{style}]{diag.name or diagram}: {verdict}[/{style}]")
    _finish(diag, None, svg)
    raise typer.Exit(EXIT_OK if cert.flag else EXIT_REFUTED)


@app.command("refine")
def refine_command(
    diagram: Path = typer.Argument(..., help="Diagram file"),
    output: Optional[Path] = OutputOption,
    output_format: str = FormatOption,
    svg: Optional[Path] = SvgOption,
) -> None:
    """Tunnel along leftmost-gap x-arcs until the splitting is convex.

    Example:
        $ convexhd refine disconn.diag -o refined.diag
    """
    _check_format(output_format)
    config = Config()
    diag = _load(diagram)
    try:
        plan = choose_x_arcs(diag, config.get("remove_bigon_points"))
        result = refine(plan, config.get("mirrored_rounding"), strict=False)
    except ConvexHDError as e:
        _fail(e)
    if output_format == "json":
        output_json("refine", {"diagram": diag.name or str(diagram), "plan": plan.to_dict(), **result.to_dict()})
    else:
        console.print(f"Tunnelled along {len(result.tunnel_log)} x-arcs: genus {diag.genus} -> {result.refined.genus}")
        console.print(_certificate_table(result.convexity))
    _finish(result.refined, output, svg)
    raise typer.Exit(EXIT_OK if result.convexity.flag else EXIT_REFUTED)


def _rewrite_report(command: str, before: DecoratedHeegaardDiagram, after: DecoratedHeegaardDiagram) -> Dict[str, Any]:
    return {
        "command": command,
        "genus": [before.genus, after.genus],
        "gamma_components": [before.surface.gamma_count, after.surface.gamma_count],
        "darts": [len(before.map.darts), len(after.map.darts)],
    }


def _print_rewrite(report: Dict[str, Any]) -> None:
    g0, g1 = report["genus"]
    c0, c1 = report["gamma_components"]
    console.print(f"[green]✓[/green] {report['command']}: genus {g0} -> {g1}, Γ components {c0} -> {c1}")


@app.command("bypass")
def bypass(
    diagram: Path = typer.Argument(..., help="Diagram file"),
    arc: List[int] = typer.Argument(..., help="Darts of the admissible arc, in order"),
    side: Side = typer.Option(Side.FRONT, "--side", help="Side the bypass is attached from"),
    witness: bool = typer.Option(False, "--witness", help="Also find a common positive stabilisation"),
    output: Optional[Path] = OutputOption,
    output_format: str = FormatOption,
    svg: Optional[Path] = SvgOption,
) -> None:
    """Attach a bypass along an admissible arc.

    Example:
        $ convexhd bypass torus.diag 31 32 33 --side back -o after.diag
    """
    _check_format(output_format)
    config = Config()
    diag = _load(diagram)
    spec = BypassSpec(AdmissibleArc(tuple(arc)), side)
    try:
        after = attach_bypass(diag, spec)
        found = (
            bypass_common_stabilisation(diag, spec, config.get("arc_faces"), config.get("dart_bound"))
            if witness
            else None
        )
    except ConvexHDError as e:
        _fail(e)
    report = _rewrite_report("bypass", diag, after)
    report["witness"] = found.to_dict() if found else None
    if output_format == "json":
        output_json("bypass", report)
    else:
        _print_rewrite(report)
        if found:
            console.print(f"Common stabilisation: {list(map(list, found.left_script))} / {list(map(list, found.right_script))}")
    _finish(after, output, svg)


@app.command("stab")
def stab(
    diagram: Path = typer.Argument(..., help="Diagram file"),
    route: List[int] = typer.Argument(..., help="Route of the stabilisation arc: start dart, crossed darts, end dart"),
    output: Optional[Path] = OutputOption,
    output_format: str = FormatOption,
    svg: Optional[Path] = SvgOption,
) -> None:
    """Positively stabilise along an arc with twisting -1/2.

    Example:
        $ convexhd stab hopf_genus1.diag 14 17 -o stabilised.diag
    """
    _check_format(output_format)
    diag = _load(diagram)
    try:
        after = heegaard_stab_positive(diag, route)
    except ConvexHDError as e:
        _fail(e)
    report = _rewrite_report("stab", diag, after)
    if output_format == "json":
        output_json("stab", report)
    else:
        _print_rewrite(report)
    _finish(after, output, svg)


@app.command("move")
def move(
    diagram: Path = typer.Argument(..., help="Diagram file"),
    kind: MoveKind = typer.Argument(..., help="Move kind: T, F, Finv, I or H"),
    disc: str = typer.Argument(..., help="Target disc curve, e.g. alpha:1"),
    locus: List[int] = typer.Argument(None, help="Locus data of the move"),
    output: Optional[Path] = OutputOption,
    output_format: str = FormatOption,
    svg: Optional[Path] = SvgOption,
) -> None:
    """Apply an elementary disc move.

    Example:
        $ convexhd move hopf_genus1.diag F alpha:1 2 13 -o fingered.diag
    """
    _check_format(output_format)
    diag = _load(diagram)
    try:
        step = DiscMove(kind, Label.parse(disc), tuple(locus or ()))
        after = apply_move(diag, step)
    except ConvexHDError as e:
        _fail(e)
    report = _rewrite_report("move", diag, after)
    report["move"] = step.to_dict()
    report["discs"] = [str(d) for d in after.discs]
    if output_format == "json":
        output_json("move", report)
    else:
        _print_rewrite(report)
        for line in report["discs"]:
            console.print(f"  {line}")
    _finish(after, output, svg)


@app.command("replay")
def replay(
    script: Path = typer.Argument(..., help="Move script file"),
    diagram: Optional[Path] = typer.Option(None, "--diagram", "-d", help="Starting diagram (omit for scripts starting with ball)"),
    output: Optional[Path] = OutputOption,
    output_format: str = FormatOption,
    svg: Optional[Path] = SvgOption,
) -> None:
    """Replay a move script, validating every step.

    Exits 0 when every step verifies and 1 at the first rejected step.

    Example:
        $ convexhd replay pipeline.script --diagram hopf_bypass.diag
    """
    _check_format(output_format)
    config = Config()
    start = _load(diagram) if diagram else None
    try:
        moves = read_script(script)
    except (OSError, ConvexHDError) as e:
        _fail(e)
    try:
        result = replay_script(
            start,
            moves,
            dart_bound=config.get("dart_bound"),
            arc_faces=config.get("arc_faces"),
            mirrored=config.get("mirrored_rounding"),
            remove_bigon_points=config.get("remove_bigon_points"),
        )
    except StepRejected as e:
        config.save_to_history("replay", str(script), "rejected", str(e))
        if output_format == "json":
            output_json("replay", {"script": str(script), "rejected": {"index": e.index, "reason": e.reason}})
            raise typer.Exit(EXIT_REFUTED) from e
        _fail(e)
    config.save_to_history("replay", str(script), "verified", f"{len(result.audit)} steps")
    if output_format == "json":
        output_json("replay", {"script": str(script), **result.to_dict()})
    else:
        table = Table(title=f"Replay of {script.name}", border_style="cyan")
        table.add_column("#", style="dim", width=3)
        table.add_column("Step", style="bold", overflow="fold")
        table.add_column("Result", overflow="fold")
        for entry in result.audit:
            detail = entry.detail
            if entry.witness:
                left, right = entry.witness.depth
                detail += f" (witness {left}/{right})"
            table.add_row(str(entry.index), entry.step, f"[green]✓[/green] {detail}")
        console.print(table)
        console.print(_certificate_table(result.convexity))
    _finish(result.final, output, svg)


@app.command("compare")
def compare(
    first: Path = typer.Argument(..., help="First diagram"),
    second: Path = typer.Argument(..., help="Second diagram"),
    depth: Optional[int] = typer.Option(None, "--depth", help="Stabilisations per side (default: search_depth)"),
    output_format: str = FormatOption,
) -> None:
    """Search for a common positive stabilisation of two diagrams.

    Exits 0 with a verified witness, 2 when the bounded search is inconclusive.

    Example:
        $ convexhd compare a.diag b.diag --depth 3
    """
    _check_format(output_format)
    config = Config()
    a, b = _load(first), _load(second)
    depth = config.get("search_depth") if depth is None else depth
    dart_bound = config.get("dart_bound")
    try:
        result = search_common_stabilisation(a, b, depth, config.get("arc_faces"), dart_bound)
        check_report = None if isinstance(result, Inconclusive) else verify_witness(a, b, result, dart_bound)
    except ConvexHDError as e:
        _fail(e)
    target = f"{first} {second}"
    if isinstance(result, Inconclusive):
        config.save_to_history("compare", target, "inconclusive", result.reason)
        if output_format == "json":
            output_json("compare", result.to_dict())
        else:
            console.print(f"[yellow]Inconclusive at depth {result.depth}: {result.reason}[/yellow]")
            console.print(f"[dim]{result.explored} diagrams explored[/dim]")
        raise typer.Exit(EXIT_INCONCLUSIVE)
    if check_report is None or not check_report.equivalent:
        config.save_to_history("compare", target, "rejected", "witness failed to re-verify")
        _fail(ConvexHDError("search returned a witness that does not re-verify"))
    config.save_to_history("compare", target, "verified", f"depth {result.depth}")
    if output_format == "json":
        output_json("compare", {"witness": result.to_dict(), "verified": True})
    else:
        left, right = result.depth
        console.print(f"[green]✓ Common positive stabilisation at depth {left}/{right}[/green]")
        for name, script in (("first", result.left_script), ("second", result.right_script)):
            routes = "; ".join(" ".join(map(str, r)) for r in script) or "(none)"
            console.print(f"  {name}: {routes}")


@app.command("equivalent")
def equivalent(
    first: Path = typer.Argument(..., help="First diagram"),
    second: Path = typer.Argument(..., help="Second diagram"),
    output_format: str = FormatOption,
) -> None:
    """Decide whether two diagrams are isomorphic after normalization."""
    _check_format(output_format)
    config = Config()
    a, b = _load(first), _load(second)
    try:
        report = maps_equivalent(a.map, b.map, dart_bound=config.get("dart_bound"))
    except ConvexHDError as e:
        _fail(e)
    if output_format == "json":
        output_json("equivalent", report.to_dict())
    elif report.equivalent:
        console.print("[green]✓ Equivalent[/green]")
    else:
        console.print(f"[red]Not equivalent: {report.reason}[/red]")
    raise typer.Exit(EXIT_OK if report.equivalent else EXIT_REFUTED)


@config_app.command("set")
def config_set(
    key: str = typer.Argument(..., help="Configuration key (e.g., search_depth)"),
    value: str = typer.Argument(..., help="Configuration value"),
) -> None:
    """Set a configuration value.

    Example:
        $ convexhd config set search_depth 2
    """
    config = Config()
    key = key.replace("-", "_")
    if key not in DEFAULTS:
        console.print(f"[red]Error: Unknown config key '{key}'[/red]")
        console.print(f"Known keys: {', '.join(DEFAULTS)}")
        raise typer.Exit(EXIT_REFUTED)
    try:
        config.set(key, value)
    except ValueError as e:
        _fail(e)
    console.print(f"[green]✓[/green] {key} = {config.get(key)} saved to {config.config_file}")


@config_app.command("show")
def config_show() -> None:
    """Show effective configuration values."""
    config = Config()
    table = Table(title="Configuration", border_style="cyan")
    table.add_column("Key", style="bold")
    table.add_column("Value")
    table.add_column("Default", style="dim")
    for key, value in config.all().items():
        table.add_row(key, str(value), str(DEFAULTS[key]))
    console.print(table)


@history_app.callback(invoke_without_command=True)
def history_list(
    ctx: typer.Context,
    limit: int = typer.Option(20, "-n", "--limit", help="Number of entries to show"),
) -> None:
    """Show recent verdicts.

    Example:
        $ convexhd history
        $ convexhd history -n 50
        $ convexhd history clear
    """
    if ctx.invoked_subcommand is not None:
        return

    config = Config()
    entries = config.get_history(limit=limit)

    if not entries:
        console.print("[dim]No verdict history yet.[/dim]")
        console.print("Run [cyan]convexhd check <file>[/cyan] to create your first entry.")
        return

    table = Table(title=f"Verdict History (last {len(entries)})", border_style="cyan")
    table.add_column("#", style="dim", width=3)
    table.add_column("Time", style="dim", no_wrap=True)
    table.add_column("Command", style="cyan", no_wrap=True)
    table.add_column("Target", style="bold", min_width=20, overflow="fold")
    table.add_column("Verdict")
    table.add_column("Detail", style="dim", overflow="fold")

    for i, entry in enumerate(entries, 1):
        try:
            ts = datetime.fromisoformat(entry["timestamp"].rstrip("Z"))
            time_str = ts.strftime("%m-%d %H:%M")
        except (ValueError, KeyError):
            time_str = "—"

        table.add_row(
            str(i),
            time_str,
            entry.get("command", "—"),
            entry.get("target", "—"),
            entry.get("verdict", "—"),
            entry.get("detail") or "—",
        )

    console.print()
    console.print(table)


@history_app.command("clear")
def history_clear(
    yes: bool = typer.Option(False, "-y", "--yes", help="Skip confirmation"),
) -> None:
    """Clear all verdict history."""
    if not yes:
        confirmed = Confirm.ask("Clear all verdict history?", default=False)
        if not confirmed:
            console.print("[dim]Cancelled.[/dim]")
            raise typer.Exit(0)

    Config().clear_history()
    console.print("[green]✓ History cleared.[/green]")


@app.command("version")
def version() -> None:
    """Show convexhd version."""
    from convexhd import __version__

    console.print(f"convexhd version {__version__}")


if __name__ == "__main__":
    app()
