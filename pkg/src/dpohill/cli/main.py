"""
dpohill command line: check, prove, apply, search, encode, decode, verify, iso, init.
Exit status 1 means a check, proof or verification failed; 2 means unusable input.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Final, Optional

import typer
from pydantic import BaseModel

from dpohill.cli import templates as T
from dpohill.core.config import Settings
from dpohill.core.errors import GluingViolation, HillError
from dpohill.dpo import GtsDocument, apply as apply_rule, dangling_witnesses, find_matches, identification_witnesses
from dpohill.dpo import parse_gts, reachable
from dpohill.encoder import decode as decode_formula
from dpohill.encoder import emit_reachability, emit_step_derivation, encode_graph, verify_system
from dpohill.graphs import TypedHypergraph, find_isomorphisms, format_hg, parse_hg
from dpohill.hill import format_formula, format_sequent, parse_hill
from dpohill.kernel import check as check_tree
from dpohill.kernel import format_prf, location_correspondence, parse_prf, prove as prove_sequent

_LOGGER: Final = logging.getLogger(__name__)

app = typer.Typer(help="DPO rewriting certified by HILL derivations.", no_args_is_help=True)


@dataclass
class _State:
    settings: Settings
    structured: bool = False


_state = _State(Settings())


@app.callback()
def _configure(
    output_format: Optional[str] = typer.Option(None, "--format", help="text or structured (JSON)"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
) -> None:
    settings = Settings.from_env()
    chosen = output_format or settings.output_format
    if chosen not in ("text", "structured"):
        raise typer.BadParameter("expected text or structured", param_hint="--format")
    _state.settings = settings
    _state.structured = chosen == "structured"
    logging.basicConfig(level=logging.DEBUG if verbose else settings.log_level.upper(), force=True)


# --- helpers ---


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        typer.echo(f"cannot read {path}: {exc.strerror}", err=True)
        raise typer.Exit(2) from None


def _input_error(exc: Exception) -> typer.Exit:
    typer.echo(str(exc), err=True)
    return typer.Exit(2)


def _write(path: Optional[Path], text: str) -> None:
    if path is None:
        typer.echo(text, nl=False)
    else:
        path.write_text(text, encoding="utf-8")
        _LOGGER.debug("wrote %s", path)


def _show(model: BaseModel, text: str) -> None:
    if _state.structured:
        typer.echo(model.model_dump_json(indent=2))
    else:
        typer.echo(text)


def _depth(depth: Optional[int]) -> int:
    return _state.settings.depth if depth is None else depth


def _load_gts(path: Path) -> GtsDocument:
    try:
        return parse_gts(_read(path), path.stem)
    except HillError as exc:
        raise _input_error(exc) from None


def _load_graph(path: Path, name: Optional[str] = None) -> TypedHypergraph:
    try:
        return parse_hg(_read(path)).graph(name)
    except HillError as exc:
        raise _input_error(exc) from None


def _sibling(out: Optional[Path], suffix: str) -> Optional[Path]:
    return None if out is None else out.with_suffix(suffix)


# --- summaries ---


class MatchInfo(BaseModel):
    index: int
    nodes: dict[str, str]
    edges: dict[str, str]
    gluing: str


class ApplySummary(BaseModel):
    rule: str
    match: int
    result: str
    certificate_ok: bool


class SearchSummary(BaseModel):
    target: str
    depth: int
    found: bool
    trace: list[tuple[str, int]] = []
    proof_ok: Optional[bool] = None


class IsoSummary(BaseModel):
    isomorphic: bool
    nodes: dict[str, str] = {}
    edges: dict[str, str] = {}


# --- commands ---


@app.command()
def check(proof: Path = typer.Argument(..., help="Proof file (.prf)")) -> None:
    """Check every rule application of a proof; exit 1 if any fails."""
    try:
        tree = parse_prf(_read(proof))
    except HillError as exc:
        raise _input_error(exc) from None
    report = check_tree(tree)
    if report.ok:
        lines = [f"ok: {report.nodes} rule applications checked"]
        balance = location_correspondence(tree)
        if not balance.balanced:
            lines.append("note: location occurrences are unbalanced for " + ", ".join(
                s.sort for s in balance.sorts if not s.balanced
            ))
        _show(report, "\n".join(lines))
        return
    _show(report, "\n".join(str(f) for f in report.failures))
    raise typer.Exit(1)


@app.command()
def prove(
    source: Path = typer.Argument(..., help="Sequent file (.hill)"),
    name: Optional[str] = typer.Option(None, "--name", help="Sequent declaration to prove"),
    depth: Optional[int] = typer.Option(None, "--depth", min=0, help="Bound on proof height"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the .prf here"),
) -> None:
    """Bounded proof search; prints a .prf or 'no proof within bound'."""
    try:
        sequent = parse_hill(_read(source)).sequent(name)
    except HillError as exc:
        raise _input_error(exc) from None
    except KeyError as exc:
        raise _input_error(ValueError(exc.args[0] if exc.args else "no such sequent")) from None
    bound = _depth(depth)
    tree = prove_sequent(sequent, bound)
    if tree is None:
        typer.echo(f"no proof within bound {bound}")
        raise typer.Exit(1)
    _write(out, format_prf(tree))


@app.command(name="apply")
def apply_command(
    system: Path = typer.Argument(..., help="Graph transformation system (.gts)"),
    graph: Optional[str] = typer.Option(None, "--graph", help="Host graph (default: the start graph)"),
    rule: Optional[str] = typer.Option(None, "--rule", help="Rule name (default: the first rule)"),
    match: int = typer.Option(0, "--match", min=0, help="Match index as printed by --list"),
    list_matches: bool = typer.Option(False, "--list", help="List matches and their gluing status"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the result .hg here and the .prf next to it"),
) -> None:
    """One DPO step with its certificate."""
    doc = _load_gts(system)
    try:
        host = doc.graph(graph) if graph else doc.start
        chosen = doc.gts().rule(rule) if rule else next(iter(doc.rules.values()))
        matches = find_matches(chosen, host)
    except (HillError, StopIteration) as exc:
        raise _input_error(exc if isinstance(exc, HillError) else ValueError("system declares no rule")) from None

    if list_matches:
        infos = []
        for i, m in enumerate(matches):
            violations = []
            for condition, witnesses in (
                ("identification", identification_witnesses(m)),
                ("dangling", dangling_witnesses(m)),
            ):
                if witnesses:
                    violations.append(GluingViolation(condition, witnesses).message)
            infos.append(
                MatchInfo(
                    index=i,
                    nodes=dict(m.morphism.node_map),
                    edges=dict(m.morphism.edge_map),
                    gluing="; ".join(violations) or "ok",
                )
            )
        if _state.structured:
            typer.echo("[" + ",\n".join(info.model_dump_json(indent=2) for info in infos) + "]")
        else:
            for info in infos:
                shown = ", ".join(f"{k}->{v}" for k, v in info.nodes.items())
                typer.echo(f"{info.index}: {shown} [{info.gluing}]")
        return

    if match >= len(matches):
        raise _input_error(ValueError(f"rule {chosen.name} has {len(matches)} matches, no index {match}"))
    try:
        step = apply_rule(chosen, matches[match])
    except GluingViolation as exc:
        typer.echo(exc.message, err=True)
        raise typer.Exit(1) from None
    try:
        certificate = emit_step_derivation(step)
    except HillError as exc:
        raise _input_error(exc) from None
    report = check_tree(certificate)
    hg = format_hg(step.result)
    _write(out, hg)
    _write(_sibling(out, ".prf"), format_prf(certificate))
    if out is not None or _state.structured:
        _show(
            ApplySummary(rule=chosen.name, match=match, result=hg, certificate_ok=report.ok),
            f"rule {chosen.name} at match {match}: certificate {'ok' if report.ok else 'REJECTED'}",
        )
    if not report.ok:
        raise typer.Exit(1)


@app.command()
def search(
    system: Path = typer.Argument(..., help="Graph transformation system (.gts)"),
    target: Path = typer.Option(..., "--target", help="Target graph (.hg)"),
    depth: Optional[int] = typer.Option(None, "--depth", min=0, help="Maximum number of steps"),
    proof: Optional[Path] = typer.Option(None, "--proof", help="Write a reachability proof of the trace here"),
    unrestricted: bool = typer.Option(False, "--unrestricted", help="Rules usable any number of times in the proof"),
) -> None:
    """Breadth-first reachability up to --depth steps."""
    doc = _load_gts(system)
    goal = _load_graph(target)
    bound = _depth(depth)
    try:
        trace = reachable(doc.gts(), goal, bound)
    except HillError as exc:
        raise _input_error(exc) from None
    summary = SearchSummary(target=goal.name, depth=bound, found=trace is not None)
    if trace is None:
        _show(summary, f"{goal.name} not reached within {bound} steps")
        raise typer.Exit(1)
    summary.trace = [(entry.rule, entry.match_index) for entry in trace]
    if proof is not None and trace:
        try:
            tree = emit_reachability([entry.step for entry in trace], unrestricted)
        except HillError as exc:
            raise _input_error(exc) from None
        summary.proof_ok = check_tree(tree).ok
        _write(proof, format_prf(tree))
    lines = [f"{i}. rule {r} at match {m}" for i, (r, m) in enumerate(summary.trace, start=1)]
    _show(summary, "\n".join(lines) if lines else "target is the start graph")


@app.command()
def encode(
    source: Path = typer.Argument(..., help="Graph file (.hg)"),
    name: Optional[str] = typer.Option(None, "--name", help="Graph to encode (default: the first)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the .hill here and the .prf next to it"),
) -> None:
    """Graph formula and its introduction derivation."""
    g = _load_graph(source, name)
    encoding = encode_graph(g)
    label = g.name or "G"
    hill = f"formula gamma_{label} = {format_formula(encoding.goal)}\nsequent {label} : {format_sequent(encoding.sequent)}\n"
    _write(out, hill)
    _write(_sibling(out, ".prf"), format_prf(encoding.derivation))


@app.command()
def decode(
    source: Path = typer.Argument(..., help="Formula file (.hill)"),
    name: Optional[str] = typer.Option(None, "--name", help="Formula or sequent declaration to decode"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the .hg here"),
) -> None:
    """Graph of a normal graph formula (a sequent's goal if a sequent is named)."""
    try:
        doc = parse_hill(_read(source))
        if name is None:
            formula = next(iter(doc.formulas.values()), None)
            if formula is None:
                formula = doc.sequent().goal
        elif name in doc.formulas:
            formula = doc.formulas[name]
        else:
            formula = doc.sequent(name).goal
        g = decode_formula(formula, name=name or "G")
    except HillError as exc:
        raise _input_error(exc) from None
    except KeyError as exc:
        raise _input_error(ValueError(exc.args[0] if exc.args else "no such declaration")) from None
    _write(out, format_hg(g))


@app.command()
def verify(
    system: Path = typer.Argument(..., help="Graph transformation system (.gts)"),
    samples: Optional[int] = typer.Option(None, "--samples", min=0, help="Random instances"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    depth: int = typer.Option(0, "--depth", min=0, help="Proof search bound when emission fails (0: none)"),
) -> None:
    """Rewriting and certified steps agree on the system and on random instances."""
    doc = _load_gts(system)
    settings = _state.settings
    batch = verify_system(
        doc.gts(),
        settings.samples if samples is None else samples,
        settings.seed if seed is None else seed,
        depth,
        settings.max_nodes,
        settings.max_edges,
    )
    lines = [f"{len(batch.instances)} instances, {batch.failures} failing"]
    for i, report in enumerate(batch.instances):
        for problem in report.mismatches + report.rejected_certificates:
            lines.append(f"instance {i} ({report.rule} on {report.host}): {problem}")
    _show(batch, "\n".join(lines))
    if not batch.ok:
        raise typer.Exit(1)


@app.command()
def iso(
    first: Path = typer.Argument(..., help="Graph file (.hg)"),
    second: Path = typer.Argument(..., help="Graph file (.hg)"),
) -> None:
    """An isomorphism between the first graphs of two files, or 'not isomorphic'."""
    g1, g2 = _load_graph(first), _load_graph(second)
    found = find_isomorphisms(g1, g2, limit=1)
    if not found:
        _show(IsoSummary(isomorphic=False), "not isomorphic")
        return
    m = found[0]
    summary = IsoSummary(isomorphic=True, nodes=dict(m.node_map), edges=dict(m.edge_map))
    lines = [f"{k} -> {v}" for k, v in {**summary.nodes, **summary.edges}.items()]
    _show(summary, "\n".join(lines))


@app.command()
def init(
    directory: Path = typer.Argument(Path("."), help="Target directory"),
    force: bool = typer.Option(False, "--force", "-f", help="Overwrite existing files"),
) -> None:
    """Write the worked example: example.gts, G.hg, H.hg."""
    directory.mkdir(parents=True, exist_ok=True)
    skipped = []
    for filename, content in T.FILES:
        path = directory / filename
        if path.exists() and not force:
            skipped.append(filename)
            typer.echo(f"{filename} already exists, skipped")
        else:
            path.write_text(content, encoding="utf-8")

    hint = f"Try: dpohill apply {directory / 'example.gts'} --list"
    if skipped:
        typer.echo(f"Use --force to overwrite existing files. {hint}")
    else:
        typer.echo(f"Created: {directory}/ (example.gts, G.hg, H.hg). {hint}")


def main() -> None:
    """Entry point for the dpohill console command."""
    app()


if __name__ == "__main__":
    main()
