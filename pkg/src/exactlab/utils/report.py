"""
Report Emission
Pydantic report models written as JSON, a Markdown summary and DOT lattices.
Reports carry no timestamps so identical runs give identical bytes.
"""

import json
import logging
from pathlib import Path

from pydantic import BaseModel, Field

from ..core.results import INCONCLUSIVE, CheckResult, combine_status
from ..core.subcat_lattice import Lattice, Side, Subcategory, TheoremOutcome

logger = logging.getLogger(__name__)


class RunHeader(BaseModel):
    tool: str = "exactlab"
    version: str
    command: str
    config: dict
    algebra: str
    seeds: list[str]
    universe_size: int
    truncation: str


class Verdict(BaseModel):
    name: str
    status: str
    checked: int = 0
    counterexample: dict | None = None
    notes: list[str] = Field(default_factory=list)

    @classmethod
    def from_check(cls, check: CheckResult) -> "Verdict":
        return cls(
            name=check.name,
            status=check.status,
            checked=check.checked,
            counterexample=check.counterexample,
            notes=list(check.notes),
        )


class SubcategoryEntry(BaseModel):
    index: int
    members: list[str]
    points: list[str]
    complete: bool
    thick: bool
    contains_n: bool


class LatticeSection(BaseModel):
    side: str
    kind: str
    elements: list[SubcategoryEntry]
    edges: list[list[int]]
    truncated: bool = False
    notes: list[str] = Field(default_factory=list)


class CorrespondenceSection(BaseModel):
    kind: str
    refused: str | None = None
    hypotheses: list[Verdict] = Field(default_factory=list)
    ambient: LatticeSection | None = None
    quotient: LatticeSection | None = None
    pairs: list[list[int]] = Field(default_factory=list)
    verdicts: list[Verdict] = Field(default_factory=list)


class AxiomReport(BaseModel):
    header: RunHeader
    structure: str
    status: str
    verdicts: list[Verdict]
    inconclusive_cells: list[list[str]] = Field(default_factory=list)


class FrobeniusReport(BaseModel):
    header: RunHeader
    structure: str
    status: str
    frobenius: bool
    projectives: list[str]
    injectives: list[str]
    cover_witnesses: dict[str, str]
    envelope_witnesses: dict[str, str]
    beyond_bound: list[str] = Field(default_factory=list)
    stable_classes: list[list[str]] = Field(default_factory=list)
    verdicts: list[Verdict] = Field(default_factory=list)


class LatticeReport(BaseModel):
    header: RunHeader
    structure: str
    n: list[str]
    status: str
    lattice: LatticeSection
    verdicts: list[Verdict] = Field(default_factory=list)


class TheoremReport(BaseModel):
    header: RunHeader
    structure: str
    n: list[str]
    status: str
    correspondence: CorrespondenceSection
    verdicts: list[Verdict] = Field(default_factory=list)
    sn_axioms: dict = Field(default_factory=dict)


class ModuleVerdict(BaseModel):
    module: str
    biduality_iso: bool
    ext_m: dict[str, int]
    ext_dual: dict[str, int]
    period: list[int] | None = None
    certified: bool
    totally_reflexive: bool


class GorensteinReport(BaseModel):
    header: RunHeader
    status: str
    modules: list[ModuleVerdict]
    members: list[str]
    excluded: list[str] = Field(default_factory=list)
    stable_classes: list[list[str]] = Field(default_factory=list)
    verdicts: list[Verdict] = Field(default_factory=list)
    correspondence: CorrespondenceSection | None = None


# ------------------------------------------------------------- conversion


def _point_label(universe, side: Side, point) -> str:
    if side == Side.QUOTIENT:
        return universe.label_for(point)
    return universe.label(point)


def subcategory_entry(index: int, sub: Subcategory, universe) -> SubcategoryEntry:
    return SubcategoryEntry(
        index=index,
        members=sub.labels(universe),
        points=sorted(_point_label(universe, sub.side, p) for p in sub.points),
        complete=sub.complete,
        thick=sub.thick,
        contains_n=sub.contains_n,
    )


def lattice_section(lattice: Lattice, universe) -> LatticeSection:
    return LatticeSection(
        side=lattice.side.value,
        kind=lattice.kind.value,
        elements=[subcategory_entry(i, e, universe) for i, e in enumerate(lattice.elements)],
        edges=[list(e) for e in lattice.edges],
        truncated=lattice.truncated,
        notes=list(lattice.notes),
    )


def correspondence_section(outcome: TheoremOutcome, universe) -> CorrespondenceSection:
    return CorrespondenceSection(
        kind=outcome.kind.value,
        refused=outcome.refused,
        hypotheses=[Verdict.from_check(h) for h in outcome.hypotheses],
        ambient=lattice_section(outcome.ambient, universe) if outcome.ambient else None,
        quotient=lattice_section(outcome.quotient, universe) if outcome.quotient else None,
        pairs=[list(p) for p in outcome.pairs],
        verdicts=[Verdict.from_check(c) for c in outcome.checks],
    )


def correspondence_status(section: CorrespondenceSection) -> str:
    if section.refused is not None:
        failed = [h.status for h in section.hypotheses if h.name == section.refused]
        return failed[0] if failed else INCONCLUSIVE
    return combine_status(v.status for v in section.verdicts)


def verdicts_status(verdicts: list[Verdict]) -> str:
    return combine_status(v.status for v in verdicts)


# ---------------------------------------------------------------- emitters


def to_json(report: BaseModel) -> str:
    return report.model_dump_json(indent=2) + "\n"


def _cell(value) -> str:
    if isinstance(value, list | dict):
        value = json.dumps(value, sort_keys=True)
    return str(value).replace("|", "\\|")


def to_markdown(report: BaseModel) -> str:
    header: RunHeader = report.header
    lines = [
        f"# exactlab {header.command}",
        "",
        f"- algebra: {header.algebra}",
        f"- seeds: {', '.join(header.seeds)}",
        f"- universe: {header.universe_size} objects",
        f"- truncation: {header.truncation}",
        f"- status: **{report.status}**",
        "",
    ]
    verdicts = list(report.verdicts)
    correspondence = getattr(report, "correspondence", None)
    if correspondence is not None:
        verdicts = correspondence.hypotheses + correspondence.verdicts + verdicts
    if verdicts:
        lines += ["| check | status | checked | notes |", "|---|---|---|---|"]
        for v in verdicts:
            lines.append(f"| {_cell(v.name)} | {v.status} | {v.checked} | {_cell('; '.join(v.notes))} |")
        lines.append("")
    if correspondence is not None and correspondence.ambient and correspondence.quotient:
        lines += [
            f"## {correspondence.kind} correspondence",
            "",
            "| subcategory of E containing N | subcategory of E/N |",
            "|---|---|",
        ]
        for i, j in correspondence.pairs:
            a = correspondence.ambient.elements[i].members
            q = correspondence.quotient.elements[j].points
            lines.append(f"| {_cell(a)} | {_cell(q)} |")
        lines.append("")
    lattice = getattr(report, "lattice", None)
    if lattice is not None:
        lines += [f"## {lattice.kind} subcategories ({lattice.side})", "", "| # | objects |", "|---|---|"]
        for e in lattice.elements:
            lines.append(f"| {e.index} | {_cell(e.points)} |")
        lines.append("")
    return "\n".join(lines)


def to_dot(section: LatticeSection, name: str) -> str:
    """Hasse diagram, smaller subcategories at the bottom"""
    lines = [f'digraph "{name}" {{', "  rankdir=BT;", "  node [shape=box];"]
    for e in section.elements:
        label = "{" + ", ".join(e.points) + "}"
        lines.append(f'  n{e.index} [label="{label}"];')
    for a, b in section.edges:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_sections(report: BaseModel) -> dict[str, LatticeSection]:
    lattice = getattr(report, "lattice", None)
    if lattice is not None:
        return {f"{lattice.kind}_{lattice.side}": lattice}
    correspondence = getattr(report, "correspondence", None)
    sections = {}
    if correspondence is not None:
        for section in (correspondence.ambient, correspondence.quotient):
            if section is not None:
                sections[f"{section.kind}_{section.side}"] = section
    return sections


def write_report(report: BaseModel, out_dir: str | Path, name: str, emit: list[str]) -> list[Path]:
    """Write the requested formats; DOT files are written per lattice"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in emit:
        path = out_dir / f"{name}.json"
        path.write_text(to_json(report), encoding="utf-8")
        written.append(path)
    if "md" in emit:
        path = out_dir / f"{name}.md"
        path.write_text(to_markdown(report), encoding="utf-8")
        written.append(path)
    if "dot" in emit:
        sections = lattice_sections(report)
        if not sections:
            logger.warning(f"No lattice in the {name} report; skipping DOT output")
        for suffix, section in sections.items():
            path = out_dir / f"{name}_{suffix}.dot"
            path.write_text(to_dot(section, suffix), encoding="utf-8")
            written.append(path)
    for path in written:
        logger.info(f"Wrote {path}")
    return written
