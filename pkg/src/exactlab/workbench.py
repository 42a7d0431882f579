"""
Workbench
Builds the universe, exact structure and N a run configuration names, and
drives one verification command into a report model.
"""

import logging
from functools import cached_property

from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .core.exact_core import (
    ExactStructure,
    StructureKind,
    induced_structure,
    verify_exact_axioms,
)
from .core.gorenstein import verify_gr_theorems
from .core.presets import load_preset
from .core.quotient_core import QuotientContext
from .core.results import CheckResult, combine_status
from .core.subcat_lattice import Kind, Side, SubcategoryEngine
from .core.universe import Universe, build_universe
from .errors import ContractViolation
from .utils.report import (
    AxiomReport,
    FrobeniusReport,
    GorensteinReport,
    LatticeReport,
    ModuleVerdict,
    RunHeader,
    TheoremReport,
    Verdict,
    correspondence_section,
    correspondence_status,
    lattice_section,
    verdicts_status,
)
from .utils.spec_loader import load_algebra_spec, load_object_list, load_structure

logger = logging.getLogger(__name__)

SIDE_NAMES = {"ambient": Side.AMBIENT, "stable": Side.QUOTIENT}


class RunConfig(BaseModel):
    """Effective settings of one run, serialized into every report header"""

    model_config = ConfigDict(extra="forbid")

    command: str
    preset: str | None = None
    spec: str | None = None
    mult_bound: int = 2
    structure: str = "abelian"
    n_selector: str = "inj"
    kind: str = "thick"
    side: str = "ambient"
    emit: list[str] = Field(default_factory=lambda: ["json"])
    enum_cap: int = 65536
    axiom_cap: int = 4096
    lattice_limit: int = 20000
    cover_limit: int = 8
    ext_bound: int = 6
    out: str = "reports"
    deterministic: bool = True


class Workbench:
    """One configured run"""

    def __init__(self, config: RunConfig):
        self.config = config
        if config.spec:
            loaded = load_algebra_spec(config.spec)
            self.algebra, self.seeds, self.complete = loaded.algebra, loaded.seeds, loaded.complete
        else:
            self.algebra, self.seeds, self.complete = load_preset(config.preset)

    @cached_property
    def universe(self) -> Universe:
        return build_universe(self.seeds, self.config.mult_bound, self.config.enum_cap, self.complete)

    # ------------------------------------------------------------ selectors

    def _abelian(self) -> ExactStructure:
        return ExactStructure(
            self.universe,
            StructureKind.ABELIAN,
            cap=self.config.enum_cap,
            cover_limit=self.config.cover_limit,
        )

    @cached_property
    def structure(self) -> ExactStructure:
        """split, abelian, induced:<label,label,..> (from abelian) or file:<path>"""
        text = self.config.structure
        U = self.universe
        if text in ("split", "abelian"):
            return ExactStructure(
                U, StructureKind(text), cap=self.config.enum_cap, cover_limit=self.config.cover_limit
            )
        if text.startswith("induced:"):
            labels = [t for t in text.removeprefix("induced:").split(",") if t.strip()]
            members = {U.zero_id} | {U.id_by_label(t) for t in labels}
            return induced_structure(self._abelian(), members)
        if text.startswith("file:"):
            return load_structure(
                text.removeprefix("file:"), U, self.config.enum_cap, self.config.cover_limit
            )
        raise ContractViolation(f"unknown structure '{text}'")

    @cached_property
    def n_members(self) -> list[int]:
        text = self.config.n_selector
        structure = self.structure
        if text == "inj":
            return list(structure.injective_ids)
        if text == "proj":
            return list(structure.projective_ids)
        if text == "zero":
            return [self.universe.zero_id]
        if text.startswith("file:"):
            return sorted({self.universe.zero_id, *load_object_list(text.removeprefix("file:"), self.universe)})
        raise ContractViolation(f"unknown N selector '{text}'")

    @cached_property
    def context(self) -> QuotientContext:
        return QuotientContext(self.structure, self.n_members, cap=self.config.enum_cap, label=self.config.n_selector)

    @cached_property
    def engine(self) -> SubcategoryEngine:
        return SubcategoryEngine(self.context, limit=self.config.lattice_limit)

    def n_labels(self) -> list[str]:
        return [self.universe.label(m) for m in self.n_members]

    def header(self) -> RunHeader:
        U = self.universe
        listed = "are" if self.complete else "may not be"
        return RunHeader(
            version=__version__,
            command=self.config.command,
            config=self.config.model_dump(),
            algebra=self.algebra.name,
            seeds=[s.label for s in self.seeds],
            universe_size=len(U),
            truncation=(
                f"objects are direct sums of {len(self.seeds)} seeds with multiplicity at most "
                f"{U.mult_bound}; the seeds {listed} every indecomposable"
            ),
        )

    # ------------------------------------------------------------- commands

    def run_axioms(self) -> AxiomReport:
        structure = self.structure
        checks = verify_exact_axioms(structure, self.config.axiom_cap)
        verdicts = [Verdict.from_check(c) for c in checks]
        U = self.universe
        return AxiomReport(
            header=self.header(),
            structure=structure.label,
            status=verdicts_status(verdicts),
            verdicts=verdicts,
            inconclusive_cells=[[U.label(x), U.label(z)] for x, z in structure.inconclusive_cells()],
        )

    def run_frobenius(self) -> FrobeniusReport:
        """Frobenius detection; when N is the projective-injectives, the stable category checks too"""
        U = self.universe
        structure = self.structure
        outcome = structure.is_frobenius()
        verdict = CheckResult("Frobenius")
        verdict.checked = 1
        if not outcome.holds:
            verdict.fail(
                {
                    "projectives": [U.label(p) for p in outcome.projectives],
                    "injectives": [U.label(i) for i in outcome.injectives],
                    "missing covers": [U.label(o) for o in outcome.enough_projectives.failures],
                    "missing envelopes": [U.label(o) for o in outcome.enough_injectives.failures],
                },
                "not a Frobenius structure",
            )
        checks = [verdict]
        stable_classes = []
        ctx = self.context
        if outcome.holds and ctx.frobenius:
            checks.append(ctx.check_ideal())
            checks.append(ctx.check_biproducts())
            checks.extend(ctx.check_suspension())
            checks.extend(ctx.verify_sn_iff_triangle(axiom_cap=self.config.axiom_cap))
            checks.append(self._zero_lemma_check(ctx))
            stable_classes = [[U.label(o) for o in group] for group in ctx.stable_classes().values()]
        verdicts = [Verdict.from_check(c) for c in checks]
        beyond = set(outcome.enough_projectives.beyond_bound) | set(outcome.enough_injectives.beyond_bound)
        return FrobeniusReport(
            header=self.header(),
            structure=structure.label,
            status=verdicts_status(verdicts),
            frobenius=outcome.holds,
            projectives=[U.label(p) for p in outcome.projectives],
            injectives=[U.label(i) for i in outcome.injectives],
            cover_witnesses={U.label(o): U.label_for(m) for o, m in outcome.enough_projectives.witnesses.items()},
            envelope_witnesses={U.label(o): U.label_for(m) for o, m in outcome.enough_injectives.witnesses.items()},
            beyond_bound=[U.label(o) for o in sorted(beyond)],
            stable_classes=stable_classes,
            verdicts=verdicts,
        )

    def _zero_lemma_check(self, ctx: QuotientContext) -> CheckResult:
        U = self.universe
        result = CheckResult("stable zero lemma")
        for oid in self.structure.scope():
            result.checked += 1
            lemma = ctx.stable_zero_lemma(oid)
            if not (lemma.lemma_holds and lemma.converse_holds):
                result.fail(
                    {"object": U.label(oid), "stably zero": lemma.is_zero, "summand of N": lemma.is_summand},
                    "stable vanishing disagrees with membership in add N",
                )
        return result

    def run_subcats(self) -> LatticeReport:
        side = SIDE_NAMES[self.config.side]
        kind = Kind(self.config.kind)
        engine = self.engine
        lattice = engine.enumerate_closed(kind, side)
        checks = [engine.check_closure_operator(kind, side)]
        if side == Side.AMBIENT:
            if kind == Kind.THICK:
                checks.extend(engine.check_supporting_props(lattice))
            else:
                thick = engine.enumerate_closed(Kind.THICK, Side.AMBIENT)
                checks.extend(engine.check_supporting_props(thick, lattice))
        for note in lattice.notes:
            for check in checks:
                check.flag(note)
        verdicts = [Verdict.from_check(c) for c in checks]
        return LatticeReport(
            header=self.header(),
            structure=self.structure.label,
            n=self.n_labels(),
            status=verdicts_status(verdicts),
            lattice=lattice_section(lattice, self.universe),
            verdicts=verdicts,
        )

    def run_correspondence(self) -> TheoremReport:
        kind = Kind(self.config.kind)
        engine = self.engine
        outcome = engine.verify_correspondence(kind)
        section = correspondence_section(outcome, self.universe)
        checks = []
        sn_axioms = {}
        if outcome.refused is None:
            if kind == Kind.THICK:
                checks = engine.check_supporting_props(outcome.ambient)
            else:
                thick = engine.enumerate_closed(Kind.THICK, Side.AMBIENT)
                checks = engine.check_supporting_props(thick, outcome.ambient)
            if kind == Kind.COMPLETE:
                sn_axioms = self.context.record_sn_axioms()
        verdicts = [Verdict.from_check(c) for c in checks]
        status = combine_status([correspondence_status(section), verdicts_status(verdicts)])
        return TheoremReport(
            header=self.header(),
            structure=self.structure.label,
            n=self.n_labels(),
            status=status,
            correspondence=section,
            verdicts=verdicts,
            sn_axioms=sn_axioms,
        )

    def run_gorenstein(self) -> GorensteinReport:
        U = self.universe
        outcome = verify_gr_theorems(
            U,
            self.config.ext_bound,
            cap=self.config.enum_cap,
            cover_limit=self.config.cover_limit,
            lattice_limit=self.config.lattice_limit,
        )
        modules = []
        for oid, verdict in outcome.verdicts.items():
            period = verdict.ext_m.period
            modules.append(
                ModuleVerdict(
                    module=U.label(oid),
                    biduality_iso=verdict.biduality_iso,
                    ext_m={str(d): n for d, n in sorted(verdict.ext_m.dims.items())},
                    ext_dual={str(d): n for d, n in sorted(verdict.ext_mstar.dims.items())},
                    period=list(period) if period is not None else None,
                    certified=verdict.certified,
                    totally_reflexive=verdict.holds,
                )
            )
        verdicts = [Verdict.from_check(c) for c in outcome.checks]
        section = None
        statuses = [verdicts_status(verdicts)]
        if outcome.correspondence is not None:
            section = correspondence_section(outcome.correspondence, U)
            statuses.append(correspondence_status(section))
        return GorensteinReport(
            header=self.header(),
            status=combine_status(statuses),
            modules=modules,
            members=[U.label(m) for m in outcome.members],
            excluded=list(outcome.excluded),
            stable_classes=[[U.label(o) for o in group] for group in outcome.stable_classes.values()],
            verdicts=verdicts,
            correspondence=section,
        )

    def run(self):
        commands = {
            "axioms": self.run_axioms,
            "frobenius": self.run_frobenius,
            "subcats": self.run_subcats,
            "correspondence": self.run_correspondence,
            "gorenstein": self.run_gorenstein,
        }
        if self.config.command not in commands:
            raise ContractViolation(f"unknown command '{self.config.command}'")
        logger.info(f"Running {self.config.command} on {self.algebra.name}")
        return commands[self.config.command]()
