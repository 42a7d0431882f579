"""
Spec Loader
Reads algebra/seed specifications, explicit N lists and explicit exact
structures from YAML files, keeping source lines for diagnostics.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..core.algebra import Algebra, validate_algebra
from ..core.exact_core import Conflation, ExactStructure, StructureKind, conflation_between
from ..core.gf_linalg import is_prime
from ..core.modules import Module
from ..core.universe import Universe
from ..errors import AlgebraSpecError, ContractViolation

logger = logging.getLogger(__name__)

ObjectRef = str | list[int]


class SeedSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str
    dim: int = Field(ge=1)
    action: list[list[list[int]]]


class AlgebraSpec(BaseModel):
    """Structure constants (i, j, k, coeff) mean b_i * b_j gains coeff * b_k"""

    model_config = ConfigDict(extra="forbid")

    name: str = "A"
    p: int = 2
    dim: int = Field(ge=1)
    labels: list[str] | None = None
    unit: list[int] | None = None
    commutative: bool = False
    structure: list[list[int]] = Field(default_factory=list)
    seeds: list[SeedSpec] = Field(min_length=1)
    complete: bool = False

    @field_validator("p")
    @classmethod
    def _prime(cls, value: int) -> int:
        if not is_prime(value):
            raise ValueError(f"p = {value} is not prime")
        return value


class ObjectListSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    members: list[ObjectRef]


class ConflationSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x: ObjectRef
    y: ObjectRef
    z: ObjectRef
    f: list[list[int]]
    g: list[list[int]]


class StructureSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    conflations: list[ConflationSpec]


@dataclass
class LoadedSpec:
    algebra: Algebra
    seeds: list[Module]
    complete: bool
    source: str


def _line_map(node, path: tuple = ()) -> dict[tuple, int]:
    lines = {path: node.start_mark.line + 1}
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            lines.update(_line_map(value, (*path, key.value)))
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            lines.update(_line_map(item, (*path, i)))
    return lines


def _line_for(lines: dict[tuple, int], loc: tuple) -> int | None:
    # pydantic locations may carry union tags; fall back to the longest known prefix
    for end in range(len(loc), -1, -1):
        if loc[:end] in lines:
            return lines[loc[:end]]
    return None


def load_yaml(path: str | Path) -> tuple[dict, dict[tuple, int]]:
    """Load a YAML mapping and the line of every node

    Raises:
        FileNotFoundError: the file does not exist
        AlgebraSpecError: YAML syntax error (with its line) or a non-mapping document
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Spec file not found: {path}")
    text = path.read_text(encoding="utf-8")
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(e, "problem", None) or str(e)
        raise AlgebraSpecError([(f"YAML syntax error in {path.name}: {problem}", line)]) from e
    if node is None or not isinstance(data, dict):
        raise AlgebraSpecError([(f"{path.name} must contain a mapping", 1)])
    return data, _line_map(node)


def _parse(model: type[BaseModel], path: str | Path):
    data, lines = load_yaml(path)
    try:
        return model.model_validate(data), lines
    except ValidationError as e:
        violations = []
        for error in e.errors():
            where = ".".join(str(part) for part in error["loc"])
            violations.append((f"{where}: {error['msg']}", _line_for(lines, error["loc"])))
        raise AlgebraSpecError(violations) from e


def _matrix(rows: list[list[int]], shape: tuple[int, int]) -> np.ndarray:
    if not rows or all(len(r) == 0 for r in rows):
        if shape[0] * shape[1]:
            raise ValueError(f"expected a {shape[0]}x{shape[1]} matrix")
        return np.zeros(shape, dtype=np.int64)
    return np.array(rows, dtype=np.int64).reshape(shape)


def build_seeds(algebra: Algebra, spec: AlgebraSpec, lines: dict[tuple, int]) -> list[Module]:
    seeds, problems = [], []
    for n, seed in enumerate(spec.seeds):
        line = _line_for(lines, ("seeds", n))
        if len(seed.action) != algebra.dim:
            problems.append(
                (f"seed {seed.label}: needs {algebra.dim} action matrices, got {len(seed.action)}", line)
            )
            continue
        try:
            action = tuple(_matrix(a, (seed.dim, seed.dim)) for a in seed.action)
            module = Module(algebra, seed.dim, action, seed.label)
        except (ContractViolation, ValueError) as e:
            problems.append((f"seed {seed.label}: {e}", line))
            continue
        problems.extend((f"seed {seed.label}: {message}", line) for message in module.violations())
        seeds.append(module)
    if problems:
        raise AlgebraSpecError(problems)
    return seeds


def load_algebra_spec(path: str | Path) -> LoadedSpec:
    """Algebra and seed modules from a YAML spec file"""
    spec, lines = _parse(AlgebraSpec, path)
    raw = spec.model_dump(exclude={"seeds", "complete", "structure"}, exclude_none=True)
    raw["structure"] = [
        {"entry": entry, "line": _line_for(lines, ("structure", n))}
        for n, entry in enumerate(spec.structure)
    ]
    algebra = validate_algebra(raw)
    seeds = build_seeds(algebra, spec, lines)
    logger.info(f"Loaded {algebra.name} with {len(seeds)} seeds from {path}")
    return LoadedSpec(algebra, seeds, spec.complete, str(path))


def resolve_object(universe: Universe, ref: ObjectRef) -> int:
    """Universe id from a label such as 'M1^2+M2' or a multiplicity vector"""
    if isinstance(ref, str):
        return universe.id_by_label(ref)
    oid = universe.id_of(tuple(ref))
    if oid is None:
        raise AlgebraSpecError([(f"multiplicity vector {ref} is outside the universe", None)])
    return oid


def load_object_list(path: str | Path, universe: Universe) -> list[int]:
    """Object ids listed under 'members'"""
    spec, lines = _parse(ObjectListSpec, path)
    ids, problems = [], []
    for n, ref in enumerate(spec.members):
        try:
            ids.append(resolve_object(universe, ref))
        except AlgebraSpecError as e:
            problems.extend((message, _line_for(lines, ("members", n))) for message, _ in e.violations)
    if problems:
        raise AlgebraSpecError(problems)
    return sorted(set(ids))


def load_structure(
    path: str | Path, universe: Universe, cap: int = 1 << 16, cover_limit: int = 8
) -> ExactStructure:
    """Explicit exact structure from listed conflations (closed up to isomorphism)"""
    spec, lines = _parse(StructureSpec, path)
    listed: list[Conflation] = []
    problems = []
    for n, entry in enumerate(spec.conflations):
        line = _line_for(lines, ("conflations", n))
        try:
            x, y, z = (resolve_object(universe, ref) for ref in (entry.x, entry.y, entry.z))
            dims = [universe.obj(o).module.dim for o in (x, y, z)]
            f = _matrix(entry.f, (dims[1], dims[0]))
            g = _matrix(entry.g, (dims[2], dims[1]))
            listed.append(conflation_between(universe, x, y, z, f, g))
        except AlgebraSpecError as e:
            problems.extend((message, line) for message, _ in e.violations)
        except (ContractViolation, ValueError) as e:
            problems.append((f"conflation {n}: {e}", line))
    if problems:
        raise AlgebraSpecError(problems)
    logger.info(f"Loaded {len(listed)} listed conflations from {path}")
    return ExactStructure(
        universe,
        StructureKind.EXPLICIT,
        listed=listed,
        cap=cap,
        cover_limit=cover_limit,
        label=f"file:{Path(path).name}",
    )
