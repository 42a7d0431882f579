"""
Preset algebras with their indecomposable seed modules
"""

import logging
import re

import numpy as np

from ..errors import AlgebraSpecError, ContractViolation
from .algebra import Algebra
from .gf_linalg import PrimeField
from .modules import Module, regular_module

logger = logging.getLogger(__name__)

PRESET_PATTERN = re.compile(r"^(?P<name>[a-z_]+):(?P<params>\d+(?:,\d+)*)$")


def preset_truncated_poly(p: int, n: int) -> tuple[Algebra, list[Module]]:
    """GF(p)[x]/(x^n) with the Jordan blocks M_1..M_n

    Returns:
        (algebra, seeds) where the basis is 1, x, .., x^{n-1} and M_i has
        basis e_0..e_{i-1} with x e_j = e_{j+1}
    """
    if n < 1:
        raise ContractViolation("truncated polynomial ring needs n >= 1")
    F = PrimeField(p)
    structure = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n - i):
            structure[i, j, i + j] = 1
    labels = tuple("1" if i == 0 else ("x" if i == 1 else f"x^{i}") for i in range(n))
    algebra = Algebra(
        field=F,
        dim=n,
        labels=labels,
        structure=structure,
        unit=F.vec([1] + [0] * (n - 1)),
        commutative=True,
        name=f"GF({p})[x]/(x^{n})",
    )

    seeds = []
    for size in range(1, n + 1):
        shift = np.eye(size, k=-1, dtype=np.int64)
        powers = [np.eye(size, dtype=np.int64)]
        for _ in range(1, n):
            powers.append((powers[-1] @ shift) % p)
        seeds.append(Module(algebra, size, tuple(powers), f"M{size}"))
    return algebra, seeds


def preset_radical_square_zero(p: int, m: int) -> tuple[Algebra, list[Module]]:
    """GF(p)[x_1..x_m]/(x_1..x_m)^2 with the regular module R and the simple k"""
    if m < 1:
        raise ContractViolation("radical square zero preset needs m >= 1")
    F = PrimeField(p)
    d = m + 1
    structure = np.zeros((d, d, d), dtype=np.int64)
    for j in range(d):
        structure[0, j, j] = 1
        structure[j, 0, j] = 1
    variables = ["x", "y", "z"] if m <= 3 else [f"x{i}" for i in range(1, m + 1)]
    algebra = Algebra(
        field=F,
        dim=d,
        labels=("1", *variables[:m]),
        structure=structure,
        unit=F.vec([1] + [0] * m),
        commutative=True,
        name=f"GF({p})[{','.join(variables[:m])}]/({','.join(variables[:m])})^2",
    )
    simple_action = [np.eye(1, dtype=np.int64)] + [np.zeros((1, 1), dtype=np.int64)] * m
    seeds = [regular_module(algebra, "R"), Module(algebra, 1, tuple(simple_action), "k")]
    return algebra, seeds


PRESETS = {
    "xquot": preset_truncated_poly,
    "rsz": preset_radical_square_zero,
}

# seeds of these presets are every indecomposable up to isomorphism
COMPLETE_PRESETS = {"xquot"}


def parse_preset(text: str) -> tuple[str, tuple[int, ...]]:
    match = PRESET_PATTERN.match(text.strip())
    if not match or match.group("name") not in PRESETS:
        raise AlgebraSpecError(
            [(f"unknown preset '{text}' (expected one of {sorted(PRESETS)} as name:p,n)", None)]
        )
    params = tuple(int(v) for v in match.group("params").split(","))
    if len(params) != 2:
        raise AlgebraSpecError([(f"preset '{text}' takes exactly two parameters", None)])
    return match.group("name"), params


def load_preset(text: str) -> tuple[Algebra, list[Module], bool]:
    """Build a preset from its 'name:p,n' form

    Returns:
        (algebra, seeds, seeds_complete)
    """
    name, params = parse_preset(text)
    try:
        algebra, seeds = PRESETS[name](*params)
    except ContractViolation as e:
        raise AlgebraSpecError([(str(e), None)]) from e
    logger.info(f"Loaded preset {algebra.name} with {len(seeds)} seed modules")
    return algebra, seeds, name in COMPLETE_PRESETS
