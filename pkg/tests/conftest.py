"""
Shared fixtures: presets, bounded universes, exact structures and quotients
"""

import textwrap

import pytest

from exactlab.core.exact_core import ExactStructure, StructureKind
from exactlab.core.presets import load_preset
from exactlab.core.quotient_core import QuotientContext
from exactlab.core.subcat_lattice import SubcategoryEngine
from exactlab.core.universe import build_universe

CAP = 1 << 16

# GF(2)[x]/(x^2) with the simple module k and the regular module R
X2_SPEC = textwrap.dedent(
    """\
    name: "GF(2)[x]/(x^2)"
    p: 2
    dim: 2
    labels: ["1", "x"]
    commutative: true
    structure:
      - [0, 0, 0, 1]
      - [0, 1, 1, 1]
      - [1, 0, 1, 1]
    seeds:
      - label: k
        dim: 1
        action:
          - [[1]]
          - [[0]]
      - label: R
        dim: 2
        action:
          - [[1, 0], [0, 1]]
          - [[0, 0], [1, 0]]
    complete: true
    """
)


def make_universe(preset: str, bound: int):
    _, seeds, complete = load_preset(preset)
    return build_universe(seeds, bound, CAP, complete)


@pytest.fixture(scope="session")
def x2_preset():
    return load_preset("xquot:2,2")


@pytest.fixture(scope="session")
def x2_universe():
    """M1 = k, M2 = R; ids follow (m1, m2) in lexicographic order"""
    return make_universe("xquot:2,2", 2)


@pytest.fixture(scope="session")
def x2_small():
    return make_universe("xquot:2,2", 1)


@pytest.fixture(scope="session")
def x3_universe():
    return make_universe("xquot:2,3", 1)


@pytest.fixture(scope="session")
def x3_wide_universe():
    return make_universe("xquot:2,3", 2)


@pytest.fixture(scope="session")
def x4_universe():
    return make_universe("xquot:2,4", 1)


@pytest.fixture(scope="session")
def rsz_universe():
    """Seeds R (dim 3) and k; ids 0, k, R, R+k"""
    return make_universe("rsz:2,2", 1)


@pytest.fixture(scope="session")
def x2_abelian(x2_universe):
    return ExactStructure(x2_universe, StructureKind.ABELIAN, cap=CAP)


@pytest.fixture(scope="session")
def x2_split(x2_universe):
    return ExactStructure(x2_universe, StructureKind.SPLIT, cap=CAP)


@pytest.fixture(scope="session")
def x3_abelian(x3_universe):
    return ExactStructure(x3_universe, StructureKind.ABELIAN, cap=CAP)


@pytest.fixture(scope="session")
def x2_quotient(x2_abelian):
    return QuotientContext(x2_abelian, x2_abelian.injective_ids, cap=CAP)


@pytest.fixture(scope="session")
def x3_quotient(x3_abelian):
    return QuotientContext(x3_abelian, x3_abelian.injective_ids, cap=CAP)


@pytest.fixture(scope="session")
def x2_engine(x2_quotient):
    return SubcategoryEngine(x2_quotient)


@pytest.fixture(scope="session")
def x3_engine(x3_quotient):
    return SubcategoryEngine(x3_quotient)


@pytest.fixture
def x2_spec_file(tmp_path):
    path = tmp_path / "x2.yaml"
    path.write_text(X2_SPEC, encoding="utf-8")
    return path


def quotient_by_injectives(universe):
    structure = ExactStructure(universe, StructureKind.ABELIAN, cap=CAP)
    return QuotientContext(structure, structure.injective_ids, cap=CAP)


@pytest.fixture(scope="session")
def x3_wide_engine(x3_wide_universe):
    return SubcategoryEngine(quotient_by_injectives(x3_wide_universe))


@pytest.fixture(scope="session")
def x4_engine(x4_universe):
    return SubcategoryEngine(quotient_by_injectives(x4_universe))
