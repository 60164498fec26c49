import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from isodrum.catalog import psl_triple
from isodrum.groups import PermGroup
from isodrum.permutations import parse_cycles
from isodrum.triples import Triple, compress


@pytest.fixture(scope="session")
def psl32():
    return psl_triple(3, 2)


@pytest.fixture(scope="session")
def psl32_small(psl32):
    """The flagship triple on its degree-7 coset action."""
    return compress(psl32)


@pytest.fixture(scope="session")
def a4_triple():
    A4 = PermGroup(4, [parse_cycles("(0 1 2)", 4), parse_cycles("(1 2 3)", 4)])
    C2 = PermGroup(4, [parse_cycles("(0 1)(2 3)", 4)])
    V4 = PermGroup(4, [parse_cycles("(0 1)(2 3)", 4), parse_cycles("(0 2)(1 3)", 4)])
    return Triple(A4, C2, V4, label="a4 ec-not-ac")


@pytest.fixture(scope="session")
def a5_triple():
    """EC-not-AC with FF: commuting double transpositions in the simple A5."""
    A5 = PermGroup(5, [parse_cycles("(0 1 2)", 5), parse_cycles("(0 1 2 3 4)", 5)])
    C2 = PermGroup(5, [parse_cycles("(0 1)(2 3)", 5)])
    V4 = PermGroup(5, [parse_cycles("(0 1)(2 3)", 5), parse_cycles("(0 2)(1 3)", 5)])
    return Triple(A5, C2, V4, label="a5 ec-not-ac")


@pytest.fixture(scope="session")
def a5_group():
    return PermGroup(5, [parse_cycles("(0 1 2)", 5), parse_cycles("(0 1 2 3 4)", 5)])
