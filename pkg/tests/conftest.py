"""Session-scoped corpora and caches shared across the suites.

Subgroup enumeration is the most expensive primitive, so its results are
cached per table object for the whole session; every suite draws from
the same corpus fixtures.
"""

from __future__ import annotations

import pytest

from commprob.families import FamilySpec, corpus, make
from commprob.groups import all_subgroups, normal_subgroups


@pytest.fixture(scope="session")
def corpus128():
    return corpus(128)


@pytest.fixture(scope="session")
def corpus64(corpus128):
    return [(t, s) for t, s in corpus128 if t.order <= 64]


@pytest.fixture(scope="session")
def corpus48(corpus128):
    return [(t, s) for t, s in corpus128 if t.order <= 48]


@pytest.fixture(scope="session")
def corpus16(corpus128):
    return [(t, s) for t, s in corpus128 if t.order <= 16]


@pytest.fixture(scope="session")
def named():
    """Frequently used named groups."""
    groups = {}
    for key, family, params in [
        ("s3", "symmetric", (3,)),
        ("s4", "symmetric", (4,)),
        ("a4", "alternating", (4,)),
        ("a5", "alternating", (5,)),
        ("d4", "dihedral", (4,)),
        ("d6", "dihedral", (6,)),
        ("d8", "dihedral", (8,)),
        ("q8", "dicyclic", (2,)),
        ("c12", "cyclic", (12,)),
        ("es27", "extraspecial", (3, 1)),
    ]:
        groups[key] = make(FamilySpec(family, params))[0]
    return groups


@pytest.fixture(scope="session")
def subgroups_of():
    cache = {}

    def get(table):
        if id(table) not in cache:
            cache[id(table)] = (table, all_subgroups(table))
        return cache[id(table)][1]

    return get


@pytest.fixture(scope="session")
def normals_of():
    cache = {}

    def get(table):
        if id(table) not in cache:
            cache[id(table)] = (table, normal_subgroups(table))
        return cache[id(table)][1]

    return get
