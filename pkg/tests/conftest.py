"""Shared corpus fixtures for the test suite.

The fixture corpus (every catalog entry except the deliberately inadmissible
ring3) is built once per session, together with its tile collections, and
reused by both the unit tests and the acceptance gate.
"""

import pytest

from randwalls import build_fixture, build_tile_collection, fixture_names

INADMISSIBLE = {"ring3"}
ADMISSIBLE_FIXTURES = [n for n in fixture_names() if n not in INADMISSIBLE]


@pytest.fixture(scope="session")
def corpus():
    """name -> (patch, tile_collection) for every admissible catalog fixture."""
    out = {}
    for name in ADMISSIBLE_FIXTURES:
        patch = build_fixture(name)
        out[name] = (patch, build_tile_collection(patch))
    return out


@pytest.fixture(scope="session")
def ring3_patch():
    return build_fixture("ring3")
