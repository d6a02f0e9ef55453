"""Shared fixtures: the canonical 8-player two-hub instance.

Players 0-3 are type 1, players 4-7 type 0; players 3 and 4 are degree-3
hubs and the rest hang off them, with one hub-adjacent link (2,5) that the
uncontrolled dynamics leave active.  c0 = c1 = 2/5.  All ids are 0-based.
"""

from fractions import Fraction

import pytest

from anticoord.game_core import ActionProfile, PayoffConstants, TypedBipartiteGraph

HUBS8_TYPES = (1, 1, 1, 1, 0, 0, 0, 0)
HUBS8_EDGES = ((0, 4), (1, 4), (2, 4), (2, 5), (3, 5), (3, 6), (3, 7))
HUBS8_CONVERGED = (1, 1, 1, 0, 0, 1, 1, 1)


@pytest.fixture
def hubs8() -> TypedBipartiteGraph:
    return TypedBipartiteGraph(8, HUBS8_TYPES, HUBS8_EDGES)


@pytest.fixture
def hubs8_constants() -> PayoffConstants:
    return PayoffConstants(Fraction(2, 5), Fraction(2, 5))


def profile(*vals) -> ActionProfile:
    """Shorthand: 0, 1, or 'e' per player."""
    return ActionProfile.from_jsonable(list(vals))
