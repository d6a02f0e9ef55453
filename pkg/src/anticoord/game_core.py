"""Typed bipartite network games.

A game is a bipartite graph over two player types plus a pair of payoff
constants.  Players choose binary actions; a player's payoff from playing 1
decreases with the number of opposite-type neighbors that also play 1.
Actions are kept ternary (zero / one / undecided) so the learning dynamics
and all policy checks can run on exact integer state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Sequence, Union


class Action(IntEnum):
    """A player's action: decided 0, decided 1, or still undecided."""

    ZERO = 0
    ONE = 1
    UNDECIDED = 2


ZERO = Action.ZERO
ONE = Action.ONE
UNDECIDED = Action.UNDECIDED

_JSON_ACTION = {ZERO: 0, ONE: 1, UNDECIDED: "e"}
_JSON_ACTION_BACK = {0: ZERO, 1: ONE, "e": UNDECIDED}


class ActionProfile(tuple):
    """Joint action, one entry per player.

    Behaves as a plain tuple of :class:`Action` values, so profiles are
    hashable and comparable, which the convergence checks rely on.
    """

    __slots__ = ()

    def __new__(cls, actions: Iterable[int]) -> "ActionProfile":
        return super().__new__(cls, (Action(a) for a in actions))

    @classmethod
    def all_undecided(cls, n: int) -> "ActionProfile":
        return cls([UNDECIDED] * n)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "ActionProfile":
        """Build a decided profile from 0/1 values."""
        return cls(ONE if b else ZERO for b in bits)

    @property
    def is_decided(self) -> bool:
        return UNDECIDED not in self

    def undecided_players(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self) if a is UNDECIDED)

    def to_jsonable(self) -> list:
        return [_JSON_ACTION[a] for a in self]

    @classmethod
    def from_jsonable(cls, items: Sequence) -> "ActionProfile":
        try:
            return cls(_JSON_ACTION_BACK[x] for x in items)
        except KeyError as exc:
            raise ValueError(f"invalid action entry {exc.args[0]!r}; expected 0, 1 or 'e'") from exc


@dataclass(frozen=True, init=False, repr=False)
class TypedBipartiteGraph:
    """Players with binary types and edges that only cross types.

    ``types[i]`` is 0 or 1; every edge must join a type-0 player to a
    type-1 player.  Edges are stored as sorted pairs with 0-based ids.
    """

    n: int
    types: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    neighbors: tuple[tuple[int, ...], ...]  # derived from edges

    def __init__(self, n: int, types: Sequence[int], edges: Iterable[Sequence[int]]):
        if n <= 0:
            raise ValueError(f"player count must be positive, got {n}")
        types = tuple(int(t) for t in types)
        if len(types) != n:
            raise ValueError(f"expected {n} type labels, got {len(types)}")
        if any(t not in (0, 1) for t in types):
            raise ValueError("type labels must be 0 or 1")
        seen: set[tuple[int, int]] = set()
        adj: list[list[int]] = [[] for _ in range(n)]
        for raw in edges:
            i, j = int(raw[0]), int(raw[1])
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge [{i}, {j}] has an endpoint outside 0..{n - 1}")
            if i == j:
                raise ValueError(f"edge [{i}, {j}] is a self-loop")
            e = (i, j) if i < j else (j, i)
            if e in seen:
                raise ValueError(f"edge [{e[0]}, {e[1]}] appears more than once")
            if types[i] == types[j]:
                raise ValueError(f"edge [{e[0]}, {e[1]}] joins two type-{types[i]} players")
            seen.add(e)
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "types", types)
        object.__setattr__(self, "edges", frozenset(seen))
        object.__setattr__(self, "neighbors", tuple(tuple(sorted(a)) for a in adj))

    def __repr__(self) -> str:
        return f"TypedBipartiteGraph(n={self.n}, types={self.types}, edges={sorted(self.edges)})"

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])

    def players_of_type(self, t: int) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.types[i] == t)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "types": list(self.types),
            "edges": sorted([list(e) for e in self.edges]),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TypedBipartiteGraph":
        for key in ("n", "types", "edges"):
            if key not in data:
                raise ValueError(f"graph file is missing required key {key!r}")
        return cls(data["n"], data["types"], data["edges"])

    @classmethod
    def from_json_file(cls, path) -> "TypedBipartiteGraph":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_json_file(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)
            fh.write("\n")


ConstantLike = Union[Fraction, int, str, float]


def _as_fraction(value: ConstantLike) -> Fraction:
    # Floats go through str() so that e.g. 0.4 means the decimal 2/5 rather
    # than its binary approximation.
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True, init=False)
class PayoffConstants:
    """Payoff constants for type-0 and type-1 players, kept as exact rationals."""

    c0: Fraction
    c1: Fraction

    def __init__(self, c0: ConstantLike, c1: ConstantLike):
        c0, c1 = _as_fraction(c0), _as_fraction(c1)
        if c0 <= 0 or c1 <= 0:
            raise ValueError(f"payoff constants must be positive, got c0={c0}, c1={c1}")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)

    def for_type(self, t: int) -> Fraction:
        return self.c1 if t else self.c0

    def for_player(self, graph: TypedBipartiteGraph, i: int) -> Fraction:
        return self.for_type(graph.types[i])

    def one_threshold(self, t: int) -> int:
        """Largest neighbor sum S with c*S < 1 (deciding 1 stays preferable)."""
        c = self.for_type(t)
        return (c.denominator - 1) // c.numerator

    def zero_threshold(self, t: int) -> int:
        """Smallest neighbor sum S with c*S > 1 (deciding 0 becomes strictly better)."""
        c = self.for_type(t)
        return c.denominator // c.numerator + 1


def _require_decided(profile: ActionProfile, what: str) -> None:
    if not profile.is_decided:
        raise ValueError(f"{what} undefined on undecided profile")


def utility(
    graph: TypedBipartiteGraph,
    constants: PayoffConstants,
    profile: ActionProfile,
    i: int,
) -> Fraction:
    """Payoff of player ``i``: a_i * (1 - c_i * sum of opposite-type neighbor actions)."""
    _require_decided(profile, "utility")
    if profile[i] is ZERO:
        return Fraction(0)
    neighbor_sum = sum(1 for j in graph.neighbors[i] if profile[j] is ONE)
    return 1 - constants.for_player(graph, i) * neighbor_sum


def best_response(
    graph: TypedBipartiteGraph,
    constants: PayoffConstants,
    profile: ActionProfile,
    i: int,
) -> Action:
    """Best response of player ``i`` against its neighbors' decided actions.

    Returns ONE exactly when 1 > c_i * (neighbor sum); the indicator is
    strict, so equality yields ZERO.
    """
    neighbor_sum = 0
    for j in graph.neighbors[i]:
        if profile[j] is UNDECIDED:
            raise ValueError(f"best response of player {i} undefined: neighbor {j} is undecided")
        if profile[j] is ONE:
            neighbor_sum += 1
    return ONE if 1 > constants.for_player(graph, i) * neighbor_sum else ZERO


def active_edges(graph: TypedBipartiteGraph, profile: ActionProfile) -> frozenset[tuple[int, int]]:
    """Edges whose endpoints both play 1 or are undecided."""
    return frozenset(
        (i, j) for (i, j) in graph.edges if profile[i] is not ZERO and profile[j] is not ZERO
    )


def is_max_anticoordination(graph: TypedBipartiteGraph, profile: ActionProfile) -> bool:
    """True when the profile is fully decided and no edge is active."""
    if not profile.is_decided:
        return False
    for i, j in graph.edges:
        if profile[i] is ONE and profile[j] is ONE:
            return False
    return True


def is_nash(graph: TypedBipartiteGraph, constants: PayoffConstants, profile: ActionProfile) -> bool:
    """True when every player's action equals its best response.

    Payoffs are linear in a player's own action, so checking the two
    extreme actions suffices.
    """
    _require_decided(profile, "nash check")
    return all(
        best_response(graph, constants, profile, i) is profile[i] for i in range(graph.n)
    )
