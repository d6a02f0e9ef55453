"""Exhaustive oracles for cross-validation at desk scale.

These deliberately trade speed for directness: the iterated-elimination
reference is written against best responses rather than the learning engine,
the static solver enumerates every control set in increasing cardinality,
and the dynamic solver searches the two-phase policy class (a set forced for
the first two steps, plus a set forced to 0 from step n on) that contains
every benchmark optimum.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from typing import Optional

from anticoord.game_core import (
    Action,
    ActionProfile,
    PayoffConstants,
    TypedBipartiteGraph,
    best_response,
    is_nash,
)
from anticoord.learning import Dynamics
from anticoord.policies import DynamicPolicy, StaticPolicy
from anticoord.vertex_cover import ResidualGraph, min_vertex_cover

SURVIVES_ZERO = "{0}"
SURVIVES_ONE = "{1}"
SURVIVES_ALL = "[0,1]"

_MAX_ORACLE_N = 30
_MAX_STATIC_N = 14
_MAX_DYNAMIC_N = 10


def iterated_elimination_oracle(
    graph: TypedBipartiteGraph, constants: PayoffConstants
) -> tuple[str, ...]:
    """Surviving action sets under iterated elimination of strictly dominated actions.

    A player's survivor collapses to {1} when its best response against the
    most aggressive surviving neighbor actions is 1, and to {0} when its
    best response against the most timid ones is 0.  Implemented directly on
    best responses, independently of the learning engine, so the two can be
    checked against each other.
    """
    if graph.n > _MAX_ORACLE_N:
        raise ValueError(f"oracle limited to n <= {_MAX_ORACLE_N}, got {graph.n}")
    survivors = [SURVIVES_ALL] * graph.n
    changed = True
    while changed:
        changed = False
        ceil_prof = ActionProfile(
            Action.ZERO if s == SURVIVES_ZERO else Action.ONE for s in survivors
        )
        floor_prof = ActionProfile(
            Action.ONE if s == SURVIVES_ONE else Action.ZERO for s in survivors
        )
        for i in range(graph.n):
            if survivors[i] != SURVIVES_ALL:
                continue
            if best_response(graph, constants, ceil_prof, i) is Action.ONE:
                survivors[i] = SURVIVES_ONE
                changed = True
            elif best_response(graph, constants, floor_prof, i) is Action.ZERO:
                survivors[i] = SURVIVES_ZERO
                changed = True
    return tuple(survivors)


def survivors_to_profile(survivors: tuple[str, ...]) -> ActionProfile:
    """Map surviving sets to the ternary profile the dynamics should reach."""
    mapping = {SURVIVES_ZERO: Action.ZERO, SURVIVES_ONE: Action.ONE, SURVIVES_ALL: Action.UNDECIDED}
    return ActionProfile(mapping[s] for s in survivors)


def _static_feasible(dyn: Dynamics, graph: TypedBipartiteGraph, forced: dict) -> bool:
    final, _, _ = dyn.run_constant((2,) * graph.n, forced, horizon=graph.n)
    if any(v == 2 for v in final):
        return False
    for i, j in dyn.edge_list:
        if final[i] == 1 and final[j] == 1:
            return False
    return True


def brute_static(
    graph: TypedBipartiteGraph, constants: PayoffConstants
) -> tuple[StaticPolicy, int]:
    """Optimal static policy by enumeration in increasing cardinality.

    Candidates of a given size are visited in lexicographic order with
    forced-zero assignments first, so the returned witness is deterministic.
    Forcing every player to 0 is always feasible, hence a witness exists.
    """
    if graph.n > _MAX_STATIC_N:
        raise ValueError(f"exhaustive static search limited to n <= {_MAX_STATIC_N}, got {graph.n}")
    dyn = Dynamics(graph, constants)
    for k in range(graph.n + 1):
        for players in combinations(range(graph.n), k):
            for deltas in product((0, 1), repeat=k):
                forced = dict(zip(players, deltas))
                if _static_feasible(dyn, graph, forced):
                    policy = StaticPolicy(players, {i: Action(v) for i, v in forced.items()})
                    return policy, k
    raise AssertionError("unreachable: forcing all players to zero is feasible")


def _two_phase_policy(n: int, head_stage: dict, tail: frozenset) -> DynamicPolicy:
    head = []
    if head_stage:
        head = [dict(head_stage), dict(head_stage)]
    if tail:
        head = head + [{}] * (n - len(head))
    return DynamicPolicy(
        [(sorted(s), {i: Action(v) for i, v in s.items()}) for s in head],
        sorted(tail),
        {i: Action.ZERO for i in tail},
    )


def _tail_feasible(dyn: Dynamics, y_n: tuple, tail: frozenset) -> bool:
    """Cycle-exact feasibility of forcing ``tail`` to 0 from step n on, given the free state at n."""
    a = list(y_n)
    for i in tail:
        a[i] = 0
    cur = tuple(a)
    seen = set()
    while cur not in seen:
        if any(v == 2 for v in cur):
            return False
        for i, j in dyn.edge_list:
            if cur[i] == 1 and cur[j] == 1:
                return False
        seen.add(cur)
        nxt = list(dyn.step_ints(cur))
        for i in tail:
            nxt[i] = 0
        cur = tuple(nxt)
    return True


def brute_dynamic_restricted(
    graph: TypedBipartiteGraph, constants: PayoffConstants
) -> tuple[DynamicPolicy, Fraction]:
    """Cheapest policy in the two-phase class: head forced at t = 0,1; tail forced to 0 for t >= n.

    This is an upper bound on the unrestricted dynamic optimum; the class
    contains every benchmark-network optimal policy, which is what it is
    used to confirm.  Heads are pruned through a per-head lower bound on the
    tail: the tail must contain every player left undecided at step n and
    must cover every edge whose endpoints both play 1 there.
    """
    n = graph.n
    if n > _MAX_DYNAMIC_N:
        raise ValueError(f"two-phase search limited to n <= {_MAX_DYNAMIC_N}, got {n}")
    dyn = Dynamics(graph, constants)
    eps = (2,) * n

    heads = []
    for h in range(n + 1):
        head_cost = Fraction(2 * h, n)
        for players in combinations(range(n), h):
            for deltas in product((0, 1), repeat=h):
                forced = dict(zip(players, deltas))
                a0 = list(eps)
                for i, v in forced.items():
                    a0[i] = v
                a1 = dyn.step_ints(tuple(a0), forced)
                y_n, _, _ = dyn.run_constant(a1, None, horizon=n - 1)
                undecided = frozenset(i for i in range(n) if y_n[i] == 2)
                hot_edges = tuple(
                    (i, j) for i, j in dyn.edge_list if y_n[i] == 1 and y_n[j] == 1
                )
                bound = len(undecided) + _cover_size(graph, y_n, hot_edges)
                heads.append((head_cost + bound, head_cost, forced, y_n, undecided, hot_edges))
    heads.sort(key=lambda rec: (rec[0], rec[1], sorted(rec[2].items())))

    best_policy: Optional[DynamicPolicy] = None
    best_cost: Optional[Fraction] = None
    for lower, head_cost, forced, y_n, undecided, hot_edges in heads:
        if best_cost is not None and lower >= best_cost:
            break
        required = sorted(undecided)
        pool = [i for i in range(n) if i not in undecided]
        tau = len(undecided) + _cover_size(graph, y_n, hot_edges)
        while best_cost is None or head_cost + tau < best_cost:
            if tau > n:
                break
            found = None
            for extra in combinations(pool, tau - len(required)):
                tail = frozenset(required) | frozenset(extra)
                if all(i in tail or j in tail for i, j in hot_edges) and _tail_feasible(
                    dyn, y_n, tail
                ):
                    found = tail
                    break
            if found is not None:
                best_cost = head_cost + tau
                best_policy = _two_phase_policy(n, forced, found)
                break
            tau += 1
    assert best_policy is not None and best_cost is not None
    return best_policy, best_cost


def _cover_size(graph: TypedBipartiteGraph, prof: tuple, hot_edges: tuple) -> int:
    if not hot_edges:
        return 0
    nodes = frozenset(i for e in hot_edges for i in e)
    residual = ResidualGraph(
        nodes=nodes,
        edges=frozenset(hot_edges),
        base_profile=ActionProfile(prof),
        types=graph.types,
    )
    return len(min_vertex_cover(residual))


def brute_vertex_cover(nodes, edges) -> frozenset[int]:
    """Exhaustive minimum vertex cover, for cross-checking the matching-based one."""
    nodes = sorted(nodes)
    if len(nodes) > _MAX_STATIC_N:
        raise ValueError(f"exhaustive cover search limited to {_MAX_STATIC_N} nodes")
    edges = list(edges)
    for k in range(len(nodes) + 1):
        for subset in combinations(nodes, k):
            chosen = set(subset)
            if all(i in chosen or j in chosen for i, j in edges):
                return frozenset(chosen)
    raise AssertionError("unreachable: the full node set covers everything")


def max_anticoordination_equilibria(
    graph: TypedBipartiteGraph, constants: PayoffConstants, limit: int = 16
) -> set[ActionProfile]:
    """All decided Nash equilibria with no active edge (exhaustive over 2^n profiles)."""
    if graph.n > limit:
        raise ValueError(f"equilibrium enumeration limited to n <= {limit}, got {graph.n}")
    out: set[ActionProfile] = set()
    for bits in product((0, 1), repeat=graph.n):
        if any(bits[i] and bits[j] for i, j in graph.edges):
            continue
        prof = ActionProfile.from_bits(bits)
        if is_nash(graph, constants, prof):
            out.add(prof)
    return out
