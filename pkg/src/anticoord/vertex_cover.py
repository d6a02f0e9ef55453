"""Vertex-cover based control.

After the uncontrolled dynamics converge, the players still undecided or
playing 1 induce a residual bipartite graph of potentially active edges.  A
minimum vertex cover of that graph (exact via maximum matching plus the
Koenig construction) forced to 0, together with the decided-0 players whose
decision the cover would destabilize, yields a feasible dynamic policy.
"""

from __future__ import annotations

from dataclasses import dataclass

from anticoord.game_core import (
    Action,
    ActionProfile,
    PayoffConstants,
    TypedBipartiteGraph,
    is_nash,
)
from anticoord.learning import Dynamics, run
from anticoord.policies import DynamicPolicy


@dataclass(frozen=True)
class ResidualGraph:
    """Players that end the uncontrolled run undecided or at 1, with the edges among them."""

    nodes: frozenset[int]
    edges: frozenset[tuple[int, int]]
    base_profile: ActionProfile
    types: tuple[int, ...]


@dataclass(frozen=True)
class VertexCoverSolution:
    cover: frozenset[int]
    rho_positive: frozenset[int]
    policy: DynamicPolicy


def build_residual(graph: TypedBipartiteGraph, constants: PayoffConstants) -> ResidualGraph:
    """Run the uncontrolled dynamics for n steps and keep the non-zero players."""
    final = run(graph, constants).final
    nodes = frozenset(i for i in range(graph.n) if final[i] != Action.ZERO)
    edges = frozenset(e for e in graph.edges if e[0] in nodes and e[1] in nodes)
    return ResidualGraph(nodes=nodes, edges=edges, base_profile=final, types=graph.types)


def _koenig_cover(left: list[int], edges, adjacency: dict) -> frozenset[int]:
    """Minimum cover from a maximum matching built by augmenting paths in index order."""
    match_left: dict[int, int] = {}
    match_right: dict[int, int] = {}

    def augment(u: int, banned: set[int]) -> bool:
        for v in adjacency[u]:
            if v in banned:
                continue
            banned.add(v)
            if v not in match_right or augment(match_right[v], banned):
                match_left[u] = v
                match_right[v] = u
                return True
        return False

    for u in left:
        if adjacency[u]:
            augment(u, set())

    reachable_left = {u for u in left if u not in match_left}
    reachable_right: set[int] = set()
    stack = list(reachable_left)
    while stack:
        u = stack.pop()
        for v in adjacency[u]:
            if v not in reachable_right:
                reachable_right.add(v)
                w = match_right.get(v)
                if w is not None and w not in reachable_left:
                    reachable_left.add(w)
                    stack.append(w)
    return frozenset(u for u in left if u not in reachable_left) | frozenset(reachable_right)


def min_vertex_cover(residual: ResidualGraph) -> frozenset[int]:
    """Exact minimum-cardinality vertex cover of the residual edge set.

    The graph is bipartite by construction, so a maximum matching gives the
    cover size.  Both orientations of the Koenig construction produce valid
    minimum covers; the lexicographically smaller one is returned so results
    are deterministic.
    """
    if not residual.edges:
        return frozenset()
    covers = []
    for side in (0, 1):
        left = sorted(i for i in residual.nodes if residual.types[i] == side)
        adjacency = {u: [] for u in left}
        for i, j in sorted(residual.edges):
            u, v = (i, j) if residual.types[i] == side else (j, i)
            adjacency[u].append(v)
        for u in left:
            adjacency[u].sort()
        covers.append(_koenig_cover(left, residual.edges, adjacency))
    for cover in covers:
        for i, j in residual.edges:
            if i not in cover and j not in cover:
                raise AssertionError("Koenig construction produced a non-cover")
    return min(covers, key=lambda c: (len(c), tuple(sorted(c))))


def compute_rho_positive(
    graph: TypedBipartiteGraph,
    constants: PayoffConstants,
    residual: ResidualGraph,
    cover: frozenset[int],
) -> frozenset[int]:
    """Decided-0 players whose decision would not survive the cover being forced to 0.

    Player k (outside the residual) stays at 0 on its own only if enough of
    its neighbors keep playing 1 after the cover is zeroed; when the strict
    inequality c_k * (uncovered one-ish neighbors) < 1 holds, k would flip
    back to 1 and must be controlled from step n+1 on.
    """
    base = residual.base_profile
    out = []
    for k in range(graph.n):
        if k in residual.nodes:
            continue
        remaining = sum(
            1 for j in graph.neighbors[k] if base[j] != Action.ZERO and j not in cover
        )
        if constants.for_player(graph, k) * remaining < 1:
            out.append(k)
    return frozenset(out)


def assemble_pi_v(
    graph: TypedBipartiteGraph,
    constants: PayoffConstants,
    residual: ResidualGraph,
    cover: frozenset[int],
    rho_positive: frozenset[int],
) -> DynamicPolicy:
    """Assemble the cover-based dynamic policy.

    Nothing is controlled before step n.  At step n the cover is forced to 0
    and the uncovered undecided players to 1.  From step n+1 the cover plus
    the rho-positive players are forced to 0, unless the controlled profile
    at n+1 is already a Nash equilibrium, in which case no further control
    is needed.
    """
    n = graph.n
    base = residual.base_profile
    stage_n = {i: Action.ZERO for i in cover}
    for i in residual.nodes:
        if i not in cover and base[i] == Action.UNDECIDED:
            stage_n[i] = Action.ONE

    keep_zero = cover | rho_positive
    dyn = Dynamics(graph, constants)
    a_n = list(base)
    for i, v in stage_n.items():
        a_n[i] = int(v)
    y_next = dyn.step_ints(tuple(a_n))
    a_next = list(y_next)
    for i in keep_zero:
        a_next[i] = 0
    profile_next = ActionProfile(a_next)
    tail_needed = not (profile_next.is_decided and is_nash(graph, constants, profile_next))

    if not stage_n and not (tail_needed and keep_zero):
        return DynamicPolicy.empty()
    head = [{} for _ in range(n)] + [stage_n]
    if tail_needed:
        return DynamicPolicy(head, sorted(keep_zero), {i: Action.ZERO for i in keep_zero})
    return DynamicPolicy(head)


def solve(graph: TypedBipartiteGraph, constants: PayoffConstants) -> VertexCoverSolution:
    """Full pipeline: residual graph, minimum cover, rho set, assembled policy."""
    residual = build_residual(graph, constants)
    cover = min_vertex_cover(residual)
    rho = compute_rho_positive(graph, constants, residual, cover)
    return VertexCoverSolution(cover=cover, rho_positive=rho, policy=assemble_pi_v(graph, constants, residual, cover, rho))
