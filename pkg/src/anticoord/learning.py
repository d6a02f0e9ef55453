"""Decentralized learning dynamics.

Each round, every player simultaneously checks two elimination tests against
its neighbors' previous actions: decide 1 if even the worst case (undecided
neighbors all playing 1) keeps action 1 preferable, decide 0 if even the best
case (undecided neighbors all playing 0) makes action 1 lose, otherwise keep
the previous value.  Both tests are strict inequalities, so neighbor sums can
be compared against precomputed integer thresholds; no floating point is
involved anywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Protocol

from anticoord.game_core import (
    Action,
    ActionProfile,
    PayoffConstants,
    TypedBipartiteGraph,
)


class ControlSchedule(Protocol):
    """What ``controlled_run`` needs from a policy object."""

    def controls_at(self, t: int) -> Mapping[int, Action]: ...

    def constant_from(self, t: int) -> bool: ...


@dataclass
class Trajectory:
    """Recorded profile sequence a^0, a^1, ...

    ``convergence_time`` is the first step index at which the profile stopped
    changing (so ``profiles[-1]`` is the fixed point), or None when the
    horizon was reached while the profile was still moving.
    """

    profiles: list[ActionProfile]
    convergence_time: Optional[int]

    @property
    def final(self) -> ActionProfile:
        return self.profiles[-1]

    def write_jsonl(self, fh) -> None:
        for t, prof in enumerate(self.profiles):
            fh.write(json.dumps({"t": t, "actions": prof.to_jsonable()}))
            fh.write("\n")


class Dynamics:
    """Update engine for one (graph, constants) pair.

    Precomputes per-player integer thresholds: a player decides 1 when its
    ceil-sum is at most ``t_one`` and decides 0 when its floor-sum is at
    least ``t_zero``.  Exposes both a simple per-step API and an incremental
    run-to-fixed-point used by the heavier search code.
    """

    __slots__ = ("n", "nbrs", "t_one", "t_zero", "edge_list")

    def __init__(self, graph: TypedBipartiteGraph, constants: PayoffConstants):
        self.n = graph.n
        self.nbrs = graph.neighbors
        self.t_one = tuple(constants.one_threshold(t) for t in graph.types)
        self.t_zero = tuple(constants.zero_threshold(t) for t in graph.types)
        self.edge_list = tuple(sorted(graph.edges))

    def step_ints(self, prof, forced: Mapping[int, int] | None = None) -> tuple:
        """One simultaneous update; ``forced`` overrides the result for its players."""
        nbrs, t1, t0 = self.nbrs, self.t_one, self.t_zero
        out = list(prof)
        for i in range(self.n):
            cs = fs = 0
            for j in nbrs[i]:
                aj = prof[j]
                if aj != 0:
                    cs += 1
                    if aj == 1:
                        fs += 1
            if cs <= t1[i]:
                out[i] = 1
            elif fs >= t0[i]:
                out[i] = 0
        if forced:
            for i, v in forced.items():
                out[i] = v
        return tuple(out)

    def neighbor_sums(self, prof) -> tuple[list, list]:
        """Per-player (ceil-sum, floor-sum) against ``prof``; reusable across run_constant calls."""
        cs = [0] * self.n
        fs = [0] * self.n
        for j in range(self.n):
            aj = prof[j]
            if aj != 0:
                if aj == 1:
                    for i in self.nbrs[j]:
                        cs[i] += 1
                        fs[i] += 1
                else:
                    for i in self.nbrs[j]:
                        cs[i] += 1
        return cs, fs

    def run_constant(
        self,
        start,
        forced: Mapping[int, int] | None,
        horizon: int,
        base_sums: tuple[list, list] | None = None,
    ):
        """Run with a fixed forced map until the profile settles or ``horizon`` steps pass.

        ``start`` is the state before forcing; the forced values are applied
        to it and at every subsequent step.  ``base_sums`` must be
        ``neighbor_sums(start)`` when given (they are copied, then adjusted
        for the forcing).  Returns (final profile, number of changing steps,
        settled flag).  Incremental neighbor sums keep each step at the cost
        of the changed neighborhood only.
        """
        n, nbrs, t1, t0 = self.n, self.nbrs, self.t_one, self.t_zero
        a = list(start)
        blocked = bytearray(n)
        if base_sums is None:
            if forced:
                for i, v in forced.items():
                    a[i] = v
                    blocked[i] = 1
            cs, fs = self.neighbor_sums(a)
        else:
            cs, fs = base_sums[0][:], base_sums[1][:]
            if forced:
                for i, v in forced.items():
                    old = a[i]
                    a[i] = v
                    blocked[i] = 1
                    dc = (v != 0) - (old != 0)
                    df = (v == 1) - (old == 1)
                    if dc or df:
                        for j in nbrs[i]:
                            cs[j] += dc
                            fs[j] += df
        candidates = range(n)
        steps = 0
        while steps < horizon:
            updates = []
            for i in candidates:
                if blocked[i]:
                    continue
                ai = a[i]
                if cs[i] <= t1[i]:
                    if ai != 1:
                        updates.append((i, 1))
                elif fs[i] >= t0[i]:
                    if ai != 0:
                        updates.append((i, 0))
            if not updates:
                return tuple(a), steps, True
            steps += 1
            touched = bytearray(n)
            front: list[int] = []
            for i, v in updates:
                old = a[i]
                a[i] = v
                dc = (v != 0) - (old != 0)
                df = (v == 1) - (old == 1)
                for j in nbrs[i]:
                    cs[j] += dc
                    fs[j] += df
                    if not touched[j]:
                        touched[j] = 1
                        front.append(j)
            candidates = front
        for i in range(n):
            if blocked[i]:
                continue
            if cs[i] <= t1[i]:
                v = 1
            elif fs[i] >= t0[i]:
                v = 0
            else:
                v = a[i]
            if v != a[i]:
                return tuple(a), steps, False
        return tuple(a), steps, True

    def count_active_edges(self, prof) -> int:
        return sum(1 for i, j in self.edge_list if prof[i] != 0 and prof[j] != 0)


def step(
    graph: TypedBipartiteGraph, constants: PayoffConstants, profile: ActionProfile
) -> ActionProfile:
    """One uncontrolled simultaneous update of every player."""
    return ActionProfile(Dynamics(graph, constants).step_ints(profile))


def run(
    graph: TypedBipartiteGraph,
    constants: PayoffConstants,
    a0: ActionProfile | None = None,
    horizon: int | None = None,
) -> Trajectory:
    """Iterate the dynamics from ``a0`` (default all undecided) until fixed or horizon.

    The horizon defaults to the player count, which is always enough for
    uncontrolled runs started from the all-undecided profile.
    """
    if a0 is None:
        a0 = ActionProfile.all_undecided(graph.n)
    if horizon is None:
        horizon = graph.n
    if horizon < 1:
        raise ValueError(f"horizon must be at least 1, got {horizon}")
    dyn = Dynamics(graph, constants)
    profiles = [a0]
    convergence_time: Optional[int] = None
    cur = tuple(a0)
    for t in range(1, horizon + 1):
        nxt = dyn.step_ints(cur)
        if nxt == cur:
            convergence_time = t - 1
            break
        profiles.append(ActionProfile(nxt))
        cur = nxt
    else:
        # the last change may have landed exactly on the horizon; probe once
        if dyn.step_ints(cur) == cur:
            convergence_time = horizon
    return Trajectory(profiles, convergence_time)


def _check_forced(forced: Mapping[int, Action]) -> None:
    for i, v in forced.items():
        if v not in (0, 1):
            raise ValueError(f"forced action for player {i} must be Zero or One, got {v!r}")


def controlled_run(
    graph: TypedBipartiteGraph,
    constants: PayoffConstants,
    y0: ActionProfile,
    policy: ControlSchedule,
    horizon: int,
) -> Trajectory:
    """Run the controlled dynamics and record the controlled profiles.

    At each time t the controlled profile overrides the free state with the
    policy's forced actions, and the next free state is one uncontrolled
    update of that controlled profile.  Exits early once the profile repeats
    while the policy has gone constant.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be at least 1, got {horizon}")
    dyn = Dynamics(graph, constants)

    def apply(t: int, y: tuple) -> tuple:
        forced = policy.controls_at(t)
        _check_forced(forced)
        if not forced:
            return y
        a = list(y)
        for i, v in forced.items():
            a[i] = int(v)
        return tuple(a)

    a_cur = apply(0, tuple(y0))
    profiles = [ActionProfile(a_cur)]
    convergence_time: Optional[int] = None
    for t in range(1, horizon + 1):
        a_next = apply(t, dyn.step_ints(a_cur))
        if a_next == a_cur and policy.constant_from(t):
            convergence_time = t - 1
            break
        profiles.append(ActionProfile(a_next))
        a_cur = a_next
    return Trajectory(profiles, convergence_time)
