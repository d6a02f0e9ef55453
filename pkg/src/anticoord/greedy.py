"""Greedy control selection driven by cascade potential, plus simpler variants.

The loop alternates between letting the controlled dynamics reconverge and
adding one player to the control set.  The cascade potential of a candidate
is the net number of active edges removed by holding just that player fixed
and letting the dynamics settle again; it can be negative, since forcing a
player can reactivate neighbors that had already decided.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from anticoord.game_core import (
    Action,
    ActionProfile,
    PayoffConstants,
    TypedBipartiteGraph,
)
from anticoord.learning import Dynamics
from anticoord.policies import (
    DynamicPolicy,
    StaticPolicy,
    embed_static,
    validate_dynamic,
)
from anticoord import vertex_cover as vc


class Variant(str, Enum):
    CP = "cp"
    CP2 = "cp2"
    MAX_DEGREE = "maxdeg"
    RAND = "rand"
    VC = "vc"


@dataclass
class GreedyResult:
    variant: Variant
    controlled: list[int]  # selection order
    forced: dict[int, Action]
    convergence_times: list[int]
    final_profile: ActionProfile
    static_policy: StaticPolicy
    dynamic_policy: DynamicPolicy
    staged: bool  # False when the dynamic form fell back to the static embedding


def cascade_potential(
    graph: TypedBipartiteGraph,
    constants: PayoffConstants,
    profile: ActionProfile,
    i: int,
    force: Action,
) -> int:
    """Active edges removed by holding player ``i`` at ``force`` until reconvergence."""
    if force not in (Action.ZERO, Action.ONE):
        raise ValueError("cascade potential needs a decided forced action")
    dyn = Dynamics(graph, constants)
    cp, _ = _cascade_potential(dyn, tuple(profile), i, int(force))
    return cp


def _cascade_potential(
    dyn: Dynamics, prof: tuple, i: int, force: int, base_sums=None
) -> tuple[int, tuple]:
    final, _, _ = dyn.run_constant(prof, {i: force}, horizon=dyn.n, base_sums=base_sums)
    return dyn.count_active_edges(prof) - dyn.count_active_edges(final), final


def control_effort(result: GreedyResult, n: int) -> Fraction:
    """Fraction of players selected for control."""
    return Fraction(len(result.controlled), n)


def run_greedy(
    graph: TypedBipartiteGraph,
    constants: PayoffConstants,
    variant: Variant | str = Variant.CP,
    rng_seed: Optional[int] = None,
    deterministic: Optional[bool] = None,
) -> GreedyResult:
    """Select players until no active edge remains.

    In deterministic mode (the default when no seed is given) ties go to the
    lowest player index with forcing-to-zero preferred; otherwise ties are
    broken by the seeded generator.  No player is ever selected twice, so
    the loop ends within n selections.
    """
    variant = Variant(variant)
    if deterministic is None:
        deterministic = rng_seed is None
    rng = random.Random(rng_seed)
    if variant is Variant.VC:
        return _run_vc(graph, constants)

    n = graph.n
    dyn = Dynamics(graph, constants)
    eps = (2,) * n
    forced: dict[int, int] = {}
    order: list[int] = []
    convergence_times: list[int] = []
    head_steps: list[dict] = []
    state = eps
    replayable = True

    while True:
        state, reach, settled = dyn.run_constant(state, forced, horizon=n)
        convergence_times.append(reach + 1)
        if replayable:
            head_steps.extend([_stage(forced)] * (reach + 1))
        if dyn.count_active_edges(state) == 0:
            # the staged trajectory anti-coordinates; the selected set must
            # also work when held from the very start, which does not follow
            # automatically (the two runs can decide players differently)
            state, _, settled = dyn.run_constant(eps, forced, horizon=n)
            if dyn.count_active_edges(state) == 0:
                break
            replayable = False
        if len(order) >= n:
            raise AssertionError("greedy failed to terminate within n selections")
        if variant in (Variant.CP, Variant.CP2):
            pick = _select_cascade(
                graph, dyn, state, forced, variant, deterministic, rng, settled
            )
        elif variant is Variant.MAX_DEGREE:
            pick = _select_max_degree(graph, state, forced, deterministic, rng)
        else:
            pick = _select_rand(dyn, state, forced, deterministic, rng)
        i_star, delta = pick
        forced[i_star] = delta
        order.append(i_star)

    final_profile = ActionProfile(state)
    forced_actions = {i: Action(v) for i, v in forced.items()}
    static_policy = StaticPolicy(sorted(forced), {i: forced_actions[i] for i in forced})
    staged = False
    dynamic_policy = None
    if replayable:
        staged_policy = (
            DynamicPolicy(head_steps, sorted(forced), forced_actions)
            if order
            else DynamicPolicy.empty()
        )
        # staging can also overrun the n-step window; validate before use
        if validate_dynamic(graph, constants, staged_policy).feasible:
            dynamic_policy, staged = staged_policy, True
    if dynamic_policy is None:
        dynamic_policy = embed_static(static_policy, n)
    return GreedyResult(
        variant=variant,
        controlled=order,
        forced=forced_actions,
        convergence_times=convergence_times,
        final_profile=final_profile,
        static_policy=static_policy,
        dynamic_policy=dynamic_policy,
        staged=staged,
    )


def _stage(forced: dict[int, int]) -> dict:
    return {i: Action(v) for i, v in forced.items()}


def _active_endpoints(dyn: Dynamics, state: tuple) -> list[int]:
    out = set()
    for i, j in dyn.edge_list:
        if state[i] != 0 and state[j] != 0:
            out.add(i)
            out.add(j)
    return sorted(out)


def _eligible(state: tuple, forced: dict) -> list[int]:
    return [i for i in range(len(state)) if state[i] != 0 and i not in forced]


def _pick(arg_set: list[tuple[int, int]], deterministic: bool, rng: random.Random):
    if deterministic:
        return min(arg_set)
    return rng.choice(sorted(arg_set))


def _select_cascade(graph, dyn, state, forced, variant, deterministic, rng, settled=True):
    """Score candidates by the marginal cascade potential.

    The probe holds the accumulated control set plus the candidate; probing
    with the candidate alone would let every earlier selection spring back
    during the simulation and bury the candidate's own effect.  Since
    ``state`` is the fixed point of the held dynamics, a candidate forced to
    its current value changes nothing and scores 0 without simulating.
    """
    base_sums = dyn.neighbor_sums(state)
    base_active = dyn.count_active_edges(state)
    scored: list[tuple[int, int, int, int]] = []  # (i, delta, cp, score)
    for i in _eligible(state, forced):
        for delta in (0, 1):
            if delta == 1 and any(
                forced.get(j) == 1 for j in graph.neighbors[i]
            ):
                # forcing 1 next to an already forced 1 would pin an edge active forever
                continue
            if settled and state[i] == delta:
                cp, changed = 0, 0
            else:
                trial = dict(forced)
                trial[i] = delta
                final, _, _ = dyn.run_constant(state, trial, dyn.n, base_sums)
                cp = base_active - dyn.count_active_edges(final)
                changed = (
                    sum(1 for a, b in zip(final, state) if a != b)
                    if variant is Variant.CP2
                    else 0
                )
            score = cp + changed if variant is Variant.CP2 else cp
            scored.append((i, delta, cp, score))
    if not scored:
        raise AssertionError("no eligible candidate while active edges remain")
    max_cp = max(rec[2] for rec in scored)
    if max_cp <= 0:
        # no candidate removes edges on its own; force an active endpoint to
        # zero, which permanently deactivates its edges
        endpoints = set(_active_endpoints(dyn, state))
        fallback = [rec for rec in scored if rec[1] == 0 and rec[0] in endpoints]
        scored = fallback or scored
    best = max(rec[3] for rec in scored)
    arg_set = [(i, d) for i, d, _, s in scored if s == best]
    return _pick(arg_set, deterministic, rng)


def _select_max_degree(graph, state, forced, deterministic, rng):
    best = -1
    arg_set: list[tuple[int, int]] = []
    for i in _eligible(state, forced):
        score = sum(1 for j in graph.neighbors[i] if state[j] != 0)
        if score > best:
            best, arg_set = score, [(i, 0)]
        elif score == best:
            arg_set.append((i, 0))
    if best <= 0:
        raise AssertionError("no active neighborhood while active edges remain")
    return _pick(arg_set, deterministic, rng)


def _select_rand(dyn, state, forced, deterministic, rng):
    endpoints = [i for i in _active_endpoints(dyn, state) if i not in forced]
    if not endpoints:
        raise AssertionError("active edge with both endpoints already selected")
    if deterministic:
        return endpoints[0], 0
    return rng.choice(endpoints), 0


def _run_vc(graph: TypedBipartiteGraph, constants: PayoffConstants) -> GreedyResult:
    """One-shot variant: control the residual minimum cover plus the rho-positive set.

    The cover set is built for forcing at step n onto the converged profile;
    holding it from step 0 occasionally strands other players, so the static
    set is widened (zero-forcing stranded or still-active players, lowest
    index first) until the from-scratch hold anti-coordinates.
    """
    n = graph.n
    dyn = Dynamics(graph, constants)
    residual = vc.build_residual(graph, constants)
    cover = vc.min_vertex_cover(residual)
    rho = vc.compute_rho_positive(graph, constants, residual, cover)
    policy = vc.assemble_pi_v(graph, constants, residual, cover, rho)

    chosen = set(cover | rho)
    while True:
        final, _, _ = dyn.run_constant((2,) * n, {i: 0 for i in chosen}, horizon=n)
        problems = {i for i in range(n) if final[i] == 2}
        for i, j in dyn.edge_list:
            if final[i] == 1 and final[j] == 1:
                problems.add(i)
                problems.add(j)
        problems -= chosen
        if not problems:
            break
        chosen.add(min(problems))

    selected = sorted(chosen)
    forced_actions = {i: Action.ZERO for i in selected}
    return GreedyResult(
        variant=Variant.VC,
        controlled=selected,
        forced=forced_actions,
        convergence_times=[],
        final_profile=ActionProfile(final),
        static_policy=StaticPolicy(selected, forced_actions),
        dynamic_policy=policy,
        staged=True,
    )
