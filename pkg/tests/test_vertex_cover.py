import random
from fractions import Fraction

from anticoord.benchmarks import make_benchmark
from anticoord.exact import brute_static, brute_vertex_cover
from anticoord.experiments import gen_random_bipartite, grid_constants, random_instances
from anticoord.game_core import Action, ActionProfile, PayoffConstants, TypedBipartiteGraph
from anticoord.policies import cost_dynamic, validate_dynamic
from anticoord.vertex_cover import (
    ResidualGraph,
    build_residual,
    compute_rho_positive,
    min_vertex_cover,
    solve,
)
from conftest import HUBS8_CONVERGED, profile


class TestResidual:
    def test_hubs8(self, hubs8, hubs8_constants):
        res = build_residual(hubs8, hubs8_constants)
        assert res.nodes == {0, 1, 2, 5, 6, 7}
        assert res.edges == {(2, 5)}
        assert res.base_profile == profile(*HUBS8_CONVERGED)

    def test_all_one_regime_keeps_everything(self):
        g = gen_random_bipartite(12, 0.3, seed=4)
        c = PayoffConstants(Fraction(2, 19), Fraction(2, 19))
        res = build_residual(g, c)
        assert res.nodes == frozenset(range(12))
        assert res.edges == g.edges


class TestMinVertexCover:
    def test_single_edge_prefers_low_index(self, hubs8, hubs8_constants):
        res = build_residual(hubs8, hubs8_constants)
        assert min_vertex_cover(res) == {2}

    def test_empty_edges(self, hubs8):
        res = ResidualGraph(frozenset({0, 1}), frozenset(), profile(1, 1, 0, 0, 0, 0, 0, 0), hubs8.types)
        assert min_vertex_cover(res) == frozenset()

    def test_complete_bipartite_2x3(self):
        g = TypedBipartiteGraph(
            8,
            (0, 1, 1, 0, 0, 0, 0, 0),
            [(1, 5), (1, 6), (1, 7), (2, 5), (2, 6), (2, 7)],
        )
        res = ResidualGraph(
            frozenset({1, 2, 5, 6, 7}),
            g.edges,
            ActionProfile.from_bits([0, 1, 1, 0, 0, 1, 1, 1]),
            g.types,
        )
        cover = min_vertex_cover(res)
        assert cover == {1, 2}
        assert len(cover) == len(brute_vertex_cover(res.nodes, res.edges))

    def test_matches_exhaustive_minimum_on_random_residuals(self):
        rng = random.Random(99)
        grid = grid_constants()
        for _ in range(200):
            g = gen_random_bipartite(2 * rng.randint(2, 7), rng.choice([0.2, 0.4, 0.6]), rng.randrange(10**6))
            c = PayoffConstants(grid[rng.randrange(10)], grid[rng.randrange(10)])
            res = build_residual(g, c)
            cover = min_vertex_cover(res)
            assert all(i in cover or j in cover for i, j in res.edges)
            assert len(cover) == len(brute_vertex_cover(res.nodes, res.edges))


class TestRhoPositive:
    def test_hubs8_cover_low(self, hubs8, hubs8_constants):
        res = build_residual(hubs8, hubs8_constants)
        assert compute_rho_positive(hubs8, hubs8_constants, res, frozenset({2})) == {4}

    def test_hubs8_cover_high(self, hubs8, hubs8_constants):
        res = build_residual(hubs8, hubs8_constants)
        assert compute_rho_positive(hubs8, hubs8_constants, res, frozenset({5})) == {3}

    def test_empty_cover_no_rho(self):
        # dominance-solvable anti-coordinating instance: nothing to cover,
        # every decided-0 player keeps enough 1-neighbors
        line = make_benchmark("line", 5)
        c = PayoffConstants(Fraction(2, 5), Fraction(3, 2))
        res = build_residual(line, c)
        assert res.edges == frozenset()
        assert compute_rho_positive(line, c, res, frozenset()) == frozenset()


class TestPolicyAssembly:
    def test_hubs8_policy(self, hubs8, hubs8_constants):
        solution = solve(hubs8, hubs8_constants)
        pol = solution.policy
        assert pol.head_length == 9
        assert all(not s for s in pol.head[:8])
        assert pol.head[8] == {2: Action.ZERO}
        assert pol.tail == {2: Action.ZERO, 4: Action.ZERO}
        report = validate_dynamic(hubs8, hubs8_constants, pol)
        assert report.feasible and report.dynamic_cost == 2

    def test_all_one_star_cost_one(self):
        star = make_benchmark("star", 4)
        c = PayoffConstants(Fraction(1, 2), Fraction(1, 5))
        solution = solve(star, c)
        assert solution.cover == {0}
        assert solution.rho_positive == frozenset()
        assert solution.policy.tail == {0: Action.ZERO}
        assert cost_dynamic(solution.policy, 4) == 1

    def test_trivial_instance_empty_policy(self):
        line = make_benchmark("line", 5)
        c = PayoffConstants(Fraction(2, 5), Fraction(3, 2))
        solution = solve(line, c)
        assert solution.policy.head_length == 0 and not solution.policy.tail

    def test_undecided_nodes_forced_to_one(self):
        # mid-regime star: everybody stays undecided, the cover takes the
        # center and the fringe is forced to 1 at step n
        star = make_benchmark("star", 5)
        c = PayoffConstants(Fraction(3, 2), Fraction(3, 8))
        solution = solve(star, c)
        assert solution.cover == {0}
        stage = solution.policy.head[5]
        assert stage[0] is Action.ZERO
        assert {i for i in stage if stage[i] is Action.ONE} == {1, 2, 3, 4}
        assert validate_dynamic(star, c, solution.policy).feasible

    def test_cover_policy_feasible_on_random_instances(self):
        for graph, constants in random_instances(150, seed=31415):
            solution = solve(graph, constants)
            assert validate_dynamic(graph, constants, solution.policy).feasible

    def test_all_decide_one_cost_equals_cover(self):
        # when every player decides 1 in one step, the policy cost equals
        # both the full-graph minimum cover and the optimal static cost
        rng = random.Random(8)
        checked = 0
        while checked < 25:
            n = 2 * rng.randint(3, 6)
            g = gen_random_bipartite(n, 0.35, rng.randrange(10**6))
            c = PayoffConstants(Fraction(2, 19), Fraction(2, 19))
            if any(c.for_player(g, i) * g.degree(i) >= 1 for i in range(n)):
                continue
            solution = solve(g, c)
            cover_full = brute_vertex_cover(range(n), g.edges)
            _, static_cost = brute_static(g, c)
            assert cost_dynamic(solution.policy, n) == len(cover_full) == static_cost
            checked += 1
