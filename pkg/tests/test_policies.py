import json
import random
from fractions import Fraction

import pytest

from anticoord.benchmarks import make_benchmark
from anticoord.experiments import random_instances
from anticoord.game_core import Action, PayoffConstants
from anticoord.policies import (
    DynamicPolicy,
    StaticPolicy,
    check_lemma_properties,
    cost_dynamic,
    cost_static,
    embed_static,
    policy_from_dict,
    validate_dynamic,
    validate_static,
)
from anticoord.vertex_cover import solve as vc_solve


class TestPolicyTypes:
    def test_forced_map_must_match_controlled_set(self):
        with pytest.raises(ValueError, match="exactly"):
            StaticPolicy([1, 2], {1: Action.ZERO})

    def test_forced_values_must_be_decided(self):
        with pytest.raises(ValueError):
            DynamicPolicy([({0}, {0: Action.UNDECIDED})])

    def test_json_round_trip_static(self):
        pol = StaticPolicy([2, 4], {2: Action.ZERO, 4: Action.ONE})
        again = policy_from_dict(json.loads(json.dumps(pol.to_dict())))
        assert isinstance(again, StaticPolicy)
        assert again.forced == pol.forced

    def test_json_round_trip_dynamic(self):
        pol = DynamicPolicy([({0}, {0: Action.ONE}), {}], [3], {3: Action.ZERO})
        again = policy_from_dict(json.loads(json.dumps(pol.to_dict())))
        assert isinstance(again, DynamicPolicy)
        assert again.head == pol.head and again.tail == pol.tail

    def test_unknown_policy_payload(self):
        with pytest.raises(ValueError):
            policy_from_dict({"nope": {}})


class TestCosts:
    def test_static_cost_is_cardinality(self):
        assert cost_static(StaticPolicy.uniform([0], Action.ZERO)) == 1
        assert cost_static(StaticPolicy.empty()) == 0
        assert cost_static(StaticPolicy.uniform([3, 7], Action.ZERO)) == 2

    def test_two_step_head(self):
        pol = DynamicPolicy([({0}, {0: Action.ZERO})] * 2)
        assert cost_dynamic(pol, 4) == Fraction(1, 2)

    def test_tail_only(self):
        pol = DynamicPolicy([{}] * 4, [0], {0: Action.ZERO})
        assert cost_dynamic(pol, 4) == 1

    def test_embedding_doubles_static_cost(self):
        for k in (1, 2, 3):
            pol = StaticPolicy.uniform(range(k), Action.ZERO)
            assert cost_dynamic(embed_static(pol, 8), 8) == 2 * cost_static(pol)

    def test_head_stages_past_n_vanish_in_the_average(self):
        pol = DynamicPolicy([{}] * 8 + [({2}, {2: Action.ZERO})], [2, 4], {2: 0, 4: 0})
        assert cost_dynamic(pol, 8) == 2


class TestValidateStatic:
    def test_hubs8_pair_feasible(self, hubs8, hubs8_constants):
        report = validate_static(hubs8, hubs8_constants, StaticPolicy.uniform([2, 4], Action.ZERO))
        assert report.feasible and report.static_cost == 2

    def test_hubs8_wrong_pair_infeasible(self, hubs8, hubs8_constants):
        report = validate_static(hubs8, hubs8_constants, StaticPolicy.uniform([4, 5], Action.ZERO))
        assert not report.feasible
        assert report.witness == ("active_edge", (3, 6), 8)

    def test_star_empty_policy_infeasible(self):
        star = make_benchmark("star", 4)
        c = PayoffConstants(Fraction(1, 2), Fraction(1, 5))
        report = validate_static(star, c, StaticPolicy.empty())
        assert not report.feasible
        assert report.witness[0] == "active_edge"


class TestValidateDynamic:
    def test_star_two_step_policy(self):
        star = make_benchmark("star", 4)
        c = PayoffConstants(Fraction(3, 2), Fraction(1, 2))
        pol = DynamicPolicy([({0}, {0: Action.ZERO})] * 2)
        report = validate_dynamic(star, c, pol)
        assert report.feasible and report.dynamic_cost == Fraction(1, 2)

    def test_hubs8_cover_policy(self, hubs8, hubs8_constants):
        solution = vc_solve(hubs8, hubs8_constants)
        report = validate_dynamic(hubs8, hubs8_constants, solution.policy)
        assert report.feasible and report.dynamic_cost == 2

    def test_hubs8_empty_policy_witness(self, hubs8, hubs8_constants):
        report = validate_dynamic(hubs8, hubs8_constants, DynamicPolicy.empty())
        assert not report.feasible
        assert report.witness == ("active_edge", (2, 5), 8)

    def test_undecided_witness(self):
        line = make_benchmark("line", 5)
        c = PayoffConstants(Fraction(3, 5), Fraction(3, 5))
        report = validate_dynamic(line, c, DynamicPolicy.empty())
        assert not report.feasible
        assert report.witness == ("undecided", 1, 5)

    def test_feasible_static_embeds_feasibly(self):
        # no-cycle property: a feasible static policy replayed forever stays feasible
        from anticoord.exact import brute_static

        count = 0
        for graph, constants in random_instances(40, seed=77, n_max=10):
            policy, _ = brute_static(graph, constants)
            assert validate_static(graph, constants, policy).feasible
            assert validate_dynamic(graph, constants, embed_static(policy, graph.n)).feasible
            count += 1
        assert count == 40


class TestLemmaHarness:
    def test_star_case_b_dominance_solvable_empty(self):
        star = make_benchmark("star", 4)
        c = PayoffConstants(Fraction(3, 2), Fraction(1, 5))  # NE anti-coordinates
        report = check_lemma_properties(star, c)
        assert report["L3"]["dominance_solvable"] and report["L3"]["holds"]
        assert report["L2"]["holds"]
        assert report["L2"]["dynamic_cost"] == 0

    def test_star_case_a_nonempty_tail(self):
        star = make_benchmark("star", 4)
        c = PayoffConstants(Fraction(1, 2), Fraction(1, 5))  # NE is all-one
        report = check_lemma_properties(star, c)
        assert report["L3"]["dominance_solvable"] and report["L3"]["holds"]
        assert report["L2"]["dynamic_cost"] == 1

    def test_ring8_case_e_reaches_equilibrium(self):
        ring = make_benchmark("ring", 8)
        c = PayoffConstants(Fraction(3, 2), Fraction(3, 5))
        report = check_lemma_properties(ring, c)
        assert report["L4"]["equilibria"] >= 1 and report["L4"]["holds"]

    def test_l1_static_policies_persist(self, hubs8, hubs8_constants):
        policies = [
            StaticPolicy.uniform([2, 4], Action.ZERO),
            StaticPolicy.uniform([4, 5], Action.ZERO),  # infeasible, skipped
        ]
        report = check_lemma_properties(hubs8, hubs8_constants, static_policies=policies)
        assert len(report["L1"]) == 1
        assert report["L1"][0]["holds"]

    def test_lemmas_on_random_instances(self):
        for graph, constants in random_instances(25, seed=123, n_max=8):
            report = check_lemma_properties(graph, constants)
            assert report["L2"]["holds"]
            assert report["L3"]["holds"]
            assert report["L4"]["holds"]
