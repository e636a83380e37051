from itertools import product

import pytest

from matchkit import (
    DiscreteMarket,
    DiscreteMatching,
    check_stable_discrete,
    enumerate_stable_matchings,
    find_blocking_coalition,
    is_individually_rational,
    run_blocking_dynamics,
)
from matchkit.errors import SizeGuardExceeded
from matchkit.generator import GenParams, gen_discrete_market
from matchkit.model import SizeGuard

fs = frozenset


def all_matchings(m: DiscreteMarket):
    """Every worker-to-firm-or-none map, with no pruning whatsoever."""
    workers = sorted(m.workers)
    firms = sorted(m.firms)
    for combo in product([None] + firms, repeat=len(workers)):
        yield DiscreteMatching(
            assignment={w: f for w, f in zip(workers, combo) if f is not None}
        )


class TestIndividualRationality:
    def test_empty_matching(self, market1):
        assert is_individually_rational(market1, DiscreteMatching(assignment={})) == []

    def test_unwanted_singleton(self, market1):
        mu = DiscreteMatching(assignment={"w1": "f1"})
        violations = is_individually_rational(market1, mu)
        assert any(v.agent == "f1" for v in violations)

    def test_example2_rational(self, example2_discrete):
        mu = DiscreteMatching(assignment={"w1": "f1", "w2": "f1", "w3": "f2"})
        assert is_individually_rational(example2_discrete, mu) == []

    def test_worker_at_unacceptable_firm(self, example2_discrete):
        mu = DiscreteMatching(assignment={"w3": "f1"})
        violations = is_individually_rational(example2_discrete, mu)
        assert any(v.agent == "w3" for v in violations)


class TestFindBlocking:
    def test_market1_poaches_w2(self, market1):
        mu = DiscreteMatching(assignment={"w1": "f1", "w2": "f1"})
        block = find_blocking_coalition(market1, mu)
        assert block is not None
        assert (block.firm, block.workers) == ("f2", fs({"w2"}))

    def test_example2_no_block(self, example2_discrete):
        mu = DiscreteMatching(assignment={"w1": "f1", "w2": "f1", "w3": "f2"})
        assert find_blocking_coalition(example2_discrete, mu) is None

    def test_no_preferences_no_block(self):
        m = DiscreteMarket(
            firms={"f1", "f2"},
            workers={"w"},
            firm_prefs={"f1": (), "f2": ()},
            worker_prefs={"w": ("f1",)},
        )
        assert find_blocking_coalition(m, DiscreteMatching(assignment={})) is None

    def test_returned_block_satisfies_definition(self):
        for seed in range(60):
            m = gen_discrete_market(GenParams(seed=seed, firm_count=3, worker_count=4))
            for mu in [DiscreteMatching(assignment={})] + enumerate_stable_matchings(m)[:1]:
                block = find_blocking_coalition(m, mu)
                if block is None:
                    continue
                assert m.firm_strictly_prefers(
                    block.firm, block.workers, mu.workers_of(block.firm)
                )
                for w in block.workers:
                    assert m.worker_weakly_prefers(w, block.firm, mu.firm_of(w))


class TestCheckStable:
    def test_example2_stable(self, example2_discrete):
        mu = DiscreteMatching(assignment={"w1": "f1", "w2": "f1", "w3": "f2"})
        assert check_stable_discrete(example2_discrete, mu).stable

    def test_market1_nothing_is_stable(self, market1):
        for mu in all_matchings(market1):
            assert not check_stable_discrete(market1, mu).stable

    def test_empty_market(self):
        m = DiscreteMarket(firms=set(), workers=set(), firm_prefs={}, worker_prefs={})
        assert check_stable_discrete(m, DiscreteMatching(assignment={})).stable


class TestEnumerate:
    def test_market1_empty(self, market1):
        assert enumerate_stable_matchings(market1) == []

    def test_marriage_exactly_two(self, marriage):
        found = enumerate_stable_matchings(marriage)
        assert [mu.assignment for mu in found] == [
            {"m1": "x1", "m2": "x2"},
            {"m1": "x2", "m2": "x1"},
        ]

    def test_appendix_c_contains_favorite_match(self, appendix_c_discrete):
        found = enumerate_stable_matchings(appendix_c_discrete)
        assert DiscreteMatching(
            assignment={"w1": "f1", "w2": "f1", "w4": "f1"}
        ) in found

    def test_example2_unique_stable_matching(self, example2_discrete):
        # The one stable outcome; the alternative that breaks the narrated
        # cycle (f2 with w1, f3 with the pair) is blocked by f1 poaching w1.
        found = enumerate_stable_matchings(example2_discrete)
        assert [mu.assignment for mu in found] == [
            {"w1": "f1", "w2": "f1", "w3": "f2"}
        ]
        alt = DiscreteMatching(assignment={"w1": "f2", "w2": "f3", "w3": "f3"})
        verdict = check_stable_discrete(example2_discrete, alt)
        assert not verdict.stable
        assert (verdict.blocking.firm, verdict.blocking.workers) == ("f1", fs({"w1"}))

    def test_completeness_against_brute_force(self):
        for seed in range(50):
            m = gen_discrete_market(GenParams(seed=seed, firm_count=3, worker_count=4,
                                              max_acceptable_sets_per_firm=3,
                                              max_set_size=2))
            expected = sorted(
                (mu.key() for mu in all_matchings(m)
                 if check_stable_discrete(m, mu).stable)
            )
            got = [mu.key() for mu in enumerate_stable_matchings(m)]
            assert got == expected

    def test_limit_short_circuits(self, marriage):
        found = enumerate_stable_matchings(marriage, limit=1)
        assert len(found) == 1
        assert check_stable_discrete(marriage, found[0]).stable

    def test_guard(self, marriage):
        with pytest.raises(SizeGuardExceeded):
            enumerate_stable_matchings(marriage, guard=SizeGuard(max_workers=1))

    def test_marriage_markets_always_have_stable_matchings(self):
        for seed in range(80):
            m = gen_discrete_market(GenParams(seed=seed, firm_count=4, worker_count=5,
                                              max_acceptable_sets_per_firm=4,
                                              max_set_size=1))
            assert enumerate_stable_matchings(m, limit=1)


class TestDynamics:
    def test_market1_cycles_within_eight_steps(self, market1):
        start = DiscreteMatching(assignment={"w1": "f1", "w2": "f1"})
        trace = run_blocking_dynamics(market1, start, max_steps=50)
        assert trace.outcome == "cycle"
        assert trace.revisit == (0, 4)
        assert trace.states[0] == trace.states[4]
        # The narrated loop: w2 defects, f1 fires, f2 switches, f1 rehires.
        assert [
            (mv.kind, mv.firm, tuple(sorted(mv.workers))) for mv in trace.moves
        ] == [
            ("block", "f2", ("w2",)),
            ("block", "f1", ()),
            ("block", "f2", ("w1",)),
            ("block", "f1", ("w1", "w2")),
        ]

    def test_example2_reaches_stability_from_empty(self, example2_discrete):
        trace = run_blocking_dynamics(
            example2_discrete, DiscreteMatching(assignment={}), max_steps=50
        )
        assert trace.outcome == "stable"
        assert trace.stable_at == 2
        final = trace.states[trace.stable_at]
        assert check_stable_discrete(example2_discrete, final).stable
        assert final.assignment == {"w1": "f1", "w2": "f1", "w3": "f2"}

    def test_stable_start_stops_immediately(self, example2_discrete):
        start = DiscreteMatching(assignment={"w1": "f1", "w2": "f1", "w3": "f2"})
        trace = run_blocking_dynamics(example2_discrete, start)
        assert trace.outcome == "stable"
        assert trace.stable_at == 0
        assert trace.moves == ()

    def test_quit_move_fires_first(self, example2_discrete):
        # w3 never accepts f1, so the first move is a quit.
        start = DiscreteMatching(assignment={"w3": "f1"})
        trace = run_blocking_dynamics(example2_discrete, start, max_steps=50)
        assert trace.moves[0].kind == "quit"
        assert trace.moves[0].worker == "w3"

    def test_consecutive_states_differ_by_one_move(self, market1):
        start = DiscreteMatching(assignment={"w1": "f1", "w2": "f1"})
        trace = run_blocking_dynamics(market1, start, max_steps=50)
        assert len(trace.states) == len(trace.moves) + 1

    def test_soundness_over_random_markets(self):
        for seed in range(60):
            m = gen_discrete_market(GenParams(seed=seed, firm_count=3, worker_count=4))
            trace = run_blocking_dynamics(
                m, DiscreteMatching(assignment={}), max_steps=200
            )
            if trace.outcome == "stable":
                assert check_stable_discrete(m, trace.states[trace.stable_at]).stable
            elif trace.outcome == "cycle":
                i, j = trace.revisit
                assert i < j
                assert trace.states[i] == trace.states[j]
