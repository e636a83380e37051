#!/usr/bin/env python3
"""Run the four seeded property sweeps standalone with a timing summary.

Usage: python3 scripts/run_property_suites.py [--count N]

Each sweep scans seeds from 0 upward until it has N qualifying instances
(default 500), so results are reproducible run to run.
"""

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from matchkit import (  # noqa: E402
    build_hypergraph,
    check_balanced,
    check_specialized,
    check_stable_discrete,
    check_stable_tu,
    enumerate_stable_matchings,
    find_stable_matching_tu,
    is_specialist,
    prop2_relation,
)
from matchkit.generator import (  # noqa: E402
    GenParams,
    gen_discrete_market,
    gen_roadmap_instance,
    gen_tu_market,
)

BASE = dict(
    firm_count=4,
    worker_count=6,
    max_acceptable_sets_per_firm=3,
    max_set_size=3,
    value_range=(Fraction(0), Fraction(10)),
    acceptability_density=0.85,
)


def sweep_theorem_1(count):
    checked = failures = seed = 0
    while checked < count:
        m = gen_tu_market(GenParams(seed=seed, **BASE))
        seed += 1
        if not check_balanced(build_hypergraph(m)).balanced:
            continue
        checked += 1
        rep = find_stable_matching_tu(m)
        if not (rep.stable and check_stable_tu(m, rep.matching).stable):
            failures += 1
            print(f"  !! seed {seed - 1}: balanced TU market without stable matching")
    return checked, failures, seed


def sweep_theorem_2(count):
    checked = failures = seed = 0
    while checked < count:
        m = gen_discrete_market(GenParams(seed=seed, **BASE))
        seed += 1
        if not check_balanced(build_hypergraph(m)).balanced:
            continue
        checked += 1
        found = enumerate_stable_matchings(m, limit=1)
        if not (found and check_stable_discrete(m, found[0]).stable):
            failures += 1
            print(f"  !! seed {seed - 1}: balanced discrete market with empty stable set")
    return checked, failures, seed


def sweep_proposition_2(count):
    failures = 0
    for seed in range(count):
        if not prop2_relation(gen_discrete_market(GenParams(seed=seed, **BASE))).consistent:
            failures += 1
            print(f"  !! seed {seed}: TU demand type with a qualifying cycle")
    return count, failures, count


def sweep_theorem_3(count):
    checked = failures = seed = 0
    while checked < count:
        params = GenParams(seed=seed, **BASE)
        seed += 1
        try:
            rm, market = gen_roadmap_instance(params, kind="tu" if seed % 2 else "discrete")
        except ValueError:
            continue
        checked += 1
        good = (
            all(is_specialist(rm, w) for w in market.workers)
            and check_specialized(market, rm).specialized
            and check_balanced(build_hypergraph(market)).balanced
        )
        if not good:
            failures += 1
            print(f"  !! seed {seed - 1}: roadmap instance violates the guarantee")
    return checked, failures, seed


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--count", type=int, default=500)
    args = parser.parse_args()
    sweeps = [
        ("theorem 1 (balanced TU -> stable)", sweep_theorem_1),
        ("theorem 2 (balanced discrete -> stable)", sweep_theorem_2),
        ("proposition 2 (TU demand type -> condition)", sweep_proposition_2),
        ("theorem 3 (roadmap -> balanced)", sweep_theorem_3),
    ]
    exit_code = 0
    for label, fn in sweeps:
        t0 = time.perf_counter()
        checked, failures, seeds = fn(args.count)
        dt = time.perf_counter() - t0
        status = "ok" if failures == 0 else f"{failures} FAILURES"
        print(f"{label}: {checked} instances from {seeds} seeds, {dt:.1f}s -> {status}")
        if failures:
            exit_code = 1
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
