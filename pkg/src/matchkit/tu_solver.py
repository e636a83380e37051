"""Stable-matching existence in TU markets via LP duality.

The fractional cover program over singleton and firm coalitions is solved
exactly; its value equals the best integral partition value precisely when
a stable matching exists, in which case prices fall out of the binding
coalition constraints of the optimal partition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SizeGuardExceeded
from .model import (
    Coalition,
    DEFAULT_GUARD,
    SizeGuard,
    TuMarket,
    TuMatching,
    WorkerSet,
    check_guard,
    coalition_value,
    require_valid,
    set_key,
    tu_utilities,
    validate_tu_matching,
)
from .simplex import simplex_max

ZERO = Fraction(0)


@dataclass(frozen=True)
class TuLpProblem:
    """min sum x(i)  s.t.  sum_{i in S} x(i) >= V(S) for S in I u E."""

    agents: tuple[str, ...]
    coalitions: tuple[Coalition, ...]
    values: tuple[Fraction, ...]

    def firm_coalitions(self) -> list[tuple[Coalition, Fraction]]:
        return [
            (c, v)
            for c, v in zip(self.coalitions, self.values)
            if not c.is_singleton
        ]


@dataclass(frozen=True)
class DualSolution:
    """Nonnegative coalition weights covering every agent exactly once."""

    weights: dict[Coalition, Fraction]
    value: Fraction


@dataclass(frozen=True)
class StabilityViolation:
    kind: str  # "ir" or "block"
    agent: str | None = None
    coalition: Coalition | None = None
    deficit: Fraction | None = None
    note: str = ""


@dataclass(frozen=True)
class TuStabilityVerdict:
    stable: bool
    violations: tuple[StabilityViolation, ...] = ()


@dataclass(frozen=True)
class TuStabilityReport:
    lp_value: Fraction
    partition_value: Fraction
    stable: bool
    matching: TuMatching | None
    certificate: DualSolution | None
    optimal_partition: dict[str, WorkerSet]
    lp_primal: dict[str, Fraction]


def agent_order(m: TuMarket) -> tuple[str, ...]:
    return tuple(sorted(m.firms) + sorted(m.workers))


def potential_coalitions(m: TuMarket) -> list[Coalition]:
    """I u E: all singletons, then every firm coalition {f} u S with S
    acceptable to f and f acceptable to every member of S."""
    out = [Coalition.singleton(f, is_firm=True) for f in sorted(m.firms)]
    out += [Coalition.singleton(w, is_firm=False) for w in sorted(m.workers)]
    for f in sorted(m.firms):
        for s in m.acceptable_sets(f):
            if all(f in m.worker_valuations.get(w, {}) for w in s):
                out.append(Coalition.of(f, s))
    return out


def build_lp_problem(m: TuMarket, guard: SizeGuard = DEFAULT_GUARD) -> TuLpProblem:
    require_valid(m)
    check_guard(m, guard)
    coalitions = tuple(potential_coalitions(m))
    if len(coalitions) > guard.max_coalitions:
        raise SizeGuardExceeded(
            f"{len(coalitions)} coalitions > guard {guard.max_coalitions}"
        )
    values = tuple(coalition_value(m, c) for c in coalitions)
    return TuLpProblem(agents=agent_order(m), coalitions=coalitions, values=values)


def max_partition_value(
    m: TuMarket, guard: SizeGuard = DEFAULT_GUARD
) -> tuple[Fraction, dict[str, WorkerSet]]:
    """Best aggregate value over all assignments of disjoint acceptable sets
    to firms (workers only go where the firm is acceptable to them), by
    exhaustive recursion; returns the lexicographically-first maximizer in
    (firm order, set order)."""
    require_valid(m)
    check_guard(m, guard)
    firms = sorted(m.firms)
    options: list[list[tuple[WorkerSet, Fraction]]] = []
    for f in firms:
        opts: list[tuple[WorkerSet, Fraction]] = [(frozenset(), ZERO)]
        for s in m.acceptable_sets(f):
            if all(f in m.worker_valuations.get(w, {}) for w in s):
                value = m.firm_value(f, s) + sum(
                    (m.worker_value(w, f) for w in s), ZERO
                )
                opts.append((s, value))
        options.append(opts)

    best_value = ZERO
    best_assignment: list[WorkerSet] = [frozenset() for _ in firms]
    chosen: list[WorkerSet] = []

    def recurse(i: int, used: set[str], total: Fraction) -> None:
        nonlocal best_value, best_assignment
        if i == len(firms):
            if total > best_value:
                best_value = total
                best_assignment = list(chosen)
            return
        for s, v in options[i]:
            if s and (s & used):
                continue
            chosen.append(s)
            used |= s
            recurse(i + 1, used, total + v)
            used -= s
            chosen.pop()

    # The all-empty assignment (value 0) is always feasible, so best_value
    # starts at 0 with everyone unmatched.
    recurse(0, set(), ZERO)
    return best_value, dict(zip(firms, best_assignment))


def solve_lp(
    problem: TuLpProblem, canonical: bool = True
) -> tuple[dict[str, Fraction], DualSolution]:
    """Exact optimal primal point and dual weights with equal values.

    The dual (coverage) program is solved by simplex starting from the
    all-singletons basis; the primal point is read off the shadow prices
    and, when ``canonical``, lexicographically minimized in agent order so
    that reported prices are reproducible across optima.
    """
    agents = problem.agents
    idx = {a: i for i, a in enumerate(agents)}
    firm_cols = problem.firm_coalitions()
    n_rows = len(agents)

    cols = [[ZERO] * n_rows for _ in firm_cols]
    for j, (c, _) in enumerate(firm_cols):
        for a in c.members():
            cols[j][idx[a]] = Fraction(1)
    rows = [[cols[j][i] for j in range(len(firm_cols))] for i in range(n_rows)]
    rhs = [Fraction(1)] * n_rows
    objective = [v for _, v in firm_cols]
    result = simplex_max(objective, rows, rhs)

    x = result.duals
    if canonical:
        x = _lex_min_primal(problem, firm_cols, result.value, x)

    weights: dict[Coalition, Fraction] = {}
    coverage = [ZERO] * n_rows
    for j, (c, _) in enumerate(firm_cols):
        if result.x[j] != 0:
            weights[c] = result.x[j]
            for a in c.members():
                coverage[idx[a]] += result.x[j]
    for c in problem.coalitions:
        if c.is_singleton:
            (a,) = c.members()
            slack = Fraction(1) - coverage[idx[a]]
            if slack != 0:
                weights[c] = slack
    dual = DualSolution(weights=weights, value=result.value)
    _check_lp_consistency(problem, x, dual)
    return {a: x[i] for a, i in idx.items()}, dual


def _lex_min_primal(problem, firm_cols, vtilde, x0):
    """Among optimal primal points, take the lexicographically smallest in
    agent order, fixing one coordinate at a time (a coordinate already at
    zero needs no solve: zero is its floor)."""
    n = len(problem.agents)
    idx = {a: i for i, a in enumerate(problem.agents)}
    base_rows = []
    base_rhs = []
    for c, v in firm_cols:
        row = [ZERO] * n
        for a in c.members():
            row[idx[a]] = Fraction(-1)
        base_rows.append(row)
        base_rhs.append(-v)
    base_rows.append([Fraction(1)] * n)
    base_rhs.append(vtilde)

    current = list(x0)
    fixed: list[Fraction | None] = [None] * n
    for i in range(n):
        if current[i] == 0:
            fixed[i] = ZERO
            continue
        rows = [list(r) for r in base_rows]
        rhs = list(base_rhs)
        for j in range(i):
            unit = [ZERO] * n
            unit[j] = Fraction(1)
            rows.append(unit)
            rhs.append(fixed[j])
            rows.append([-v for v in unit])
            rhs.append(-fixed[j])
        objective = [ZERO] * n
        objective[i] = Fraction(-1)
        res = simplex_max(objective, rows, rhs)
        current = res.x
        fixed[i] = current[i]
    return current


def _check_lp_consistency(problem, x, dual) -> None:
    """Internal exactness checks: equal objective values, complementary
    slackness both ways, unit coverage."""
    idx = {a: i for i, a in enumerate(problem.agents)}
    total = sum(x, ZERO)
    assert total == dual.value, "primal/dual value mismatch"
    coverage = {a: ZERO for a in problem.agents}
    for c, w in dual.weights.items():
        assert w >= 0
        for a in c.members():
            coverage[a] += w
        hat = sum((x[idx[a]] for a in c.members()), ZERO)
        value = (
            problem.values[problem.coalitions.index(c)]
            if c in problem.coalitions
            else ZERO
        )
        if w > 0:
            assert hat == value, "positive weight on a slack coalition"
    for a in problem.agents:
        assert coverage[a] == 1, "coverage is not exactly one"


def check_stable_tu(m: TuMarket, mu: TuMatching) -> TuStabilityVerdict:
    """Individual rationality plus the transferable-utility no-blocking
    test: every potential coalition's members must jointly hold at least the
    coalition's value."""
    problems = validate_tu_matching(m, mu)
    if problems:
        raise ValueError("; ".join(problems))
    violations: list[StabilityViolation] = []
    for w in sorted(m.workers):
        f = mu.firm_of(w)
        if f is not None and f not in m.worker_valuations.get(w, {}):
            violations.append(
                StabilityViolation(
                    kind="ir", agent=w, note=f"matched to unacceptable firm {f!r}"
                )
            )
    for f in sorted(m.firms):
        staff = mu.workers_of(f)
        if staff and staff not in m.firm_valuations.get(f, {}):
            violations.append(
                StabilityViolation(
                    kind="ir",
                    agent=f,
                    note=f"matched to unacceptable set {set_key(staff)}",
                )
            )
    if violations:
        return TuStabilityVerdict(stable=False, violations=tuple(violations))

    utilities = tu_utilities(m, mu)
    for a in agent_order(m):
        if utilities[a] < 0:
            violations.append(
                StabilityViolation(
                    kind="ir",
                    agent=a,
                    deficit=-utilities[a],
                    note="negative utility",
                )
            )
    for c in potential_coalitions(m):
        if c.is_singleton:
            continue
        held = sum((utilities[a] for a in c.members()), ZERO)
        value = coalition_value(m, c)
        if held < value:
            violations.append(
                StabilityViolation(kind="block", coalition=c, deficit=value - held)
            )
    return TuStabilityVerdict(stable=not violations, violations=tuple(violations))


def find_stable_matching_tu(
    m: TuMarket,
    guard: SizeGuard = DEFAULT_GUARD,
    canonical_prices: bool = True,
) -> TuStabilityReport:
    """Decide stable-matching existence: stable with (mu, p) when the LP
    value equals the best partition value, otherwise unstable with the
    fractional cover as certificate."""
    problem = build_lp_problem(m, guard)
    vbar, partition = max_partition_value(m, guard)
    x, dual = solve_lp(problem, canonical=canonical_prices)
    vtilde = dual.value
    assert vtilde >= vbar, "partition value exceeded the LP value"

    if vtilde > vbar:
        return TuStabilityReport(
            lp_value=vtilde,
            partition_value=vbar,
            stable=False,
            matching=None,
            certificate=dual,
            optimal_partition=partition,
            lp_primal=x,
        )

    assignment: dict[str, str] = {}
    prices: dict[str, Fraction] = {}
    for f, staff in partition.items():
        for w in staff:
            assignment[w] = f
            prices[w] = x[w] - m.worker_value(w, f)
    for w in m.workers:
        if w not in assignment:
            assert x[w] == 0, f"unmatched worker {w!r} with positive LP value"
    for f, staff in partition.items():
        implied = m.firm_value(f, staff) - sum((prices[w] for w in staff), ZERO)
        assert implied == x[f], f"firm {f!r} value inconsistent with binding coalition"
    matching = TuMatching(assignment=assignment, prices=prices)
    verdict = check_stable_tu(m, matching)
    assert verdict.stable, f"constructed matching unstable: {verdict.violations}"
    return TuStabilityReport(
        lp_value=vtilde,
        partition_value=vbar,
        stable=True,
        matching=matching,
        certificate=dual,
        optimal_partition=partition,
        lp_primal=x,
    )
