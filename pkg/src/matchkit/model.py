"""Market data model: agents, valuations, ranked preferences, choice functions.

Two market flavors share the same id conventions: agent ids are plain
strings, firm and worker namespaces are disjoint within one market, and the
null firm / empty set are never stored (absence encodes them).  All values
are exact rationals; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import InvalidMarketError, SizeGuardExceeded

WorkerSet = frozenset[str]


def set_key(s: Iterable[str]) -> tuple[str, ...]:
    """Canonical sort key for a worker set (sorted member tuple)."""
    return tuple(sorted(s))


def _freeze_set(s: Iterable[str]) -> WorkerSet:
    return s if isinstance(s, frozenset) else frozenset(s)


@dataclass(frozen=True)
class SizeGuard:
    """Limits under which the exhaustive solvers are allowed to run."""

    max_firms: int = 8
    max_workers: int = 12
    max_coalitions: int = 4096


DEFAULT_GUARD = SizeGuard()


@dataclass(frozen=True, eq=True)
class TuMarket:
    """Transferable-utility market: firm valuations over acceptable worker
    sets, worker valuations over acceptable firms.

    ``firm_valuations[f]`` maps each acceptable set (non-empty) to v_f(S);
    ``worker_valuations[w]`` maps each acceptable firm to v_w(f).  The value
    of staying unmatched is 0 on both sides and is never stored.
    """

    firms: frozenset[str]
    workers: frozenset[str]
    firm_valuations: dict[str, dict[WorkerSet, Fraction]]
    worker_valuations: dict[str, dict[str, Fraction]]

    def __post_init__(self):
        object.__setattr__(self, "firms", frozenset(self.firms))
        object.__setattr__(self, "workers", frozenset(self.workers))
        fv = {
            f: {_freeze_set(s): Fraction(v) for s, v in vals.items()}
            for f, vals in self.firm_valuations.items()
        }
        wv = {
            w: {f: Fraction(v) for f, v in vals.items()}
            for w, vals in self.worker_valuations.items()
        }
        object.__setattr__(self, "firm_valuations", fv)
        object.__setattr__(self, "worker_valuations", wv)

    @property
    def kind(self) -> str:
        return "tu"

    def acceptable_sets(self, f: str) -> tuple[WorkerSet, ...]:
        """A_f in canonical order (sorted by member tuple)."""
        return tuple(sorted(self.firm_valuations.get(f, {}), key=set_key))

    def acceptable_firms(self, w: str) -> frozenset[str]:
        return frozenset(self.worker_valuations.get(w, {}))

    def firm_value(self, f: str, s: WorkerSet) -> Fraction:
        if not s:
            return Fraction(0)
        return self.firm_valuations[f][_freeze_set(s)]

    def worker_value(self, w: str, f: str | None) -> Fraction:
        if f is None:
            return Fraction(0)
        return self.worker_valuations[w][f]


@dataclass(frozen=True, eq=True)
class DiscreteMarket:
    """Discrete market: strict ranked preferences on both sides.

    ``firm_prefs[f]`` lists f's acceptable worker sets best-first; any set
    not listed is strictly worse than the empty set (their relative order is
    irrelevant to stability).  ``worker_prefs[w]`` lists acceptable firms
    best-first; unlisted firms rank below staying unmatched.
    """

    firms: frozenset[str]
    workers: frozenset[str]
    firm_prefs: dict[str, tuple[WorkerSet, ...]]
    worker_prefs: dict[str, tuple[str, ...]]

    def __post_init__(self):
        object.__setattr__(self, "firms", frozenset(self.firms))
        object.__setattr__(self, "workers", frozenset(self.workers))
        fp = {
            f: tuple(_freeze_set(s) for s in prefs)
            for f, prefs in self.firm_prefs.items()
        }
        wp = {w: tuple(prefs) for w, prefs in self.worker_prefs.items()}
        object.__setattr__(self, "firm_prefs", fp)
        object.__setattr__(self, "worker_prefs", wp)

    @property
    def kind(self) -> str:
        return "discrete"

    def acceptable_sets(self, f: str) -> tuple[WorkerSet, ...]:
        """A_f in canonical order (sorted by member tuple)."""
        return tuple(sorted(set(self.firm_prefs.get(f, ())), key=set_key))

    def acceptable_firms(self, w: str) -> frozenset[str]:
        return frozenset(self.worker_prefs.get(w, ()))

    def set_rank(self, f: str, s: WorkerSet) -> int:
        """Rank of a worker set for firm f: list index, len for the empty
        set, len+1 for unlisted sets (all tied below empty)."""
        prefs = self.firm_prefs.get(f, ())
        s = _freeze_set(s)
        if not s:
            return len(prefs)
        try:
            return prefs.index(s)
        except ValueError:
            return len(prefs) + 1

    def firm_strictly_prefers(self, f: str, s1: WorkerSet, s2: WorkerSet) -> bool:
        r1, r2 = self.set_rank(f, s1), self.set_rank(f, s2)
        if r1 == r2:
            return False
        return r1 < r2

    def firm_rank(self, w: str, f: str | None) -> int:
        """Rank of a firm for worker w: list index, len for the null firm,
        len+1 for unlisted firms."""
        prefs = self.worker_prefs.get(w, ())
        if f is None:
            return len(prefs)
        try:
            return prefs.index(f)
        except ValueError:
            return len(prefs) + 1

    def worker_weakly_prefers(self, w: str, f: str | None, g: str | None) -> bool:
        """f is weakly better than g for w (ties between two unlisted firms
        do not count as weak preference unless f == g)."""
        if f == g:
            return True
        return self.firm_rank(w, f) < self.firm_rank(w, g)


Market = TuMarket | DiscreteMarket


def validate_market(m: Market) -> list[str]:
    """Check the structural invariants; returns a list of violations
    (empty means valid)."""
    problems = []
    overlap = m.firms & m.workers
    if overlap:
        problems.append(f"ids used as both firm and worker: {sorted(overlap)}")
    if isinstance(m, TuMarket):
        for f in m.firm_valuations:
            if f not in m.firms:
                problems.append(f"valuation for unknown firm {f!r}")
        for f, vals in m.firm_valuations.items():
            for s in vals:
                if not s:
                    problems.append(f"firm {f!r} lists the empty set as acceptable")
                unknown = s - m.workers
                if unknown:
                    problems.append(
                        f"firm {f!r} set {set_key(s)} references unknown workers {sorted(unknown)}"
                    )
        for w, vals in m.worker_valuations.items():
            if w not in m.workers:
                problems.append(f"valuation for unknown worker {w!r}")
            for f in vals:
                if f not in m.firms:
                    problems.append(f"worker {w!r} values unknown firm {f!r}")
    else:
        for f, prefs in m.firm_prefs.items():
            if f not in m.firms:
                problems.append(f"preferences for unknown firm {f!r}")
            seen = set()
            for s in prefs:
                if not s:
                    problems.append(f"firm {f!r} ranks the empty set")
                if s in seen:
                    problems.append(f"firm {f!r} ranks {set_key(s)} twice")
                seen.add(s)
                unknown = s - m.workers
                if unknown:
                    problems.append(
                        f"firm {f!r} set {set_key(s)} references unknown workers {sorted(unknown)}"
                    )
        for w, prefs in m.worker_prefs.items():
            if w not in m.workers:
                problems.append(f"preferences for unknown worker {w!r}")
            if len(set(prefs)) != len(prefs):
                problems.append(f"worker {w!r} lists a firm twice")
            for f in prefs:
                if f not in m.firms:
                    problems.append(f"worker {w!r} ranks unknown firm {f!r}")
    return problems


def require_valid(m: Market) -> None:
    problems = validate_market(m)
    if problems:
        raise InvalidMarketError("; ".join(problems))


def check_guard(m: Market, guard: SizeGuard = DEFAULT_GUARD) -> None:
    """Raise SizeGuardExceeded if the instance is too large for exhaustive
    solving (firm/worker counts; the coalition-count limb is checked by the
    TU solver once the coalition family is built)."""
    if len(m.firms) > guard.max_firms:
        raise SizeGuardExceeded(f"{len(m.firms)} firms > guard {guard.max_firms}")
    if len(m.workers) > guard.max_workers:
        raise SizeGuardExceeded(f"{len(m.workers)} workers > guard {guard.max_workers}")


def choice(m: DiscreteMarket, f: str, s: Iterable[str]) -> WorkerSet:
    """Ch_f(S): the best-ranked acceptable set contained in S, or the empty
    set when none is."""
    if f not in m.firms:
        raise KeyError(f"unknown firm {f!r}")
    s = _freeze_set(s)
    for candidate in m.firm_prefs.get(f, ()):
        if candidate <= s:
            return candidate
    return frozenset()


def satisfactory_sets(m: DiscreteMarket, f: str) -> tuple[WorkerSet, ...]:
    """Y_f: the acceptable sets S with Ch_f(S) = S, in canonical order."""
    if f not in m.firms:
        raise KeyError(f"unknown firm {f!r}")
    sets = [s for s in m.firm_prefs.get(f, ()) if choice(m, f, s) == s]
    return tuple(sorted(sets, key=set_key))


@dataclass(frozen=True, eq=True)
class Coalition:
    """Either a singleton {i} (firm with empty workers, or a lone worker
    with firm=None) or a firm together with a non-empty worker set."""

    firm: str | None
    workers: WorkerSet

    def __post_init__(self):
        object.__setattr__(self, "workers", _freeze_set(self.workers))
        if self.firm is None and len(self.workers) != 1:
            raise ValueError("a firmless coalition must be a single worker")

    @classmethod
    def singleton(cls, agent: str, *, is_firm: bool) -> "Coalition":
        if is_firm:
            return cls(agent, frozenset())
        return cls(None, frozenset({agent}))

    @classmethod
    def of(cls, firm: str, workers: Iterable[str]) -> "Coalition":
        ws = frozenset(workers)
        if not ws:
            raise ValueError("use Coalition.singleton for one-agent coalitions")
        return cls(firm, ws)

    @property
    def is_singleton(self) -> bool:
        return self.firm is None or not self.workers

    def members(self) -> frozenset[str]:
        if self.firm is None:
            return self.workers
        return self.workers | {self.firm}

    def label(self) -> str:
        return "{" + ",".join(sorted(self.members())) + "}"


def coalition_value(m: TuMarket, c: Coalition) -> Fraction:
    """Aggregate value V(S): v_f(S') plus the members' firm valuations for
    coalitions {f} u S', and 0 for singletons.

    The coalition must belong to I u E: for a firm coalition, S' must be
    acceptable to f and f acceptable to every member.
    """
    if c.firm is None:
        (w,) = c.workers
        if w not in m.workers:
            raise ValueError(f"unknown worker {w!r}")
        return Fraction(0)
    if c.firm not in m.firms:
        raise ValueError(f"unknown firm {c.firm!r}")
    if not c.workers:
        return Fraction(0)
    if c.workers not in m.firm_valuations.get(c.firm, {}):
        raise ValueError(f"{c.label()} is not an acceptable set of {c.firm!r}")
    for w in c.workers:
        if c.firm not in m.worker_valuations.get(w, {}):
            raise ValueError(f"firm {c.firm!r} is unacceptable to worker {w!r}")
    total = m.firm_value(c.firm, c.workers)
    for w in c.workers:
        total += m.worker_value(w, c.firm)
    return total


@dataclass(frozen=True, eq=True)
class TuMatching:
    """Assignment of workers to firms plus a wage schedule.

    Only matched workers appear in ``assignment``; a missing price entry
    means a wage of 0.  Unmatched workers must not carry a nonzero price.
    """

    assignment: dict[str, str]
    prices: dict[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))
        object.__setattr__(
            self, "prices", {w: Fraction(p) for w, p in self.prices.items()}
        )

    def firm_of(self, w: str) -> str | None:
        return self.assignment.get(w)

    def workers_of(self, f: str) -> WorkerSet:
        return frozenset(w for w, g in self.assignment.items() if g == f)

    def price(self, w: str) -> Fraction:
        return self.prices.get(w, Fraction(0))


@dataclass(frozen=True, eq=True)
class DiscreteMatching:
    """Assignment of workers to firms; missing workers are unmatched."""

    assignment: dict[str, str]

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))

    def firm_of(self, w: str) -> str | None:
        return self.assignment.get(w)

    def workers_of(self, f: str) -> WorkerSet:
        return frozenset(w for w, g in self.assignment.items() if g == f)

    def key(self) -> tuple[tuple[str, str], ...]:
        """Canonical identity of the assignment map (for dedup/ordering)."""
        return tuple(sorted(self.assignment.items()))


def validate_tu_matching(m: TuMarket, mu: TuMatching) -> list[str]:
    """Type-validity of (mu, p) against the market: known ids and the
    unmatched-means-zero-price rule."""
    problems = []
    for w, f in mu.assignment.items():
        if w not in m.workers:
            problems.append(f"assignment for unknown worker {w!r}")
        if f not in m.firms:
            problems.append(f"worker {w!r} assigned to unknown firm {f!r}")
    for w, p in mu.prices.items():
        if w not in m.workers:
            problems.append(f"price for unknown worker {w!r}")
        elif w not in mu.assignment and p != 0:
            problems.append(f"unmatched worker {w!r} has nonzero price {p}")
    return problems


def tu_utilities(m: TuMarket, mu: TuMatching) -> dict[str, Fraction]:
    """Per-agent utilities under (mu, p): firms get v_f(set) minus wages,
    workers get v_w(firm) plus wage.  Raises if the matching pairs an agent
    with an unacceptable partner (utility undefined)."""
    problems = validate_tu_matching(m, mu)
    if problems:
        raise InvalidMarketError("; ".join(problems))
    out: dict[str, Fraction] = {}
    for f in m.firms:
        staff = mu.workers_of(f)
        if staff and staff not in m.firm_valuations.get(f, {}):
            raise ValueError(f"firm {f!r} matched to unacceptable set {set_key(staff)}")
        out[f] = m.firm_value(f, staff) - sum(
            (mu.price(w) for w in staff), Fraction(0)
        )
    for w in m.workers:
        f = mu.firm_of(w)
        if f is not None and f not in m.worker_valuations.get(w, {}):
            raise ValueError(f"worker {w!r} matched to unacceptable firm {f!r}")
        out[w] = m.worker_value(w, f) + mu.price(w)
    return out
