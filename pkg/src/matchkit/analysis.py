"""Cycle-condition checking, demand types, and total unimodularity.

A firm's demand type collects the difference vectors of chosen sets as the
available pool expands; entries live in {-1,0,1}.  Total unimodularity of
the union is tested exhaustively with exact integer determinants, and a
qualifying nontrivial odd cycle is converted into an explicit square
submatrix of demand vectors with |det| = 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import SizeGuardExceeded
from .hypergraph import (
    HyperCycle,
    IntMatrix,
    build_hypergraph,
    cycle_incidence_matrix,
    DEFAULT_BUDGET,
    is_cycle,
    is_nontrivial_odd,
    iter_cycles,
)
from .model import (
    DEFAULT_GUARD,
    DiscreteMarket,
    SizeGuard,
    check_guard,
    choice,
    require_valid,
)

MAX_TU_DIM = 24


@dataclass(frozen=True)
class DemandType:
    """Per-firm and pooled difference vectors, indexed by sorted workers."""

    workers: tuple[str, ...]
    per_firm: dict[str, frozenset[tuple[int, ...]]]
    union: frozenset[tuple[int, ...]]

    def matrix(self) -> IntMatrix:
        """Matrix with the pooled vectors as columns, in sorted order."""
        cols = sorted(self.union)
        return IntMatrix(
            rows=self.workers,
            cols=tuple(str(c) for c in cols),
            entries=tuple(
                tuple(col[i] for col in cols) for i in range(len(self.workers))
            ),
        )


@dataclass(frozen=True)
class TuVerdict:
    totally_unimodular: bool
    row_indices: tuple[int, ...] | None = None
    col_indices: tuple[int, ...] | None = None
    determinant: int | None = None


@dataclass(frozen=True)
class Prop1Verdict:
    """guaranteed: no nontrivial odd cycle passes the pairwise-choice
    condition, so a stable matching exists for any worker preferences."""

    guaranteed: bool
    witness: HyperCycle | None = None


@dataclass(frozen=True)
class Prop2Report:
    tu_verdict: TuVerdict
    prop1: Prop1Verdict
    consistent: bool


def demand_type(m: DiscreteMarket, guard: SizeGuard = DEFAULT_GUARD) -> DemandType:
    """All nonzero vectors chi_Ch(S) - chi_Ch(S') over pairs S' strictly
    inside S, per firm and pooled.  Enumerates submasks of every subset, so
    the size guard applies."""
    require_valid(m)
    check_guard(m, guard)
    workers = tuple(sorted(m.workers))
    windex = {w: i for i, w in enumerate(workers)}
    n = len(workers)
    full = 1 << n

    per_firm: dict[str, frozenset[tuple[int, ...]]] = {}
    pooled: set[tuple[int, ...]] = set()
    for f in sorted(m.firms):
        pref_masks = []
        for s in m.firm_prefs.get(f, ()):
            mask = 0
            for w in s:
                mask |= 1 << windex[w]
            pref_masks.append(mask)
        ch = [0] * full
        for mask in range(full):
            for pm in pref_masks:
                if pm & mask == pm:
                    ch[mask] = pm
                    break
        diffs: set[tuple[int, int]] = set()
        for mask in range(full):
            sub = (mask - 1) & mask
            while True:
                a, b = ch[mask], ch[sub]
                if a != b:
                    diffs.add((a & ~b, b & ~a))
                if sub == 0:
                    break
                sub = (sub - 1) & mask
        vectors = set()
        for pos, negm in diffs:
            vec = tuple(
                1 if pos >> i & 1 else (-1 if negm >> i & 1 else 0) for i in range(n)
            )
            if any(vec):
                vectors.add(vec)
        per_firm[f] = frozenset(vectors)
        pooled |= vectors
    return DemandType(workers=workers, per_firm=per_firm, union=frozenset(pooled))


def bareiss_determinant(rows: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_totally_unimodular(matrix: IntMatrix) -> TuVerdict:
    """Exhaustive check of all square submatrices in increasing order,
    lexicographic index order, stopping at the first determinant outside
    {-1, 0, 1}."""
    r, c = matrix.shape
    if r > MAX_TU_DIM or c > MAX_TU_DIM:
        raise SizeGuardExceeded(f"matrix {r}x{c} exceeds {MAX_TU_DIM}x{MAX_TU_DIM}")
    for i in range(r):
        for j in range(c):
            if matrix.entries[i][j] not in (-1, 0, 1):
                return TuVerdict(
                    totally_unimodular=False,
                    row_indices=(i,),
                    col_indices=(j,),
                    determinant=matrix.entries[i][j],
                )
    for k in range(2, min(r, c) + 1):
        for rows in combinations(range(r), k):
            for cols in combinations(range(c), k):
                det = bareiss_determinant(
                    [[matrix.entries[i][j] for j in cols] for i in rows]
                )
                if det not in (-1, 0, 1):
                    return TuVerdict(
                        totally_unimodular=False,
                        row_indices=rows,
                        col_indices=cols,
                        determinant=det,
                    )
    return TuVerdict(totally_unimodular=True)


def _cycle_qualifies(m: DiscreteMarket, h, c: HyperCycle) -> bool:
    """The pairwise-choice condition: for every firm with two edge sets S,
    S' on the cycle, the choice from S u S' must be S or S'."""
    by_firm: dict[str, list[frozenset]] = {}
    for i in c.edges:
        f, s = h.edges[i]
        by_firm.setdefault(f, []).append(s)
    for f, sets in by_firm.items():
        for s1, s2 in combinations(sets, 2):
            picked = choice(m, f, s1 | s2)
            if picked != s1 and picked != s2:
                return False
    return True


def prop1_check(
    m: DiscreteMarket,
    guard: SizeGuard = DEFAULT_GUARD,
    budget: int = DEFAULT_BUDGET,
) -> Prop1Verdict:
    """Guaranteed iff no nontrivial odd cycle of the satisfactory-set
    hypergraph satisfies the pairwise-choice condition; the condition is
    evaluated lazily, cycle by cycle."""
    require_valid(m)
    check_guard(m, guard)
    h = build_hypergraph(m)
    for c in iter_cycles(
        h, odd_only=True, nontrivial_only=True, max_len=len(h.vertices), budget=budget
    ):
        if _cycle_qualifies(m, h, c):
            return Prop1Verdict(guaranteed=False, witness=c)
    return Prop1Verdict(guaranteed=True)


def tu_cycle_certificate(m: DiscreteMarket, c: HyperCycle) -> IntMatrix:
    """Turn a qualifying nontrivial odd cycle into a square matrix of
    demand vectors with |det| = 2, witnessing non-total-unimodularity.

    Start from the cycle's incidence matrix; within each firm's column
    block (ordered so later sets are chosen over earlier ones) subtract the
    first column from the rest; then drop each cycle-vertex firm's row
    together with its first column.
    """
    require_valid(m)
    h = build_hypergraph(m)
    if not is_cycle(h, c):
        raise ValueError("not a cycle of the market's hypergraph")
    if not is_nontrivial_odd(h, c):
        raise ValueError("cycle is not a nontrivial odd-length cycle")
    if not _cycle_qualifies(m, h, c):
        raise ValueError("cycle fails the pairwise-choice condition")

    base = cycle_incidence_matrix(h, c)
    on_cycle = set(c.vertices)
    col_of = {e: j for j, e in enumerate(c.edges)}

    by_firm: dict[str, list[int]] = {}
    for e in c.edges:
        f, _ = h.edges[e]
        by_firm.setdefault(f, []).append(e)

    worker_rows = [i for i, v in enumerate(base.rows) if v not in m.firms]
    out_cols: list[tuple[str, list[int]]] = []
    for f in sorted(by_firm):
        # Ascending preference: the first column is the least preferred set,
        # so subtracting it realizes chosen-minus-foregone demand vectors.
        edges = sorted(by_firm[f], key=lambda e: -m.set_rank(f, h.edges[e][1]))
        first = base.column(col_of[edges[0]])
        if f not in on_cycle:
            out_cols.append(
                (base.cols[col_of[edges[0]]], [first[i] for i in worker_rows])
            )
        for e in edges[1:]:
            col = base.column(col_of[e])
            label = f"{base.cols[col_of[e]]}-{base.cols[col_of[edges[0]]]}"
            out_cols.append((label, [col[i] - first[i] for i in worker_rows]))

    rows = tuple(base.rows[i] for i in worker_rows)
    result = IntMatrix(
        rows=rows,
        cols=tuple(label for label, _ in out_cols),
        entries=tuple(
            tuple(col[i] for _, col in out_cols) for i in range(len(rows))
        ),
    )
    n_rows, n_cols = result.shape
    assert n_rows == n_cols, "certificate matrix is not square"
    det = bareiss_determinant([list(row) for row in result.entries])
    assert abs(det) == 2, f"certificate determinant {det}, expected |det| = 2"
    return result


def prop2_relation(
    m: DiscreteMarket,
    guard: SizeGuard = DEFAULT_GUARD,
    budget: int = DEFAULT_BUDGET,
) -> Prop2Report:
    """Evaluate total unimodularity of the pooled demand type alongside the
    cycle condition; a totally unimodular demand type with a qualifying
    cycle would falsify the implication and is flagged."""
    dt = demand_type(m, guard)
    tu = is_totally_unimodular(dt.matrix())
    p1 = prop1_check(m, guard, budget)
    consistent = not (tu.totally_unimodular and not p1.guaranteed)
    return Prop2Report(tu_verdict=tu, prop1=p1, consistent=consistent)
