"""Command-line front end.

Subcommands: balance, solve-tu, solve-discrete, analyze, roadmap, gen.
Exit codes are the process-level contract: 0 = positive verdict, 1 =
negative verdict, 2 = input/guard error, 3 = work budget exhausted.  Both
output renderings (human default, ``--format json``) are produced from one
fact dictionary, so they always carry identical content.  The environment
variable MATCHKIT_BUDGET overrides the default cycle-search budget when no
``--budget`` flag is given.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import analysis, discrete_solver, generator, hypergraph, io, roadmap, tu_solver
from .errors import (
    InvalidMarketError,
    MarketFormatError,
    MatchkitError,
    SizeGuardExceeded,
    WorkBudgetExceeded,
)
from .model import (
    DiscreteMarket,
    DiscreteMatching,
    TuMarket,
    require_valid,
    tu_utilities,
    validate_market,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _render_human(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_human(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def emit_report(args, command: str, inputs: dict[str, str], facts: dict, t0: float):
    report = {
        "command": command,
        "inputs": inputs,
        "facts": facts,
        "timing_ms": round((time.perf_counter() - t0) * 1000.0, 3),
    }
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(_render_human(report)))


def _frac(v: Fraction) -> str:
    return str(v)


def _cycle_facts(h, c) -> dict:
    return {
        "length": len(c),
        "vertices": list(c.vertices),
        "edges": list(c.edges),
        "edge_members": [sorted(h.edge_members(i)) for i in c.edges],
    }


def _matrix_facts(m) -> dict:
    return {
        "rows": list(m.rows),
        "cols": list(m.cols),
        "entries": [list(r) for r in m.entries],
    }


def _load_market_checked(path: str):
    market = io.load_market(path)
    problems = validate_market(market)
    if problems:
        raise InvalidMarketError("; ".join(problems))
    return market


def cmd_balance(args) -> int:
    t0 = time.perf_counter()
    market = _load_market_checked(args.market)
    if args.kind and market.kind != args.kind:
        raise MarketFormatError(
            f"file holds a {market.kind} market but --kind {args.kind} was given"
        )
    h = hypergraph.build_hypergraph(market)
    verdict = hypergraph.check_balanced(h, budget=args.budget)
    facts = {
        "kind": market.kind,
        "edge_count": len(h.edges),
        "balanced": verdict.balanced,
        "witness": _cycle_facts(h, verdict.witness) if verdict.witness else None,
    }
    emit_report(args, "balance", {args.market: _digest(args.market)}, facts, t0)
    return EXIT_OK if verdict.balanced else EXIT_NEGATIVE


def _dual_facts(dual) -> dict:
    return {
        "value": _frac(dual.value),
        "weights": [
            {"coalition": sorted(c.members()), "weight": _frac(w)}
            for c, w in sorted(
                dual.weights.items(), key=lambda kv: sorted(kv[0].members())
            )
        ],
    }


def cmd_solve_tu(args) -> int:
    t0 = time.perf_counter()
    market = _load_market_checked(args.market)
    if not isinstance(market, TuMarket):
        raise MarketFormatError("solve-tu needs a TU market file")
    report = tu_solver.find_stable_matching_tu(market)
    facts = {
        "stable": report.stable,
        "lp_value": _frac(report.lp_value),
        "partition_value": _frac(report.partition_value),
    }
    if report.stable and args.emit in ("matching", "lp"):
        facts["matching"] = io.serialize_matching(report.matching)
        facts["utilities"] = {
            a: _frac(v)
            for a, v in sorted(tu_utilities(market, report.matching).items())
        }
    if not report.stable or args.emit in ("certificate", "lp"):
        facts["certificate"] = _dual_facts(report.certificate)
    if args.emit == "lp":
        facts["lp_primal"] = {
            a: _frac(v) for a, v in sorted(report.lp_primal.items())
        }
    emit_report(args, "solve-tu", {args.market: _digest(args.market)}, facts, t0)
    return EXIT_OK if report.stable else EXIT_NEGATIVE


def cmd_solve_discrete(args) -> int:
    t0 = time.perf_counter()
    market = _load_market_checked(args.market)
    if not isinstance(market, DiscreteMarket):
        raise MarketFormatError("solve-discrete needs a discrete market file")
    inputs = {args.market: _digest(args.market)}
    if args.dynamics:
        if args.start:
            start = io.parse_matching(io.load_json(args.start), "discrete")
            inputs[args.start] = _digest(args.start)
            unknown = [
                (w, f)
                for w, f in start.assignment.items()
                if w not in market.workers or f not in market.firms
            ]
            if unknown:
                raise MarketFormatError(f"start matching names unknown agents: {unknown}")
        else:
            start = DiscreteMatching(assignment={})
        trace = discrete_solver.run_blocking_dynamics(
            market, start, max_steps=args.max_steps
        )
        facts = {
            "outcome": trace.outcome,
            "stable_at": trace.stable_at,
            "revisit": list(trace.revisit) if trace.revisit else None,
            "states": [dict(sorted(s.assignment.items())) for s in trace.states],
            "moves": [
                {
                    "kind": mv.kind,
                    "worker": mv.worker,
                    "firm": mv.firm,
                    "workers": sorted(mv.workers) if mv.workers is not None else None,
                }
                for mv in trace.moves
            ],
        }
        emit_report(args, "solve-discrete", inputs, facts, t0)
        return EXIT_OK if trace.outcome == "stable" else EXIT_NEGATIVE
    limit = 1 if args.first else None
    matchings = discrete_solver.enumerate_stable_matchings(market, limit=limit)
    facts = {
        "stable_count": len(matchings),
        "stable_matchings": [dict(sorted(mu.assignment.items())) for mu in matchings],
        "complete": limit is None,
    }
    emit_report(args, "solve-discrete", inputs, facts, t0)
    return EXIT_OK if matchings else EXIT_NEGATIVE


def cmd_analyze(args) -> int:
    t0 = time.perf_counter()
    market = _load_market_checked(args.market)
    if not isinstance(market, DiscreteMarket):
        raise MarketFormatError("analyze needs a discrete market file")
    run_all = not (args.prop1 or args.demand_type or args.tu_check or args.certificate)
    facts: dict = {}
    h = hypergraph.build_hypergraph(market)
    prop1_verdict = None
    if run_all or args.prop1 or args.certificate:
        prop1_verdict = analysis.prop1_check(market, budget=args.budget)
    if run_all or args.prop1:
        facts["prop1"] = {
            "guaranteed": prop1_verdict.guaranteed,
            "witness": _cycle_facts(h, prop1_verdict.witness)
            if prop1_verdict.witness
            else None,
        }
    if run_all or args.demand_type or args.tu_check:
        dt = analysis.demand_type(market)
        if run_all or args.demand_type:
            facts["demand_type"] = {
                "workers": list(dt.workers),
                "vectors": [list(v) for v in sorted(dt.union)],
                "per_firm": {
                    f: [list(v) for v in sorted(vs)]
                    for f, vs in sorted(dt.per_firm.items())
                },
            }
        if run_all or args.tu_check:
            verdict = analysis.is_totally_unimodular(dt.matrix())
            facts["tu_check"] = {
                "totally_unimodular": verdict.totally_unimodular,
                "rows": list(verdict.row_indices) if verdict.row_indices else None,
                "cols": list(verdict.col_indices) if verdict.col_indices else None,
                "determinant": verdict.determinant,
            }
    if run_all or args.certificate:
        if prop1_verdict.witness is not None:
            cert = analysis.tu_cycle_certificate(market, prop1_verdict.witness)
            facts["certificate"] = _matrix_facts(cert)
        else:
            facts["certificate"] = None
    emit_report(args, "analyze", {args.market: _digest(args.market)}, facts, t0)
    return EXIT_OK


def cmd_roadmap(args) -> int:
    t0 = time.perf_counter()
    market = _load_market_checked(args.market)
    rm = io.load_roadmap(args.roadmap)
    problems = roadmap.validate_roadmap(rm, market)
    if problems:
        raise InvalidMarketError("; ".join(problems))
    report = roadmap.theorem3_report(market, rm, budget=args.budget)
    h = hypergraph.build_hypergraph(market)
    facts = {
        "specialists": report.all_specialists,
        "non_specialists": list(report.non_specialists),
        "specialized": report.specialization.specialized,
        "firm_paths": {
            f: list(p.vertices)
            for f, p in sorted((report.specialization.firm_paths or {}).items())
        }
        if report.specialization.specialized
        else None,
        "reason": report.specialization.reason,
        "balanced": report.balance.balanced,
        "witness": _cycle_facts(h, report.balance.witness)
        if report.balance.witness
        else None,
        "falsification": report.falsification,
    }
    emit_report(
        args,
        "roadmap",
        {args.roadmap: _digest(args.roadmap), args.market: _digest(args.market)},
        facts,
        t0,
    )
    return EXIT_OK if report.all_hold else EXIT_NEGATIVE


def cmd_gen(args) -> int:
    try:
        params = generator.GenParams(
            seed=args.seed,
            firm_count=args.firms,
            worker_count=args.workers,
            max_acceptable_sets_per_firm=args.max_sets,
            max_set_size=args.max_set_size,
            value_range=(Fraction(args.value_min), Fraction(args.value_max)),
            acceptability_density=args.density,
        )
        if args.kind == "tu":
            market = generator.gen_tu_market(params)
        elif args.kind == "discrete":
            market = generator.gen_discrete_market(params)
        else:
            if not args.roadmap_out:
                raise ValueError("gen roadmap needs --roadmap-out")
            rm, market = generator.gen_roadmap_instance(params, kind=args.market_kind)
            Path(args.roadmap_out).write_text(
                io.to_canonical_json(io.serialize_roadmap(rm)), encoding="utf-8"
            )
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    require_valid(market)
    Path(args.out).write_text(
        io.to_canonical_json(io.serialize_market(market)), encoding="utf-8"
    )
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchkit",
        description="Stable matchings in many-to-one markets via hypergraph balancedness",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    default_budget = int(os.environ.get("MATCHKIT_BUDGET", hypergraph.DEFAULT_BUDGET))

    def common(p):
        p.add_argument("--format", choices=("human", "json"), default="human")
        p.add_argument("--budget", type=int, default=default_budget)

    p = sub.add_parser("balance", help="decide hypergraph balancedness")
    p.add_argument("market")
    p.add_argument("--kind", choices=("tu", "discrete"))
    common(p)
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("solve-tu", help="decide TU stability via LP duality")
    p.add_argument("market")
    p.add_argument("--emit", choices=("matching", "certificate", "lp"), default="matching")
    common(p)
    p.set_defaults(func=cmd_solve_tu)

    p = sub.add_parser("solve-discrete", help="enumerate stable matchings / run dynamics")
    p.add_argument("market")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true", default=True)
    group.add_argument("--first", action="store_true")
    p.add_argument("--dynamics", action="store_true")
    p.add_argument("--start")
    p.add_argument("--max-steps", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_solve_discrete)

    p = sub.add_parser("analyze", help="cycle condition, demand types, unimodularity")
    p.add_argument("market")
    p.add_argument("--prop1", action="store_true")
    p.add_argument("--demand-type", dest="demand_type", action="store_true")
    p.add_argument("--tu-check", dest="tu_check", action="store_true")
    p.add_argument("--certificate", action="store_true")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("roadmap", help="specialists / specialized / balanced")
    p.add_argument("roadmap")
    p.add_argument("market")
    common(p)
    p.set_defaults(func=cmd_roadmap)

    p = sub.add_parser("gen", help="generate seeded instances")
    p.add_argument("kind", choices=("tu", "discrete", "roadmap"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--firms", type=int, default=3)
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--max-sets", type=int, default=3)
    p.add_argument("--max-set-size", type=int, default=2)
    p.add_argument("--value-min", default="0")
    p.add_argument("--value-max", default="10")
    p.add_argument("--density", type=float, default=0.9)
    p.add_argument("--out", required=True)
    p.add_argument("--roadmap-out")
    p.add_argument("--market-kind", choices=("tu", "discrete"), default="discrete")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WorkBudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (MarketFormatError, InvalidMarketError, SizeGuardExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except MatchkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
