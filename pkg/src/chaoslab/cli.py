"""``chaoslab`` command line: analyze instance files and run verification suites."""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

import yaml

from . import finite as fe
from . import fort
from . import iterated as it
from .algebra import P_FIN, FiniteCarrier, Full
from .errors import ChaoslabError, ParseError, UnsupportedCommandForKind, ValidationError
from .instances import InstanceDocument, ideal_to_json, parse_instance
from .verify import run_suite

COMMANDS = ("prox", "asym", "scrambled", "max-scrambled", "chaotic", "classes",
            "co-decompose", "oracle", "claims")

SUPPORTED = {
    "finite-action": {"prox", "asym", "scrambled", "max-scrambled", "chaotic", "classes", "co-decompose"},
    "iterated-system": {"prox", "asym", "scrambled", "claims"},
    "fort-spec": {"prox", "asym", "scrambled", "chaotic", "classes", "co-decompose"},
    "translation": {"prox", "asym", "scrambled", "chaotic", "classes", "co-decompose", "oracle"},
}

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT = 0, 1, 2


def _pairs(rel: fe.PairRelation) -> list:
    return [list(p) for p in rel.sorted()]


def _ideals(doc: InstanceDocument, index: int | None) -> list:
    ideals = list(doc.ideals)
    if not ideals:
        ideals = [FiniteCarrier()] if doc.kind == "finite-action" else [P_FIN]
    if index is not None:
        if not 0 <= index < len(ideals):
            raise ValidationError(f"ideals[{index}]", "no such ideal")
        return [ideals[index]]
    return ideals


def _finite(doc, cmd, ideals):
    a: fe.FiniteAction = doc.model
    if cmd == "prox":
        return {"pairs": _pairs(fe.prox_pairs(a)), "provenance": "definition: some s with xs = ys"}
    out = []
    for ideal in ideals:
        entry = {"ideal": ideal_to_json(ideal)}
        if cmd == "asym":
            entry["pairs"] = _pairs(fe.asym_pairs(a, ideal))
        elif cmd == "scrambled":
            entry["pairs"] = _pairs(fe.scrambled_pairs(a, ideal))
        elif cmd == "max-scrambled":
            entry["set"] = list(fe.max_scrambled_set(a, ideal))
        elif cmd == "classes":
            entry["classes"] = [list(c) for c in fe.asym_equivalence_classes(a, ideal)]
        elif cmd == "chaotic":
            v = fe.is_li_yorke_chaotic_mod(a, ideal)
            entry.update(verdict=v.verdict, max_scrambled_size=v.max_scrambled_size,
                         witness=v.witness, criterion="brute force (finite phase space)")
        elif cmd == "co-decompose":
            parts = doc.body.get("parts") or [list(a.semigroup.elements)]
            dec = fe.co_decompose(a, parts)
            entry.update(
                commuting=dec.commuting,
                non_commuting_witness=None if dec.non_commuting_witness is None
                else list(dec.non_commuting_witness),
                factors=[list(f.semigroup.names) for f in dec.factors],
                factor_scrambled_sets_scrambled_in_whole=all(
                    fe.factor_scrambled_report(a, f, ideal).holds for f in dec.factors)
                if isinstance(ideal, FiniteCarrier) else None,
            )
        out.append(entry)
    return out


def _iterated(doc, cmd, ideals):
    sys_: it.IteratedSystem = doc.model
    pts = range(sys_.phase)
    if cmd == "prox":
        pairs = [[x, y] for x in pts for y in pts if it.is_proximal(sys_, x, y)]
        return {"pairs": pairs, "provenance": "pair orbit reaches the diagonal"}
    if cmd == "asym":
        pairs = [[x, y] for x in pts for y in pts if it.is_asymptotic(sys_, x, y)]
        return {"pairs": pairs, "provenance": "pair orbit cycle lies on the diagonal"}
    if cmd == "scrambled":
        fam = it.initial_segments()
        return {
            "proximal_non_asymptotic": [[x, y] for x in pts for y in pts
                                        if it.is_proximal(sys_, x, y) and not it.is_asymptotic(sys_, x, y)],
            "scrambled_relative": {"family": fam.name, "pairs": [
                [x, y] for x in pts for y in pts if it.is_scrambled_relative(sys_, x, y, fam)]},
        }
    rep = it.claims_check(sys_, [f() for f in it.STANDARD_FAMILIES])
    return {"holds": rep.holds, "counterexample": rep.counterexample,
            "families": [f().name for f in it.STANDARD_FAMILIES]}


def _fort(doc, cmd, ideals, window, bound):
    if doc.kind == "translation":
        spec = fort.translation_to_spec(doc.model)
    else:
        spec = doc.model
    if cmd == "prox":
        return fort.prox_classes(spec).to_dict()
    if cmd == "classes":
        return {"group_size": str(spec.group_size), "abelian": spec.abelian,
                "classes": [{"label": c.label, "points": str(c.point_count), "orbit": str(c.orbit_size),
                             "stabilizer": str(c.stabilizer_size)} for c in spec.classes]}
    if cmd == "oracle":
        t = doc.model
        if t.real_factor:
            raise UnsupportedCommandForKind("the windowed oracle needs a ℤ^k translation action")
        reports = fort.oracle_sweep(t, window, bound)
        return {"window": window, "bound": bound,
                "agrees": all(r.agrees for r in reports),
                "pairs": [{"pair": [str(p) if p is fort.INF else p for p in r.pair],
                           "stratum": list(r.stratum), "oracle_asym": r.oracle_asym,
                           "formula_asym": r.formula_asym} for r in reports]}
    out = []
    for ideal in ideals:
        entry = {"ideal": ideal_to_json(ideal)}
        if cmd == "asym":
            entry.update(fort.asym_classes(spec, ideal).to_dict())
        elif cmd == "scrambled":
            entry.update(fort.scrambled_structure(spec, ideal).to_dict())
        elif cmd == "chaotic":
            v = fort.is_li_yorke_chaotic(spec, ideal)
            entry.update(verdict=v.verdict, h_cardinality=str(v.h_cardinality),
                         witness_class=v.witness_class,
                         criterion="stabilizer formula: H = {x : xG infinite, st(x) not in ideal} uncountable")
        elif cmd == "co-decompose":
            rep = fort.co_decomposition_report(spec, ideal)
            entry.update(chaotic=rep.chaotic, co_decomposable_to_chaotic=rep.co_decomposable_to_chaotic,
                         cyclic_factors_chaotic=rep.cyclic_factors_chaotic,
                         derivation=list(rep.derivation))
        out.append(entry)
    return out


def run_analysis(doc: InstanceDocument, commands: Sequence[str], ideal_index: int | None = None,
                 window: int = 50, bound: int = 20) -> dict:
    """Dispatch every requested command to the owning module and collect a report."""
    for cmd in commands:
        if cmd not in COMMANDS:
            raise UnsupportedCommandForKind(f"unknown command {cmd!r}")
        if cmd not in SUPPORTED[doc.kind]:
            raise UnsupportedCommandForKind(f"{cmd!r} is not available for {doc.kind} instances")
    ideals = _ideals(doc, ideal_index)
    results = {}
    for cmd in commands:
        if doc.kind == "finite-action":
            results[cmd] = _finite(doc, cmd, ideals)
        elif doc.kind == "iterated-system":
            results[cmd] = _iterated(doc, cmd, ideals)
        else:
            results[cmd] = _fort(doc, cmd, ideals, window, bound)
    return {"instance": doc.to_json(), "commands": list(commands), "results": results}


def run_verify(suite: str, seed: int = 42, budget: int | None = None) -> dict:
    results = run_suite(suite, seed, budget)
    return {"suite": suite, "seed": seed, "budget": budget,
            "passed": all(r.passed for r in results),
            "results": [r.to_dict() for r in results]}


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------


def render(report: dict, fmt: str) -> str:
    plain = json.loads(json.dumps(report, ensure_ascii=False, default=str))
    if fmt == "json":
        return json.dumps(plain, indent=2, ensure_ascii=False) + "\n"
    return yaml.safe_dump(plain, sort_keys=False, allow_unicode=True, width=100,
                          default_flow_style=None)


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chaoslab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--timing", action="store_true", help="append wall-clock timing (not deterministic)")

    p = sub.add_parser("analyze", help="run analyses on an instance file")
    p.add_argument("file")
    p.add_argument("--ops", default="prox", help="comma-separated: " + ",".join(COMMANDS))
    p.add_argument("--ideal", type=int, default=None, help="index into the document's ideals")
    p.add_argument("--window", type=int, default=50)
    p.add_argument("--bound", type=int, default=20)
    common(p)

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--budget", type=int, default=None)
    common(p)

    p = sub.add_parser("oracle", help="compare the Fort formula with the windowed definition")
    p.add_argument("file")
    p.add_argument("--window", type=int, default=50)
    p.add_argument("--bound", type=int, default=20)
    common(p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    status = EXIT_OK
    try:
        if args.command == "verify":
            report = run_verify(args.suite, args.seed, args.budget)
            status = EXIT_OK if report["passed"] else EXIT_COUNTEREXAMPLE
        else:
            doc = parse_instance(args.file)
            if args.command == "oracle":
                report = run_analysis(doc, ["oracle"], window=args.window, bound=args.bound)
                status = EXIT_OK if report["results"]["oracle"]["agrees"] else EXIT_COUNTEREXAMPLE
            else:
                ops = [o.strip() for o in args.ops.split(",") if o.strip()]
                report = run_analysis(doc, ops, args.ideal, args.window, args.bound)
                if "claims" in ops and not report["results"]["claims"]["holds"]:
                    status = EXIT_COUNTEREXAMPLE
    except (ParseError, ValidationError, UnsupportedCommandForKind, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ChaoslabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    sys.stdout.write(render(report, args.format))
    return status


if __name__ == "__main__":
    sys.exit(main())
