"""Batch command-line interface.

Exit codes: 0 for a positive verdict (or plain success), 1 for a negative
verdict, 2 for any input or usage error. Identical inputs and seed produce
byte-identical output. ``OIDCHECK_SEED`` overrides the default of ``--seed``.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import fixtures, oracle, report
from .entail import decide_entails, decide_logical_equiv
from .errors import OidcheckError
from .evaluation import chase, eval_ocq
from .model import flatten_query, merge_arities, predicate_arities, render_term
from .oid_equiv import decide_oid_equiv
from .parser import (
    FACT_EXTENSION,
    RULE_EXTENSION,
    XFACT_EXTENSION,
    parse_extended_instance,
    parse_instance,
    parse_rule,
    parse_rules,
    serialize_extended_instance,
    serialize_instance,
)

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


def _default_seed() -> int:
    env = os.environ.get("OIDCHECK_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise OidcheckError(f"OIDCHECK_SEED must be an integer, got {env!r}")
    return 0


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise OidcheckError(f"cannot read {path}: {err.strerror}")


def _load_rule(path: str):
    return parse_rule(_read(path))


def _load_instance(path: str):
    return parse_instance(_read(path))


def _check_compatible(queries, instances) -> None:
    maps = [predicate_arities(q.body) for q in queries]
    maps += [predicate_arities(i) for i in instances]
    merge_arities(*maps)


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    # write once, atomically
    directory = Path(out).resolve().parent
    with tempfile.NamedTemporaryFile(
        "w", dir=directory, delete=False, encoding="utf-8"
    ) as handle:
        handle.write(text)
        tmp = handle.name
    os.replace(tmp, out)


def _emit(rep: dict, args, out: str | None = None) -> None:
    text = report.render_json(rep) if args.json else report.render_text(rep)
    _write_output(text, out)


# -- subcommand implementations ------------------------------------------------


def cmd_parse(args) -> int:
    text = _read(args.file)
    kind = args.kind or Path(args.file).suffix.lstrip(".")
    if kind == RULE_EXTENSION.lstrip("."):
        rules = parse_rules(text)
        canonical = [q.render() for q in rules]
    elif kind == FACT_EXTENSION.lstrip("."):
        instance = parse_instance(text)
        canonical = serialize_instance(instance).splitlines()
    elif kind == XFACT_EXTENSION.lstrip("."):
        instance = parse_extended_instance(text)
        canonical = serialize_extended_instance(instance).splitlines()
    else:
        raise OidcheckError(f"cannot infer input kind of {args.file}; pass --kind")
    rep = report.artifact_report("parse", kind=kind, count=len(canonical), canonical=canonical)
    _emit(rep, args)
    return EXIT_POSITIVE


def cmd_eval(args) -> int:
    q = _load_rule(args.rules)
    instance = _load_instance(args.facts)
    _check_compatible([q], [instance])
    result = eval_ocq(q, instance)
    if args.json:
        rep = report.artifact_report("eval", result=report.instance_lines(result))
        _emit(rep, args, args.output)
    else:
        _write_output(serialize_extended_instance(result), args.output)
    return EXIT_POSITIVE


def cmd_flatten(args) -> int:
    q = _load_rule(args.rules)
    flat = flatten_query(q)
    if args.json:
        rep = report.artifact_report("flatten", rules=[flat.render()])
        _emit(rep, args, args.output)
    else:
        _write_output(flat.render() + "\n", args.output)
    return EXIT_POSITIVE


def cmd_chase(args) -> int:
    q = _load_rule(args.rules)
    instance = _load_instance(args.facts)
    _check_compatible([q], [instance])
    result = chase(q, instance)
    ordered = sorted(result.oid_table.items(), key=lambda kv: kv[1].name)
    if args.json:
        rep = report.artifact_report(
            "chase",
            result=report.instance_lines(result.instance),
            oidTable={c.name: render_term(oid) for oid, c in ordered},
        )
        _emit(rep, args, args.output)
    else:
        lines = serialize_instance(result.instance)
        notes = "".join(f"% {c.name} = {render_term(oid)}\n" for oid, c in ordered)
        _write_output(lines + notes, args.output)
    return EXIT_POSITIVE


def cmd_satisfies(args) -> int:
    q = _load_rule(args.rules)
    source = _load_instance(args.source)
    target = _load_instance(args.target)
    _check_compatible([q], [source])
    result = oracle.satisfies_sotgd(source, target, q)
    _emit(report.satisfies_report(result), args)
    return EXIT_POSITIVE if result.satisfied else EXIT_NEGATIVE


def cmd_check_oid_equiv(args) -> int:
    q = _load_rule(args.left)
    q_prime = _load_rule(args.right)
    _check_compatible([q, q_prime], [])
    decision = decide_oid_equiv(
        q, q_prime, max_domain=args.max_domain, budget=args.budget, seed=args.seed
    )
    _emit(report.equiv_report(decision), args)
    return EXIT_POSITIVE if decision.equivalent else EXIT_NEGATIVE


def cmd_check_entails(args) -> int:
    q = _load_rule(args.left)
    q_prime = _load_rule(args.right)
    _check_compatible([q, q_prime], [])
    dual = not args.no_dual_check
    if args.both:
        both = decide_logical_equiv(q, q_prime, dual_check=dual)
        oid_equivalent = decide_oid_equiv(
            q, q_prime, search_counterexamples=False
        ).equivalent
        rep = report.logical_equiv_report(both, oid_equivalent, command="check-entails")
        _emit(rep, args)
        return EXIT_POSITIVE if both.equivalent else EXIT_NEGATIVE
    decision = decide_entails(q, q_prime, dual_check=dual)
    _emit(report.entail_report(decision), args)
    return EXIT_POSITIVE if decision.entails else EXIT_NEGATIVE


def cmd_check_logical_equiv(args) -> int:
    q = _load_rule(args.left)
    q_prime = _load_rule(args.right)
    _check_compatible([q, q_prime], [])
    both = decide_logical_equiv(q, q_prime, dual_check=not args.no_dual_check)
    oid_equivalent = decide_oid_equiv(q, q_prime, search_counterexamples=False).equivalent
    _emit(report.logical_equiv_report(both, oid_equivalent), args)
    return EXIT_POSITIVE if both.equivalent else EXIT_NEGATIVE


def cmd_oracle_oid(args) -> int:
    q = _load_rule(args.left)
    q_prime = _load_rule(args.right)
    _check_compatible([q, q_prime], [])
    found = oracle.search_counterexample_oid(
        q, q_prime, max_domain=args.max_domain, budget=args.budget, seed=args.seed
    )
    rep = report.artifact_report(
        "oracle-oid",
        found=found is not None,
        counterexample=report.instance_lines(found) if found is not None else None,
    )
    _emit(rep, args)
    return EXIT_POSITIVE if found is not None else EXIT_NEGATIVE


def cmd_oracle_entail(args) -> int:
    q = _load_rule(args.left)
    q_prime = _load_rule(args.right)
    _check_compatible([q, q_prime], [])
    found = oracle.search_counterexample_entail(
        q, q_prime, max_domain=args.max_domain, budget=args.budget, seed=args.seed
    )
    if found is not None:
        source, target = found
        rep = report.artifact_report(
            "oracle-entail",
            found=True,
            source=report.instance_lines(source),
            target=report.instance_lines(target),
        )
    else:
        rep = report.artifact_report("oracle-entail", found=False)
    _emit(rep, args)
    return EXIT_POSITIVE if found is not None else EXIT_NEGATIVE


def cmd_gen(args) -> int:
    arities = ()
    if args.arities:
        try:
            arities = tuple(int(a) for a in args.arities.split(","))
        except ValueError:
            raise OidcheckError(f"bad --arities value {args.arities!r}")
    key_indices = ()
    if args.key:
        try:
            key_indices = tuple(int(i) for i in args.key.split(","))
        except ValueError:
            raise OidcheckError(f"bad --key value {args.key!r}")
    spec = fixtures.PrimitiveSpec(
        kind=args.primitive,
        skolem=args.skolem,
        key_indices=key_indices,
        seed=args.seed,
        arities=arities,
    )
    rule = fixtures.gen_primitive(spec)
    if args.json:
        _emit(report.artifact_report("gen", rule=rule.render()), args, args.output)
    else:
        _write_output(rule.render() + "\n", args.output)
    return EXIT_POSITIVE


# -- argument parsing -----------------------------------------------------------


def _add_json(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="emit a JSON report")


def _add_search(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=_default_seed(),
                   help="seed for randomized search (default 0 or OIDCHECK_SEED)")
    p.add_argument("--max-domain", type=int, default=4, dest="max_domain",
                   help="largest domain for counterexample search")
    p.add_argument("--budget", type=int, default=2000,
                   help="number of random instances tried")


def _add_pair(p: argparse.ArgumentParser) -> None:
    p.add_argument("left", help="rule file with exactly one rule")
    p.add_argument("right", help="rule file with exactly one rule")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="oidcheck",
        description="decide oid-equivalence and logical entailment of "
        "object-creating conjunctive queries",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="validate a file and echo its canonical form")
    p.add_argument("file")
    p.add_argument("--kind", choices=["rules", "facts", "xfacts"])
    _add_json(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="evaluate a rule over an instance")
    p.add_argument("rules")
    p.add_argument("facts")
    p.add_argument("-o", "--output")
    _add_json(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("flatten", help="print the flattened classical query")
    p.add_argument("rules")
    p.add_argument("-o", "--output")
    _add_json(p)
    p.set_defaults(func=cmd_flatten)

    p = sub.add_parser("chase", help="evaluate and ground created terms to fresh constants")
    p.add_argument("rules")
    p.add_argument("facts")
    p.add_argument("-o", "--output")
    _add_json(p)
    p.set_defaults(func=cmd_chase)

    p = sub.add_parser("satisfies", help="does (source, target) satisfy the rule as a mapping?")
    p.add_argument("rules")
    p.add_argument("source")
    p.add_argument("target")
    _add_json(p)
    p.set_defaults(func=cmd_satisfies)

    check = sub.add_parser("check", help="decision procedures").add_subparsers(
        dest="check_command", required=True
    )

    p = check.add_parser("oid-equiv", help="decide oid-equivalence")
    _add_pair(p)
    _add_search(p)
    _add_json(p)
    p.set_defaults(func=cmd_check_oid_equiv)

    p = check.add_parser("entails", help="decide logical entailment")
    _add_pair(p)
    p.add_argument("--both", action="store_true",
                   help="also check the converse direction and oid-equivalence")
    p.add_argument("--no-dual-check", action="store_true", dest="no_dual_check",
                   help="skip the semantic cross-check of the verdict")
    _add_json(p)
    p.set_defaults(func=cmd_check_entails)

    p = check.add_parser("logical-equiv", help="decide entailment in both directions")
    _add_pair(p)
    p.add_argument("--no-dual-check", action="store_true", dest="no_dual_check")
    _add_json(p)
    p.set_defaults(func=cmd_check_logical_equiv)

    orc = sub.add_parser("oracle", help="brute-force counterexample search").add_subparsers(
        dest="oracle_command", required=True
    )

    p = orc.add_parser("oid", help="search an instance separating two queries")
    _add_pair(p)
    _add_search(p)
    _add_json(p)
    p.set_defaults(func=cmd_oracle_oid)

    p = orc.add_parser("entail", help="search a pair satisfying one query but not the other")
    _add_pair(p)
    _add_search(p)
    _add_json(p)
    p.set_defaults(func=cmd_oracle_entail)

    p = sub.add_parser("gen", help="emit a benchmark-primitive rule")
    p.add_argument("primitive", choices=list(fixtures.KINDS))
    p.add_argument("skolem", nargs="?", default="all", choices=["all", "key", "random"])
    p.add_argument("--key", help="comma-separated 1-based key positions")
    p.add_argument("--arities", help="comma-separated source arities")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("-o", "--output")
    _add_json(p)
    p.set_defaults(func=cmd_gen)

    return top


def main(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except OidcheckError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
