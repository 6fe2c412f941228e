"""Command-line interface.

Exit codes: 0 success / consistent / above threshold, 1 inconsistent /
not above threshold, 2 malformed input, 3 MaxEnt fit did not converge.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import __version__
from .errors import FreqQueryError, InconsistentError, MalformedInputError, \
    PreconditionError, ResourceLimitError, UnknownItemsetError
from .io import Instance, dump_distribution, dump_instance, format_rational, load_instance, \
    parse_dimacs, split_names
from .lp import LP_K_LIMIT, check_consistent, query_bounds
from .maxent import DEFAULT_MAX_ITER, DEFAULT_TOL, METHODS, Decision, fit_maxent
from .model import DEFAULT_K_LIMIT, Itemset, to_fraction
from .projection import project_status
from .reduction import CONSISTENT, MAX_QUERY, reduce_consistent, reduce_max_query

EXIT_OK = 0
EXIT_NO = 1
EXIT_MALFORMED = 2
EXIT_NOT_CONVERGED = 3


class _Malformed(Exception):
    """Raised inside commands for problems that map to exit code 2."""


def _emit(args, payload: dict, text_lines) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _require_closed(inst: Instance, report_all: bool) -> None:
    missing = inst.family.missing_subsets()
    if not missing:
        return
    if report_all:
        listed = "; ".join("{" + ", ".join(inst.names(m)) + "}" for m in missing)
        raise _Malformed(f"closure violation: {len(missing)} missing subsets: {listed}")
    for member in inst.family:
        for sub in member.subsets():
            if sub not in inst.family:
                raise _Malformed(
                    "closure violation: member {" + ", ".join(inst.names(member))
                    + "} has subset {" + ", ".join(inst.names(sub))
                    + "} missing from the family (frequencies are never invented; "
                    "add it explicitly)")


def _query(inst: Instance, text) -> Itemset:
    if text is not None:
        return inst.itemset(split_names(text))
    if inst.query is None:
        raise _Malformed("no query given on the command line or in the instance file")
    return inst.query


def _threshold(inst: Instance, text):
    if text is not None:
        return to_fraction(text)
    return inst.threshold


def _label(inst: Instance, itemset: Itemset) -> str:
    return "".join(inst.names(itemset)) if itemset else "(empty)"


def cmd_check(args) -> int:
    inst = load_instance(args.instance)
    _require_closed(inst, args.closure)
    result = check_consistent(inst.family, inst.theta, k_limit=args.k_limit)
    if result.consistent and args.witness:
        _write(args.witness, dump_distribution(result.witness, inst.attributes))
    payload = {"consistent": result.consistent}
    if result.consistent:
        payload["witness_support"] = result.witness.support_size
    _emit(args, payload, [f"consistent: {'yes' if result.consistent else 'no'}"])
    return EXIT_OK if result.consistent else EXIT_NO


def cmd_bounds(args) -> int:
    inst = load_instance(args.instance)
    _require_closed(inst, False)
    query = _query(inst, args.query)
    b = _threshold(inst, args.threshold)
    interval = query_bounds(inst.family, inst.theta, query, k_limit=args.k_limit)
    if args.witness:
        _write(args.witness + "-lo.json", dump_distribution(interval.lo_witness, inst.attributes))
        _write(args.witness + "-hi.json", dump_distribution(interval.hi_witness, inst.attributes))
    payload = {"query": inst.names(query), "lo": format_rational(interval.lo),
               "hi": format_rational(interval.hi)}
    lines = [f"query {_label(inst, query)}: [{interval.lo}, {interval.hi}]"]
    code = EXIT_OK
    if b is not None:
        exceeds = interval.hi > b
        payload["threshold"] = format_rational(b)
        payload["exceeds"] = exceeds
        lines.append(f"max frequency > {b}: {'yes' if exceeds else 'no'}")
        code = EXIT_OK if exceeds else EXIT_NO
    _emit(args, payload, lines)
    return code


def cmd_maxent(args) -> int:
    inst = load_instance(args.instance)
    _require_closed(inst, False)
    query = _query(inst, args.query)
    b = _threshold(inst, args.threshold)
    if inst.family.attribute_count <= min(args.k_limit, LP_K_LIMIT):
        if not check_consistent(inst.family, inst.theta):
            raise InconsistentError("the frequencies are inconsistent")
    result = fit_maxent(inst.family, inst.theta, query, tol=args.tol, max_iter=args.max_iter,
                        method=args.method, k_limit=args.k_limit)
    if args.witness:
        _write(args.witness, dump_distribution(result.distribution, inst.attributes))
    payload = {"query": inst.names(query), "estimate": result.query_frequency,
               "entropy": result.entropy, "iterations": result.iterations,
               "residual": result.residual, "converged": result.converged}
    lines = [f"query {_label(inst, query)}: estimate {result.query_frequency:.12g}",
             f"entropy {result.entropy:.12g} nats, {result.iterations} sweeps, "
             f"residual {result.residual:.3g}, converged: {'yes' if result.converged else 'no'}"]
    if not result.converged:
        _emit(args, payload, lines)
        return EXIT_NOT_CONVERGED
    code = EXIT_OK
    if b is not None:
        f, fb = result.query_frequency, float(b)
        if f > fb + args.tol:
            decision = Decision.YES
        elif f < fb - args.tol:
            decision = Decision.NO
        else:
            decision = Decision.INDETERMINATE
        payload["threshold"] = format_rational(b)
        payload["decision"] = decision.value
        lines.append(f"estimate > {b}: {decision.value}")
        code = EXIT_NO if decision is Decision.NO else EXIT_OK
    _emit(args, payload, lines)
    return code


def cmd_reduce(args) -> int:
    with open(args.dimacs, encoding="utf-8") as fh:
        formula = parse_dimacs(fh.read())
    if formula.clause_count == 0:
        raise _Malformed("the formula has no clauses; nothing to reduce")
    build = reduce_max_query if args.mode == MAX_QUERY else reduce_consistent
    text = dump_instance(Instance.from_reduction(build(formula)))
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_project(args) -> int:
    inst = load_instance(args.instance)
    _require_closed(inst, False)
    names = split_names(args.member)
    member = inst.itemset(names)
    if member not in inst.family:
        raise UnknownItemsetError(
            "{" + ", ".join(names) + "} is not a family member, so its probability is "
            "not determined; use 'bounds' for the range of its frequency")
    pattern = args.pattern.strip()
    if len(pattern) != len(names) or set(pattern) - {"0", "1"}:
        raise _Malformed(f"pattern must be {len(names)} characters of 0/1, one per name")
    # The pattern follows the order of the names as typed; the engine wants index order.
    by_name = dict(zip(names, pattern))
    t = [int(by_name[inst.attributes[i]]) for i in member.indices]
    value, in_range = project_status(inst.family, inst.theta, member, t)
    payload = {"member": names, "pattern": pattern, "probability": format_rational(value),
               "in_range": in_range}
    lines = [format_rational(value)]
    if not in_range:
        lines.append("warning: value outside [0, 1]; the frequencies are inconsistent")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    rows = run_selftest(count=args.count, seed=args.seed)
    ok = all(r.passed for r in rows)
    payload = {"passed": ok,
               "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                          for r in rows]}
    width = max(len(r.name) for r in rows)
    lines = [f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}" for r in rows]
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format (default: text)")

    parser = argparse.ArgumentParser(
        prog="freqquery",
        description="Consistency, frequency bounds and MaxEnt estimates for itemsets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide whether frequencies are consistent")
    p.add_argument("instance")
    p.add_argument("--witness", metavar="PATH", help="write a canonical witness distribution")
    p.add_argument("--closure", action="store_true",
                   help="list every missing subset instead of the first violation")
    p.add_argument("--k-limit", type=int, default=LP_K_LIMIT)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bounds", parents=[common], help="exact min/max frequency of a query")
    p.add_argument("instance")
    p.add_argument("--query", help="comma-separated attribute names (default: from file)")
    p.add_argument("--threshold", help="report whether the max exceeds this value")
    p.add_argument("--witness", metavar="PREFIX", help="write PREFIX-lo.json and PREFIX-hi.json")
    p.add_argument("--k-limit", type=int, default=LP_K_LIMIT)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("maxent", parents=[common], help="maximum entropy estimate of a query")
    p.add_argument("instance")
    p.add_argument("--query")
    p.add_argument("--threshold")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--method", choices=METHODS, default="marginal")
    p.add_argument("--witness", metavar="PATH", help="write the fitted distribution")
    p.add_argument("--k-limit", type=int, default=DEFAULT_K_LIMIT)
    p.set_defaults(func=cmd_maxent)

    p = sub.add_parser("reduce", parents=[common], help="build an instance from a DIMACS CNF")
    p.add_argument("dimacs")
    p.add_argument("--mode", choices=(MAX_QUERY, CONSISTENT), default=MAX_QUERY)
    p.add_argument("-o", "--output", help="write here instead of stdout")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("project", parents=[common],
                       help="probability of a member taking a given pattern")
    p.add_argument("instance")
    p.add_argument("member", help="comma-separated attribute names")
    p.add_argument("pattern", help="0/1 string aligned with the names as given")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("selftest", parents=[common], help="run the built-in cross-checks")
    p.add_argument("--count", type=int, default=20, help="random cases per check")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except InconsistentError as exc:
        print(f"inconsistent: {exc}", file=sys.stderr)
        return EXIT_NO
    except _Malformed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ResourceLimitError as exc:
        print(f"error: resource limit: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except PreconditionError as exc:
        print(f"error: closure violation: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except UnknownItemsetError as exc:
        print(f"error: unknown itemset: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (MalformedInputError, FreqQueryError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
