"""Command-line interface.

Exit status: 0 on success, 1 when a verification fails, 2 on bad usage or
input.
"""

import argparse
import json
import sys
from itertools import permutations
from math import factorial

import numpy as np

from spiraltower import config, formats, lifting, rohlin, suites, tower
from spiraltower.errors import InternalVerificationFailed, SpiralTowerError
from spiraltower.relations import SubLabels, relation_from_dict
from spiraltower.representation import represent_relation
from spiraltower.spirals import build_finite_spiral, classify

FORMATS = ("table", "graph-text", "structured-text")


class UsageError(Exception):
    pass


def _spiral_table(spiral):
    R = spiral.relation
    rows = [f"level {spiral.level}: {len(spiral.points)} points, {R.num_edges} edges"]
    for i, p in enumerate(spiral.points):
        succ = " ".join(str(spiral.points[int(j)]) for j in R.successor_indices(i))
        rows.append(f"  {str(p):<10} {classify(p):<10} -> {succ}")
    return "\n".join(rows) + "\n"


def cmd_spiral(args, out):
    s = build_finite_spiral(args.level)
    if args.format == "graph-text":
        out.write(formats.spiral_dot(s))
    elif args.format == "structured-text":
        out.write(formats.dumps(formats.structured(s.relation, classify_points=True)))
    else:
        out.write(_spiral_table(s))
    return 0


def cmd_level(args, out):
    level = tower.build_level(args.level)
    word = tower.Word.parse(args.word) if args.word is not None else None
    if word is not None and len(word) != args.level:
        raise UsageError(f"word {word} does not have length {args.level}")
    if args.format == "graph-text":
        out.write(formats.level_dot(level, word))
        return 0
    if args.format == "structured-text":
        R = level.relation
        if word is not None:
            sl = level.spiral_slice(word)
            R = R.induced(SubLabels(level.points, np.arange(sl.start, sl.stop)))
        out.write(formats.dumps(formats.structured(R, classify_points=True)))
        return 0
    out.write(f"W_{args.level}: {6 ** args.level} words x {level.points.spiral_size} points "
              f"= {len(level.points)} points, {level.relation.num_edges} edges\n")
    return 0


def cmd_counts(args, out):
    if args.k < 1:
        raise UsageError("--k must be at least 1")
    counts = tower.preimage_counts_all(args.n, args.k)
    claimed = 2 * 6 ** (args.k - 1)
    out.write(f"preimage spirals in W_{args.n + args.k} per piece of W_{args.n}\n")
    out.write(f"{'piece':<24} {'count':>7}\n")
    for piece, c in counts.items():
        out.write(f"{str(piece):<24} {c:>7}\n")
    by_kind = {}
    for piece, c in counts.items():
        by_kind.setdefault(piece.kind, set()).add(c)
    summary = ", ".join(f"{k}: {sorted(v)}" for k, v in by_kind.items())
    out.write(f"by kind {summary}; 2*6^(k-1) = {claimed}\n")
    return 0


def cmd_verify(args, out):
    try:
        checks = suites.run_suite(args.suite, seed=args.seed)
    except suites.UnknownSuite:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}")
    out.write(suites.format_report(args.suite, checks) + "\n")
    return 0 if all(c.passed for c in checks) else 1


def cmd_represent(args, out):
    R = relation_from_dict(formats.load_json(args.input))
    model = represent_relation(R)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(formats.dumps(formats.model_to_dict(model)))
    exact = model.is_exact()
    out.write(f"{len(model.spirals)} spirals, levels {sorted({s.level for s in model.spirals})}; "
              f"image equals input: {'yes' if exact else 'NO'}\n")
    return 0 if exact else 1


def cmd_lift(args, out):
    model = formats.level_model_from_dict(formats.load_json(args.model), args.n)
    problem = lifting.LiftProblem(model, args.n, args.k)
    result = lifting.find_lift(problem, deepen=args.deepen,
                               with_end_companions=args.companions, verify=False)
    ok = lifting.verify_lift(problem, result)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(formats.dumps(formats.lift_to_dict(result)))
    dups = sum(len(v) for v in result.duplication_record.values())
    out.write(f"{len(model.spirals)} spirals -> {len(result.expanded_model.spirals)} "
              f"({dups} duplicates) onto W_{args.n + args.k}; verify_lift: "
              f"{'PASS' if ok else 'FAIL'}\n")
    return 0 if ok else 1


def cmd_rohlin_witness(args, out):
    J = rohlin.CANONICAL
    s = J.top(args.n)
    p1 = rohlin.FinitePermutation.parse(args.pi1, s)
    p2 = rohlin.FinitePermutation.parse(args.pi2, s)
    a, b = rohlin.witness_pair(p1, p2, J)
    c = rohlin.conjugate(b, a)
    ok = rohlin.in_neighborhood(a, p1) and rohlin.in_neighborhood(c, p2)
    top = J.top(a.support_level)
    for name, x in (("a", a), ("b", b), ("b a b^-1", c)):
        perm = rohlin.FinitePermutation.on_range([x.image(i) for i in range(1, top + 1)])
        out.write(f"{name:<9} {perm.to_cycle_notation()}\n")
    out.write(f"a in K(pi1) and b a b^-1 in K(pi2): {'verified' if ok else 'FAILED'}\n")
    return 0 if ok else 1


def cmd_rohlin_candidate(args, out):
    J = rohlin.CANONICAL
    a = rohlin.transitive_candidate(J)
    worst = 0
    for n in range(1, args.check_upto + 1):
        if factorial(J.top(n)) > 10 ** 6:
            raise UsageError(f"J^{n} has {J.top(n)} points; exhaustive sweep is out of reach")
    for n in range(1, args.check_upto + 1):
        s = J.top(n)
        found = total = 0
        for img in permutations(range(1, s + 1)):
            total += 1
            found += rohlin.contains_copy(a, rohlin.FinitePermutation.on_range(img),
                                          args.scan_bound) is not None
        out.write(f"J^{n} ({s} points): copies found for {found}/{total} permutations\n")
        worst += total - found
    return 0 if worst == 0 else 1


def build_parser():
    p = argparse.ArgumentParser(prog="spiraltower", description=__doc__.splitlines()[0])
    p.add_argument("--level-cap", type=int, default=config.Config.level_cap)
    p.add_argument("--materialization-cap", type=int, default=None,
                   help=f"default: the smaller of {config.Config.materialization_cap} and --level-cap")
    p.add_argument("--scan-bound", type=int, default=config.Config.rohlin_scan_bound)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spiral", help="one finite spiral")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--format", choices=FORMATS, default="table")
    s.set_defaults(fn=cmd_spiral)

    s = sub.add_parser("level", help="a full level W_n or one word's spiral")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--word")
    s.add_argument("--format", choices=FORMATS, default="table")
    s.set_defaults(fn=cmd_level)

    s = sub.add_parser("counts", help="preimage spirals per piece")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(fn=cmd_counts)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("suite")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("represent", help="spiral model of a relation file")
    s.add_argument("--input", required=True)
    s.add_argument("--output", required=True)
    s.set_defaults(fn=cmd_represent)

    s = sub.add_parser("lift", help="lift a model of W_n to W_{n+k}")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--model", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--no-deepen", dest="deepen", action="store_false",
                   help="fail instead of raising shallow source levels")
    s.add_argument("--companions", action="store_true",
                   help="also map copies onto every end cycle of W_{n+k}")
    s.set_defaults(fn=cmd_lift)

    s = sub.add_parser("rohlin", help="block permutation group")
    rsub = s.add_subparsers(dest="rohlin_command", required=True)
    w = rsub.add_parser("witness")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--pi1", required=True)
    w.add_argument("--pi2", required=True)
    w.set_defaults(fn=cmd_rohlin_witness)
    c = rsub.add_parser("candidate")
    c.add_argument("--check-upto", type=int, required=True)
    c.set_defaults(fn=cmd_rohlin_candidate)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        mat = args.materialization_cap
        if mat is None:
            mat = min(config.Config.materialization_cap, args.level_cap)
        config.set_defaults(config.Config(
            level_cap=args.level_cap,
            materialization_cap=mat,
            rohlin_scan_bound=args.scan_bound,
        ))
        return args.fn(args, out)
    except InternalVerificationFailed as exc:
        print(f"spiraltower: verification failed: {exc}", file=sys.stderr)
        return 1
    except (UsageError, SpiralTowerError, ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        print(f"spiraltower: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
