"""Verification suites shared by the CLI and the acceptance tests."""

import random
import time
from dataclasses import dataclass
from itertools import permutations
from math import factorial

import numpy as np

from spiraltower import adding_machine as am
from spiraltower import lifting, rohlin, tower
from spiraltower.relations import is_equivariant, new_relation
from spiraltower.representation import represent_relation
from spiraltower.spirals import (
    build_finite_spiral,
    collapse_codes,
    end_indices,
    projection_codes,
    wandering_mask,
    MINUS,
    PLUS,
)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


class UnknownSuite(KeyError):
    pass


def random_relation(rng, max_vertices=8):
    """A random surjective relation on ``v0 .. v{n-1}``, 1 <= n <= max_vertices."""
    n = rng.randint(1, max_vertices)
    names = [f"v{i}" for i in range(n)]
    edges = {(names[i], names[rng.randrange(n)]) for i in range(n)}
    edges |= {(names[rng.randrange(n)], names[i]) for i in range(n)}
    for _ in range(rng.randint(0, 2 * n)):
        edges.add((rng.choice(names), rng.choice(names)))
    return new_relation(set(names), edges)


def _timed(name, fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    return Check(name, bool(passed), detail, time.perf_counter() - t0)


# individual suites ------------------------------------------------------------

def tower_exactness(seed=0, max_n=4):
    checks = []
    for n in range(max_n + 1):
        def run(n=n):
            ok = is_equivariant(tower.step_map(n), tower.build_level(n + 1).relation,
                                tower.build_level(n).relation)
            return ok, f"|R_{n + 1}| = {tower.build_level(n + 1).relation.num_edges} edges"
        checks.append(_timed(f"step map W_{n + 1} -> W_{n} is exact", run))
    return checks


def piece_counts(seed=0, max_n=3, max_k=3):
    checks = []
    memo = {}

    def counts_for(n, k):
        if (n, k) not in memo:
            memo[n, k] = tower.preimage_counts_all(n, k)
        return memo[n, k]

    for n in range(max_n + 1):
        for k in range(1, max_k + 1):
            def run(n=n, k=k):
                counts = counts_for(n, k)
                claimed = 2 * 6 ** (k - 1)
                values = sorted(set(counts.values()))
                ok = values == [claimed]
                return ok, f"observed {values}, claimed {claimed}"
            checks.append(_timed(f"n={n} k={k}: every piece has 2*6^(k-1) preimages", run))

            def run_rule(n=n, k=k):
                counts = counts_for(n, k)
                exp = tower.expected_counts(k)
                ok = all(c == exp[p.kind] for p, c in counts.items())
                return ok, f"S={exp['S']} G-={exp['Gminus']} G+={exp['Gplus']}"
            checks.append(_timed(f"n={n} k={k}: counts follow the letter rule", run_rule))
    for n in range(max_n + 1):
        def split(n=n):
            counts = tower.preimage_counts(n, 1)
            return list(counts.values()) == [2, 2, 2], str(counts)
        checks.append(_timed(f"n={n}: one-letter extensions split 2/2/2", split))
    return checks


def wandering_uniqueness(m, n):
    codes = projection_codes(m, n)
    wand_m, wand_n = wandering_mask(m), wandering_mask(n)
    for target in np.flatnonzero(wand_n):
        pre = np.flatnonzero(codes == target)
        if pre.size != 1 or not wand_m[pre[0]]:
            return False
    return True


def wandering_cover(m, n, end):
    codes = collapse_codes(m, n, end)
    hit = set(codes[wandering_mask(m)].tolist())
    return all(int(c) in hit for c in end_indices(n, end))


def wandering_suite(seed=0, max_m=5, cap=6):
    checks = []

    def unique():
        pairs = [(m, n) for m in range(2, max_m + 1) for n in range(1, m)]
        bad = [p for p in pairs if not wandering_uniqueness(*p)]
        return not bad, f"{len(pairs)} pairs, failures {bad}"
    checks.append(_timed("wandering points have one wandering preimage", unique))

    def cover():
        cases = [(m, n, e) for n in range(0, cap + 1) for m in range(max(2 * n, 1), cap + 1)
                 for e in (MINUS, PLUS)]
        bad = [c for c in cases if not wandering_cover(*c)]
        return not bad, f"{len(cases)} cases with m >= 2n, failures {bad}"
    checks.append(_timed("end collapses hit every cycle point from wandering points", cover))
    return checks


def representation(seed=0, trials=100, max_vertices=8):
    rng = random.Random(seed)

    def run():
        fails = 0
        top = 0
        for _ in range(trials):
            model = represent_relation(random_relation(rng, max_vertices))
            fails += not model.is_exact()
            top = max(top, max(s.level for s in model.spirals))
        return fails == 0, f"{trials - fails}/{trials} exact, deepest spiral level {top}"

    def self_test():
        R = build_finite_spiral(2).relation
        return represent_relation(R).is_exact(), "relation of the level-2 spiral"
    return [_timed(f"{trials} random relations represented exactly", run),
            _timed("spiral relation reconstructed", self_test)]


def lifting_suite(seed=0, max_n=2, max_k=2):
    checks = []
    for n in range(max_n + 1):
        for k in range(max_k + 1):
            def canon(n=n, k=k):
                p = lifting.LiftProblem.canonical(n, k)
                r = lifting.find_lift(p)
                return lifting.verify_lift(p, r), f"{len(r.expanded_model.spirals)} spirals"
            checks.append(_timed(f"canonical problem n={n} k={k}", canon))

            def modeled(n=n, k=k):
                model = represent_relation(tower.build_level(n).relation)
                p = lifting.LiftProblem(model, n, k)
                r = lifting.find_lift(p, deepen=True)
                top = max(s.level for s in r.expanded_model.spirals)
                return lifting.verify_lift(p, r), f"{len(model.spirals)} -> " \
                    f"{len(r.expanded_model.spirals)} spirals, deepest level {top}"
            checks.append(_timed(f"represented W_{n} n={n} k={k}", modeled))
    return checks


def rohlin_suite(seed=0, levels=(1, 2), samples=50):
    J = rohlin.CANONICAL
    checks = []
    for n in levels:
        def sweep(n=n):
            passed, fail = rohlin.witness_sweep(n, J)
            total = factorial(J.top(n)) ** 2
            return fail is None and passed == total, f"{passed}/{total} pairs"
        checks.append(_timed(f"witness pairs, all of S(J^{n}) x S(J^{n})", sweep))

    rng = random.Random(seed)

    def objects():
        n = max(levels)
        s = J.top(n)
        for _ in range(samples):
            p1 = rohlin.FinitePermutation.on_range(rng.sample(range(1, s + 1), s))
            p2 = rohlin.FinitePermutation.on_range(rng.sample(range(1, s + 1), s))
            rohlin.witness_pair(p1, p2, J)
        return True, f"{samples} sampled pairs through witness_pair"
    checks.append(_timed("witness pairs via permutation objects", objects))

    for n in levels:
        def copies(n=n):
            a = rohlin.transitive_candidate(J)
            s = J.top(n)
            found = 0
            total = 0
            for img in permutations(range(1, s + 1)):
                pi = rohlin.FinitePermutation.on_range(img)
                total += 1
                found += rohlin.contains_copy(a, pi) is not None
            return found == total, f"{found}/{total} permutations of J^{n}"
        checks.append(_timed(f"transitive candidate contains every permutation of J^{n}", copies))
    return checks


def adding_machine_suite(seed=0):
    def commute():
        count = 0
        for k in range(1, 6):
            M = factorial(k)
            for d in (m for m in range(1, 121) if 120 % m == 0):
                if M % d:
                    continue
                for v in range(M):
                    r = am.Residue(M, v)
                    if am.project(am.translate(r), d) != am.translate(am.project(r, d)):
                        return False, f"failed at {r} -> {d}"
                    count += 1
        return True, f"{count} residue/projection cases"

    def towers():
        for depth in range(7):
            for x in range(-50, 200):
                t = am.tower_of(x, depth).translate()
                if t != am.tower_of(x + 1, depth):
                    return False, f"x={x} depth={depth}"
        return True, "depth <= 6, x in [-50, 200)"
    return [_timed("translation commutes with projection", commute),
            _timed("translation preserves tower compatibility", towers)]


SUITES = {
    "tower-exactness": tower_exactness,
    "piece-counts": piece_counts,
    "lemma12": wandering_suite,
    "representation": representation,
    "lifting": lifting_suite,
    "rohlin": rohlin_suite,
    "adding-machine": adding_machine_suite,
}


def run_suite(name, seed=0):
    try:
        fn = SUITES[name]
    except KeyError:
        raise UnknownSuite(name) from None
    return fn(seed=seed)


def format_report(name, checks):
    width = max((len(c.name) for c in checks), default=10)
    lines = [f"suite {name}"]
    for c in checks:
        verdict = "PASS" if c.passed else "FAIL"
        lines.append(f"  {verdict}  {c.name:<{width}}  {c.detail}  ({c.seconds:.2f}s)")
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return "\n".join(lines)

