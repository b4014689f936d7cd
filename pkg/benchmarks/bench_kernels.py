"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each case runs on both backends with identical inputs; outputs are compared
before timing so a mismatch aborts the run.
"""

import argparse
import timeit
from itertools import permutations

import numpy as np

from spiraltower import kernels, rohlin, tower


def cases():
    step = tower.step_codes(4)
    lvl = tower.build_level(5).relation
    yield "edge_image_keys  W_5 -> W_4", "edge_image_keys", (lvl.src, lvl.dst, step, len(tower.LevelLabels(4)))
    yield "unique_keys      W_5 edges", "unique_keys", (lvl.src[::-1].copy(), lvl.dst[::-1].copy(), lvl.n)
    yield "degree_defects   W_5", "degree_defects", (lvl.src, lvl.dst, lvl.n)

    rng = np.random.default_rng(0)
    local = rng.permutation(200_000)
    local[rng.choice(200_000, 50, replace=False)] = -1
    yield "closed_cycles    200k points", "closed_cycles", (local,)

    J = rohlin.CANONICAL
    perms = np.array(list(permutations(range(7))), dtype=np.int64)[:600]
    i = rohlin.witness_block(J, 2)
    yield "witness_sweep    600 x 600 on J^2", "witness_sweep", (perms, J.block_index_array(i), 2, J.start(i) - 1)


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backs = kernels.backends()
    if "compiled" not in backs:
        print("compiled extension not built; only the fallback is available")
    print(f"{'case':<36} " + " ".join(f"{b:>12}" for b in backs) + "   speedup")
    for name, fn, inputs in cases():
        outs = [getattr(mod, fn)(*inputs) for mod in backs.values()]
        if not all(same(outs[0], o) for o in outs[1:]):
            raise SystemExit(f"{name}: backends disagree")
        times = []
        for mod in backs.values():
            f = getattr(mod, fn)
            times.append(min(timeit.repeat(lambda: f(*inputs), number=1, repeat=args.repeat)))
        speed = f"{times[0] / times[-1]:8.1f}x" if len(times) > 1 else ""
        print(f"{name:<36} " + " ".join(f"{t * 1e3:10.2f}ms" for t in times) + f"  {speed}")


if __name__ == "__main__":
    main()
