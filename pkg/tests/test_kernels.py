"""Both kernel backends agree with each other and with plain-Python oracles."""

from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spiraltower import _core_py, kernels

edges = st.integers(1, 12).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=60),
    )
)


@settings(max_examples=200, deadline=None)
@given(edges, st.data())
def test_edge_image_keys_matches_set_oracle(backend_edges, data):
    n, pairs = backend_edges
    m = data.draw(st.integers(1, 8))
    codes = np.array(data.draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n)))
    src = np.array([a for a, _ in pairs], dtype=np.int64)
    dst = np.array([b for _, b in pairs], dtype=np.int64)
    oracle = sorted({int(codes[a]) * m + int(codes[b]) for a, b in pairs})
    for mod in kernels.backends().values():
        assert mod.edge_image_keys(src, dst, codes, m).tolist() == oracle
        assert mod.unique_keys(src, dst, n).tolist() == sorted({a * n + b for a, b in pairs})


def test_degree_defects(backend):
    src = np.array([0, 0, 2])
    dst = np.array([1, 2, 2])
    assert backend.degree_defects(src, dst, 3) == (1, 0)
    assert backend.degree_defects(np.array([0, 1]), np.array([1, 0]), 2) == (-1, -1)


@settings(max_examples=100, deadline=None)
@given(st.permutations(range(9)), st.sets(st.integers(0, 8)))
def test_closed_cycles_agree(perm, cut):
    local = np.array([(-1 if i in cut else v) for i, v in enumerate(perm)], dtype=np.int64)
    results = [mod.closed_cycles(local) for mod in kernels.backends().values()]
    for mins, lens in results:
        assert mins.tolist() == results[0][0].tolist()
        assert lens.tolist() == results[0][1].tolist()
    # oracle: cycles of perm avoiding the cut
    seen, expect = set(), []
    for s in range(9):
        if s in seen:
            continue
        cyc, x = [], s
        while x not in cyc:
            cyc.append(x)
            x = perm[x]
        seen.update(cyc)
        if not set(cyc) & cut:
            expect.append((min(cyc), len(cyc)))
    got = sorted(zip(results[0][0].tolist(), results[0][1].tolist()))
    assert got == sorted(expect)


def test_witness_arrays(backend):
    a, b = backend.witness_arrays(np.array([1, 0]), np.array([0, 1]), 8, 4)
    assert a.tolist() == [1, 0, 2, 3, 4, 5, 6, 7]
    assert b.tolist() == [4, 5, 2, 3, 0, 1, 6, 7]


def test_witness_sweep_backends_agree_and_detect_bad_layout():
    perms = np.array(list(permutations(range(3))), dtype=np.int64)
    block_of = np.array([1, 1, 1, 2, 2, 2, 2, 2], dtype=np.int64)
    for mod in kernels.backends().values():
        assert mod.witness_sweep(perms, block_of, 1, 3) == (36, -1, -1)
    # a base that puts the copy across a block boundary must fail at once
    bad = np.array([1, 1, 1, 2, 2, 3, 3, 3], dtype=np.int64)
    results = {mod.witness_sweep(perms, bad, 1, 3) for mod in kernels.backends().values()}
    assert len(results) == 1
    passed, fi, fj = results.pop()
    assert fi >= 0 and passed < 36


@pytest.mark.skipif("compiled" not in kernels.backends(), reason="extension not built")
def test_dispatch_prefers_compiled():
    assert kernels.BACKEND == "compiled" or kernels._impl is _core_py


def test_forced_python_backend_runs_end_to_end():
    import os
    import subprocess
    import sys

    code = ("import spiraltower; from spiraltower import suites; "
            "assert spiraltower.BACKEND == 'python'; "
            "assert all(c.passed for c in suites.tower_exactness(max_n=3)); "
            "from spiraltower import rohlin; assert rohlin.witness_sweep(1)[1] is None")
    env = dict(os.environ, SPIRALTOWER_BACKEND="python")
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
