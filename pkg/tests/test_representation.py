import random
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spiraltower.relations import new_relation
from spiraltower.representation import (
    Chain,
    EdgeNotInRelation,
    chain_to_spiral_map,
    cover_relation,
    extend_edge_to_chain,
    represent_relation,
)
from spiraltower.spirals import Periodic, Wandering, build_finite_spiral, PLUS
from spiraltower.suites import random_relation


def walk_pairs(chain, lo=-20, hi=20):
    vals = chain.values(lo, hi)
    return list(zip(vals, vals[1:]))


def test_fixed_point_chain():
    R = new_relation({"a"}, [("a", "a")])
    c = extend_edge_to_chain(R, ("a", "a"))
    assert c.labels("head_cycle") == ("a",) and c.labels("middle") == () and c.labels("tail_cycle") == ("a",)
    m, phi = chain_to_spiral_map(c)
    assert m == 1
    assert set(phi.as_dict().values()) == {"a"} and len(phi.domain) == 3


def test_two_vertex_example():
    R = new_relation({"a", "b"}, [("a", "b"), ("b", "a"), ("b", "b")])
    c = extend_edge_to_chain(R, ("a", "b"))
    # the walk is ... b a b a b ... in both directions
    v = R.vertices
    assert "".join(v[i] for i in c.values(-4, 4)) == "ababababa"
    assert c.value(0) == v.index("a") and c.value(1) == v.index("b")
    assert sorted(c.labels("tail_cycle")) == ["a", "b"]
    assert sorted(c.labels("head_cycle")) == ["a", "b"]


def test_missing_edge():
    R = new_relation({"a", "b"}, [("a", "b"), ("b", "a")])
    with pytest.raises(EdgeNotInRelation):
        extend_edge_to_chain(R, ("a", "a"))
    with pytest.raises(EdgeNotInRelation):
        extend_edge_to_chain(R, ("a", "z"))


def test_level_example_two_cycles_and_middle():
    R = new_relation(set("abcdef"), [("a", "b"), ("b", "a"), ("b", "c"), ("c", "d"),
                                      ("d", "e"), ("e", "f"), ("f", "e")])
    idx = R.vertices.index
    c = Chain((idx("a"), idx("b")), (idx("c"), idx("d")), (idx("e"), idx("f")), R, head_end=-1)
    m, phi = chain_to_spiral_map(c)
    assert m == 3  # 2 | 3!, and the tail starts at position 2 = m - 1
    assert phi(Wandering(3, 0)) == "c" and phi(Wandering(3, 1)) == "d"
    assert phi(Wandering(3, 2)) == "e"
    assert phi(Periodic(3, PLUS, 2)) == "e"


def test_single_cycle_needs_one_chain():
    R = new_relation(range(5), [(i, (i + 1) % 5) for i in range(5)])
    assert len(cover_relation(R)) == 1


def test_complete_two_vertex_relation():
    R = new_relation({"a", "b"}, [(x, y) for x in "ab" for y in "ab"])
    chains = cover_relation(R)
    covered = {(R.vertices[a], R.vertices[b]) for c in chains for a, b in walk_pairs(c)}
    assert covered == R.edges
    assert represent_relation(R).is_exact()


def _check_chain(c, R):
    v = R.vertices
    for a, b in walk_pairs(c, -30, 30):
        assert R.has_edge(v[a], v[b])
    m, phi = chain_to_spiral_map(c)
    assert factorial(m) % len(c.head_cycle) == 0 and factorial(m) % len(c.tail_cycle) == 0
    # well-definedness: cycle points agree with every orbit position in their class
    M = factorial(m)
    for x in range(-40, 41):
        if x >= m:
            assert phi.codes[x % M] == c.value(x)
        elif x <= -m:
            assert phi.codes[M + x % M] == c.value(x)
    return m


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_chains(seed):
    rng = random.Random(seed)
    R = random_relation(rng, 8)
    a, b = R.edge_list()[rng.randrange(R.num_edges)]
    c = extend_edge_to_chain(R, (a, b))
    ia, ib = R.vertices.index(a), R.vertices.index(b)
    assert c.value(0) == ia and c.value(1) == ib
    _check_chain(c, R)


def test_cover_and_model_on_random_relations():
    rng = random.Random(0)
    for _ in range(100):
        R = random_relation(rng, 8)
        chains = cover_relation(R)
        assert len(chains) <= R.num_edges
        covered = {(R.vertices[a], R.vertices[b]) for c in chains for a, b in walk_pairs(c, -40, 40)}
        assert covered == R.edges
        model = represent_relation(R)
        assert model.is_exact()
        # per spiral, the image is a subrelation of R
        for s in model.spirals:
            keys = model.spiral_edge_keys(s.id)
            assert np.isin(keys, R.keys).all()


def test_spiral_relation_reconstructed():
    R = build_finite_spiral(2).relation
    model = represent_relation(R)
    assert model.is_exact()


def test_deterministic():
    R = random_relation(random.Random(3), 8)
    a = represent_relation(R)
    b = represent_relation(R)
    assert [(s.id, s.level) for s in a.spirals] == [(s.id, s.level) for s in b.spirals]
    assert np.array_equal(a.assignment.codes, b.assignment.codes)
