from itertools import product

import numpy as np
import pytest

from spiraltower import lifting, tower
from spiraltower.errors import ClimbTooSmall, NotEquivariant, PieceNotCovered, SourceTooShallow
from spiraltower.relations import FiniteMap, is_equivariant
from spiraltower.representation import SpiralModel, represent_relation
from spiraltower.spirals import (
    MINUS,
    PLUS,
    SpiralLabels,
    Wandering,
    build_finite_spiral,
    collapse_codes,
    projection_codes,
    size,
)
from spiraltower.tower import GMINUS, GPLUS, S, LevelLabels, Piece, Word


def piece_model(n, level=None, per_piece=1):
    """``per_piece`` spirals onto every piece of W_n, each of the given level."""
    m = n if level is None else level
    s = size(n)
    parts, sid = [], 0
    for w in range(6 ** n):
        for kind in (S, GMINUS, GPLUS):
            if kind == S:
                local = projection_codes(m, n)
            else:
                local = collapse_codes(m, n, MINUS if kind == GMINUS else PLUS)
            for _ in range(per_piece):
                parts.append((sid, m, w * s + local))
                sid += 1
    return SpiralModel.from_parts(tower.build_level(n).relation, parts)


def label_check(problem, result):
    """verify_lift's claims recomputed point by point on labels."""
    N = problem.n + problem.k
    xi = tower.composed_map(problem.n, problem.k)
    origin = result.origin()
    orig = problem.model
    for i, p in enumerate(result.expanded_model.points):
        src = origin[p.spiral]
        m0 = orig.spirals[orig.points.position(src)].level
        q = SpiralLabels(m0)[int(projection_codes(p.point.level, m0)[SpiralLabels(p.point.level).index(p.point)])]
        want = orig.assignment.codes[orig.points.offsets[orig.points.position(src)] + SpiralLabels(m0).index(q)]
        assert xi.codes[result.rho.codes[i]] == want
    assert is_equivariant(result.rho, result.expanded_model.relation, tower.build_level(N).relation)


def test_classify_canonical_matches_piece_of_image():
    p = lifting.LiftProblem.canonical(1, 2)
    classes = lifting.classify_spirals(p)
    for sid, piece in classes.items():
        assert piece == tower.piece_of_image(Word.from_index(3, sid), 1)


def test_classify_one_spiral_per_piece():
    p = lifting.LiftProblem(piece_model(1), 1, 1)
    classes = lifting.classify_spirals(p)
    assert len(set(classes.values())) == 18


def test_classify_level_zero():
    model = SpiralModel.from_parts(tower.build_level(0).relation, [(0, 2, np.zeros(7, np.int64))])
    assert lifting.classify_spirals(lifting.LiftProblem(model, 0, 1)) == {0: Piece(Word(), S)}


def test_balance_already_balanced():
    p = lifting.LiftProblem.canonical(1, 1)
    bal = lifting.balance_model(p)
    assert bal.duplication_record == {}
    assert len(bal.problem.model.spirals) == len(p.model.spirals)


def test_balance_one_per_piece():
    bal = lifting.balance_model(lifting.LiftProblem(piece_model(1), 1, 1))
    assert all(len(ids) == 2 for ids in bal.classes.values())
    assert all(len(d) == 1 for d in bal.duplication_record.values())


def test_balance_round_robin():
    # 3 spirals on a piece with 16 targets: 13 duplicates, cycling 0, 1, 2, 0, ...
    model = piece_model(1, per_piece=3)
    bal = lifting.balance_model(lifting.LiftProblem(model, 1, 2))
    piece = Piece(Word.parse("L1"), GMINUS)
    ids = bal.classes[piece]
    assert len(tower.piece_preimage_spirals(1, 2, piece)) == 16
    assert len(ids) == 16
    originals = ids[:3]
    assert [bal.origin[d] for d in ids[3:]] == [originals[j % 3] for j in range(13)]
    assert sum(len(bal.duplication_record[o]) for o in originals) == 13
    # fresh ids are above every existing id
    assert min(ids[3:]) > max(s.id for s in model.spirals)


def test_balance_errors():
    s = size(1)
    only_central = SpiralModel.from_parts(
        tower.build_level(1).relation, [(w, 1, w * s + np.arange(s)) for w in range(6)])
    with pytest.raises(PieceNotCovered):
        lifting.balance_model(lifting.LiftProblem(only_central, 1, 1))
    with pytest.raises(ClimbTooSmall):
        lifting.balance_model(lifting.LiftProblem(piece_model(1, per_piece=3), 1, 1))
    missing = SpiralModel.from_parts(tower.build_level(1).relation, [(0, 1, np.arange(s))])
    with pytest.raises(NotEquivariant):
        lifting.classify_spirals(lifting.LiftProblem(missing, 1, 1))


def test_anchor_uniqueness_by_exhaustive_search():
    """Every equivariant map of level 2 onto level 1 is pinned by where one
    wandering point goes, and the pinned map is the shift."""
    R2, R1 = build_finite_spiral(2).relation, build_finite_spiral(1).relation
    dom, cod = SpiralLabels(2), SpiralLabels(1)
    maps = []
    for codes in product(range(3), repeat=7):
        phi = FiniteMap(dom, cod, codes)
        if is_equivariant(phi, R2, R1):
            maps.append(codes)
    w0 = cod.index(Wandering(1, 0))
    for x in (-1, 0, 1):
        pinned = [c for c in maps if c[dom.index(Wandering(2, x))] == w0]
        assert pinned == [tuple(lifting.shift_codes(2, 1, x).tolist())]


def test_all_anchors_equivariant_level3_onto_level2():
    R3, R2 = build_finite_spiral(3).relation, build_finite_spiral(2).relation
    for x in (-1, 0, 1):
        phi = FiniteMap(SpiralLabels(3), SpiralLabels(2), lifting.shift_codes(3, 2, x))
        assert is_equivariant(phi, R3, R2)


def test_identity_anchor():
    word = Word.parse("M1M2")
    piece = Piece(Word.parse("M1"), S)
    phi = FiniteMap(SpiralLabels(2), LevelLabels(1),
                    piece.word.index * size(1) + projection_codes(2, 1))
    m, rho = lifting.anchor_map(2, phi, word, piece)
    assert m == 2
    assert np.array_equal(rho.codes - word.index * size(2), np.arange(size(2)))


@pytest.mark.parametrize("n,k", [(n, k) for n in range(3) for k in range(3)])
def test_canonical_lifts(n, k):
    p = lifting.LiftProblem.canonical(n, k)
    r = lifting.find_lift(p)
    assert lifting.verify_lift(p, r)
    if n + k <= 3:
        label_check(p, r)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(3) for k in range(1, 3)])
def test_represented_lifts(n, k):
    p = lifting.LiftProblem(represent_relation(tower.build_level(n).relation), n, k)
    r = lifting.find_lift(p, deepen=True)
    assert lifting.verify_lift(p, r)
    if n + k <= 3:
        label_check(p, r)


def test_shallow_source_without_deepen():
    p = lifting.LiftProblem(represent_relation(tower.build_level(1).relation), 1, 2)
    with pytest.raises(SourceTooShallow):
        lifting.find_lift(p)


def test_level_zero_six_spirals():
    parts = [(i, 2 + i % 2, np.zeros(size(2 + i % 2), np.int64)) for i in range(6)]
    model = SpiralModel.from_parts(tower.build_level(0).relation, parts)
    p = lifting.LiftProblem(model, 0, 1)
    r = lifting.find_lift(p)
    assert lifting.verify_lift(p, r)
    assert sorted(str(w) for w in r.targets.values()) == sorted(tower.ALPHABET)


def test_k_zero_is_identity():
    p = lifting.LiftProblem(piece_model(1), 1, 0)
    r = lifting.find_lift(p)
    assert r.rho == p.phi and lifting.verify_lift(p, r)


def test_mutations_are_rejected():
    p = lifting.LiftProblem.canonical(1, 1)
    r = lifting.find_lift(p)
    s = size(2)
    bad = r.rho.codes.copy()
    bad[0] = (bad[0] + s) % len(r.rho.codomain)  # same point, wrong word
    wrong = lifting.LiftResult(p, r.expanded_model, FiniteMap(r.rho.domain, r.rho.codomain, bad),
                               r.duplication_record, r.targets)
    assert not lifting.verify_lift(p, wrong)
    lost = lifting.LiftResult(p, r.expanded_model, r.rho, {0: [10 ** 6]}, r.targets)
    assert lifting.verify_lift(p, lost)  # an unused record entry changes nothing
    q = lifting.LiftProblem(piece_model(1, level=2), 1, 1)
    rq = lifting.find_lift(q)
    forged = lifting.LiftResult(q, rq.expanded_model, rq.rho, {}, rq.targets)
    assert not lifting.verify_lift(q, forged)


@pytest.mark.parametrize("n,k,j", [(0, 1, 1), (1, 1, 1), (0, 2, 1), (1, 1, 2), (2, 1, 1)])
def test_iterated_lifts_compose(n, k, j):
    p = lifting.LiftProblem(represent_relation(tower.build_level(n).relation), n, k)
    r1 = lifting.find_lift(p, deepen=True, with_end_companions=True)
    assert lifting.verify_lift(p, r1)
    p2 = r1.as_problem(j)
    r2 = lifting.find_lift(p2, deepen=True)
    assert lifting.verify_lift(p2, r2)
    xi = tower.composed_map(n, k + j).codes
    back = p.phi.codes[lifting.collapse_codes(p, r1)][lifting.collapse_codes(p2, r2)]
    assert np.array_equal(xi[r2.rho.codes], back)
