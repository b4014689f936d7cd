"""Lifting an equivariant spiral model from W_n to W_{n+k}.

The model's spirals are sorted by the piece of W_n they map onto.  Each
piece class is padded with duplicate spirals until it has one spiral per
target spiral of W_{n+k} over that piece, and then each spiral is mapped
onto its target.  Every such map is a shift of the wandering coordinate,
pinned by sending one source point to the target's zero point.
"""

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from spiraltower import kernels
from spiraltower.errors import (
    ClimbTooSmall,
    InternalVerificationFailed,
    NotEquivariant,
    PieceNotCovered,
    SourceTooShallow,
    SpiralImageNotAPiece,
)
from spiraltower.relations import FiniteMap, is_equivariant
from spiraltower.representation import SpiralModel
from spiraltower.spirals import (
    MINUS,
    PLUS,
    SpiralLabels,
    end_indices,
    point_arrays,
    projection_codes,
    size,
    wandering_index,
)
from spiraltower.tower import (
    GMINUS,
    GPLUS,
    S,
    LevelLabels,
    Piece,
    Word,
    build_level,
    kind_of_letter,
    local_composite,
    piece_from_image,
    piece_preimage_spirals,
    piece_sort_key,
    words,
    _composed_codes,
)


@dataclass(frozen=True, eq=False)
class LiftProblem:
    model: SpiralModel
    n: int
    k: int

    def __post_init__(self):
        if self.model.target.vertices != LevelLabels(self.n):
            raise ValueError(f"model target is not the relation of W_{self.n}")
        if self.k < 0:
            raise ValueError("k must be nonnegative")

    @property
    def phi(self):
        return self.model.assignment

    @classmethod
    def canonical(cls, n, k):
        """Model = the spirals of W_{n+k}, mapped down by ξ."""
        s = size(n + k)
        codes = _composed_codes(n, k)
        parts = [(w, n + k, codes[w * s:(w + 1) * s]) for w in range(6 ** (n + k))]
        return cls(SpiralModel.from_parts(build_level(n).relation, parts), n, k)


@dataclass(frozen=True, eq=False)
class LiftResult:
    problem: LiftProblem
    expanded_model: SpiralModel
    rho: FiniteMap
    duplication_record: dict
    targets: dict = field(default_factory=dict)
    companions: tuple = ()

    @property
    def level(self):
        return self.problem.n + self.problem.k

    def origin(self):
        """Expanded spiral id -> original spiral id."""
        out = {s.id: s.id for s in self.problem.model.spirals}
        for orig, dups in self.duplication_record.items():
            for d in dups:
                out[d] = orig
        return out

    def as_problem(self, j):
        """The lift as a new problem: its spirals mapped onto W_{n+k} by ρ."""
        R = build_level(self.level).relation
        m = self.expanded_model
        return LiftProblem(SpiralModel(m.points, self.rho, R), self.level, j)


def classify_spirals(problem):
    """Spiral id -> the piece of W_n equal to its image."""
    model, n = problem.model, problem.n
    if not is_equivariant(problem.phi, model.relation, model.target):
        raise NotEquivariant("the model does not map onto the relation of W_n exactly")
    s = size(n)
    out = {}
    for sp in model.spirals:
        codes = model.spiral_codes(sp.id)
        word_ids = np.unique(codes // s)
        if word_ids.size != 1:
            raise SpiralImageNotAPiece(sp.id)
        word = Word.from_index(n, int(word_ids[0]))
        if n == 0:
            out[sp.id] = Piece(word, S)
            continue
        piece = piece_from_image(word, n, codes % s)
        if piece is None:
            raise SpiralImageNotAPiece(sp.id)
        out[sp.id] = piece
    return out


def piece_classes(n):
    """The pieces spirals are sorted into; level 0 has a single class."""
    if n == 0:
        return [Piece(Word(), S)]
    return sorted((Piece(w, kind) for w in words(n) for kind in (S, GMINUS, GPLUS)),
                  key=piece_sort_key)


def class_targets(n, k, piece):
    if k == 0:
        return [piece.word]
    if n == 0:
        return words(k)
    return piece_preimage_spirals(n, k, piece)


@dataclass(frozen=True, eq=False)
class Balanced:
    problem: LiftProblem
    classes: dict
    duplication_record: dict
    origin: dict


def balance_model(problem):
    """Duplicate spirals (fresh ids, same level and map) until every piece
    class holds exactly as many spirals as there are target spirals over it."""
    n, k = problem.n, problem.k
    classes = classify_spirals(problem)
    members = {p: [] for p in piece_classes(n)}
    for sid in sorted(classes):
        members[classes[sid]].append(sid)
    model = problem.model
    next_id = max(classes, default=-1) + 1
    record, origin = {}, {sid: sid for sid in classes}
    parts = [(sp.id, sp.level, model.spiral_codes(sp.id)) for sp in model.spirals]
    levels = {sp.id: sp.level for sp in model.spirals}
    for piece, ids in members.items():
        capacity = len(class_targets(n, k, piece))
        if not ids:
            raise PieceNotCovered(piece)
        if len(ids) > capacity:
            raise ClimbTooSmall(piece, len(ids), capacity)
        originals = list(ids)
        for j in range(capacity - len(originals)):
            src = originals[j % len(originals)]
            record.setdefault(src, []).append(next_id)
            origin[next_id] = src
            parts.append((next_id, levels[src], model.spiral_codes(src)))
            ids.append(next_id)
            next_id += 1
    expanded = SpiralModel.from_parts(model.target, parts)
    return Balanced(LiftProblem(expanded, n, k), members, record, origin)


# anchoring ---------------------------------------------------------------------

def shift_codes(m, N, x):
    """Σ_m -> Σ_N sending W(y) to W(y - x) when that exists and every other
    point to the end cycles by residue of y - x."""
    kind, value = point_arrays(m)
    F = factorial(N)
    d = value - x
    out = np.where(kind == 1, F + d % F, d % F)
    wand = kind == 2
    inside = wand & (np.abs(d) < N)
    out = np.where(inside, 2 * F + d + N - 1, out)
    out = np.where(wand & ~inside & (d < 0), F + d % F, out)
    return out.astype(np.int64)


def _value_at(phi_local, m, x):
    """φ at W(x) after deepening the source to any level > |x|."""
    if m == 0:
        return int(phi_local[0])
    if abs(x) < m:
        return int(phi_local[wandering_index(m, x)])
    F = factorial(m)
    return int(phi_local[x % F + (0 if x > 0 else F)])


def _suffix_kinds(target_word, n):
    return tuple(kind_of_letter(a) for a in target_word.letters[n:])


def anchor_position(phi_local, m, target_word, n):
    """``(x, required_level)``: the least source position pinned to the
    target zero point, and the source level needed for it."""
    N = len(target_word)
    L = local_composite(n, _suffix_kinds(target_word, n))
    goal = int(L[wandering_index(N, 0)])
    reach = m - N
    for x in range(-reach, reach + 1):
        if _value_at(phi_local, m, x) == goal:
            return x, m
    bound = max(m, N) + factorial(max(m, N)) + 1
    for r in range(max(reach + 1, 0), bound):
        for x in (-r, r):
            if _value_at(phi_local, m, x) == goal:
                return x, N + r
    raise NotEquivariant(f"no source point maps to the image of the zero point of {target_word}")


def anchor_map(m, phi, target_word, piece, *, deepen=False, spiral_id=None):
    """Equivariant map from the level-m spiral onto the spiral of
    ``target_word`` in W_{n+k} that composes with ξ to ``phi``.

    ``phi`` maps the level-m spiral onto ``piece`` (a FiniteMap into W_n).
    Returns ``(level, FiniteMap)``: the source level actually used (larger
    than m only with ``deepen``) and the map on that level's spiral.
    """
    n = len(piece.word)
    N = len(target_word)
    s = size(n)
    phi_local = np.asarray(phi.codes) - piece.word.index * s
    x, required = anchor_position(phi_local, m, target_word, n)
    required = max(required, N)
    if required > m:
        if not deepen:
            raise SourceTooShallow(required, spiral_id)
        phi_local = phi_local[projection_codes(required, m)]
        m = required
        x, _ = anchor_position(phi_local, m, target_word, n)
    local = shift_codes(m, N, x)
    L = local_composite(n, _suffix_kinds(target_word, n))
    if not np.array_equal(L[local], phi_local):
        raise NotEquivariant(f"spiral {spiral_id} is not a shift onto its piece")
    codes = target_word.index * size(N) + local
    return m, FiniteMap(SpiralLabels(m), LevelLabels(N), codes)


def _companion_codes(phi_local, m, target_word, n, end):
    """Codes of Σ_m onto one end cycle of ``target_word`` composing with ξ
    to ``phi_local``, or None."""
    N = len(target_word)
    F = factorial(N)
    L = local_composite(n, _suffix_kinds(target_word, n))
    cyc = end_indices(N, end)
    _, value = point_arrays(m)
    for c in range(F):
        local = cyc[(value + c) % F]
        if np.array_equal(L[local], phi_local):
            return target_word.index * size(N) + local
    return None


# the lift ------------------------------------------------------------------------

def find_lift(problem, *, deepen=False, with_end_companions=False, verify=True):
    n, k = problem.n, problem.k
    if k == 0:
        result = LiftResult(problem, problem.model, problem.phi, {})
        if verify and not verify_lift(problem, result):  # pragma: no cover
            raise InternalVerificationFailed("k=0 lift failed verification")
        return result

    bal = balance_model(problem)
    model = bal.problem.model
    N = n + k
    s_n = size(n)
    parts, rho_parts, targets = [], [], {}
    record = {orig: list(d) for orig, d in bal.duplication_record.items()}

    for piece, ids in bal.classes.items():
        for sid, word in zip(sorted(ids), class_targets(n, k, piece)):
            sp_level = model.spirals[model.points.position(sid)].level
            phi = model.spiral_map(sid)
            m, rho = anchor_map(sp_level, phi, word, piece, deepen=deepen, spiral_id=sid)
            codes = phi.codes if m == sp_level else phi.codes[projection_codes(m, sp_level)]
            parts.append((sid, m, codes))
            rho_parts.append(rho.codes)
            targets[sid] = word

    companions = []
    if with_end_companions:
        first = {p: min(ids) for p, ids in bal.classes.items()}
        origin_levels = {sp.id: sp.level for sp in problem.model.spirals}
        next_id = max(targets) + 1
        for word in words(N):
            L = local_composite(n, _suffix_kinds(word, n))
            for end in (MINUS, PLUS):
                if n == 0:
                    piece = Piece(Word(), S)
                else:
                    piece = piece_from_image(word.prefix(n), n, L[end_indices(N, end)])
                src = bal.origin[first[piece]]
                m = origin_levels[src]
                phi_local = problem.model.spiral_codes(src) - piece.word.index * s_n
                if m < N:
                    if not deepen:
                        raise SourceTooShallow(N, src)
                    phi_local = phi_local[projection_codes(N, m)]
                    m = N
                codes = _companion_codes(phi_local, m, word, n, end)
                if codes is None:
                    raise NotEquivariant(f"spiral {src} is not a cycle map onto its piece")
                parts.append((next_id, m, phi_local + piece.word.index * s_n))
                rho_parts.append(codes)
                record.setdefault(src, []).append(next_id)
                companions.append(next_id)
                targets[next_id] = word
                next_id += 1

    expanded = SpiralModel.from_parts(problem.model.target, parts)
    rho = FiniteMap(expanded.points, LevelLabels(N), np.concatenate(rho_parts))
    result = LiftResult(problem, expanded, rho, record, targets, tuple(companions))
    if verify and not verify_lift(problem, result):
        raise InternalVerificationFailed("constructed lift failed verification")
    return result


def collapse_codes(problem, result):
    """Expanded points -> original points, rebuilt from the duplication
    record and the spiral levels."""
    orig_points = problem.model.points
    origin = result.origin()
    pieces = []
    for sp in result.expanded_model.spirals:
        src = origin.get(sp.id)
        if src is None:
            return None
        pos = orig_points.position(src)
        m0 = orig_points.spirals[pos].level
        if sp.level < m0:
            return None
        pieces.append(orig_points.offsets[pos] + projection_codes(sp.level, m0))
    return np.concatenate(pieces) if pieces else np.empty(0, np.int64)


def verify_lift(problem, result):
    """ρ is equivariant onto R_{n+k}, ξ∘ρ equals φ through the duplication
    record, and ρ is onto."""
    n, k = problem.n, problem.k
    N = n + k
    rho = result.rho
    model = result.expanded_model
    if rho.codomain != LevelLabels(N) or rho.domain != model.points:
        return False
    collapse = collapse_codes(problem, result)
    if collapse is None:
        return False
    phi_back = problem.phi.codes[collapse]
    if not np.array_equal(model.assignment.codes, phi_back):
        return False
    xi = _composed_codes(n, k) if k else np.arange(len(LevelLabels(n)), dtype=np.int64)
    if not np.array_equal(xi[rho.codes], phi_back):
        return False
    if not rho.is_surjective():
        return False
    target = build_level(N).relation
    keys = kernels.edge_image_keys(model.relation.src, model.relation.dst, rho.codes, len(rho.codomain))
    return bool(np.array_equal(keys, target.keys))
