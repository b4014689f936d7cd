"""The inverse system of levels W_n: 6^n word-tagged copies of the level-n
spiral, joined by letter-driven maps W_{n+1} -> W_n.

Words are indexed in base 6 with the first letter most significant, so the
parent of word ``w`` is ``w // 6`` and its last letter is ``w % 6``.  A point
of W_n sits at ``word_index * |spiral| + local_index``.
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import factorial

import numpy as np

from spiraltower import config
from spiraltower.errors import BadLevels, LevelTooLarge
from spiraltower.relations import FiniteMap, Labels, SurjectiveRelation
from spiraltower.spirals import (
    MINUS,
    PLUS,
    SpiralLabels,
    collapse_codes,
    edge_arrays,
    end_indices,
    parse_point,
    projection_codes,
    size,
)

ALPHABET = ("L1", "L2", "M1", "M2", "R1", "R2")
_LETTER = {a: i for i, a in enumerate(ALPHABET)}
EMPTY = "ε"
_WORD_RE = re.compile(r"(?:[LMR][12])+")

# letter kinds: what the step map does on a spiral whose word ends in it
L, M, R = 0, 1, 2

S, GMINUS, GPLUS = "S", "Gminus", "Gplus"
KINDS = (S, GMINUS, GPLUS)


def kind_of_letter(letter):
    return _LETTER[letter] // 2


@dataclass(frozen=True, order=True)
class Word:
    letters: tuple = ()

    def __post_init__(self):
        for a in self.letters:
            if a not in _LETTER:
                raise ValueError(f"unknown letter {a!r}")

    def __len__(self):
        return len(self.letters)

    @property
    def index(self):
        i = 0
        for a in self.letters:
            i = 6 * i + _LETTER[a]
        return i

    @classmethod
    def from_index(cls, n, i):
        letters = []
        for _ in range(n):
            i, r = divmod(i, 6)
            letters.append(ALPHABET[r])
        return cls(tuple(reversed(letters)))

    @classmethod
    def parse(cls, text):
        """``L1.M2``; dots and spaces between letters are optional."""
        text = re.sub(r"[.\s]", "", text)
        if text in ("", EMPTY):
            return cls(())
        if not _WORD_RE.fullmatch(text):
            raise ValueError(f"cannot parse word {text!r}")
        return cls(tuple(text[i:i + 2] for i in range(0, len(text), 2)))

    def prefix(self, n):
        return Word(self.letters[:n])

    def __add__(self, other):
        return Word(self.letters + other.letters)

    def __str__(self):
        return ".".join(self.letters) if self.letters else EMPTY

    __repr__ = __str__


def words(n):
    return [Word(w) for w in product(ALPHABET, repeat=n)]


@dataclass(frozen=True)
class LevelPoint:
    word: Word
    point: object

    def __str__(self):
        return f"{self.word}:{self.point}"

    __repr__ = __str__


@dataclass(frozen=True)
class Piece:
    word: Word
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown piece kind {self.kind!r}")

    def __str__(self):
        return f"{self.kind}[{self.word}]"

    __repr__ = __str__


def piece_sort_key(piece):
    return (len(piece.word), piece.word.index, KINDS.index(piece.kind))


class LevelLabels(Labels):
    def __init__(self, n):
        self.n = n
        self.spiral = SpiralLabels(n)
        self.spiral_size = len(self.spiral)
        self.words = 6 ** n

    def _key(self):
        return self.n

    def __len__(self):
        return self.words * self.spiral_size

    def __getitem__(self, i):
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        w, local = divmod(i, self.spiral_size)
        return LevelPoint(Word.from_index(self.n, w), self.spiral[local])

    def index(self, point, *args):
        if isinstance(point, str):
            word, _, local = point.partition(":")
            point = LevelPoint(Word.parse(word), parse_point(local, self.n))
        if len(point.word) != self.n:
            raise ValueError(f"{point} is not a point of level {self.n}")
        return point.word.index * self.spiral_size + self.spiral.index(point.point)


@dataclass(frozen=True, eq=False)
class SystemLevel:
    level: int
    points: LevelLabels
    relation: SurjectiveRelation

    def spiral_slice(self, word):
        s = self.points.spiral_size
        w = word.index if isinstance(word, Word) else word
        return slice(w * s, (w + 1) * s)


_DEFAULT = object()


def _limit(n, cap, which):
    if n < 0:
        raise BadLevels(f"level must be nonnegative, got {n}")
    if cap is _DEFAULT:
        cap = getattr(config.current(), which)
    if cap is not None and n > cap:
        raise LevelTooLarge(n, cap)


def level_keys(n):
    """Edge keys of W_n, sorted."""
    s = size(n)
    total = 6 ** n * s
    src, dst = edge_arrays(n)
    base = (np.arange(6 ** n, dtype=np.int64) * s)[:, None]
    # within a word the local keys are already sorted; words are disjoint
    # blocks of increasing index, so the concatenation stays sorted
    return ((base + src) * total + base + dst).ravel()


def build_level(n, cap=_DEFAULT):
    _limit(n, cap, "materialization_cap")
    return _level(n)


@lru_cache(maxsize=4)
def _level(n):
    labels = LevelLabels(n)
    return SystemLevel(n, labels, SurjectiveRelation(labels, level_keys(n), check=False))


@lru_cache(maxsize=None)
def local_step(n, kind):
    """Local codes Σ_{n+1} -> Σ_n for a word ending in a letter of ``kind``."""
    if kind == M:
        return projection_codes(n + 1, n)
    return collapse_codes(n + 1, n, MINUS if kind == L else PLUS)


def step_codes(n):
    tables = np.stack([local_step(n, k) for k in (L, M, R)])
    w = np.arange(6 ** (n + 1), dtype=np.int64)
    parent, kind = w // 6, (w % 6) // 2
    return (parent[:, None] * size(n) + tables[kind]).ravel()


def step_map(n, cap=_DEFAULT):
    """ξ : W_{n+1} -> W_n."""
    _limit(n + 1, cap, "materialization_cap")
    return FiniteMap(LevelLabels(n + 1), LevelLabels(n), step_codes(n))


def composed_map(n, k, cap=_DEFAULT):
    """ξ : W_{n+k} -> W_n, the composite of k step maps."""
    if k < 0:
        raise BadLevels("k must be nonnegative")
    _limit(n + k, cap, "materialization_cap")
    return FiniteMap(LevelLabels(n + k), LevelLabels(n), _composed_codes(n, k))


@lru_cache(maxsize=8)
def _composed_codes(n, k):
    codes = np.arange(len(LevelLabels(n + k)), dtype=np.int64)
    for j in range(n + k - 1, n - 1, -1):
        codes = step_codes(j)[codes]
    codes.setflags(write=False)
    return codes


@lru_cache(maxsize=None)
def local_composite(n, kinds):
    """Local codes Σ_{n+len(kinds)} -> Σ_n; ``kinds[0]`` is the letter kind
    at position n+1, the one applied last."""
    if not kinds:
        return np.arange(size(n), dtype=np.int64)
    out = local_step(n, kinds[0])[local_composite(n + 1, kinds[1:])]
    out.setflags(write=False)
    return out


def _word_kinds(word, n):
    return tuple(kind_of_letter(a) for a in word.letters[n:])


def piece_from_image(word, n, image):
    """The piece of ``word`` (length n) whose point set is ``image`` (local
    indices), or None.  At level 0 the three pieces coincide; the caller
    breaks that tie."""
    image = np.unique(np.asarray(image, dtype=np.int64))
    if image.size == size(n):
        return Piece(word, S)
    for kind, end in ((GMINUS, MINUS), (GPLUS, PLUS)):
        cyc = end_indices(n, end)
        if image.size == cyc.size and np.array_equal(image, cyc):
            return Piece(word, kind)
    return None


def letter_rule(word, n):
    """Piece predicted from the letters after position n."""
    for a in word.letters[n:]:
        k = kind_of_letter(a)
        if k != M:
            return Piece(word.prefix(n), GMINUS if k == L else GPLUS)
    return Piece(word.prefix(n), S)


def piece_of_image(word, n):
    """Piece of W_n onto which the spiral of ``word`` maps."""
    if isinstance(word, str):
        word = Word.parse(word)
    if not 0 <= n <= len(word):
        raise BadLevels(f"cannot project a word of length {len(word)} to level {n}")
    image = local_composite(n, _word_kinds(word, n))
    piece = piece_from_image(word.prefix(n), n, image)
    if n == 0:
        # one point: all three pieces are the same set
        return letter_rule(word, n)
    if piece is None:  # pragma: no cover - the maps always land on a piece
        raise AssertionError(f"image of spiral {word} is not a piece")
    return piece


def pieces(n):
    return [Piece(w, kind) for w in words(n) for kind in KINDS]


def piece_preimage_spirals(n, k, piece):
    """Words of length n+k whose spiral maps onto ``piece``, in index order."""
    if k < 1:
        raise BadLevels("k must be at least 1")
    _limit(n + k, _DEFAULT, "level_cap")
    if len(piece.word) != n:
        raise BadLevels(f"piece {piece} is not at level {n}")
    return [piece.word + Word(u) for u in product(ALPHABET, repeat=k)
            if piece_of_image(piece.word + Word(u), n) == piece]


def preimage_counts(n, k):
    """Piece kind -> number of preimage spirals in W_{n+k}, for one word of W_n.

    Every word of W_n has the same counts since only the suffix matters;
    :func:`preimage_counts_all` checks that by streaming every word.
    """
    counts = {kind: 0 for kind in KINDS}
    w0 = Word(("M1",) * n)
    for u in product(ALPHABET, repeat=k):
        counts[piece_of_image(w0 + Word(u), n).kind] += 1
    return counts


def preimage_counts_all(n, k):
    """Counts for every piece of W_n, streaming over all words of W_{n+k}."""
    _limit(n + k, _DEFAULT, "level_cap")
    counts = {p: 0 for p in pieces(n)}
    for w in product(ALPHABET, repeat=n + k):
        counts[piece_of_image(Word(w), n)] += 1
    return counts


def expected_counts(k):
    """Preimage counts implied by the letter rule: all-M suffixes give S, the
    first non-M letter picks the end."""
    if k == 0:
        return {S: 1, GMINUS: 1, GPLUS: 1}
    return {S: 2 ** k, GMINUS: (6 ** k - 2 ** k) // 2, GPLUS: (6 ** k - 2 ** k) // 2}


def piece_indices(piece):
    """Indices of W_n occupied by ``piece``."""
    n = len(piece.word)
    s = size(n)
    base = piece.word.index * s
    if piece.kind == S:
        return base + np.arange(s)
    return base + end_indices(n, MINUS if piece.kind == GMINUS else PLUS)


def cycle_length(n):
    return factorial(n)
