"""Finite spirals and the maps between them.

Level ``n >= 1`` has ``2n - 1`` wandering points ``W(x)``, ``-n < x < n``,
and two ``n!``-cycles ``P(+, t)`` and ``P(-, t)``.  Level 0 is a single
point ``O`` with a loop.

Index layout at level n (N = n!): ``P(+, t)`` at ``t``, ``P(-, t)`` at
``N + t``, ``W(x)`` at ``2N + x + n - 1``.  Most code works on these
indices; the point objects are for I/O and the public API.
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from spiraltower import config
from spiraltower.adding_machine import Residue
from spiraltower.errors import BadLevels, LevelTooLarge
from spiraltower.relations import FiniteMap, Labels, SubLabels, SurjectiveRelation

PLUS, MINUS = 1, -1
LEFT, RIGHT = "left", "right"

_SIDES = {LEFT: MINUS, RIGHT: PLUS, MINUS: MINUS, PLUS: PLUS, "minus": MINUS, "plus": PLUS}


@dataclass(frozen=True, repr=False)
class Wandering:
    level: int
    x: int

    def __post_init__(self):
        if not -self.level < self.x < self.level:
            raise ValueError(f"W({self.x}) does not exist at level {self.level}")

    def __str__(self):
        return f"W({self.x})"


@dataclass(frozen=True, repr=False)
class Periodic:
    level: int
    end: int
    t: int

    def __post_init__(self):
        if self.level < 1 or self.end not in (PLUS, MINUS):
            raise ValueError("bad periodic point")
        if not 0 <= self.t < factorial(self.level):
            raise ValueError(f"t={self.t} is not reduced mod {self.level}!")

    @property
    def residue(self):
        return Residue(factorial(self.level), self.t)

    def __str__(self):
        return f"P({'+' if self.end == PLUS else '-'},{self.t})"


@dataclass(frozen=True, repr=False)
class Origin:
    """The single point of level 0."""

    level: int = 0

    def __str__(self):
        return "O"


_LABEL_RE = re.compile(r"^\s*(?:W\((-?\d+)\)|P\(\s*([+\-−])\s*,\s*(\d+)\s*\)|O)\s*$")


for _cls in (Wandering, Periodic, Origin):
    _cls.__repr__ = _cls.__str__


def parse_point(label, n):
    m = _LABEL_RE.match(label)
    if not m:
        raise ValueError(f"cannot parse spiral point {label!r}")
    if m.group(1) is not None:
        return Wandering(n, int(m.group(1)))
    if m.group(2) is not None:
        return Periodic(n, PLUS if m.group(2) == "+" else MINUS, int(m.group(3)))
    if n != 0:
        raise ValueError("O exists only at level 0")
    return Origin()


def size(n):
    return 1 if n == 0 else 2 * n - 1 + 2 * factorial(n)


class SpiralLabels(Labels):
    """The points of level ``n`` in index order, generated on demand."""

    def __init__(self, n):
        self.n = n
        self.N = factorial(n)
        self._size = size(n)

    def _key(self):
        return self.n

    def __len__(self):
        return self._size

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self._size))]
        if i < 0:
            i += self._size
        if not 0 <= i < self._size:
            raise IndexError(i)
        n, N = self.n, self.N
        if n == 0:
            return Origin()
        if i < N:
            return Periodic(n, PLUS, i)
        if i < 2 * N:
            return Periodic(n, MINUS, i - N)
        return Wandering(n, i - 2 * N - n + 1)

    def index(self, point, *args):
        if isinstance(point, str):
            point = parse_point(point, self.n)
        if point.level != self.n:
            raise ValueError(f"{point} belongs to level {point.level}, not {self.n}")
        if isinstance(point, Origin):
            return 0
        if isinstance(point, Periodic):
            return point.t + (0 if point.end == PLUS else self.N)
        return 2 * self.N + point.x + self.n - 1


@lru_cache(maxsize=None)
def point_arrays(n):
    """``(kind, value)`` per index: kind 0 = P(+), 1 = P(-), 2 = W, 3 = O."""
    if n == 0:
        return np.array([3]), np.array([0])
    N = factorial(n)
    kind = np.concatenate([np.zeros(N, np.int64), np.ones(N, np.int64), np.full(2 * n - 1, 2)])
    value = np.concatenate([np.arange(N), np.arange(N), np.arange(-n + 1, n)]).astype(np.int64)
    kind.setflags(write=False)
    value.setflags(write=False)
    return kind, value


def zeta_values(n):
    """Wandering coordinate or cycle residue of every point, by index."""
    return point_arrays(n)[1]


def wandering_index(n, x):
    return 2 * factorial(n) + x + n - 1


@lru_cache(maxsize=None)
def edge_arrays(n):
    """``(src, dst)`` of the relation at level n, sorted by key."""
    if n == 0:
        return np.array([0]), np.array([0])
    N = factorial(n)
    t = np.arange(N)
    w = np.arange(-n + 1, n - 1)
    src = np.concatenate([
        t,                                      # plus cycle
        N + t,                                  # minus cycle
        [N + (-n) % N],                         # minus end feeds W(-n+1)
        wandering_index(n, w),                  # W(x) -> W(x+1)
        [wandering_index(n, n - 1)],            # W(n-1) feeds the plus end
    ])
    dst = np.concatenate([
        (t + 1) % N,
        N + (t + 1) % N,
        [wandering_index(n, -n + 1)],
        wandering_index(n, w + 1),
        [n % N],
    ])
    src = src.astype(np.int64)
    dst = dst.astype(np.int64)
    order = np.argsort(src * size(n) + dst, kind="stable")
    src, dst = src[order], dst[order]
    src.setflags(write=False)
    dst.setflags(write=False)
    return src, dst


@dataclass(frozen=True, eq=False)
class FiniteSpiral:
    level: int
    points: SpiralLabels
    relation: SurjectiveRelation

    def __len__(self):
        return len(self.points)

    def plus_cycle(self):
        return SubLabels(self.points, np.arange(factorial(self.level)) if self.level else [0])

    def minus_cycle(self):
        N = factorial(self.level)
        return SubLabels(self.points, np.arange(N, 2 * N) if self.level else [0])


def _check_cap(n, cap):
    if n < 0:
        raise BadLevels(f"level must be nonnegative, got {n}")
    if cap is not None and n > cap:
        raise LevelTooLarge(n, cap)


_DEFAULT = object()


def build_finite_spiral(n, cap=_DEFAULT):
    """Level-``n`` spiral.  ``cap=None`` lifts the configured level cap."""
    _check_cap(n, config.current().level_cap if cap is _DEFAULT else cap)
    return _spiral(n)


@lru_cache(maxsize=None)
def _spiral(n):
    labels = SpiralLabels(n)
    src, dst = edge_arrays(n)
    return FiniteSpiral(n, labels, SurjectiveRelation(labels, src * size(n) + dst, check=False))


def zero_point(n):
    return Origin() if n == 0 else Wandering(n, 0)


def classify(p):
    return "wandering" if isinstance(p, Wandering) else "recurrent"


def _side(side):
    try:
        return _SIDES[side]
    except (KeyError, TypeError):
        raise ValueError(f"side must be left or right, got {side!r}") from None


@lru_cache(maxsize=None)
def projection_codes(m, n):
    if m < n:
        raise BadLevels(f"cannot project level {m} onto level {n}")
    kind, value = point_arrays(m)
    if n == 0:
        return np.zeros(len(kind), np.int64)
    N = factorial(n)
    out = np.where(kind == 1, N + value % N, value % N)
    wand = kind == 2
    inside = wand & (np.abs(value) < n)
    out = np.where(inside, 2 * N + value + n - 1, out)
    out = np.where(wand & ~inside & (value < 0), N + value % N, out)
    out = out.astype(np.int64)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def collapse_codes(m, n, end):
    if m < n:
        raise BadLevels(f"cannot collapse level {m} onto level {n}")
    _, value = point_arrays(m)
    if n == 0:
        return np.zeros(len(value), np.int64)
    N = factorial(n)
    out = (value % N + (0 if end == PLUS else N)).astype(np.int64)
    out.setflags(write=False)
    return out


def spiral_projection(m, n):
    """The canonical map from level m onto level n."""
    return FiniteMap(SpiralLabels(m), SpiralLabels(n), projection_codes(m, n))


def collapse_end(m, n, side):
    """Map from level m onto the ``side`` end cycle of level n."""
    return FiniteMap(SpiralLabels(m), SpiralLabels(n), collapse_codes(m, n, _side(side)))


def end_indices(n, end):
    if n == 0:
        return np.array([0], np.int64)
    N = factorial(n)
    return np.arange(N) + (0 if _side(end) == PLUS else N)


def wandering_mask(n):
    return point_arrays(n)[0] == 2


def preimage_indices(codes, target_index):
    return np.flatnonzero(np.asarray(codes) == target_index)
