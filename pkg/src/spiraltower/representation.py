"""Finite spiral models of finite surjective relations.

Every edge extends to a bi-infinite chain that is periodic at both ends.
Such a chain is the image of a finite spiral, so finitely many spirals
cover the relation.
"""

from dataclasses import dataclass
from functools import cached_property
from math import factorial

import numpy as np

from spiraltower.errors import InternalVerificationFailed, RelationError
from spiraltower.relations import FiniteMap, Labels, SurjectiveRelation, image_keys
from spiraltower.spirals import SpiralLabels, build_finite_spiral, edge_arrays, point_arrays, size


class EdgeNotInRelation(RelationError):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"{edge!r} is not an edge")


@dataclass(frozen=True, eq=False)
class Chain:
    """An eventually periodic bi-infinite walk ``... head head middle tail tail ...``.

    Entries are vertex indices of ``target``.  ``head_end`` is the position
    of the last head entry; the first edge of the walk sits at positions 0, 1.
    """

    head_cycle: tuple
    middle: tuple
    tail_cycle: tuple
    target: SurjectiveRelation
    head_end: int = 0

    @property
    def tail_start(self):
        return self.head_end + 1 + len(self.middle)

    def value(self, x):
        p, q = len(self.head_cycle), len(self.tail_cycle)
        if x <= self.head_end:
            return self.head_cycle[(x - self.head_end - 1) % p]
        if x < self.tail_start:
            return self.middle[x - self.head_end - 1]
        return self.tail_cycle[(x - self.tail_start) % q]

    def values(self, lo, hi):
        return [self.value(x) for x in range(lo, hi + 1)]

    def labels(self, part):
        v = self.target.vertices
        return tuple(v[i] for i in getattr(self, part))

    def edge_keys(self):
        """Sorted keys of every consecutive pair of the walk."""
        n = self.target.n
        lo = self.head_end - len(self.head_cycle)
        hi = self.tail_start + len(self.tail_cycle)
        seq = np.array(self.values(lo, hi), dtype=np.int64)
        return np.unique(seq[:-1] * n + seq[1:])

    def __repr__(self):
        return (f"Chain(head={self.labels('head_cycle')}, middle={self.labels('middle')}, "
                f"tail={self.labels('tail_cycle')}, head_end={self.head_end})")


def _vertex_index(R, v):
    return v if isinstance(v, (int, np.integer)) else R.vertices.index(v)


def extend_edge_to_chain(R, edge):
    """Chain through ``edge = (a0, a1)`` built by least-successor and
    least-predecessor walks; the repeated stretch at each end is the cycle."""
    try:
        a0, a1 = (_vertex_index(R, v) for v in edge)
    except ValueError:
        raise EdgeNotInRelation(tuple(edge)) from None
    if not R.has_edge(R.vertices[a0], R.vertices[a1]):
        raise EdgeNotInRelation(tuple(edge))

    fwd, seen = [a1], {a1: 0}
    while True:
        nxt = int(R.successor_indices(fwd[-1])[0])
        if nxt in seen:
            cut = seen[nxt]
            break
        seen[nxt] = len(fwd)
        fwd.append(nxt)

    back, seen_b = [a0], {a0: 0}
    while True:
        prv = int(R.predecessor_indices(back[-1])[0])
        if prv in seen_b:
            j = seen_b[prv]
            break
        seen_b[prv] = len(back)
        back.append(prv)

    # back[i] sits at position -i; the loop back[j:] repeats leftwards
    head = tuple(reversed(back[j:]))
    middle = tuple(reversed(back[:j])) + tuple(fwd[:cut])
    return Chain(head, middle, tuple(fwd[cut:]), R, head_end=-j)


def cover_relation(R):
    """Chains, one per edge not yet covered, scanning edges in key order."""
    covered = np.zeros(R.num_edges, dtype=bool)
    chains = []
    for i, key in enumerate(R.keys):
        if covered[i]:
            continue
        chain = extend_edge_to_chain(R, (int(key // R.n), int(key % R.n)))
        chains.append(chain)
        covered[np.searchsorted(R.keys, chain.edge_keys())] = True
    return chains


def _periodic_from(chain, m):
    """Whether the chain already agrees with its head pattern at every
    position <= -m and with its tail pattern at every position >= m - 1."""
    p, q = len(chain.head_cycle), len(chain.tail_cycle)
    for x in range(chain.head_end + 1, -m + 1):
        if chain.value(x) != chain.head_cycle[(x - chain.head_end - 1) % p]:
            return False
    for x in range(m - 1, chain.tail_start):
        if chain.value(x) != chain.tail_cycle[(x - chain.tail_start) % q]:
            return False
    return True


def chain_level(chain):
    p, q = len(chain.head_cycle), len(chain.tail_cycle)
    m = 1
    while factorial(m) % p or factorial(m) % q or not _periodic_from(chain, m):
        m += 1
    return m


def chain_codes(chain, m):
    kind, value = point_arrays(m)
    p, q = len(chain.head_cycle), len(chain.tail_cycle)
    head = np.array(chain.head_cycle, dtype=np.int64)
    tail = np.array(chain.tail_cycle, dtype=np.int64)
    out = np.empty(len(kind), dtype=np.int64)
    plus, minus = kind == 0, kind == 1
    out[plus] = tail[(value[plus] - chain.tail_start) % q]
    out[minus] = head[(value[minus] - chain.head_end - 1) % p]
    for i in np.flatnonzero(kind == 2):
        out[i] = chain.value(int(value[i]))
    return out


def chain_to_spiral_map(chain):
    """``(m, φ)``: the least level whose spiral maps onto exactly the chain's
    edges, wandering point ``W(x)`` going to the chain entry at ``x``."""
    m = chain_level(chain)
    return m, FiniteMap(SpiralLabels(m), chain.target.vertices, chain_codes(chain, m))


# models ----------------------------------------------------------------------

@dataclass(frozen=True)
class ModelSpiral:
    id: int
    level: int


@dataclass(frozen=True)
class ModelPoint:
    spiral: int
    point: object

    def __str__(self):
        return f"{self.spiral}:{self.point}"

    __repr__ = __str__


class ModelLabels(Labels):
    """Points of a disjoint union of spirals, spiral by spiral."""

    def __init__(self, spirals):
        self.spirals = tuple(spirals)
        sizes = [size(s.level) for s in self.spirals]
        self.offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        self._pos = {s.id: i for i, s in enumerate(self.spirals)}
        if len(self._pos) != len(self.spirals):
            raise ValueError("spiral ids must be unique")
        self._labels = {}

    def _key(self):
        return self.spirals

    def __len__(self):
        return int(self.offsets[-1])

    def _spiral_labels(self, level):
        if level not in self._labels:
            self._labels[level] = SpiralLabels(level)
        return self._labels[level]

    def position(self, spiral_id):
        return self._pos[spiral_id]

    def block(self, pos):
        return slice(int(self.offsets[pos]), int(self.offsets[pos + 1]))

    def __getitem__(self, i):
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        pos = int(np.searchsorted(self.offsets, i, side="right")) - 1
        s = self.spirals[pos]
        return ModelPoint(s.id, self._spiral_labels(s.level)[i - int(self.offsets[pos])])

    def index(self, point, *args):
        if isinstance(point, tuple):
            point = ModelPoint(*point)
        try:
            pos = self._pos[point.spiral]
        except KeyError:
            raise ValueError(f"no spiral with id {point.spiral}") from None
        local = self._spiral_labels(self.spirals[pos].level).index(point.point)
        return int(self.offsets[pos]) + local


def union_relation(labels):
    keys = []
    total = len(labels)
    for pos, s in enumerate(labels.spirals):
        src, dst = edge_arrays(s.level)
        off = labels.offsets[pos]
        keys.append((src + off) * total + dst + off)
    return SurjectiveRelation(labels, np.concatenate(keys) if keys else np.empty(0, np.int64),
                              check=False)


@dataclass(frozen=True, eq=False)
class SpiralModel:
    """Disjoint spirals with a map of all their points onto ``target``."""

    points: ModelLabels
    assignment: FiniteMap
    target: SurjectiveRelation

    @classmethod
    def from_parts(cls, target, parts):
        """``parts`` is a list of ``(id, level, codes)``."""
        spirals = [ModelSpiral(i, m) for i, m, _ in parts]
        labels = ModelLabels(spirals)
        codes = (np.concatenate([np.asarray(c, np.int64) for _, _, c in parts])
                 if parts else np.empty(0, np.int64))
        return cls(labels, FiniteMap(labels, target.vertices, codes), target)

    @property
    def spirals(self):
        return self.points.spirals

    @cached_property
    def relation(self):
        return union_relation(self.points)

    def spiral_codes(self, spiral_id):
        return self.assignment.codes[self.points.block(self.points.position(spiral_id))]

    def spiral_map(self, spiral_id):
        s = self.spirals[self.points.position(spiral_id)]
        return FiniteMap(SpiralLabels(s.level), self.target.vertices, self.spiral_codes(spiral_id))

    def spiral_edge_keys(self, spiral_id):
        s = self.spirals[self.points.position(spiral_id)]
        return image_keys(self.spiral_map(spiral_id), build_finite_spiral(s.level, cap=None).relation)

    def image_keys(self):
        return image_keys(self.assignment, self.relation)

    def is_exact(self):
        """Whether the union relation maps onto ``target`` exactly."""
        return bool(np.array_equal(self.image_keys(), self.target.keys))


def represent_relation(R):
    parts = []
    for i, chain in enumerate(cover_relation(R)):
        m, phi = chain_to_spiral_map(chain)
        parts.append((i, m, phi.codes))
    model = SpiralModel.from_parts(R, parts)
    if not model.is_exact():  # pragma: no cover - construction guard
        raise InternalVerificationFailed("spiral model does not reproduce the relation")
    return model
