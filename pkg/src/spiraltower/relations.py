"""Finite surjective relations and maps between them.

A relation lives on an ordered vertex space (:class:`Labels`).  Edges are
stored as sorted, deduplicated integer keys ``src * n + dst`` over vertex
indices, so edge listings come out in vertex order and set equality of
relations is array equality.  Labels are opaque; the order of a
:class:`Labels` is the order used for every listing and tie-break.
"""

from collections.abc import Sequence
from functools import cached_property

import numpy as np

from spiraltower import kernels
from spiraltower.errors import (
    DomainMismatch,
    DuplicateVertex,
    NotSurjective,
    NotSurjectiveMap,
    UnknownVertex,
)


class Labels(Sequence):
    """An ordered, duplicate-free finite set of labels with O(1) lookup.

    Subclasses implement ``__len__``, ``__getitem__`` (for one integer) and
    ``index``; ``_key`` identifies the space for fast equality checks.
    """

    def _key(self):
        return None

    def __contains__(self, label):
        try:
            self.index(label)
        except (ValueError, KeyError, TypeError):
            return False
        return True

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Labels):
            return NotImplemented
        if type(self) is type(other) and self._key() is not None:
            return self._key() == other._key()
        if len(self) != len(other):
            return False
        return all(a == b for a, b in zip(self, other))

    def __hash__(self):
        key = self._key()
        return hash((type(self).__name__, key if key is not None else tuple(self)))

    def __repr__(self):
        head = ", ".join(repr(self[i]) for i in range(min(len(self), 4)))
        more = ", ..." if len(self) > 4 else ""
        return f"{type(self).__name__}([{head}{more}], size={len(self)})"


class TupleLabels(Labels):
    """Labels held explicitly in a tuple."""

    def __init__(self, items):
        self._items = tuple(items)
        self._pos = {label: i for i, label in enumerate(self._items)}
        if len(self._pos) != len(self._items):
            seen = set()
            for label in self._items:
                if label in seen:
                    raise DuplicateVertex(label)
                seen.add(label)

    def _key(self):
        return self._items

    def __len__(self):
        return len(self._items)

    def __getitem__(self, i):
        return self._items[i]

    def __iter__(self):
        return iter(self._items)

    def index(self, label, *args):
        try:
            return self._pos[label]
        except KeyError:
            raise ValueError(f"{label!r} is not a vertex") from None


class SubLabels(Labels):
    """The labels of ``parent`` at the given (increasing) indices."""

    def __init__(self, parent, indices):
        self.parent = parent
        self.indices = np.asarray(indices, dtype=np.int64)
        self._pos = {int(j): i for i, j in enumerate(self.indices)}

    def _key(self):
        return (self.parent, tuple(self.indices.tolist()))

    def __len__(self):
        return len(self.indices)

    def __getitem__(self, i):
        return self.parent[int(self.indices[i])]

    def index(self, label, *args):
        j = self.parent.index(label)
        try:
            return self._pos[j]
        except KeyError:
            raise ValueError(f"{label!r} is not in this subset") from None


def _sorted_labels(labels):
    labels = list(labels)
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=lambda v: (type(v).__name__, repr(v)))


def as_labels(vertices):
    if isinstance(vertices, Labels):
        return vertices
    return TupleLabels(_sorted_labels(vertices))


class SurjectiveRelation:
    """A relation on a finite vertex space, surjective in both coordinates.

    Construct with :func:`new_relation` (labels) or :meth:`from_arrays`
    (vertex indices).  Instances are immutable.
    """

    __slots__ = ("vertices", "keys", "__dict__")

    def __init__(self, vertices, keys, *, check=True):
        self.vertices = vertices
        keys = np.asarray(keys, dtype=np.int64)
        keys.setflags(write=False)
        self.keys = keys
        if check:
            self._check_surjective()

    @classmethod
    def from_arrays(cls, vertices, src, dst, *, check=True):
        n = len(vertices)
        return cls(vertices, kernels.unique_keys(src, dst, n), check=check)

    def _check_surjective(self):
        n = len(self.vertices)
        first_out, first_in = kernels.degree_defects(self.src, self.dst, n)
        if first_out >= 0:
            raise NotSurjective("outgoing", self.vertices[first_out])
        if first_in >= 0:
            raise NotSurjective("incoming", self.vertices[first_in])

    @property
    def n(self):
        return len(self.vertices)

    @property
    def num_edges(self):
        return int(self.keys.shape[0])

    @cached_property
    def src(self):
        return self.keys // max(self.n, 1)

    @cached_property
    def dst(self):
        return self.keys % max(self.n, 1)

    @cached_property
    def edges(self):
        """The edge set as a frozenset of label pairs."""
        return frozenset(self.edge_list())

    def edge_list(self):
        v = self.vertices
        return [(v[int(a)], v[int(b)]) for a, b in zip(self.src, self.dst)]

    def has_edge(self, a, b):
        n = self.n
        key = self.vertices.index(a) * n + self.vertices.index(b)
        i = np.searchsorted(self.keys, key)
        return bool(i < self.keys.shape[0] and self.keys[i] == key)

    @cached_property
    def _out_offsets(self):
        return np.searchsorted(self.src, np.arange(self.n + 1))

    @cached_property
    def _by_dst(self):
        order = np.lexsort((self.src, self.dst))
        dst = self.dst[order]
        return self.src[order], np.searchsorted(dst, np.arange(self.n + 1))

    def successor_indices(self, i):
        lo, hi = self._out_offsets[i], self._out_offsets[i + 1]
        return self.dst[lo:hi]

    def predecessor_indices(self, i):
        srcs, offsets = self._by_dst
        return srcs[offsets[i]:offsets[i + 1]]

    def successors(self, label):
        i = self.vertices.index(label)
        return [self.vertices[int(j)] for j in self.successor_indices(i)]

    def predecessors(self, label):
        i = self.vertices.index(label)
        return [self.vertices[int(j)] for j in self.predecessor_indices(i)]

    def induced(self, subset):
        """The relation restricted to ``subset`` (a :class:`SubLabels` of
        this vertex space, or any collection of its labels); edges leaving
        the subset are dropped."""
        if not isinstance(subset, SubLabels):
            idx = sorted({self.vertices.index(v) for v in subset})
            subset = SubLabels(self.vertices, np.array(idx, dtype=np.int64))
        if subset.parent != self.vertices:
            raise DomainMismatch("subset is not drawn from this vertex space")
        local = np.full(self.n, -1, dtype=np.int64)
        local[subset.indices] = np.arange(len(subset))
        s, d = local[self.src], local[self.dst]
        keep = (s >= 0) & (d >= 0)
        return SurjectiveRelation.from_arrays(subset, s[keep], d[keep])

    def __eq__(self, other):
        if not isinstance(other, SurjectiveRelation):
            return NotImplemented
        return self.vertices == other.vertices and np.array_equal(self.keys, other.keys)

    def __hash__(self):
        return hash((self.vertices, self.keys.tobytes()))

    def __repr__(self):
        return f"SurjectiveRelation(vertices={len(self.vertices)}, edges={self.num_edges})"


class FiniteMap:
    """A total function between two label spaces, stored as an index array.

    ``codes[i]`` is the codomain index of ``domain[i]``.
    """

    __slots__ = ("domain", "codomain", "codes")

    def __init__(self, domain, codomain, codes):
        codes = np.asarray(codes, dtype=np.int64)
        if codes.shape != (len(domain),):
            raise DomainMismatch(
                f"map has {codes.shape[0]} images for a domain of size {len(domain)}"
            )
        if codes.size and (codes.min() < 0 or codes.max() >= len(codomain)):
            raise DomainMismatch("map sends a point outside its codomain")
        codes.setflags(write=False)
        self.domain = domain
        self.codomain = codomain
        self.codes = codes

    @classmethod
    def identity(cls, labels):
        return cls(labels, labels, np.arange(len(labels)))

    @classmethod
    def from_function(cls, domain, codomain, fn):
        return cls(domain, codomain, [codomain.index(fn(x)) for x in domain])

    @classmethod
    def from_mapping(cls, mapping, domain=None, codomain=None):
        domain = as_labels(mapping.keys()) if domain is None else domain
        codomain = as_labels(set(mapping.values())) if codomain is None else codomain
        return cls.from_function(domain, codomain, mapping.__getitem__)

    def __call__(self, label):
        return self.codomain[int(self.codes[self.domain.index(label)])]

    def compose(self, inner):
        """``self ∘ inner``."""
        if inner.codomain != self.domain:
            raise DomainMismatch("inner map's codomain is not this map's domain")
        return FiniteMap(inner.domain, self.codomain, self.codes[inner.codes])

    def missed(self):
        """Codomain indices with no preimage."""
        hit = np.zeros(len(self.codomain), dtype=bool)
        hit[self.codes] = True
        return np.flatnonzero(~hit)

    def is_surjective(self):
        return self.missed().size == 0

    def image_indices(self):
        return np.unique(self.codes)

    def as_dict(self):
        return {x: self.codomain[int(c)] for x, c in zip(self.domain, self.codes)}

    def __eq__(self, other):
        if not isinstance(other, FiniteMap):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.codes, other.codes)
        )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.codes.tobytes()))

    def __repr__(self):
        return f"FiniteMap({len(self.domain)} -> {len(self.codomain)})"


def new_relation(vertices, edges):
    """Validated relation from a label collection and an iterable of pairs.

    Vertices given as a set are sorted; a :class:`Labels` or list keeps its
    order.
    """
    if isinstance(vertices, (set, frozenset)):
        labels = as_labels(vertices)
    elif isinstance(vertices, Labels):
        labels = vertices
    else:
        labels = TupleLabels(vertices)
    src, dst = [], []
    for pair in edges:
        a, b = pair
        try:
            src.append(labels.index(a))
            dst.append(labels.index(b))
        except ValueError:
            raise UnknownVertex(tuple(pair)) from None
    return SurjectiveRelation.from_arrays(labels, src, dst)


def reverse(R):
    """Swap every edge."""
    return SurjectiveRelation(R.vertices, kernels.unique_keys(R.dst, R.src, R.n), check=False)


def image_keys(phi, R1):
    """Keys of ``φ×φ(R1)`` over ``φ.codomain``, without any surjectivity check."""
    if phi.domain != R1.vertices:
        raise DomainMismatch("map domain differs from the relation's vertices")
    return kernels.edge_image_keys(R1.src, R1.dst, phi.codes, len(phi.codomain))


def image_under(phi, R1):
    """The relation ``φ×φ(R1)`` on ``φ.codomain``; φ must be onto."""
    keys = image_keys(phi, R1)
    missed = phi.missed()
    if missed.size:
        raise NotSurjectiveMap(phi.codomain[int(missed[0])])
    return SurjectiveRelation(phi.codomain, keys, check=False)


def is_equivariant(phi, R1, R2):
    """True iff φ×φ(R1) equals R2 exactly."""
    if phi.codomain != R2.vertices:
        raise DomainMismatch("map codomain differs from the target's vertices")
    return bool(np.array_equal(image_keys(phi, R1), R2.keys))


def is_map(R):
    """True iff every vertex has exactly one successor and one predecessor."""
    n = R.n
    return bool(
        (np.bincount(R.src, minlength=n) == 1).all()
        and (np.bincount(R.dst, minlength=n) == 1).all()
    )


def corestrict(phi):
    """φ with its codomain cut down to its image."""
    hit = phi.image_indices()
    sub = SubLabels(phi.codomain, hit)
    local = np.full(len(phi.codomain), -1, dtype=np.int64)
    local[hit] = np.arange(hit.shape[0])
    return FiniteMap(phi.domain, sub, local[phi.codes])


# relation files ----------------------------------------------------------

def relation_to_dict(R):
    return {
        "vertices": [str(v) for v in R.vertices],
        "edges": [[str(a), str(b)] for a, b in R.edge_list()],
    }


def relation_from_dict(doc):
    """Parse the ``{"vertices": [...], "edges": [[a, b], ...]}`` document."""
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise ValueError("relation document needs 'vertices' and 'edges'")
    vertices = [str(v) for v in doc["vertices"]]
    seen = set()
    for v in vertices:
        if v in seen:
            raise DuplicateVertex(v)
        seen.add(v)
    edges = []
    for pair in doc["edges"]:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"edge {pair!r} is not a pair")
        edges.append((str(pair[0]), str(pair[1])))
    return new_relation(set(vertices), edges)
