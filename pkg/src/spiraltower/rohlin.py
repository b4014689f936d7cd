"""Block-structured permutations of the naturals.

The naturals 1, 2, 3, ... are cut into consecutive blocks J_1, J_2, ... of
strictly increasing size; J^n is the union of the first n blocks.  K_n is
the group of permutations that preserve J^n and every later block, and
K(π) is the set of a in K_n whose restriction to J^n is π.

Two variants of element are supported: finitely supported (an explicit
table on some J^t, identity beyond) and blockwise (a head permutation of
J^n plus a rule producing the permutation of each later block on demand).
"""

import re
import threading
from collections import Counter
from functools import lru_cache
from itertools import permutations

import numpy as np

from spiraltower import config, kernels
from spiraltower.errors import (
    ImageOutsideBlock,
    InternalVerificationFailed,
    NotInjective,
    NotInvariant,
    PermutationError,
    UnsupportedVariantCombination,
    WrongStructure,
)


def canonical_size(i):
    return i * i * (i + 1) // 2


class JStructure:
    """Blocks J_i with ``|J_i| = size_rule(i)``; sizes must strictly increase."""

    def __init__(self, size_rule=canonical_size, *, canonical=None):
        self.size_rule = size_rule
        self.canonical = size_rule is canonical_size if canonical is None else canonical
        self._sizes = [0]
        self._starts = [1, 1]  # _starts[i] = first point of J_i
        self._lock = threading.Lock()

    @classmethod
    def from_sizes(cls, sizes):
        sizes = list(sizes)
        if any(s < 1 for s in sizes) or any(a >= b for a, b in zip(sizes, sizes[1:])):
            raise PermutationError(f"block sizes must be positive and strictly increase: {sizes}")

        def rule(i):
            if i > len(sizes):
                raise PermutationError(f"block {i} is beyond the listed sizes")
            return sizes[i - 1]

        # a finite list never fixes the whole schedule
        return cls(rule, canonical=False)

    def _extend(self, i):
        with self._lock:
            while len(self._sizes) <= i:
                j = len(self._sizes)
                sz = int(self.size_rule(j))
                if sz < 1 or (j > 1 and sz <= self._sizes[-1]):
                    raise PermutationError(f"block sizes must strictly increase (|J_{j}| = {sz})")
                self._sizes.append(sz)
                self._starts.append(self._starts[-1] + sz)

    def size(self, i):
        self._extend(i)
        return self._sizes[i]

    def start(self, i):
        self._extend(i)
        return self._starts[i]

    def block(self, i):
        return range(self.start(i), self.start(i) + self.size(i))

    def top(self, n):
        """|J^n|."""
        return self.start(n + 1) - 1 if n > 0 else 0

    def block_of(self, x):
        if x < 1:
            raise ValueError("points are natural numbers starting at 1")
        i = 1
        while self.start(i + 1) <= x:
            i += 1
        return i

    def level_of_top(self, size):
        """The n with |J^n| = size, or None."""
        n = 0
        while self.top(n) < size:
            n += 1
        return n if self.top(n) == size else None

    def block_index_array(self, n):
        """Block number of each point 1..|J^n|, zero-based positions."""
        return np.concatenate([np.full(self.size(i), i, np.int64) for i in range(1, n + 1)]) \
            if n else np.empty(0, np.int64)

    def __repr__(self):
        return f"JStructure(sizes={[self.size(i) for i in range(1, 6)]}...)"


CANONICAL = JStructure()


# finite permutations ---------------------------------------------------------

_CYCLES_RE = re.compile(r"(\s*\(\s*\d+(?:[\s,]+\d+)*\s*\)\s*)+")


class FinitePermutation:
    """A bijection of a finite set of naturals, usually 1..|J^n|."""

    __slots__ = ("points", "images", "_map")

    def __init__(self, points, images):
        self.points = tuple(int(p) for p in points)
        self.images = tuple(int(p) for p in images)
        if len(self.points) != len(self.images):
            raise PermutationError("points and images differ in length")
        if sorted(self.points) != sorted(self.images) or len(set(self.points)) != len(self.points):
            raise NotInjective("not a bijection of its ground set")
        self._map = dict(zip(self.points, self.images))

    @classmethod
    def on_range(cls, images, start=1):
        return cls(range(start, start + len(images)), images)

    @classmethod
    def identity(cls, size, start=1):
        return cls.on_range(range(start, start + size), start)

    @classmethod
    def parse(cls, text, size):
        """Cycle notation on 1..size, fixed points omitted: ``(1 2)(3 4 5)``."""
        text = text.strip()
        img = list(range(1, size + 1))
        if text in ("", "()", "id", "e"):
            return cls.on_range(img)
        if not _CYCLES_RE.fullmatch(text):
            raise PermutationError(f"cannot parse cycle notation {text!r}")
        seen = set()
        for body in re.findall(r"\(([^)]*)\)", text):
            cyc = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
            for x in cyc:
                if not 1 <= x <= size:
                    raise PermutationError(f"point {x} is outside 1..{size}")
                if x in seen:
                    raise NotInjective(f"point {x} appears twice")
                seen.add(x)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b
        return cls.on_range(img)

    def __call__(self, x):
        return self._map[x]

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, FinitePermutation) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def compose(self, inner):
        """``self ∘ inner`` on a shared ground set."""
        return FinitePermutation(inner.points, [self._map[inner(x)] for x in inner.points])

    def inverse(self):
        return FinitePermutation(self.images, self.points)

    def cycles(self):
        seen, out = set(), []
        for x in sorted(self.points):
            if x in seen:
                continue
            cyc = [x]
            seen.add(x)
            y = self._map[x]
            while y != x:
                cyc.append(y)
                seen.add(y)
                y = self._map[y]
            out.append(tuple(cyc))
        return out

    def to_cycle_notation(self):
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles() if len(c) > 1)
        return body or "()"

    def __repr__(self):
        return f"FinitePermutation({self.to_cycle_notation()} on {len(self)} points)"


def cycle_type(sigma):
    """Cycle length -> multiplicity."""
    return dict(sorted(Counter(len(c) for c in sigma.cycles()).items()))


# structured permutations -----------------------------------------------------

class StructuredPermutation:
    J: JStructure

    def image(self, x):
        raise NotImplementedError

    def in_K(self, n):
        raise NotImplementedError

    def restrict(self, m):
        """The restriction to J^m."""
        top = self.J.top(m)
        images = [self.image(x) for x in range(1, top + 1)]
        if any(y > top for y in images):
            raise NotInvariant(m)
        return FinitePermutation.on_range(images)

    @property
    def level(self):
        """Least n >= 1 with the element in K_n."""
        n = 1
        while not self.in_K(n):
            n += 1
        return n


class FinitelySupported(StructuredPermutation):
    """Explicit images of 1..|J^t|; identity beyond."""

    def __init__(self, J, images):
        images = np.asarray(images, dtype=np.int64)
        t = 0
        while J.top(t) < images.shape[0]:
            t += 1
        if J.top(t) > images.shape[0]:
            images = np.concatenate([images, np.arange(images.shape[0] + 1, J.top(t) + 1)])
        if images.size and (np.sort(images) != np.arange(1, images.shape[0] + 1)).any():
            raise NotInjective("images are not a permutation of 1..|J^t|")
        images.setflags(write=False)
        self.J = J
        self.images = images
        self.support_level = t

    @classmethod
    def identity(cls, J):
        return cls(J, [])

    def image(self, x):
        return int(self.images[x - 1]) if x <= self.images.shape[0] else x

    def in_K(self, n):
        J, img = self.J, self.images
        if n < 1:
            return False
        upto = min(n, self.support_level)
        top = J.top(upto)
        if (img[:top] > top).any():
            return False
        for i in range(n + 1, self.support_level + 1):
            lo, hi = J.start(i), J.start(i + 1) - 1
            seg = img[lo - 1:hi]
            if ((seg < lo) | (seg > hi)).any():
                return False
        return True

    def compose(self, inner):
        """``self ∘ inner`` when both are finitely supported."""
        if not isinstance(inner, FinitelySupported):
            raise UnsupportedVariantCombination("compose needs finitely supported operands")
        t = max(self.support_level, inner.support_level)
        top = self.J.top(t)
        return FinitelySupported(self.J, [self.image(inner.image(x)) for x in range(1, top + 1)])

    def inverse(self):
        inv = np.empty_like(self.images)
        inv[self.images - 1] = np.arange(1, self.images.shape[0] + 1)
        return FinitelySupported(self.J, inv)

    def __eq__(self, other):
        if not isinstance(other, FinitelySupported):
            return NotImplemented
        t = max(self.support_level, other.support_level)
        return all(self.image(x) == other.image(x) for x in range(1, self.J.top(t) + 1))

    __hash__ = None

    def __repr__(self):
        perm = FinitePermutation.on_range(self.images.tolist())
        return f"FinitelySupported({perm.to_cycle_notation()}, support J^{self.support_level})"


class Blockwise(StructuredPermutation):
    """A permutation of J^n (``head``) and a rule ``i -> local images`` giving
    the permutation of each block i > n as images of 0..|J_i|-1."""

    def __init__(self, J, n, head, rule):
        head = np.asarray(head, dtype=np.int64)
        if head.shape[0] != J.top(n):
            raise PermutationError(f"head must permute J^{n}")
        if head.size and (np.sort(head) != np.arange(1, head.shape[0] + 1)).any():
            raise NotInjective("head is not a permutation of J^n")
        head.setflags(write=False)
        self.J = J
        self.head_level = n
        self.head = head
        self.rule = rule
        self._blocks = {}
        self._lock = threading.Lock()

    def block_perm(self, i):
        """Local images of block i (> head level), memoized."""
        got = self._blocks.get(i)
        if got is not None:
            return got
        with self._lock:
            got = self._blocks.get(i)
            if got is None:
                got = np.asarray(self.rule(i), dtype=np.int64)
                if (np.sort(got) != np.arange(self.J.size(i))).any():
                    raise ImageOutsideBlock(f"rule for block {i} is not a permutation of it")
                got.setflags(write=False)
                self._blocks[i] = got
        return got

    def image(self, x):
        if x <= self.head.shape[0]:
            return int(self.head[x - 1])
        i = self.J.block_of(x)
        lo = self.J.start(i)
        return lo + int(self.block_perm(i)[x - lo])

    def in_K(self, n):
        if n < 1:
            return False
        if n >= self.head_level:
            return True
        J, head = self.J, self.head
        if (head[:J.top(n)] > J.top(n)).any():
            return False
        for i in range(n + 1, self.head_level + 1):
            lo, hi = J.start(i), J.start(i + 1) - 1
            seg = head[lo - 1:hi]
            if ((seg < lo) | (seg > hi)).any():
                return False
        return True

    def block_cycles(self, i):
        """``(mins, lengths)`` of the cycles inside block i, points 1-based."""
        return _block_cycles(self, i)

    def __repr__(self):
        return f"Blockwise(head J^{self.head_level}, rule={getattr(self.rule, '__name__', self.rule)})"


def _block_cycles(a, i):
    J = a.J
    lo, hi = J.start(i), J.start(i + 1) - 1
    if isinstance(a, Blockwise) and i > a.head_level:
        local = a.block_perm(i)
    else:
        imgs = np.array([a.image(x) for x in range(lo, hi + 1)], dtype=np.int64)
        local = np.where((imgs >= lo) & (imgs <= hi), imgs - lo, -1)
    mins, lengths = kernels.closed_cycles(local)
    return mins + lo, lengths


def level_of(J, pi):
    n = J.level_of_top(len(pi))
    if n is None or tuple(pi.points) != tuple(range(1, len(pi) + 1)):
        raise PermutationError(f"a permutation on {len(pi)} points is not on any J^n")
    return n


def in_neighborhood(a, pi):
    """Whether ``a`` lies in K(π)."""
    n = level_of(a.J, pi)
    if n == 0 or not a.in_K(n):
        return False
    return a.restrict(n) == pi


def exchanger(J, beta):
    """The involution swapping J^n with ``β(J^n)`` pointwise.

    ``beta`` maps 1..|J^n| (a dict or a sequence of images) into one block.
    """
    if isinstance(beta, dict):
        dom = sorted(beta)
        img = [beta[x] for x in dom]
    else:
        img = list(beta)
        dom = list(range(1, len(img) + 1))
    n = J.level_of_top(len(dom))
    if n is None or dom != list(range(1, len(dom) + 1)):
        raise PermutationError("β must be defined on some J^n")
    if len(set(img)) != len(img):
        raise NotInjective("β is not injective")
    if not img:
        return FinitelySupported.identity(J)
    blocks = {J.block_of(y) for y in img}
    if len(blocks) != 1 or min(blocks) <= n:
        raise ImageOutsideBlock("β must land inside a single block J_{n+k}, k >= 1")
    target = blocks.pop()
    images = np.arange(1, J.top(target) + 1, dtype=np.int64)
    for x, y in zip(dom, img):
        images[x - 1] = y
        images[y - 1] = x
    return FinitelySupported(J, images)


def conjugate(b, a):
    """``b ∘ a ∘ b^{-1}``."""
    if not isinstance(b, FinitelySupported):
        raise UnsupportedVariantCombination("the conjugator must be finitely supported")
    J = b.J
    if isinstance(a, FinitelySupported):
        t = max(a.support_level, b.support_level)
        top = J.top(t)
        binv = b.inverse()
        return FinitelySupported(J, [b.image(a.image(binv.image(x))) for x in range(1, top + 1)])
    if isinstance(a, Blockwise):
        t = max(a.head_level, b.support_level)
        top = J.top(t)
        binv = b.inverse()
        head = [b.image(a.image(binv.image(x))) for x in range(1, top + 1)]
        return Blockwise(J, t, head, a.block_perm)
    raise UnsupportedVariantCombination(f"cannot conjugate a {type(a).__name__}")


def contains_copy(a, pi, scan_bound=None):
    """An injection β of J^n into a deeper block with ``β∘π = a∘β``, or None
    when no block up to ``scan_bound`` holds enough cycles of each length."""
    if scan_bound is None:
        scan_bound = config.current().rohlin_scan_bound
    J = a.J
    n = level_of(J, pi)
    cycles = sorted(pi.cycles(), key=lambda c: (len(c), c[0]))
    need = Counter(len(c) for c in cycles)
    for i in range(n + 1, scan_bound + 1):
        if J.size(i) < len(pi):
            continue
        mins, lengths = _block_cycles(a, i)
        have = Counter(lengths.tolist())
        if any(have[length] < cnt for length, cnt in need.items()):
            continue
        pool = {}
        for mn, length in sorted(zip(mins.tolist(), lengths.tolist()), key=lambda t: (t[1], t[0])):
            pool.setdefault(length, []).append(mn)
        used = Counter()
        beta = {}
        for cyc in cycles:
            d = pool[len(cyc)][used[len(cyc)]]
            used[len(cyc)] += 1
            for x in cyc:
                beta[x] = d
                d = a.image(d)
        if all(beta[pi(x)] == a.image(beta[x]) for x in pi.points):
            return beta
        raise InternalVerificationFailed("matched cycles do not intertwine")  # pragma: no cover
    return None


def witness_block(J, n):
    """Least k >= 1 with |J_{n+k}| >= |J^n|, as the block index n + k."""
    i = n + 1
    while J.size(i) < J.top(n):
        i += 1
    return i


def witness_pair(pi1, pi2, J=CANONICAL):
    """``(a, b)`` with a in K(π1) and b a b^{-1} in K(π2), both verified."""
    n1, n2 = level_of(J, pi1), level_of(J, pi2)
    if n1 != n2:
        raise PermutationError("π1 and π2 must act on the same J^n")
    n = n1
    i = witness_block(J, n)
    base = J.start(i) - 1
    total = J.top(i)
    p1 = np.array(pi1.images, dtype=np.int64) - 1
    p2 = np.array(pi2.images, dtype=np.int64) - 1
    a0, _ = kernels.witness_arrays(p1, p2, total, base)
    beta = {x: base + x for x in range(1, J.top(n) + 1)}
    a = FinitelySupported(J, a0 + 1)
    b = exchanger(J, beta)
    if not in_neighborhood(a, pi1) or not in_neighborhood(conjugate(b, a), pi2):
        raise InternalVerificationFailed("witness pair failed its membership checks")
    return a, b


def witness_sweep(n, J=CANONICAL, perms=None):
    """Check the witness over every ordered pair of permutations of J^n.

    Returns ``(checked, failure)`` where failure is None or the pair of
    row indices that failed.
    """
    s = J.top(n)
    if perms is None:
        perms = np.array(list(permutations(range(s))), dtype=np.int64).reshape(-1, s)
    i = witness_block(J, n)
    block_of = J.block_index_array(i)
    passed, fi, fj = kernels.witness_sweep(perms, block_of, n, J.start(i) - 1)
    return passed, (None if fi < 0 else (fi, fj))


@lru_cache(maxsize=None)
def candidate_block(i):
    """Local images of block J_i: i cycles of each length 1..i, consecutive."""
    out = []
    pos = 0
    for length in range(1, i + 1):
        for _ in range(i):
            out.extend(pos + (j + 1) % length for j in range(length))
            pos += length
    return tuple(out)


def transitive_candidate(J=CANONICAL):
    if not J.canonical:
        raise WrongStructure("the candidate needs block sizes i·i(i+1)/2")
    return Blockwise(J, 0, [], candidate_block)
