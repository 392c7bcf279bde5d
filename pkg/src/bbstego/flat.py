"""Truthful pseudorandom flat channels.

A flat channel is uniform on a size-``H`` subset ``D_i`` of ``[0, S)`` for
each history length ``i``.  The subset is never stored: it is the leaf
pattern of a binary tree over ``[0, S-1]`` whose root holds ``H`` and whose
internal nodes hold subtree sums.  Nodes are filled lazily from the root
down.  Given a node covering ``m`` positions with count ``t``, the count of
its left child (``m_l`` positions) is drawn from the hypergeometric
distribution by inverse CDF, using a 64-bit deviate from the keyed PRF::

    u = prf_uniform64(omega, ("tree", ctr=i, doc=node))

Nodes are numbered heap-style (root 1, children ``2n`` and ``2n+1``) and
intervals split at ``(a + b) // 2``.  Children always sum to their parent,
so the support has exactly ``H`` elements whatever the PRF outputs.
"""

from __future__ import annotations

import hashlib
import hmac
import math
from dataclasses import dataclass
from math import comb

from .prf import TAG_CODES, _INPUT

EXACT_LIMIT = 1 << 20
# Nodes whose left count can range over more than FAST_SPAN values try the
# float search first; CERTIFY_MARGIN is far above its accumulated rounding error.
FAST_SPAN = 64
CERTIFY_MARGIN = 1e-6
_TREE_TAG = TAG_CODES["tree"]


@dataclass(frozen=True)
class FlatChannelSeed:
    omega: bytes

    def __post_init__(self):
        if len(self.omega) == 0:
            raise ValueError("seed must be non-empty")

    @property
    def n(self) -> int:
        return 8 * len(self.omega)

    @classmethod
    def generate(cls, n: int, rng) -> "FlatChannelSeed":
        if n <= 0 or n % 8:
            raise ValueError("seed length must be a positive multiple of 8 bits")
        return cls(rng.getrandbits(n).to_bytes(n // 8, "big"))

    @classmethod
    def from_hex(cls, text: str) -> "FlatChannelSeed":
        return cls(bytes.fromhex(text))

    def hex(self) -> str:
        return self.omega.hex()


@dataclass(frozen=True)
class IntervalQuery:
    S: int
    H: int
    i: int
    a: int
    b: int

    def __post_init__(self):
        check_params(self.S, self.H)
        if self.i < 1:
            raise ValueError("history-length index i must be >= 1")
        if not 0 <= self.a <= self.b < self.S:
            raise ValueError(f"need 0 <= a <= b < S, got a={self.a}, b={self.b}, S={self.S}")


def check_params(S: int, H: int) -> None:
    if S < 1:
        raise ValueError("alphabet size S must be positive")
    if not 0 < H <= S:
        raise ValueError(f"need 0 < H <= S, got H={H}, S={S}")


def hypergeom_inverse_cdf(u: int, m: int, t: int, ml: int) -> int:
    """Left-child count for a node of ``m`` positions holding ``t`` ones.

    Returns the smallest ``x`` with ``CDF(x) > u / 2**64`` where ``X`` counts
    ones among the first ``ml`` positions of a uniformly random weight-``t``
    string.  For ``m <= 2**20`` the result always equals the exact
    integer computation; above that it is evaluated in log space.
    """
    if not (0 <= t <= m and 0 <= ml <= m and 0 <= u < 1 << 64):
        raise ValueError("bad hypergeometric parameters")
    mr = m - ml
    lo = max(0, t - mr)
    hi = min(t, ml)
    if lo == hi:
        return lo
    if m > EXACT_LIMIT:
        return _hypergeom_inverse_cdf_float(u, m, t, ml, lo, hi)[0]
    if hi - lo > FAST_SPAN:
        # float search, accepted only when u/2**64 is clear of both CDF values
        # bracketing the answer by far more than the float error
        x, below, at = _hypergeom_inverse_cdf_float(u, m, t, ml, lo, hi)
        target = u / float(1 << 64)
        if target - below > CERTIFY_MARGIN and at - target > CERTIFY_MARGIN:
            return x
    return _hypergeom_inverse_cdf_exact(u, m, t, ml, lo)


def _hypergeom_inverse_cdf_exact(u, m, t, ml, lo):
    mr = m - ml
    # term(x) = C(ml, x) * C(mr, t - x); scanning x upward the ratio
    # term(x+1)/term(x) is rational and the product stays an integer.
    threshold = u * comb(m, t)
    term = comb(ml, lo) * comb(mr, t - lo)
    acc = term << 64
    x = lo
    while acc <= threshold:
        term = term * (ml - x) * (t - x) // ((x + 1) * (mr - t + x + 1))
        x += 1
        acc += term << 64
    return x


def _hypergeom_inverse_cdf_float(u, m, t, ml, lo, hi):
    mr = m - ml
    mean = t * ml / m
    # Bernstein's inequality holds for sampling without replacement; with
    # the binomial variance below, each tail outside the window has mass
    # under exp(-28) < 1e-12, far inside the certification margin
    var = t * (ml / m) * (mr / m)
    width = math.sqrt(56.0 * var) + 56.0 / 3.0 + 2.0
    start = max(lo, int(math.floor(mean - width)))
    stop = min(hi, int(math.ceil(mean + width)))
    target = u / float(1 << 64)
    # log P(X = x), advanced by the term ratio; only the starting point
    # needs lgamma, so the relative error of every term is about 1e-8
    lp = _log_comb(ml, start) + _log_comb(mr, t - start) - _log_comb(m, t)
    acc = 0.0
    for x in range(start, stop + 1):
        prev = acc
        if lp > -745.0:
            acc += math.exp(lp)
            if acc > target:
                return x, prev, acc
        lp += math.log((ml - x) * (t - x)) - math.log((x + 1) * (mr - t + x + 1)) if x < stop else 0.0
    return stop, acc, 1.0


def _log_comb(n, k):
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


class FlatTree:
    """Lazily filled interval-sum tree for one ``(omega, S, H)``.

    Node counts are memoized; memoization never changes answers because each
    node is a pure function of the seed.
    """

    def __init__(self, seed: FlatChannelSeed, S: int, H: int):
        check_params(S, H)
        self.seed = seed
        self.S = S
        self.H = H
        self._key = seed.omega
        self._left: dict = {}

    def left_count(self, i: int, node: int, a: int, b: int, t: int) -> int:
        """Count of ones in the left child of ``node`` (covering ``[a, b]``, holding ``t``)."""
        k = (i, node)
        v = self._left.get(k)
        if v is None:
            m = b - a + 1
            mid = (a + b) >> 1
            ml = mid - a + 1
            if t == 0:
                v = 0
            elif t == m:
                v = ml
            else:
                digest = hmac.digest(self._key, _INPUT.pack(_TREE_TAG, i, node), hashlib.sha256)
                u = int.from_bytes(digest[:8], "big")
                v = hypergeom_inverse_cdf(u, m, t, ml)
            self._left[k] = v
        return v

    def interval_sum(self, i: int, a: int, b: int) -> int:
        IntervalQuery(self.S, self.H, i, a, b)
        return self._sum(i, 1, 0, self.S - 1, self.H, a, b)

    def _sum(self, i, node, na, nb, t, a, b):
        if t == 0 or b < na or nb < a:
            return 0
        if a <= na and nb <= b:
            return t
        mid = (na + nb) >> 1
        lt = self.left_count(i, node, na, nb, t)
        return (self._sum(i, 2 * node, na, mid, lt, a, b)
                + self._sum(i, 2 * node + 1, mid + 1, nb, t - lt, a, b))

    def insupp(self, i: int, s: int) -> bool:
        if not 0 <= s < self.S:
            raise ValueError(f"document {s} outside [0, {self.S})")
        return self.interval_sum(i, s, s) == 1

    def rndelt(self, i: int, rng) -> int:
        """Uniform element of ``D_i`` by binary search over interval sums.

        Follows the interval-sum formulation literally: two ``interval_sum``
        queries per level.  :meth:`sample` is the equivalent direct walk.
        """
        if i < 1:
            raise ValueError("history-length index i must be >= 1")
        a, b = 0, self.S - 1
        while a != b:
            mid = (a + b) >> 1
            total = self.interval_sum(i, a, b)
            left = self.interval_sum(i, a, mid)
            r = rng.randrange(total) + 1
            if r <= left:
                b = mid
            else:
                a = mid + 1
        return a

    def sample(self, i: int, rng) -> int:
        """Same output and randomness consumption as :meth:`rndelt`, walking nodes directly."""
        a, b, node, t = 0, self.S - 1, 1, self.H
        left_count = self.left_count
        randrange = rng.randrange
        while a != b:
            mid = (a + b) >> 1
            lt = left_count(i, node, a, b, t)
            if randrange(t) < lt:
                b, node, t = mid, 2 * node, lt
            else:
                a, node, t = mid + 1, 2 * node + 1, t - lt
        return a

    def contains(self, i: int, s: int) -> bool:
        """Membership by a single root-to-leaf walk (no argument checks)."""
        a, b, node, t = 0, self.S - 1, 1, self.H
        while a != b:
            if t == 0:
                return False
            if t == b - a + 1:
                return True
            mid = (a + b) >> 1
            lt = self.left_count(i, node, a, b, t)
            if s <= mid:
                b, node, t = mid, 2 * node, lt
            else:
                a, node, t = mid + 1, 2 * node + 1, t - lt
        return t == 1

    def support(self, i: int) -> list:
        """Enumerate ``D_i`` in increasing order, pruning empty subtrees."""
        out = []
        stack = [(1, 0, self.S - 1, self.H)]
        while stack:
            node, a, b, t = stack.pop()
            if t == 0:
                continue
            if t == b - a + 1:
                out.extend(range(a, b + 1))
                continue
            mid = (a + b) >> 1
            lt = self.left_count(i, node, a, b, t)
            stack.append((2 * node + 1, mid + 1, b, t - lt))
            stack.append((2 * node, a, mid, lt))
        return out

    def cache_size(self) -> int:
        return len(self._left)


_TREES: dict = {}
_TREES_MAX = 64


def _tree(seed: FlatChannelSeed, S: int, H: int) -> FlatTree:
    k = (seed.omega, S, H)
    tree = _TREES.get(k)
    if tree is None:
        if len(_TREES) >= _TREES_MAX:
            _TREES.pop(next(iter(_TREES)))
        tree = _TREES[k] = FlatTree(seed, S, H)
    return tree


def interval_sum(seed: FlatChannelSeed, q: IntervalQuery) -> int:
    """Number of support elements of ``D_i`` in ``[a, b]``."""
    return _tree(seed, q.S, q.H).interval_sum(q.i, q.a, q.b)


def insupp(seed: FlatChannelSeed, S: int, H: int, i: int, s: int) -> bool:
    return _tree(seed, S, H).insupp(i, s)


def rndelt(seed: FlatChannelSeed, S: int, H: int, i: int, rng) -> int:
    return _tree(seed, S, H).rndelt(i, rng)


class ExplicitFlatChannel:
    """A true-random flat channel with explicitly stored supports ``D_1..D_max_i``.

    Offers the same ``insupp`` / ``rndelt`` interface as :class:`FlatTree`.
    """

    MAX_CELLS = 1 << 26

    def __init__(self, S: int, H: int, supports: list):
        check_params(S, H)
        self.S = S
        self.H = H
        self.supports = [tuple(sorted(d)) for d in supports]
        self._sets = [frozenset(d) for d in self.supports]
        for d in self.supports:
            if len(d) != H or len(set(d)) != H or (d and not 0 <= d[0] <= d[-1] < S):
                raise ValueError("each support must hold H distinct documents in [0, S)")

    @property
    def max_i(self) -> int:
        return len(self.supports)

    def _check_i(self, i):
        if not 1 <= i <= len(self.supports):
            raise IndexError(f"history-length index {i} outside stored range 1..{len(self.supports)}")

    def insupp(self, i: int, s: int) -> bool:
        self._check_i(i)
        if not 0 <= s < self.S:
            raise ValueError(f"document {s} outside [0, {self.S})")
        return s in self._sets[i - 1]

    def rndelt(self, i: int, rng) -> int:
        self._check_i(i)
        d = self.supports[i - 1]
        return d[rng.randrange(self.H)]

    def support(self, i: int) -> list:
        self._check_i(i)
        return list(self.supports[i - 1])


def make_true_random_flat(S: int, H: int, max_i: int, rng) -> ExplicitFlatChannel:
    check_params(S, H)
    if max_i < 1:
        raise ValueError("max_i must be >= 1")
    if H * max_i > ExplicitFlatChannel.MAX_CELLS or S > ExplicitFlatChannel.MAX_CELLS:
        raise MemoryError(f"storing {max_i} supports of size {H} exceeds the explicit-storage limit")
    return ExplicitFlatChannel(S, H, [rng.sample(range(S), H) for _ in range(max_i)])


__all__ = [
    "EXACT_LIMIT",
    "ExplicitFlatChannel",
    "FlatChannelSeed",
    "FlatTree",
    "IntervalQuery",
    "hypergeom_inverse_cdf",
    "insupp",
    "interval_sum",
    "make_true_random_flat",
    "rndelt",
]
