"""Exact uniform sampling of A-permutations.

The cycle through a chosen unplaced point has length ``k`` for exactly
``(n'-1)(n'-2)...(n'-k+1) * t(n'-k)`` of the ``t(n')`` A-permutations of the
``n'`` remaining points, so drawing ``k`` with those weights, then the other
``k-1`` cycle members as a uniform ordered selection, and recursing, gives
the uniform law on ``S_n^(A)``.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .counting import CountTable, falling
from .cycle_sets import CycleLengthSet

ORACLE_LIMIT = 8


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``[n]``; ``images[i]`` is the image of ``i + 1``."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation of [n]: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __str__(self):
        return " ".join(map(str, self.images))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        return cls(tuple(int(x) for x in text.split()))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a - 1] = b
        return cls(tuple(images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * (self.n + 1)
        out = []
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i - 1]
            out.append(tuple(cyc))
        return out


def cycle_counts(perm: Permutation) -> dict[int, int]:
    """``{l: N_l}`` for every cycle length present."""
    return dict(Counter(len(c) for c in perm.cycles()))


class RandomSource:
    """Seeded source of unbiased uniform integers of any size.

    Bits come from Python's ``random.Random`` (MT19937) seeded with ``seed``.
    ``below(M)`` draws ``M.bit_length()`` bits and rejects values ``>= M``,
    so there is no modulo bias however large ``M`` is.  Worker streams are
    derived with :meth:`spawn`, whose seed is the first 8 bytes (big-endian)
    of ``sha256(f"{seed}/{index}")``.
    """

    def __init__(self, seed: int):
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self.draws = 0
        self._gen = random.Random(seed)

    def below(self, bound: int) -> int:
        if bound < 1:
            raise ValueError("bound must be positive")
        bits = bound.bit_length()
        getrandbits = self._gen.getrandbits
        while True:
            self.draws += 1
            x = getrandbits(bits)
            if x < bound:
                return x

    def spawn(self, index: int) -> "RandomSource":
        digest = hashlib.sha256(f"{self.seed}/{index}".encode()).digest()
        return RandomSource(int.from_bytes(digest[:8], "big"))


class Sampler:
    """Uniform sampler over ``S_n^(A)`` for a fixed count table.

    Cumulative cycle-length weights are cached per number of remaining
    points, so repeated sampling at one degree costs one bisection per cycle.
    """

    def __init__(self, table: CountTable):
        self.table = table
        self._cumulative: dict[int, tuple[list[int], list[int]]] = {}

    def _weights(self, m: int) -> tuple[list[int], list[int]]:
        hit = self._cumulative.get(m)
        if hit is not None:
            return hit
        t = self.table
        lengths, cum = [], []
        acc = 0
        for k in t.A.up_to(m):
            w = falling(m - 1, k - 1) * t[m - k]
            if w:
                acc += w
                lengths.append(k)
                cum.append(acc)
        if acc != t[m]:
            raise AssertionError(f"cycle weights sum to {acc}, expected t({m}) = {t[m]}")
        self._cumulative[m] = (lengths, cum)
        return lengths, cum

    def sample(self, n: int, rng: RandomSource) -> Permutation:
        self.table.require(n)
        images = [0] * n
        pool = list(range(1, n + 1))
        t = self.table
        while pool:
            m = len(pool)
            lengths, cum = self._weights(m)
            k = lengths[bisect_right(cum, rng.below(t[m]))]
            leader = pool.pop()
            prev = leader
            for _ in range(k - 1):
                j = rng.below(len(pool))
                pool[j], pool[-1] = pool[-1], pool[j]
                nxt = pool.pop()
                images[prev - 1] = nxt
                prev = nxt
            images[prev - 1] = leader
        return Permutation(tuple(images))

    def stream(self, n: int, count: int, rng: RandomSource) -> Iterator[Permutation]:
        for _ in range(count):
            yield self.sample(n, rng)


def sample_apermutation(table: CountTable, n: int, rng: RandomSource) -> Permutation:
    """One uniform draw from ``S_n^(A)``."""
    if n > table.n_max:
        raise ValueError(f"degree {n} beyond table (n_max={table.n_max})")
    return Sampler(table).sample(n, rng)


def enumerate_class(A: CycleLengthSet, n: int) -> list[Permutation]:
    """Every element of ``S_n^(A)``, by filtering all of ``S_n``; ``n <= 8`` only."""
    if n > ORACLE_LIMIT:
        raise ValueError(f"oracle size limit: n={n} > {ORACLE_LIMIT}")
    allowed = set(A.up_to(n)) if n else set()
    out = []
    for images in itertools.permutations(range(1, n + 1)):
        p = Permutation(images)
        if all(len(c) in allowed for c in p.cycles()):
            out.append(p)
    return out


def empirical_joint_law(
    table: CountTable,
    n: int,
    K: Sequence[int],
    sample_count: int,
    rng: RandomSource,
) -> dict[tuple[int, ...], float]:
    """Relative frequencies of ``(N_l)_{l in K}`` over independent samples.

    Every sample is checked to have all of its cycle lengths in ``A``.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    table.require(n)
    sampler = Sampler(table)
    A = table.A
    freq: Counter = Counter()
    for perm in sampler.stream(n, sample_count, rng):
        counts = cycle_counts(perm)
        bad = [l for l in counts if l not in A]
        if bad:
            raise AssertionError(f"sampled permutation {perm} has cycle lengths {bad} outside A")
        freq[tuple(counts.get(l, 0) for l in K)] += 1
    return {v: c / sample_count for v, c in sorted(freq.items())}
