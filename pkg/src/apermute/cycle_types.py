"""Cycle types, exact laws of cycle counts, and exact moments.

Two routes to the moments of ``N_l`` under the uniform measure on
``S_n^(A)``: direct aggregation over cycle types (:func:`exact_moment`) and
the set-partition expansion (:func:`moment_via_partitions`), which needs only
the count table.  They are kept independent so each can check the other.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .counting import CountTable, EmptyClassError, build_count_table, falling, unlimited_int_digits
from .cycle_sets import CycleLengthSet


@dataclass(frozen=True)
class CycleType:
    """Multiset of cycle lengths, stored as ``((l, c_l), ...)`` with ``l`` decreasing."""

    counts: tuple[tuple[int, int], ...]
    degree: int

    @classmethod
    def from_dict(cls, counts: dict[int, int]) -> "CycleType":
        items = tuple(sorted(((l, c) for l, c in counts.items() if c > 0), reverse=True))
        return cls(items, sum(l * c for l, c in items))

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def parts(self) -> tuple[int, ...]:
        """Cycle lengths sorted in decreasing order, with repetition."""
        return tuple(l for l, c in self.counts for _ in range(c))

    def multiplicity(self, l: int) -> int:
        for length, c in self.counts:
            if length == l:
                return c
        return 0

    def __str__(self):
        return " ".join(f"{l}^{c}" for l, c in self.counts) or "()"


def enumerate_cycle_types(A: CycleLengthSet, n: int) -> Iterator[CycleType]:
    """Yield every cycle type of degree ``n`` with all lengths in ``A``.

    Types are ordered lexicographically on their decreasing part sequences,
    so for ``A = {1, 2}`` and ``n = 4`` the order is ``1^4, 2^1 1^2, 2^2``.
    """
    parts = A.up_to(n)
    # reach[i][r]: r is a sum of parts[:i]
    reach = [[r == 0 for r in range(n + 1)]]
    for i, p in enumerate(parts):
        prev = reach[-1]
        row = prev[:]
        for r in range(p, n + 1):
            row[r] = row[r] or row[r - p]
        reach.append(row)

    def gen(i: int, rem: int) -> Iterator[list[tuple[int, int]]]:
        if rem == 0:
            yield []
            return
        for j in range(i):
            p = parts[j]
            for c in range(1, rem // p + 1):
                left = rem - c * p
                if reach[j][left]:
                    for rest in gen(j, left):
                        yield [(p, c)] + rest

    if n == 0:
        yield CycleType((), 0)
        return
    if not reach[len(parts)][n]:
        return
    for items in gen(len(parts), n):
        yield CycleType(tuple(items), n)


def cycle_type_count(ct: CycleType) -> int:
    """Number of permutations with cycle type ``ct``: ``n! / prod(l^c c!)``."""
    denom = 1
    for l, c in ct.counts:
        denom *= l**c * math.factorial(c)
    return math.factorial(ct.degree) // denom


@dataclass(frozen=True)
class ExactLaw:
    """Finitely supported law of ``(N_l)_{l in lengths}`` with rational masses."""

    lengths: tuple[int, ...]
    mass: dict[tuple[int, ...], Fraction]

    def __getitem__(self, r: Sequence[int]) -> Fraction:
        return self.mass.get(tuple(r), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.mass.values(), Fraction(0))

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.mass)

    def hull(self) -> Iterator[tuple[int, ...]]:
        """Every count vector in the coordinate-wise bounding box of the support."""
        tops = [max(v[i] for v in self.mass) for i in range(len(self.lengths))]
        return product(*(range(t + 1) for t in tops))

    def marginal(self, l: int) -> "ExactLaw":
        i = self.lengths.index(l)
        out: dict[tuple[int, ...], Fraction] = {}
        for v, p in self.mass.items():
            out[(v[i],)] = out.get((v[i],), Fraction(0)) + p
        return ExactLaw((l,), out)

    def moment(self, l: int, m: int) -> Fraction:
        i = self.lengths.index(l)
        return sum((p * v[i] ** m for v, p in self.mass.items()), Fraction(0))

    def to_json(self) -> dict:
        with unlimited_int_digits():
            return self._to_json()

    def _to_json(self) -> dict:
        return {
            "lengths": list(self.lengths),
            "mass": [
                {"r": list(v), "num": str(p.numerator), "den": str(p.denominator)}
                for v, p in sorted(self.mass.items())
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "ExactLaw":
        if isinstance(obj, str):
            obj = json.loads(obj)
        with unlimited_int_digits():
            mass = {tuple(e["r"]): Fraction(int(e["num"]), int(e["den"])) for e in obj["mass"]}
        return cls(tuple(obj["lengths"]), mass)


def _check_lengths(K: Iterable[int]) -> tuple[int, ...]:
    K = tuple(K)
    if not K or any(k < 1 for k in K) or any(a >= b for a, b in zip(K, K[1:])):
        raise ValueError(f"tracked lengths must be nonempty, positive, strictly increasing: {K}")
    return K


def exact_joint_law(A: CycleLengthSet, n: int, K: Iterable[int]) -> ExactLaw:
    """Law of ``(N_l)_{l in K}`` for a uniform element of ``S_n^(A)``, by summing
    class sizes over all A-restricted cycle types."""
    K = _check_lengths(K)
    weights: dict[tuple[int, ...], int] = {}
    total = 0
    for ct in enumerate_cycle_types(A, n):
        w = cycle_type_count(ct)
        key = tuple(ct.multiplicity(l) for l in K)
        weights[key] = weights.get(key, 0) + w
        total += w
    if total == 0:
        raise EmptyClassError(f"empty permutation class: {A.canonical} at degree {n}")
    return ExactLaw(K, {v: Fraction(w, total) for v, w in weights.items()})


def joint_law_via_complement(A: CycleLengthSet, n: int, K: Iterable[int]) -> ExactLaw:
    """Same law as :func:`exact_joint_law`, computed without enumerating cycle types.

    Fixing ``r_l`` cycles of each tracked length ``l`` leaves ``n - p`` points
    (``p = sum l r_l``) that must form a permutation avoiding the tracked
    lengths, so the class size is ``n!/(prod l^r_l r_l! (n-p)!) * t_{A\\K}(n-p)``.
    Cost grows with the number of count vectors, not the number of partitions.
    """
    K = _check_lengths(K)
    active = [l for l in K if l in A]
    rest = build_count_table(A.without(active), n)
    fact_n = math.factorial(n)
    weights: dict[tuple[int, ...], int] = {}
    total = 0

    def walk(i: int, used: int, denom: int, acc: list[int]):
        nonlocal total
        if i == len(active):
            w = fact_n // (denom * math.factorial(n - used)) * rest[n - used]
            if w:
                chosen = dict(zip(active, acc))
                weights[tuple(chosen.get(l, 0) for l in K)] = w
                total += w
            return
        l = active[i]
        for r in range((n - used) // l + 1):
            acc.append(r)
            walk(i + 1, used + l * r, denom * l**r * math.factorial(r), acc)
            acc.pop()

    walk(0, 0, 1, [])
    if total == 0:
        raise EmptyClassError(f"empty permutation class: {A.canonical} at degree {n}")
    return ExactLaw(K, {v: Fraction(w, total) for v, w in weights.items()})


def exact_moment(A: CycleLengthSet, n: int, l: int, m: int) -> Fraction:
    """``E[N_l^m]`` from the exact marginal law of ``N_l``."""
    if m < 1:
        raise ValueError("moment order must be positive")
    return exact_joint_law(A, n, [l]).moment(l, m)


def surjection_count(m: int, j: int) -> int:
    """Number of surjections ``[m] -> [j]``."""
    if not 1 <= j <= m:
        raise ValueError(f"need 1 <= j <= m, got j={j}, m={m}")
    return sum((-1) ** i * math.comb(j, i) * (j - i) ** m for i in range(j + 1))


def set_partitions(j: int) -> Iterator[list[list[int]]]:
    """Set partitions of ``{0, ..., j-1}`` via restricted growth strings."""
    if j == 0:
        yield []
        return
    a = [0] * j

    def rec(i: int, top: int):
        if i == j:
            blocks: list[list[int]] = [[] for _ in range(top + 1)]
            for x, b in enumerate(a):
                blocks[b].append(x)
            yield blocks
            return
        for b in range(top + 2):
            a[i] = b
            yield from rec(i + 1, max(top, b))

    a[0] = 0
    yield from rec(1, 0)


@lru_cache(maxsize=None)
def _block_shapes(j: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(len(B) for B in p) for p in set_partitions(j))


def moment_via_partitions(table: CountTable, n: int, l: int, m: int) -> Fraction:
    """``E[N_l^m]`` through the expansion over the points lying in ``l``-cycles.

    ``E[N_l^m] = l^-m sum_j C(n, j) P_j Surj(m, j)``, where ``P_j`` is the chance
    that ``1..j`` all lie in ``l``-cycles, expanded over set partitions of
    ``[j]`` (blocks = points sharing a cycle).  Blocks larger than ``l`` cannot
    share one ``l``-cycle and contribute nothing.
    """
    if m < 1:
        raise ValueError("moment order must be positive")
    t_n = table.require(n)
    if l not in table.A:
        return Fraction(0)
    total = Fraction(0)
    for j in range(1, min(m, n) + 1):
        # numerator of P_j * t(n) * (n)_j, an integer
        acc = 0
        for shape in _block_shapes(j):
            if max(shape) > l:
                continue
            used = l * len(shape)
            if used > n:
                continue
            w = table[n - used] * falling(n, used)
            for size in shape:
                w *= falling(l - 1, size - 1)
            acc += w
        p_j = Fraction(acc, t_n * falling(n, j))
        total += math.comb(n, j) * p_j * surjection_count(m, j)
    return total / l**m
