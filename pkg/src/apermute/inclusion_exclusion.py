"""Inclusion-exclusion for joint cycle counts.

For tracked lengths ``l_1 < ... < l_q`` let ``S_k(n)`` be the expected number
of families made of ``k_i`` distinct ``l_i``-cycles of ``sigma_n``.  Then
``P(N = r) = sum_{k >= r} (-1)^{|k - r|} prod C(k_i, r_i) S_k(n)`` and
truncating the sum at total excess ``|k - r| <= m`` over- or under-shoots
the mass according to the parity of ``m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .counting import CountTable, falling

LOWER = "lower"
UPPER = "upper"


@dataclass(frozen=True)
class IEQuery:
    """Target event ``N_{l_i} = r_i`` for all ``i``, at degree ``n``."""

    lengths: tuple[int, ...]
    r: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(self.lengths))
        object.__setattr__(self, "r", tuple(self.r))
        ls = self.lengths
        if not ls or any(l < 1 for l in ls) or any(a >= b for a, b in zip(ls, ls[1:])):
            raise ValueError(f"lengths must be nonempty, positive, strictly increasing: {ls}")
        if len(self.r) != len(ls) or any(x < 0 for x in self.r):
            raise ValueError(f"r must be {len(ls)} nonnegative integers, got {self.r}")
        if self.n < 0:
            raise ValueError("n must be nonnegative")

    @property
    def max_excess(self) -> int:
        """Largest ``|k - r|`` with a possibly nonzero term; -1 if none."""
        return sum(self.n // l - ri for l, ri in zip(self.lengths, self.r))


def sk_at_n(table: CountTable, n: int, lengths: Sequence[int], k: Sequence[int]) -> Fraction:
    """``S_k(n)`` for the uniform law on ``S_n^(A)``.

    By conjugation invariance this is the number of families of disjoint
    cycles of the prescribed shape, ``n! / ((n-p)! prod l_i^k_i k_i!)``, times
    the chance ``t(n-p)/t(n)`` that ``sigma_n`` contains one given family.
    """
    t_n = table.require(n)
    p = sum(ki * li for ki, li in zip(k, lengths))
    if p == 0:
        return Fraction(1)
    if p > n:
        return Fraction(0)
    A = table.A
    if any(ki > 0 and li not in A for ki, li in zip(k, lengths)):
        return Fraction(0)
    denom = 1
    for ki, li in zip(k, lengths):
        denom *= li**ki * math.factorial(ki)
    return Fraction(falling(n, p) * table[n - p], denom * t_n)


def _excess_sums(table: CountTable, query: IEQuery) -> list[Fraction]:
    """``out[e]`` = sum of the signed terms with total excess exactly ``e``."""
    table.require(query.n)
    top = query.max_excess
    if any(query.n // l < ri for l, ri in zip(query.lengths, query.r)):
        return [Fraction(0)]
    out = [Fraction(0)] * (top + 1)
    ranges = [range(ri, query.n // l + 1) for l, ri in zip(query.lengths, query.r)]
    for k in product(*ranges):
        s = sk_at_n(table, query.n, query.lengths, k)
        if not s:
            continue
        e = sum(k) - sum(query.r)
        coef = 1
        for ki, ri in zip(k, query.r):
            coef *= math.comb(ki, ri)
        out[e] += -coef * s if e % 2 else coef * s
    return out


def joint_mass_via_ie(table: CountTable, query: IEQuery) -> Fraction:
    """Exact ``P(N_{l_i}(sigma_n) = r_i for all i)`` by inclusion-exclusion."""
    return sum(_excess_sums(table, query), Fraction(0))


def bonferroni_bounds(table: CountTable, query: IEQuery) -> list[tuple[Fraction, str]]:
    """Truncations at every ``m`` from 0 to the full range, with their direction."""
    out = []
    acc = Fraction(0)
    for m, term in enumerate(_excess_sums(table, query)):
        acc += term
        out.append((acc, LOWER if m % 2 else UPPER))
    return out


def bonferroni_bound(table: CountTable, query: IEQuery, m: int) -> tuple[Fraction, str]:
    """Sum over ``|k - r| <= m``: a lower bound for odd ``m``, upper for even ``m``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    sums = _excess_sums(table, query)
    value = sum(sums[: m + 1], Fraction(0))
    return value, (LOWER if m % 2 else UPPER)


def limit_sk(lengths: Sequence[int], k: Sequence[int]) -> Fraction:
    """Limit of ``S_k(n)`` under Poisson behaviour: ``1/prod(l_i^k_i k_i!)``."""
    denom = 1
    for li, ki in zip(lengths, k):
        denom *= li**ki * math.factorial(ki)
    return Fraction(1, denom)


def poisson_product_mass(lengths: Sequence[int], r: Sequence[int]) -> float:
    """Mass at ``r`` of the product of ``Poiss(1/l_i)`` laws."""
    out = 1.0
    for l, ri in zip(lengths, r):
        lam = 1.0 / l
        out *= math.exp(-lam) * lam**ri / math.factorial(ri)
    return out


def _limit_terms(l: int, r: int, m: int) -> tuple[list[int], int]:
    # signed terms for excess 0..m of one length, over the common denominator l^(r+m) (r+m)!
    den = l ** (r + m) * math.factorial(r + m)
    nums = [
        (-1) ** e * math.comb(r + e, r) * (den // (l ** (r + e) * math.factorial(r + e)))
        for e in range(m + 1)
    ]
    return nums, den


def poisson_series_partial_sums(lengths: Sequence[int], r: Sequence[int], m: int) -> list[Fraction]:
    """Partial sums of the limiting series truncated at total excess ``0..m``.

    The series need not converge absolutely, so terms are grouped by total
    excess ``|k - r|`` and never reordered otherwise.  Because ``limit_sk``
    factorizes over lengths, each excess level is a convolution of the
    one-length term sequences.
    """
    if len(lengths) != len(r):
        raise ValueError("lengths and r differ in size")
    level = [1] + [0] * m
    den = 1
    for l, ri in zip(lengths, r):
        terms, d = _limit_terms(l, ri, m)
        nxt = [0] * (m + 1)
        for a, x in enumerate(level):
            if x:
                for b in range(m + 1 - a):
                    nxt[a + b] += x * terms[b]
        level = nxt
        den *= d
    out = []
    acc = 0
    for x in level:
        acc += x
        out.append(Fraction(acc, den))
    return out


def poisson_series_partial_sum(lengths: Sequence[int], r: Sequence[int], m: int) -> Fraction:
    return poisson_series_partial_sums(lengths, r, m)[m]
