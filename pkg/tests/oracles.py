"""Brute-force oracles over all of S_n; independent of the package."""

from collections import Counter
from fractions import Fraction
from itertools import permutations


def cycle_lengths(images):
    """Cycle lengths of a 0-based permutation tuple."""
    n = len(images)
    seen = [False] * n
    out = []
    for s in range(n):
        if not seen[s]:
            L = 0
            i = s
            while not seen[i]:
                seen[i] = True
                i = images[i]
                L += 1
            out.append(L)
    return out


def a_perms(allowed, n):
    """Yield (images, cycle-length list) for every permutation of [n] with lengths in ``allowed``."""
    for p in permutations(range(n)):
        ls = cycle_lengths(p)
        if all(allowed(L) for L in ls):
            yield p, ls


def brute_count(allowed, n):
    return sum(1 for _ in a_perms(allowed, n))


def brute_law(allowed, n, K):
    c = Counter()
    for _, ls in a_perms(allowed, n):
        cnt = Counter(ls)
        c[tuple(cnt[k] for k in K)] += 1
    total = sum(c.values())
    return {v: Fraction(w, total) for v, w in c.items()}


def brute_moment(allowed, n, l, m):
    law = brute_law(allowed, n, [l])
    return sum(p * v[0] ** m for v, p in law.items())
