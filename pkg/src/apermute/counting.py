"""Exact counts ``t(n) = |S_n^(A)|`` and the ratios built from them.

Differentiating the exponential generating function
``exp(sum_{k in A} z^k / k)`` gives ``n a_n = sum_{k in A, k <= n} a_{n-k}``
for ``a_n = t(n)/n!``.  Clearing denominators::

    t(n) = sum_{k in A, k <= n} (n-1)(n-2)...(n-k+1) * t(n-k)

which keeps the whole table in Python integers.
"""

from __future__ import annotations

import hashlib
import os
import sys
import tempfile
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .cycle_sets import CycleLengthSet, materialize

try:  # GMP radix conversion is subquadratic; CPython 3.10's is not
    import gmpy2
except ImportError:  # pragma: no cover
    gmpy2 = None

CACHE_MAGIC = "APCOUNT v1"


class EmptyClassError(ValueError):
    """Raised when a quantity needs ``S_n^(A)`` to be nonempty and it is not."""


@contextmanager
def unlimited_int_digits():
    """Lift the interpreter's cap on decimal conversion of large ints, temporarily."""
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:
        yield
        return
    old = get()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def to_decimal(v: int) -> str:
    if gmpy2 is not None:
        return gmpy2.mpz(v).digits()
    with unlimited_int_digits():
        return str(v)


def from_decimal(text: str) -> int:
    if gmpy2 is not None:
        return int(gmpy2.mpz(text))
    with unlimited_int_digits():
        return int(text)


def falling(n: int, k: int) -> int:
    """Falling factorial ``n (n-1) ... (n-k+1)``; 1 for ``k == 0``."""
    out = 1
    for i in range(n, n - k, -1):
        out *= i
    return out


def _next_count(members: tuple[int, ...], t: list[int], n: int) -> int:
    total = 0
    ff = 1  # (n-1)...(n-k+1), built up as k grows
    k_prev = 1
    for k in members:
        if k > n:
            break
        for i in range(k_prev, k):
            ff *= n - i
        k_prev = k
        total += ff * t[n - k]
    return total


class CountTable:
    """Table of ``t(0..n_max)`` for a cycle-length set.

    The table grows on demand through :meth:`extend`; entries already
    computed never change.  Index with ``table[n]``; negative ``n`` gives 0.
    """

    def __init__(self, A: CycleLengthSet, t: Optional[list[int]] = None):
        self.A = A
        self.t: list[int] = list(t) if t is not None else [1]

    @property
    def n_max(self) -> int:
        return len(self.t) - 1

    def __getitem__(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.n_max:
            raise IndexError(f"t({n}) requested but table only reaches {self.n_max}")
        return self.t[n]

    def __repr__(self):
        return f"CountTable({self.A.canonical!r}, n_max={self.n_max})"

    def extend(self, n_max: int) -> "CountTable":
        """Grow the table in place up to ``n_max``; returns ``self``."""
        if n_max <= self.n_max:
            return self
        if not self.A.covers(n_max):
            self.A = self.A.extended(n_max)
        members = self.A.members
        t = self.t
        for n in range(len(t), n_max + 1):
            t.append(_next_count(members, t, n))
        return self

    def require(self, n: int) -> int:
        """``t(n)``, raising :class:`EmptyClassError` if it is zero."""
        v = self[n]
        if v == 0:
            raise EmptyClassError(f"empty permutation class: no {self.A.canonical}-permutation of degree {n}")
        return v

    def check_recurrence(self) -> bool:
        """Re-verify every entry against the recurrence, independently of build order."""
        if self.t[0] != 1:
            return False
        for n in range(1, self.n_max + 1):
            rhs = sum(falling(n - 1, k - 1) * self.t[n - k] for k in self.A.up_to(n))
            if rhs != self.t[n]:
                return False
        return True

    # -- persistence ------------------------------------------------------

    def dumps(self) -> str:
        lines = [CACHE_MAGIC, self.A.canonical, str(self.n_max)]
        lines.extend(to_decimal(v) for v in self.t)
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, A: CycleLengthSet) -> "CountTable":
        lines = text.splitlines()
        if len(lines) < 4 or lines[0] != CACHE_MAGIC:
            raise ValueError("not an APCOUNT v1 file")
        if lines[1] != A.canonical:
            raise ValueError(f"cache is for set {lines[1]!r}, not {A.canonical!r}")
        n_max = int(lines[2])
        values = [from_decimal(v) for v in lines[3:]]
        if len(values) != n_max + 1:
            raise ValueError(f"cache declares n_max={n_max} but holds {len(values)} values")
        return cls(A.extended(n_max), values)


def build_count_table(A: CycleLengthSet, n_max: int) -> CountTable:
    """Compute ``t(0..n_max)``."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if not A.covers(n_max):
        raise ValueError(f"set {A.canonical!r} materialized only up to {A.bound} < n_max={n_max}")
    return CountTable(A).extend(n_max)


def cache_path(cache_dir: Union[str, Path], A: CycleLengthSet) -> Path:
    digest = hashlib.sha256(A.canonical.encode()).hexdigest()[:20]
    return Path(cache_dir) / f"apcount-{digest}.txt"


def cached_count_table(rule, n_max: int, cache_dir: Union[str, Path, None]) -> CountTable:
    """Load ``t(0..n_max)`` from ``cache_dir``, computing and storing what is missing.

    A cache file whose set line does not match the requested rule is ignored
    and overwritten.  ``cache_dir=None`` disables caching.
    """
    A = rule if isinstance(rule, CycleLengthSet) else materialize(rule, max(n_max, 1))
    if cache_dir is None:
        return build_count_table(A.extended(n_max), n_max)
    path = cache_path(cache_dir, A)
    table = None
    if path.exists():
        try:
            table = CountTable.loads(path.read_text(), A)
        except ValueError:
            table = None
    if table is None:
        table = build_count_table(A.extended(n_max), n_max)
    elif table.n_max >= n_max:
        return table
    else:
        table.extend(n_max)
    _atomic_write(path, table.dumps())
    return table


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".txt")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def normalized_ratio(table: CountTable, n: int, q: int) -> Fraction:
    """``u_n / u_{n-1}`` where ``u_n = t(qn)/(qn)!``."""
    if n < 1 or q < 1:
        raise ValueError("n and q must be positive")
    prev = table[q * (n - 1)]
    if prev == 0:
        raise EmptyClassError(f"empty reference class at degree {q * (n - 1)}")
    return Fraction(table[q * n], prev * falling(q * n, q))


def prefix_probability(table: CountTable, n: int, p: int) -> Fraction:
    """``t(n-p)/t(n)``: chance that a uniform A-permutation of ``[n]`` agrees on ``[p]``
    with a fixed A-permutation of ``[p]``."""
    if not 0 <= p <= n:
        raise ValueError(f"need 0 <= p <= n, got p={p}, n={n}")
    return Fraction(table[n - p], table.require(n))
