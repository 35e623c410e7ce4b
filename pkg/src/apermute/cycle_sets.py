"""Cycle-length sets.

A set ``A`` of allowed cycle lengths is described by a :class:`SetRule` and
materialized up to a finite bound as a :class:`CycleLengthSet`.  Only
``A ∩ [n]`` matters for permutations of ``[n]``, so truncating an infinite
rule at a bound at least as large as every degree of interest loses nothing.

Rule syntax (shared with the command line)::

    "1,2,5"    explicit finite list
    "all"      every positive integer
    "min:2"    every integer >= 2
    "mult:3"   every positive multiple of 3
    "not:1,4"  every positive integer except those listed
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Iterable, Optional


class InvalidSetRule(ValueError):
    """Raised when a rule string cannot be parsed or yields an empty set."""


@dataclass(frozen=True)
class SetRule:
    """Membership rule for a (possibly infinite) set of positive integers.

    ``canonical`` identifies the rule for caching; two rules with the same
    canonical string must describe the same set.
    """

    canonical: str
    predicate: Callable[[int], bool] = field(compare=False, repr=False)
    finite_members: Optional[tuple[int, ...]] = None

    def __contains__(self, k: int) -> bool:
        return k >= 1 and self.predicate(k)

    @property
    def is_finite(self) -> bool:
        return self.finite_members is not None

    # -- constructors -----------------------------------------------------

    @classmethod
    def explicit(cls, members: Iterable[int]) -> "SetRule":
        ms = tuple(sorted(set(int(m) for m in members)))
        if any(m < 1 for m in ms):
            raise InvalidSetRule(f"cycle lengths must be positive: {ms}")
        if not ms:
            raise InvalidSetRule("empty cycle-length set")
        frozen = frozenset(ms)
        return cls(",".join(map(str, ms)), frozen.__contains__, ms)

    @classmethod
    def all(cls) -> "SetRule":
        return cls("all", lambda k: True)

    @classmethod
    def at_least(cls, m: int) -> "SetRule":
        if m < 1:
            raise InvalidSetRule(f"min:{m} must have m >= 1")
        return cls(f"min:{m}", lambda k: k >= m)

    @classmethod
    def multiples_of(cls, m: int) -> "SetRule":
        if m < 1:
            raise InvalidSetRule(f"mult:{m} must have m >= 1")
        return cls(f"mult:{m}", lambda k: k % m == 0)

    @classmethod
    def complement_of(cls, excluded: Iterable[int]) -> "SetRule":
        ex = tuple(sorted(set(int(e) for e in excluded)))
        if not ex or any(e < 1 for e in ex):
            raise InvalidSetRule(f"not: needs positive integers, got {ex}")
        frozen = frozenset(ex)
        return cls("not:" + ",".join(map(str, ex)), lambda k: k not in frozen)

    @classmethod
    def from_predicate(cls, predicate: Callable[[int], bool], name: str) -> "SetRule":
        """Wrap an arbitrary predicate; ``name`` must identify it uniquely."""
        return cls(f"pred:{name}", predicate)

    def without(self, removed: Iterable[int]) -> "SetRule":
        """The rule for ``A`` minus a finite set of lengths."""
        rm = frozenset(int(r) for r in removed)
        if not rm:
            return self
        if self.finite_members is not None:
            kept = [m for m in self.finite_members if m not in rm]
            if not kept:
                return _EMPTY_RULE
            return SetRule.explicit(kept)
        pred = self.predicate
        tag = ",".join(map(str, sorted(rm)))
        return SetRule(f"{self.canonical}\\{tag}", lambda k: pred(k) and k not in rm)


# Only reachable through SetRule.without; materialize() rejects it.
_EMPTY_RULE = SetRule("empty", lambda k: False, ())


def parse_rule(text: str) -> SetRule:
    """Parse the textual rule syntax described in the module docstring."""
    s = text.strip().replace(" ", "")
    try:
        if s == "all":
            return SetRule.all()
        if s.startswith("min:"):
            return SetRule.at_least(int(s[4:]))
        if s.startswith("mult:"):
            return SetRule.multiples_of(int(s[5:]))
        if s.startswith("not:"):
            return SetRule.complement_of(int(x) for x in s[4:].split(","))
        return SetRule.explicit(int(x) for x in s.split(","))
    except ValueError as exc:
        if isinstance(exc, InvalidSetRule):
            raise
        raise InvalidSetRule(f"cannot parse set rule {text!r}") from exc


@dataclass(frozen=True)
class CycleLengthSet:
    """``A ∩ [bound]`` together with the rule it came from.

    ``is_complete`` means ``members`` is all of ``A`` (finite rule whose
    maximum does not exceed ``bound``).
    """

    rule: SetRule
    members: tuple[int, ...]
    bound: int
    is_complete: bool

    def __post_init__(self):
        ms = self.members
        if any(m < 1 for m in ms) or any(a >= b for a, b in zip(ms, ms[1:])):
            raise ValueError(f"members must be strictly increasing positive ints: {ms}")

    def __contains__(self, k: int) -> bool:
        return k in self.rule

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def canonical(self) -> str:
        return self.rule.canonical

    @property
    def max(self) -> int:
        """``d = max A``; only meaningful for complete sets."""
        if not self.is_complete:
            raise ValueError(f"set {self.canonical!r} is not known to be finite")
        return self.members[-1]

    def covers(self, n: int) -> bool:
        """True when membership is materialized for every length <= n."""
        return self.is_complete or n <= self.bound

    def up_to(self, n: int) -> tuple[int, ...]:
        """Members ``<= n``."""
        if not self.covers(n):
            raise ValueError(f"set {self.canonical!r} materialized only up to {self.bound}, need {n}")
        return tuple(m for m in self.members if m <= n)

    def extended(self, bound: int) -> "CycleLengthSet":
        """Re-materialize with a larger bound (no-op if already covered)."""
        if bound <= self.bound or self.is_complete:
            return self
        return materialize(self.rule, bound)

    def without(self, removed: Iterable[int]) -> "CycleLengthSet":
        """``A`` minus the given lengths; may be empty (unlike ``materialize``)."""
        rm = frozenset(removed)
        rule = self.rule.without(rm)
        return CycleLengthSet(
            rule, tuple(m for m in self.members if m not in rm), self.bound, self.is_complete
        )


def materialize(rule, bound: int) -> CycleLengthSet:
    """Materialize ``rule`` on ``1..bound``.

    ``rule`` may be a :class:`SetRule`, a rule string, or an iterable of
    integers (an explicit list).
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    if isinstance(rule, str):
        rule = parse_rule(rule)
    elif not isinstance(rule, SetRule):
        rule = SetRule.explicit(rule)
    if rule.finite_members is not None:
        members = tuple(m for m in rule.finite_members if m <= bound)
        complete = rule.finite_members[-1] <= bound if rule.finite_members else True
    else:
        members = tuple(k for k in range(1, bound + 1) if rule.predicate(k))
        complete = False
    if not members:
        raise InvalidSetRule("empty cycle-length set")
    return CycleLengthSet(rule, members, bound, complete)


def gcd_of(A: CycleLengthSet) -> int:
    """Greatest common divisor of the materialized members."""
    if not A.members:
        raise ValueError("gcd of an empty set")
    return reduce(math.gcd, A.members)


def representable_degrees(A: CycleLengthSet, n: int) -> list[bool]:
    """``out[j]`` tells whether ``j`` is a sum of elements of ``A`` (0 <= j <= n)."""
    parts = A.up_to(n)
    reach = [False] * (n + 1)
    reach[0] = True
    for j in range(1, n + 1):
        reach[j] = any(reach[j - k] for k in parts if k <= j)
    return reach


def degree_is_representable(A: CycleLengthSet, n: int) -> bool:
    """Whether ``S_n^(A)`` is nonempty, i.e. ``n`` lies in the semigroup spanned by ``A``."""
    if n < 0:
        return False
    return representable_degrees(A, n)[n]
