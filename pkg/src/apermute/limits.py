"""Finite-n diagnostics for the limit laws of A-permutation cycle counts.

Everything inside a row is computed from exact rationals; conversion to
floating point happens only when a value is stored in the report.  Reports
state trends at finite ``n`` only and never claim an asymptotic verdict.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import mpmath

from .counting import CountTable, EmptyClassError, build_count_table, falling
from .cycle_sets import CycleLengthSet, gcd_of
from .cycle_types import ExactLaw, joint_law_via_complement, moment_via_partitions

DEFAULT_N_LIST = (25, 50, 100, 200, 400)
_DPS = 60


@dataclass
class ConvergenceReport:
    """Rows of per-``n`` diagnostics plus a finite-n trend verdict."""

    kind: str
    set_description: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    target: Optional[float] = None
    verdict: Optional[bool] = None
    verdict_label: str = ""
    notes: list[str] = field(default_factory=list)

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        approx = [c for c in self.columns if c != "n" and c != "m"]
        buf.write(f"# {self.kind} set={self.set_description}; approximate columns: {','.join(approx)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(row.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "set": self.set_description,
                "columns": self.columns,
                "rows": self.rows,
                "target": self.target,
                "verdict": self.verdict,
                "verdict_label": self.verdict_label,
                "notes": self.notes,
            },
            indent=2,
        )


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _to_mpf(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def tv_distance(law: ExactLaw, lengths: Sequence[int]) -> float:
    """Total variation distance from ``law`` to the product of ``Poiss(1/l)``.

    Mass of the Poisson product outside the law's support counts fully.
    Evaluated at 60 significant digits; the distance for uniform
    permutations drops far below double-precision rounding quickly.
    """
    if tuple(lengths) != law.lengths:
        raise ValueError(f"law tracks {law.lengths}, not {tuple(lengths)}")
    with mpmath.workdps(_DPS):
        lam = [mpmath.mpf(1) / l for l in lengths]
        base = mpmath.exp(-mpmath.fsum(lam))
        diff = []
        covered = []
        for v, p in law.mass.items():
            q = base
            for x, r in zip(lam, v):
                q *= x**r / mpmath.factorial(r)
            covered.append(q)
            diff.append(abs(_to_mpf(p) - q))
        tail = 1 - mpmath.fsum(covered)
        return float(min(mpmath.mpf(1), (mpmath.fsum(diff) + max(tail, 0)) / 2))


def _nonincreasing(xs: Sequence[float]) -> bool:
    return all(b <= a for a, b in zip(xs, xs[1:]))


def poisson_convergence_report(
    A: CycleLengthSet,
    q: int,
    n_list: Iterable[int],
    K: Sequence[int],
) -> ConvergenceReport:
    """TV distance between the law of ``(N_k)_{k in K, k in A}`` at degree ``q n``
    and the product of ``Poiss(1/k)``, for each ``n`` in ``n_list``."""
    n_list = sorted(set(n_list))
    lengths = tuple(k for k in sorted(set(K)) if k in A)
    if not lengths:
        raise ValueError(f"no tracked length of {list(K)} lies in {A.canonical}")
    A = A.extended(q * n_list[-1])
    rep = ConvergenceReport("poisson", A.canonical, ["n", "tv"], verdict_label="decreasing trend")
    for n in n_list:
        deg = q * n
        try:
            law = joint_law_via_complement(A, deg, lengths)
        except EmptyClassError:
            rep.notes.append(f"degree {deg}: empty class, row skipped")
            continue
        rep.rows.append({"n": deg, "tv": tv_distance(law, lengths)})
    rep.target = 0.0
    tvs = rep.column("tv")
    rep.verdict = len(tvs) >= 2 and tvs[-1] < tvs[0]
    return rep


def hypothesis_ratio_report(A: CycleLengthSet, q: int, n_list: Iterable[int]) -> ConvergenceReport:
    """``u_n / u_{n-1}`` with ``u_n = t(qn)/(qn)!``, against the target 1."""
    n_list = sorted(set(n_list))
    A = A.extended(q * n_list[-1])
    table = build_count_table(A, q * n_list[-1])
    rep = ConvergenceReport(
        "ratio", A.canonical, ["n", "ratio", "target", "abs_error"], target=1.0,
        verdict_label="|ratio - 1| nonincreasing",
    )
    for n in n_list:
        prev = table[q * (n - 1)] if n >= 1 else 0
        if prev == 0 or table[q * n] == 0:
            rep.notes.append(f"n={n}: empty class, row skipped")
            continue
        ratio = float(Fraction(table[q * n], prev * falling(q * n, q)))
        rep.rows.append({"n": n, "ratio": ratio, "target": 1.0, "abs_error": abs(ratio - 1.0)})
    rep.verdict = _nonincreasing(rep.column("abs_error"))
    return rep


def scaled_moments(table: CountTable, n: int, l: int, m_max: int) -> list[mpmath.mpf]:
    """``E[(N_l / n^(l/d))^m]`` for ``m = 0..m_max`` at working precision."""
    d = table.A.max
    with mpmath.workdps(_DPS):
        s = mpmath.mpf(n) ** (mpmath.mpf(l) / d)
        out = [mpmath.mpf(1)]
        for m in range(1, m_max + 1):
            out.append(_to_mpf(moment_via_partitions(table, n, l, m)) / s**m)
        return out


def centered_moment(scaled: Sequence[mpmath.mpf], l: int, m: int) -> mpmath.mpf:
    """``E[(X - 1/l)^m]`` from raw moments of ``X`` by the binomial expansion."""
    with mpmath.workdps(_DPS):
        c = -mpmath.mpf(1) / l
        return mpmath.fsum(math.comb(m, i) * scaled[i] * c ** (m - i) for i in range(m + 1))


def finite_scaling_report(
    A: CycleLengthSet,
    n_list: Iterable[int],
    l: int,
    m_max: int,
    table: Optional[CountTable] = None,
) -> ConvergenceReport:
    """Exact moments of ``N_l / n^(l/d)`` against ``(1/l)^m`` for a finite set ``A``.

    The ``centered`` column holds ``E[(N_l/n^(l/d) - 1/l)^m]`` for even ``m``
    (the ``m``-th power of the centered L^m norm); it is blank for odd ``m``.
    """
    if not A.is_complete:
        raise ValueError(f"set {A.canonical!r} is not finite")
    if l not in A:
        raise ValueError(f"length {l} not in {A.canonical}")
    n_list = sorted(set(n_list))
    if table is None:
        table = build_count_table(A, n_list[-1])
    else:
        table.extend(n_list[-1])
    rep = ConvergenceReport(
        "scaling", A.canonical, ["n", "m", "value", "target", "rel_error", "centered"],
        verdict_label="centered L2 nonincreasing",
    )
    for n in n_list:
        if table[n] == 0:
            rep.notes.append(f"n={n}: empty class, row skipped")
            continue
        scaled = scaled_moments(table, n, l, m_max)
        for m in range(1, m_max + 1):
            target = (1.0 / l) ** m
            value = float(scaled[m])
            centered = float(centered_moment(scaled, l, m)) if m % 2 == 0 else None
            rep.rows.append({
                "n": n, "m": m, "value": value, "target": target,
                "rel_error": abs(value - target) / target, "centered": centered,
            })
    l2 = [r["centered"] for r in rep.rows if r["m"] == 2]
    rep.verdict = _nonincreasing(l2) if l2 else None
    rep.target = 1.0 / l
    return rep


def ratio_asymptotic_check(
    A: CycleLengthSet,
    n_list: Iterable[int],
    table: Optional[CountTable] = None,
) -> ConvergenceReport:
    """``(b_{n-q} / b_n) / n^(q/d)`` with ``b_n = t(n)/n!``, ``q = gcd(A)``, ``d = max A``.

    For ``q = 1`` this is ``(b_{n-1}/b_n)/n^(1/d)``, which tends to 1.
    """
    if not A.is_complete:
        raise ValueError(f"set {A.canonical!r} is not finite")
    q, d = gcd_of(A), A.max
    n_list = sorted(set(n_list))
    if table is None:
        table = build_count_table(A, n_list[-1])
    else:
        table.extend(n_list[-1])
    rep = ConvergenceReport(
        "egf-ratio", A.canonical, ["n", "value", "target", "rel_error"], target=1.0,
        verdict_label="final row within 5% of 1",
    )
    for n in n_list:
        if n < q or table[n] == 0 or table[n - q] == 0:
            rep.notes.append(f"n={n}: zero coefficient, row skipped")
            continue
        ratio = Fraction(table[n - q] * falling(n, q), table[n])
        with mpmath.workdps(_DPS):
            value = float(_to_mpf(ratio) / mpmath.mpf(n) ** (mpmath.mpf(q) / d))
        rep.rows.append({"n": n, "value": value, "target": 1.0, "rel_error": abs(value - 1.0)})
    rep.verdict = bool(rep.rows) and rep.rows[-1]["rel_error"] <= 0.05
    return rep
