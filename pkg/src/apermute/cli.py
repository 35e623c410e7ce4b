"""Command-line interface: ``apermute {count,dist,sample,moments,verify}``.

Set rules use the syntax of :mod:`apermute.cycle_sets` (``1,2``, ``all``,
``min:2``, ``mult:3``, ``not:1``).  Exit codes: 0 ok, 2 bad input,
3 empty permutation class, 4 internal identity violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Optional, Sequence

from .counting import CountTable, EmptyClassError, cached_count_table, to_decimal, unlimited_int_digits
from .cycle_sets import CycleLengthSet, InvalidSetRule, gcd_of, materialize, parse_rule
from .cycle_types import (
    ExactLaw,
    exact_joint_law,
    exact_moment,
    joint_law_via_complement,
    moment_via_partitions,
)
from .inclusion_exclusion import IEQuery, joint_mass_via_ie
from .limits import (
    DEFAULT_N_LIST,
    finite_scaling_report,
    hypothesis_ratio_report,
    poisson_convergence_report,
    ratio_asymptotic_check,
)
from .sampler import RandomSource, Sampler, cycle_counts

EXIT_OK, EXIT_BAD_INPUT, EXIT_EMPTY, EXIT_MISMATCH = 0, 2, 3, 4
DEFAULT_CACHE = "./.apermute-cache"


class UsageError(Exception):
    pass


class IdentityViolation(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    rule_text: str
    A: CycleLengthSet
    cache_dir: Optional[str]
    args: argparse.Namespace


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise UsageError("empty integer list")
    return vals


def _lengths(text: str) -> tuple[int, ...]:
    vals = sorted(set(_int_list(text)))
    if vals[0] < 1:
        raise UsageError(f"cycle lengths must be positive: {text!r}")
    return tuple(vals)


def _frac(x) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _table(cfg: RunConfig, n_max: int) -> CountTable:
    return cached_count_table(cfg.A.extended(max(n_max, 1)), n_max, cfg.cache_dir)


# -- subcommands --------------------------------------------------------------


def cmd_count(cfg: RunConfig) -> str:
    a = cfg.args
    if a.n < 0:
        raise UsageError("--n must be nonnegative")
    table = _table(cfg, a.n)
    if a.table:
        return "\n".join(f"{n} {to_decimal(table[n])}" for n in range(a.n + 1))
    table.require(a.n)
    return to_decimal(table[a.n])


def _ie_law(table: CountTable, n: int, K: tuple[int, ...]) -> ExactLaw:
    mass = {}
    for r in product(*(range(n // l + 1) for l in K)):
        p = joint_mass_via_ie(table, IEQuery(K, r, n))
        if p:
            mass[r] = p
    return ExactLaw(K, mass)


def cmd_dist(cfg: RunConfig) -> str:
    a = cfg.args
    K = _lengths(a.lengths)
    if a.n < 1:
        raise UsageError("--n must be positive")
    table = _table(cfg, a.n)
    table.require(a.n)
    A = table.A
    if a.method == "direct":
        law = exact_joint_law(A, a.n, K)
    elif a.method == "complement":
        law = joint_law_via_complement(A, a.n, K)
    elif a.method == "ie":
        law = _ie_law(table, a.n, K)
    else:
        law = exact_joint_law(A, a.n, K)
        for r in product(*(range(a.n // l + 1) for l in K)):
            if joint_mass_via_ie(table, IEQuery(K, r, a.n)) != law[r]:
                raise IdentityViolation(f"inclusion-exclusion and direct law differ at r={r}")
    if sum(law.mass.values()) != 1:
        raise IdentityViolation("law does not sum to 1")
    return json.dumps(law.to_json())


def cmd_sample(cfg: RunConfig) -> str:
    a = cfg.args
    if a.n < 1 or a.samples < 1:
        raise UsageError("--n and --samples must be positive")
    if not 0 <= a.seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    K = _lengths(a.aggregate) if a.aggregate else None
    table = _table(cfg, a.n)
    table.require(a.n)
    sampler = Sampler(table)
    rng = RandomSource(a.seed)
    if K is None:
        return "\n".join(str(p) for p in sampler.stream(a.n, a.samples, rng))
    freq: dict[tuple[int, ...], int] = {}
    for p in sampler.stream(a.n, a.samples, rng):
        c = cycle_counts(p)
        v = tuple(c.get(l, 0) for l in K)
        freq[v] = freq.get(v, 0) + 1
    return json.dumps({
        "lengths": list(K),
        "samples": a.samples,
        "seed": a.seed,
        "freq": [{"r": list(v), "count": c, "freq": c / a.samples} for v, c in sorted(freq.items())],
    })


def cmd_moments(cfg: RunConfig) -> str:
    a = cfg.args
    if a.n < 1 or a.order < 1 or a.length < 1:
        raise UsageError("--n, --order and --length must be positive")
    table = _table(cfg, a.n)
    table.require(a.n)
    rows = []
    for m in range(1, a.order + 1):
        if a.method == "direct":
            v = exact_moment(table.A, a.n, a.length, m)
        else:
            v = moment_via_partitions(table, a.n, a.length, m)
            if a.method == "both" and v != exact_moment(table.A, a.n, a.length, m):
                raise IdentityViolation(f"moment order {m}: partition formula disagrees with direct law")
        rows.append({"m": m, **_frac(v)})
    return json.dumps({"set": cfg.A.canonical, "n": a.n, "length": a.length, "moments": rows})


def cmd_verify(cfg: RunConfig) -> str:
    a = cfg.args
    A = cfg.A
    n_list = _int_list(a.n_list) if a.n_list else ([a.n] if a.n else list(DEFAULT_N_LIST))
    if min(n_list) < 1:
        raise UsageError("--n-list entries must be positive")
    q = a.q or gcd_of(A.extended(max(n_list)))
    if a.check == "poisson":
        if not a.lengths:
            raise UsageError("verify poisson needs --lengths")
        rep = poisson_convergence_report(A, q, n_list, _lengths(a.lengths))
    elif a.check == "ratio":
        rep = hypothesis_ratio_report(A, q, n_list)
    else:
        if not A.is_complete:
            raise UsageError(f"verify {a.check} needs a finite set, got {cfg.rule_text!r}")
        table = _table(cfg, max(n_list))
        if a.check == "scaling":
            if a.length is None:
                raise UsageError("verify scaling needs --length")
            if a.length not in A:
                raise UsageError(f"--length {a.length} is not in the set")
            rep = finite_scaling_report(A, n_list, a.length, a.order, table)
        else:
            rep = ratio_asymptotic_check(A, n_list, table)
    return rep.to_json() if a.format == "json" else rep.to_csv().rstrip("\n")


COMMANDS = {
    "count": cmd_count,
    "dist": cmd_dist,
    "sample": cmd_sample,
    "moments": cmd_moments,
    "verify": cmd_verify,
}


# -- parsing ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apermute", description=__doc__.split("\n")[0])
    common = _Parser(add_help=False)
    common.add_argument("--set", dest="rule", required=True, help="cycle-length set rule")
    common.add_argument("--cache-dir", default=DEFAULT_CACHE)
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--output", help="write output to this path instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("count", parents=[common], help="count A-permutations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--table", action="store_true", help="print t(0..n)")

    p = sub.add_parser("dist", parents=[common], help="exact joint law of cycle counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lengths", required=True)
    p.add_argument("--method", choices=["direct", "ie", "complement", "both"], default="direct")

    p = sub.add_parser("sample", parents=[common], help="uniform samples")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--aggregate", help="report frequencies of these cycle counts instead")

    p = sub.add_parser("moments", parents=[common], help="exact moments of N_l")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--method", choices=["direct", "partitions", "both"], default="partitions")

    p = sub.add_parser("verify", parents=[common], help="limit-theorem diagnostics")
    p.add_argument("check", choices=["poisson", "ratio", "scaling", "egf-ratio"])
    p.add_argument("--n-list")
    p.add_argument("--n", type=int)
    p.add_argument("--lengths")
    p.add_argument("--length", type=int)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--q", type=int, help="gcd step (defaults to gcd of the set)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    return parser


def _needed_bound(args) -> int:
    vals = [getattr(args, "n", None) or 1]
    if getattr(args, "n_list", None):
        vals.extend(_int_list(args.n_list))
    return max(max(vals), 1)


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str, str]:
    """Execute a command; returns ``(exit_code, stdout_text, stderr_text)``."""
    try:
        args = build_parser().parse_args(argv)
        rule = parse_rule(args.rule)
        A = materialize(rule, _needed_bound(args))
        cfg = RunConfig(args.command, args.rule, A, None if args.no_cache else args.cache_dir, args)
        with unlimited_int_digits():
            out = COMMANDS[args.command](cfg)
    except (UsageError, InvalidSetRule) as exc:
        return EXIT_BAD_INPUT, "", f"apermute: error: {exc}\n"
    except EmptyClassError as exc:
        return EXIT_EMPTY, "", f"apermute: empty class: {exc}\n"
    except IdentityViolation as exc:
        return EXIT_MISMATCH, "", f"apermute: identity violation: {exc}\n"
    except ValueError as exc:
        return EXIT_BAD_INPUT, "", f"apermute: error: {exc}\n"
    if args.output:
        Path(args.output).write_text(out + "\n")
        return EXIT_OK, "", ""
    return EXIT_OK, out + "\n", ""


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
