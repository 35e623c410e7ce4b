"""Exact counting, laws, sampling and limit diagnostics for permutations
whose cycle lengths are restricted to a set A."""

from .counting import CountTable, EmptyClassError, build_count_table, cached_count_table
from .cycle_sets import CycleLengthSet, InvalidSetRule, SetRule, materialize, parse_rule
from .cycle_types import (
    CycleType,
    ExactLaw,
    enumerate_cycle_types,
    exact_joint_law,
    exact_moment,
    joint_law_via_complement,
    moment_via_partitions,
)
from .inclusion_exclusion import IEQuery, bonferroni_bound, joint_mass_via_ie, limit_sk, sk_at_n
from .limits import ConvergenceReport, tv_distance
from .sampler import Permutation, RandomSource, Sampler, sample_apermutation

__version__ = "0.1.0"
