"""Exact ground truth by exhaustive enumeration of orderings.

Break and record counts depend only on the relative order of the
observations, so averaging over all (n + 1)! permutations of ranks gives
the exact joint law for small n.  The enumeration recomputes each record
set straight from the definition with a backward scan, deliberately
sharing no code with the incremental stack it is used to check.

Costs grow factorially; ``DEFAULT_MAX_N`` keeps casual calls cheap and
``HARD_MAX_N`` is the absolute ceiling.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import NamedTuple

from .errors import CapacityError
from .exact import Pmf

DEFAULT_MAX_N = 8
HARD_MAX_N = 10


@dataclass
class JointPmf:
    """Joint law of the final break count and the prior record count."""

    n: int
    mass: dict[tuple[int, int], Fraction]

    def prob(self, b: int, r_prev: int) -> Fraction:
        return self.mass.get((b, r_prev), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.mass.values(), Fraction(0))

    def marginal_b(self) -> Pmf:
        mass: dict[int, Fraction] = {}
        for (b, _), p in self.mass.items():
            mass[b] = mass.get(b, Fraction(0)) + p
        return Pmf(n=self.n, mass=mass, mode="exact")

    def marginal_r_prev(self) -> Pmf:
        mass: dict[int, Fraction] = {}
        for (_, r), p in self.mass.items():
            mass[r] = mass.get(r, Fraction(0)) + p
        return Pmf(n=self.n - 1, mass=mass, mode="exact")

    def tail_mass(self, k: int) -> Fraction:
        """Mass of breaking exactly k records with at least one survivor."""
        return sum(
            (p for (b, r), p in self.mass.items() if b == k and r >= k + 1),
            Fraction(0),
        )

    def lone_mass(self, k: int) -> Fraction:
        """Mass of breaking exactly k records with none surviving."""
        return self.mass.get((k, k), Fraction(0))


class _EnumCounts(NamedTuple):
    joint: dict[tuple[int, int], int]
    r_now: dict[int, int]
    b1_index: dict[int, int]


def _suffix_record_indices(vals: tuple[int, ...], m: int) -> list[int]:
    """Indices i <= m with vals[i] above everything after it, oldest first."""
    recs: list[int] = []
    mx = -1
    for i in range(m, -1, -1):
        if vals[i] > mx:
            recs.append(i)
            mx = vals[i]
    recs.reverse()
    return recs


@lru_cache(maxsize=16)
def _enumerate(n: int) -> _EnumCounts:
    joint: dict[tuple[int, int], int] = {}
    r_now: dict[int, int] = {}
    b1_index: dict[int, int] = {}
    for perm in itertools.permutations(range(n + 1)):
        prev = _suffix_record_indices(perm, n - 1)
        r_prev = len(prev)
        last = perm[n]
        b = sum(1 for i in prev if perm[i] < last)
        r = len(_suffix_record_indices(perm, n))
        if r != r_prev + 1 - b:
            raise AssertionError(
                f"conservation violated in enumeration: perm={perm}"
            )
        joint[b, r_prev] = joint.get((b, r_prev), 0) + 1
        r_now[r] = r_now.get(r, 0) + 1
        if b == 1 and r_prev >= 2:
            i1 = prev[-2]
            b1_index[i1] = b1_index.get(i1, 0) + 1
    return _EnumCounts(joint=joint, r_now=r_now, b1_index=b1_index)


def _check_capacity(n: int, max_n: int) -> None:
    cap = min(max_n, HARD_MAX_N)
    if n > cap:
        hint = (
            f"raise max_n (ceiling {HARD_MAX_N})"
            if cap < HARD_MAX_N
            else f"the ceiling is {HARD_MAX_N}"
        )
        raise CapacityError(
            f"enumeration for n={n} needs {factorial(n + 1)} permutations, "
            f"over the cap of n={cap}; {hint}"
        )


def oracle_joint(n: int, *, max_n: int = DEFAULT_MAX_N) -> JointPmf:
    """Exact joint law of (final break count, prior record count)."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    _check_capacity(n, max_n)
    denom = factorial(n + 1)
    counts = _enumerate(n)
    mass = {key: Fraction(c, denom) for key, c in counts.joint.items()}
    return JointPmf(n=n, mass=mass)


def oracle_pmf_b(n: int, *, max_n: int = DEFAULT_MAX_N) -> Pmf:
    """Exact law of the number of records broken at the final step."""
    return oracle_joint(n, max_n=max_n).marginal_b()


def oracle_pmf_r(n: int, *, max_n: int = DEFAULT_MAX_N) -> Pmf:
    """Exact law of the record count after n + 1 observations."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return Pmf(n=0, mass={1: Fraction(1)}, mode="exact")
    _check_capacity(n, max_n)
    denom = factorial(n + 1)
    counts = _enumerate(n)
    mass = {r: Fraction(c, denom) for r, c in counts.r_now.items()}
    return Pmf(n=n, mass=mass, mode="exact")


def oracle_single_break_profile(n: int, *, max_n: int = DEFAULT_MAX_N) -> dict[int, Fraction]:
    """Mass of single-survivor-position events behind a lone break.

    Maps each index i to the exact probability that the final step breaks
    exactly one record while the record at index i survives directly
    beneath it.  Summing the values and adding the no-survivor mass
    recovers the full single-break probability.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    _check_capacity(n, max_n)
    denom = factorial(n + 1)
    counts = _enumerate(n)
    return {i: Fraction(c, denom) for i, c in sorted(counts.b1_index.items())}
