"""Unit tests for the permutation-enumeration oracle.

The oracle walks every ordering directly from the definition, so its
output doubles as ground truth for the closed forms and the incremental
stack.  Frozen tables below were hand-checked at n = 2 and confirmed by
both independent routes before being written down.
"""

import itertools
import math
from fractions import Fraction

import pytest

from brokenrecords import (
    CapacityError,
    expected_record_count,
    joint_tail_prob,
    oracle_joint,
    oracle_pmf_b,
    oracle_pmf_r,
    oracle_single_break_profile,
    prob_b0,
    prob_b1,
    prob_b1_lastrecord,
    run_trajectory,
    single_break_term,
)

F = Fraction


class TestFrozenTables:
    def test_pmf_b_n1(self):
        pmf = oracle_pmf_b(1)
        assert pmf.mass == {0: F(1, 2), 1: F(1, 2)}

    def test_pmf_b_n2(self):
        pmf = oracle_pmf_b(2)
        assert pmf.mass == {0: F(1, 2), 1: F(1, 3), 2: F(1, 6)}

    def test_pmf_b_n3(self):
        pmf = oracle_pmf_b(3)
        assert pmf.mass == {
            0: F(1, 2),
            1: F(7, 24),
            2: F(1, 6),
            3: F(1, 24),
        }

    def test_pmf_b_n4(self):
        pmf = oracle_pmf_b(4)
        assert pmf.mass == {
            0: F(1, 2),
            1: F(11, 40),
            2: F(19, 120),
            3: F(7, 120),
            4: F(1, 120),
        }

    def test_joint_n2_full_table(self):
        # Hand enumeration of the six orderings of (X0, X1, X2).
        joint = oracle_joint(2)
        assert joint.mass == {
            (0, 1): F(1, 3),
            (0, 2): F(1, 6),
            (1, 1): F(1, 6),
            (1, 2): F(1, 6),
            (2, 2): F(1, 6),
        }

    def test_pmf_r_n2(self):
        pmf = oracle_pmf_r(2)
        assert pmf.mass == {1: F(1, 3), 2: F(1, 2), 3: F(1, 6)}

    def test_pmf_r_n0(self):
        pmf = oracle_pmf_r(0)
        assert pmf.mass == {1: F(1)}


class TestLaws:
    def test_totals(self):
        for n in range(1, 7):
            assert oracle_pmf_b(n).total() == 1
            assert oracle_pmf_r(n).total() == 1
            assert oracle_joint(n).total() == 1

    def test_joint_support_shape(self):
        for n in range(1, 7):
            for (b, r_prev), mass in oracle_joint(n).mass.items():
                assert mass > 0
                assert 1 <= r_prev <= n
                assert 0 <= b <= r_prev

    def test_marginals_agree(self):
        for n in range(1, 7):
            joint = oracle_joint(n)
            assert joint.marginal_b().mass == oracle_pmf_b(n).mass
            assert joint.marginal_r_prev().mass == oracle_pmf_r(n - 1).mass

    def test_mass_at_zero_is_half(self):
        for n in range(1, 7):
            assert oracle_pmf_b(n).prob(0) == prob_b0(n)

    def test_mean_break_count(self):
        # E[R] grows by 1 - E[B] each step, so E[B_n] = n/(n+1).
        for n in range(1, 7):
            assert oracle_pmf_b(n).mean() == F(n, n + 1)

    def test_mean_record_count_is_harmonic(self):
        for n in range(0, 7):
            assert oracle_pmf_r(n).mean() == expected_record_count(n)

    def test_record_count_support(self):
        for n in range(1, 7):
            support = oracle_pmf_r(n).support()
            assert support[0] == 1
            assert support[-1] == n + 1

    def test_tail_and_lone_split(self):
        # P[B = k] splits into survivor and no-survivor parts; the k = 1
        # no-survivor part is the final-observation-was-the-only-record
        # event with its own closed form.
        for n in range(2, 7):
            joint = oracle_joint(n)
            pmf = oracle_pmf_b(n)
            for k in range(1, n + 1):
                assert pmf.prob(k) == joint.tail_mass(k) + joint.lone_mass(k)
            assert joint.lone_mass(1) == prob_b1_lastrecord(n)
            assert joint.tail_mass(1) + joint.lone_mass(1) == prob_b1(n)

    def test_tail_matches_closed_form(self):
        for n in range(1, 7):
            joint = oracle_joint(n)
            for k in range(1, n):
                assert joint.tail_mass(k) == joint_tail_prob(n, k)


class TestSingleBreakProfile:
    def test_matches_term_formula(self):
        for n in range(2, 7):
            profile = oracle_single_break_profile(n)
            assert set(profile) <= set(range(n - 1))
            for i, mass in profile.items():
                assert mass == single_break_term(n, i)

    def test_sums_to_survivor_mass(self):
        for n in range(2, 7):
            profile = oracle_single_break_profile(n)
            assert sum(profile.values()) == oracle_joint(n).tail_mass(1)


class TestCapacity:
    def test_default_cap(self):
        with pytest.raises(CapacityError) as exc:
            oracle_pmf_b(9)
        assert "8" in str(exc.value)

    def test_raised_cap_allows_more(self):
        pmf = oracle_pmf_b(9, max_n=9)
        assert pmf.total() == 1

    def test_hard_ceiling(self):
        with pytest.raises(CapacityError):
            oracle_pmf_b(11, max_n=11)
        with pytest.raises(CapacityError):
            oracle_joint(12, max_n=20)

    def test_domain(self):
        with pytest.raises(ValueError):
            oracle_pmf_b(0)
        with pytest.raises(ValueError):
            oracle_joint(0)
        with pytest.raises(ValueError):
            oracle_pmf_r(-1)


class TestCrossEnumeration:
    """Replay every permutation through the incremental stack.

    The oracle's own tally uses an independent backward scan; this pins
    the two implementations to each other on the full space for small n.
    """

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_stack_replay_matches_oracle(self, n):
        b_counts: dict[int, int] = {}
        r_counts: dict[int, int] = {}
        for perm in itertools.permutations(range(n + 1)):
            stats = run_trajectory([float(v) for v in perm])
            b = stats.b_path[-1]
            r = stats.r_path[-1]
            b_counts[b] = b_counts.get(b, 0) + 1
            r_counts[r] = r_counts.get(r, 0) + 1
        total = math.factorial(n + 1)
        assert {
            k: F(c, total) for k, c in b_counts.items()
        } == oracle_pmf_b(n).mass
        assert {
            k: F(c, total) for k, c in r_counts.items()
        } == oracle_pmf_r(n).mass

    def test_float_relabel_spot_check(self):
        # Rank patterns, not magnitudes, drive the counts: push each
        # permutation of 0..4 through an arbitrary increasing relabeling.
        base = [0.11, 0.23, 0.47, 0.62, 0.98]
        for perm in itertools.permutations(range(5)):
            ints = run_trajectory([float(v) for v in perm])
            floats = run_trajectory([base[v] for v in perm])
            assert ints.b_path == floats.b_path
            assert ints.r_path == floats.r_path
