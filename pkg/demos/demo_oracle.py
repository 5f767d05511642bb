"""Exhaustive enumeration of small cases, the package's ground truth.

Break counts depend only on the relative order of the observations, so
averaging over all (n+1)! orderings gives the exact law.  The oracle does
that directly and independently of the closed forms, which is what makes
it a trustworthy referee for them.
"""

from brokenrecords import (
    expected_record_count,
    oracle_joint,
    oracle_pmf_b,
    oracle_pmf_r,
    prob_b1,
)


def main() -> None:
    for n in (2, 3, 4):
        pmf = oracle_pmf_b(n)
        cells = "  ".join(f"P[B={k}]={pmf.prob(k)}" for k in pmf.support())
        print(f"n = {n}: {cells}")
    print()

    n = 4
    print(f"joint law of (break count, prior record count) at n = {n}:")
    joint = oracle_joint(n)
    for (b, r_prev), mass in sorted(joint.mass.items()):
        print(f"  B = {b}, R_prev = {r_prev}:  {mass}")
    print("  (mass only where 0 <= b <= r_prev: you cannot break more than exist)")
    print()

    print("cross-checks against the closed forms:")
    for n in range(2, 9):
        assert oracle_pmf_b(n).prob(1) == prob_b1(n)
    print("  P[B = 1] matches 1/4 + 1/(2n(n+1)) for n = 2..8")

    for n in range(0, 7):
        assert oracle_pmf_r(n).mean() == expected_record_count(n)
    print("  E[record count] matches the harmonic number H_(n+1) for n = 0..6")

    means = ", ".join(str(oracle_pmf_r(n).mean()) for n in range(4))
    print(f"  record-count means: {means}")


if __name__ == "__main__":
    main()
