"""Print the exact break-count laws and the identities behind them.

Everything here is rational arithmetic: the mass at zero, the two-part
k = 1 formula, the survivor-tail sums for larger k, and the telescoping
identity that collapses the k = 1 sum to a closed form.
"""

from fractions import Fraction

from brokenrecords import (
    geometric_limit,
    joint_tail_prob_fast,
    prob_b0,
    prob_b1,
    prob_b1_lastrecord,
    remainder_bound,
    telescoping_sum,
)


def main() -> None:
    n = 12
    print(f"exact masses at n = {n}:")
    print(f"  P[B = 0] = {prob_b0(n)}  (one coin flip: is the newcomer a new record?)")
    p1 = prob_b1(n)
    print(
        f"  P[B = 1] = {p1}"
        f" = {prob_b1_lastrecord(n)} (no survivor) + {telescoping_sum(n - 1)} (a survivor)"
    )
    print(f"           = 1/4 + 1/(2n(n+1)) = {Fraction(1, 4) + Fraction(1, 2 * n * (n + 1))}")
    print()

    print("survivor tails P[B = k, an older record survives]:")
    for k in range(1, 6):
        tail = joint_tail_prob_fast(n, k)
        print(f"  k = {k}:  {tail}  ~ {float(tail):.6f}")
    print()

    print("telescoping identity, literal sum vs closed form:")
    for m in (1, 2, 10, 100):
        literal = sum(
            Fraction(1, i * (i + 1) * (i + 2)) for i in range(1, m + 1)
        )
        closed = telescoping_sum(m)
        print(f"  m = {m:3d}:  {literal} == {closed}  ({literal == closed})")
    print("  the sum approaches 1/4 as m grows")
    print()

    print("distance to the limiting law 2^-(k+1), with the a priori bound:")
    for nn in (10, 100, 1000):
        dev = abs(float(prob_b1(nn) - geometric_limit(1)))
        bound = remainder_bound(nn, 1)
        print(f"  n = {nn:4d}, k = 1:  |exact - limit| = {dev:.2e}  bound = {bound:.2e}")


if __name__ == "__main__":
    main()
