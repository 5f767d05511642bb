"""Seeded Monte Carlo: reproducible draws, checkpoints, and the audit.

Each trial owns a fixed window of a counter-based random stream, so the
same seed gives bit-identical results no matter how the work is chunked
or how many threads run it.
"""

import argparse

from brokenrecords import (
    SimConfig,
    default_checkpoints,
    oracle_pmf_b,
    simulate_b,
    simulate_b_checkpoints,
    simulate_trajectory_audit,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=12345)
    args = ap.parse_args()

    cfg = SimConfig(n=4, trials=args.trials, seed=args.seed)
    emp = simulate_b(cfg)
    exact = oracle_pmf_b(4)
    print(f"n = 4, trials = {cfg.trials}, seed = {cfg.seed}:")
    for k in range(5):
        f = emp.frequency(k)
        e = float(exact.prob(k))
        print(f"  k = {k}:  freq {f:.5f}   exact {e:.5f}   dev {abs(f - e):.5f}")
    print()

    again = simulate_b(cfg)
    threaded = simulate_b(
        SimConfig(n=4, trials=args.trials, seed=args.seed, workers=3)
    )
    print(f"repeat run identical:        {again.counts == emp.counts}")
    print(f"three-worker run identical:  {threaded.counts == emp.counts}")
    print()

    n = 200
    cfg = SimConfig(n=n, trials=args.trials // 4, seed=args.seed)
    print(
        f"checkpoints at {default_checkpoints(n)} of shared trajectories "
        f"(n = {n}, trials = {cfg.trials}):"
    )
    for t, pmf in sorted(simulate_b_checkpoints(cfg).items()):
        row = "  ".join(f"{pmf.frequency(k):.4f}" for k in range(4))
        print(f"  t = {t:3d}:  freq(0..3) = {row}")
    print("  each horizon's law is already close to 1/2, 1/4, 1/8, 1/16")
    print()

    report = simulate_trajectory_audit(SimConfig(n=50, trials=500, seed=args.seed))
    print(
        f"audit: replayed {report.trials} trajectories step by step, "
        f"{report.steps_checked} steps, all invariants held"
    )


if __name__ == "__main__":
    main()
