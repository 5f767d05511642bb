"""Seeded simulation of break and record counts over random trajectories.

Reproducibility scheme: the bit generator is Philox4x64, keyed by
``seed + attempt * 2**64``.  Trial t owns a fixed window of the counter
stream, blocks [t * s, (t + 1) * s) where s is the number of four-word
blocks needed for n + 1 full-range uint64 variates.  Every value of every
trial therefore has a pregiven address in the stream, so results are
bit-identical however trials are split into chunks or spread over
workers.  A trial whose draw contains a tied pair is redrawn from the
attempt-1 key (then attempt 2, and so on), which keeps the redraw local
to that trial; redraw totals land in the result metadata.

Statistics are computed on whole chunks with suffix-maximum scans rather
than per-trial Python loops.  ``simulate_trajectory_audit`` is the slow
counterpart that replays each trajectory through the incremental stack
and checks conservation step by step.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import FIRST_EXCEPTION, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Iterator

import numpy as np

from .errors import InvariantError, PartialResultError, TieError
from .records import TrajectoryStats, records_by_scan, run_trajectory

GENERATOR = "philox4x64-counter-window"
_TARGET_CHUNK_VALUES = 8_388_608
_MAX_REDRAWS = 64


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one simulation run.

    ``kmax`` pools break counts above it into an overflow bucket;
    ``workers`` only changes how chunks are scheduled, never the numbers.
    """

    n: int
    trials: int
    seed: int
    kmax: int = 12
    workers: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.kmax < 0:
            raise ValueError(f"kmax must be nonnegative, got {self.kmax}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")


@dataclass
class EmpiricalPmf:
    """Observed counts from a simulation, plus provenance metadata.

    ``counts`` maps each retained outcome to its tally and ``overflow``
    pools everything above ``kmax``; together they account for every
    trial.  Volatile run facts (wall time, timestamp, workers) live under
    ``meta["run"]`` so that everything else is reproducible bit for bit.
    """

    n: int
    trials: int
    counts: dict[int, int]
    overflow: int
    kmax: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        body = sum(self.counts.values())
        if body + self.overflow != self.trials:
            raise ValueError(
                f"counts sum to {body} with overflow {self.overflow}, "
                f"expected {self.trials} trials"
            )

    def frequency(self, k: int) -> float:
        return self.counts.get(k, 0) / self.trials

    def frequencies(self) -> dict[int, float]:
        return {k: c / self.trials for k, c in sorted(self.counts.items())}

    def stderr(self, k: int) -> float:
        p = self.frequency(k)
        return math.sqrt(p * (1.0 - p) / self.trials)

    def mean(self) -> float:
        if self.overflow:
            raise ValueError("mean is undefined while overflow pools outcomes")
        return sum(k * c for k, c in self.counts.items()) / self.trials

    def mean_stderr(self) -> float:
        if self.overflow:
            raise ValueError("mean is undefined while overflow pools outcomes")
        if self.trials < 2:
            return float("inf")
        m = self.mean()
        sq = sum(k * k * c for k, c in self.counts.items()) / self.trials
        var = (sq - m * m) * self.trials / (self.trials - 1)
        return math.sqrt(max(var, 0.0) / self.trials)


@dataclass(frozen=True)
class AuditReport:
    """Outcome of a trajectory audit; construction implies every check passed."""

    n: int
    trials: int
    steps_checked: int
    tie_redraws: int


def _words_per_trial(n: int) -> int:
    return 4 * ((n + 1 + 3) // 4)


def _raw_rows(seed: int, n: int, t0: int, t1: int, attempt: int) -> np.ndarray:
    """Variates for trials [t0, t1) at the given redraw attempt."""
    w = _words_per_trial(n)
    bg = np.random.Philox(key=seed + (attempt << 64), counter=t0 * (w // 4))
    u = np.random.Generator(bg).integers(
        0, 2**64, size=(t1 - t0) * w, dtype=np.uint64
    )
    return u.reshape(t1 - t0, w)[:, : n + 1]


def _row_has_tie(row: np.ndarray) -> bool:
    s = np.sort(row)
    return bool((s[1:] == s[:-1]).any())


def _resolve_ties(vals: np.ndarray, seed: int, n: int, t0: int) -> int:
    """Replace tied rows from their redraw streams; return redraw count."""
    s = np.sort(vals, axis=1)
    bad = np.nonzero((s[:, 1:] == s[:, :-1]).any(axis=1))[0]
    redraws = 0
    for r in bad:
        t = t0 + int(r)
        for attempt in range(1, _MAX_REDRAWS + 1):
            row = _raw_rows(seed, n, t, t + 1, attempt)[0]
            redraws += 1
            if not _row_has_tie(row):
                vals[r] = row
                break
        else:
            raise RuntimeError(
                f"trial {t} still tied after {_MAX_REDRAWS} redraws"
            )
    return redraws


def trial_values(seed: int, n: int, t0: int, t1: int) -> tuple[np.ndarray, int]:
    """Tie-free uint64 observations for trials [t0, t1), plus redraw count.

    Row r holds the n + 1 observations of trial t0 + r.  The rows depend
    only on (seed, n, trial index), never on the requested range.
    """
    if t1 <= t0:
        raise ValueError(f"empty trial range [{t0}, {t1})")
    vals = _raw_rows(seed, n, t0, t1, 0)
    redraws = _resolve_ties(vals, seed, n, t0)
    return vals, redraws


def _suffix_max(a: np.ndarray) -> np.ndarray:
    return np.maximum.accumulate(a[:, ::-1], axis=1)[:, ::-1]


def final_break_counts(vals: np.ndarray) -> np.ndarray:
    """Records broken by the last observation of each row.

    A column is a current record of the first n columns iff it equals the
    suffix maximum there; the last observation breaks those it exceeds.
    """
    head = vals[:, :-1]
    last = vals[:, -1:]
    smax = _suffix_max(head)
    return ((head == smax) & (head < last)).sum(axis=1)


def record_counts(vals: np.ndarray) -> np.ndarray:
    """Number of current records of each full row."""
    return (vals == _suffix_max(vals)).sum(axis=1)


def _chunk_ranges(trials: int, rows: int) -> Iterator[tuple[int, int]]:
    for t0 in range(0, trials, rows):
        yield t0, min(t0 + rows, trials)


def _rows_per_chunk(n: int) -> int:
    return max(1, _TARGET_CHUNK_VALUES // _words_per_trial(n))


def _merge_chunks(
    cfg: SimConfig,
    chunk_fn: Callable[[int, int], tuple[np.ndarray, int]],
    shape: int | tuple[int, ...],
) -> tuple[np.ndarray, int]:
    """Run ``chunk_fn`` over every trial range and add up its counts."""
    ranges = list(_chunk_ranges(cfg.trials, _rows_per_chunk(cfg.n)))
    counts = np.zeros(shape, dtype=np.int64)
    redraws = 0
    if cfg.workers == 1:
        completed = 0
        for t0, t1 in ranges:
            try:
                c, rd = chunk_fn(t0, t1)
            except Exception as exc:
                raise PartialResultError(
                    f"simulation stopped after {completed} of {cfg.trials} trials",
                    completed=completed,
                ) from exc
            counts += c
            redraws += rd
            completed += t1 - t0
        return counts, redraws
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        futures = {pool.submit(chunk_fn, t0, t1): t1 - t0 for t0, t1 in ranges}
        wait(futures, return_when=FIRST_EXCEPTION)
        completed = 0
        failure: BaseException | None = None
        for fut, size in futures.items():
            if failure is None and fut.done() and fut.exception() is None:
                c, rd = fut.result()
                counts += c
                redraws += rd
                completed += size
            elif failure is None and fut.done() and fut.exception() is not None:
                failure = fut.exception()
            else:
                fut.cancel()
        if failure is not None:
            raise PartialResultError(
                f"simulation stopped after {completed} of {cfg.trials} trials",
                completed=completed,
            ) from failure
    return counts, redraws


def _base_meta(cfg: SimConfig, redraws: int, wall: float, mode: str) -> dict:
    return {
        "mode": mode,
        "n": cfg.n,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "kmax": cfg.kmax,
        "generator": GENERATOR,
        "words_per_trial": _words_per_trial(cfg.n),
        "tie_redraws": redraws,
        "run": {
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "wall_time_s": round(wall, 3),
            "workers": cfg.workers,
        },
    }


def simulate_b(config: SimConfig) -> EmpiricalPmf:
    """Empirical law of the number of records broken at the final step.

    Break counts above ``config.kmax`` land in the overflow bucket; the
    retained support is reported in full, zeros included, so equal
    configurations produce identical objects outside ``meta["run"]``.
    """
    start = time.perf_counter()
    top = min(config.kmax, config.n)

    def chunk(t0: int, t1: int) -> tuple[np.ndarray, int]:
        vals, rd = trial_values(config.seed, config.n, t0, t1)
        b = np.minimum(final_break_counts(vals), config.kmax + 1)
        return np.bincount(b, minlength=config.kmax + 2), rd

    arr, redraws = _merge_chunks(config, chunk, config.kmax + 2)
    counts = {k: int(arr[k]) for k in range(top + 1)}
    overflow = int(arr[config.kmax + 1])
    meta = _base_meta(config, redraws, time.perf_counter() - start, "break-count")
    return EmpiricalPmf(
        n=config.n,
        trials=config.trials,
        counts=counts,
        overflow=overflow,
        kmax=config.kmax,
        meta=meta,
    )


def default_checkpoints(n: int) -> tuple[int, ...]:
    """Quarter, half, and full horizon, deduplicated and floored at 1."""
    return tuple(sorted({max(1, n // 4), max(1, n // 2), n}))


def simulate_b_checkpoints(
    config: SimConfig, checkpoints: tuple[int, ...] | None = None
) -> dict[int, EmpiricalPmf]:
    """Break-count histograms at several horizons of the same trajectories.

    Each checkpoint t histograms the breaks of step t, so its entry has
    the same law as a fresh run at n = t; sharing trajectories makes the
    horizons comparable draw for draw.  Ties are resolved on the full
    row, exactly as in ``simulate_b``, so the final-horizon histogram is
    identical to a plain run of the same configuration.
    """
    ts = default_checkpoints(config.n) if checkpoints is None else tuple(sorted(set(checkpoints)))
    if not ts:
        raise ValueError("checkpoints must name at least one horizon")
    if ts[0] < 1 or ts[-1] > config.n:
        raise ValueError(f"checkpoints must lie in [1, {config.n}], got {ts}")
    start = time.perf_counter()

    def chunk(t0: int, t1: int) -> tuple[np.ndarray, int]:
        vals, rd = trial_values(config.seed, config.n, t0, t1)
        out = np.zeros((len(ts), config.kmax + 2), dtype=np.int64)
        for row, t in enumerate(ts):
            b = np.minimum(final_break_counts(vals[:, : t + 1]), config.kmax + 1)
            out[row] = np.bincount(b, minlength=config.kmax + 2)
        return out, rd

    arr, redraws = _merge_chunks(config, chunk, (len(ts), config.kmax + 2))
    wall = time.perf_counter() - start
    result: dict[int, EmpiricalPmf] = {}
    for row, t in enumerate(ts):
        top = min(config.kmax, t)
        counts = {k: int(arr[row, k]) for k in range(top + 1)}
        meta = _base_meta(config, redraws, wall, "break-count")
        meta["checkpoint"] = t
        meta["checkpoints"] = list(ts)
        result[t] = EmpiricalPmf(
            n=t,
            trials=config.trials,
            counts=counts,
            overflow=int(arr[row, config.kmax + 1]),
            kmax=config.kmax,
            meta=meta,
        )
    return result


def simulate_r(config: SimConfig) -> EmpiricalPmf:
    """Empirical law of the record count after the full trajectory.

    Record counts are never pooled (the support is 1..n + 1 regardless of
    ``kmax``), so the sample mean and its standard error are always
    available.
    """
    start = time.perf_counter()

    def chunk(t0: int, t1: int) -> tuple[np.ndarray, int]:
        vals, rd = trial_values(config.seed, config.n, t0, t1)
        return np.bincount(record_counts(vals), minlength=config.n + 2), rd

    arr, redraws = _merge_chunks(config, chunk, config.n + 2)
    counts = {r: int(arr[r]) for r in range(1, config.n + 2)}
    meta = _base_meta(config, redraws, time.perf_counter() - start, "record-count")
    return EmpiricalPmf(
        n=config.n,
        trials=config.trials,
        counts=counts,
        overflow=0,
        kmax=config.n + 1,
        meta=meta,
    )


def check_trajectory(
    stats: TrajectoryStats,
    values: list,
    *,
    seed: int | None = None,
    trial: int | None = None,
) -> None:
    """Raise InvariantError unless the trajectory history is coherent.

    Checks the record-count recursion against the break counts, the total
    balance, the staircase shape of the final records, and agreement with
    the definitional scan of the raw values.
    """
    if stats.r_path[0] != 1:
        raise InvariantError(
            "first observation must stand as the single record",
            seed=seed,
            trial=trial,
            step=0,
        )
    for t in range(1, stats.n + 1):
        if stats.r_path[t] != stats.r_path[t - 1] + 1 - stats.b_path[t - 1]:
            raise InvariantError(
                f"record count recursion failed at step {t}",
                seed=seed,
                trial=trial,
                step=t,
            )
    if stats.total_broken != stats.n + 1 - stats.r_path[-1]:
        raise InvariantError(
            "total breaks do not balance the surviving records",
            seed=seed,
            trial=trial,
        )
    stats.final_records.validate()
    if stats.final_records.time != stats.n:
        raise InvariantError(
            "newest record is not the final observation", seed=seed, trial=trial
        )
    if len(stats.final_records) != stats.r_path[-1]:
        raise InvariantError(
            "final record count disagrees with its own stack", seed=seed, trial=trial
        )
    if records_by_scan(values) != stats.final_records:
        raise InvariantError(
            "definitional scan disagrees with the incremental stack",
            seed=seed,
            trial=trial,
        )


def simulate_trajectory_audit(config: SimConfig) -> AuditReport:
    """Replay every trial step by step and verify all invariants.

    Each trajectory runs through the incremental stack, is checked with
    ``check_trajectory``, and its final counts are compared against the
    vectorized chunk statistics.  Any discrepancy raises InvariantError
    with the trial coordinates; a returned report means everything held.
    """
    checked = 0
    redraws_total = 0
    for t0, t1 in _chunk_ranges(config.trials, _rows_per_chunk(config.n)):
        vals, redraws = trial_values(config.seed, config.n, t0, t1)
        redraws_total += redraws
        vec_b = final_break_counts(vals)
        vec_r = record_counts(vals)
        for r in range(t1 - t0):
            trial = t0 + r
            row = [int(v) for v in vals[r]]
            try:
                stats = run_trajectory(row)
            except TieError as exc:
                raise InvariantError(
                    f"tie survived redraw in trial {trial}",
                    seed=config.seed,
                    trial=trial,
                ) from exc
            check_trajectory(stats, row, seed=config.seed, trial=trial)
            if stats.b_path and stats.b_path[-1] != int(vec_b[r]):
                raise InvariantError(
                    "vectorized break count disagrees with the stack",
                    seed=config.seed,
                    trial=trial,
                    step=config.n,
                )
            if stats.r_path[-1] != int(vec_r[r]):
                raise InvariantError(
                    "vectorized record count disagrees with the stack",
                    seed=config.seed,
                    trial=trial,
                    step=config.n,
                )
            checked += config.n
    return AuditReport(
        n=config.n,
        trials=config.trials,
        steps_checked=checked,
        tie_redraws=redraws_total,
    )
