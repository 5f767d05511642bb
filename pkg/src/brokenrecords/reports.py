"""Report assembly and serialization for the analysis commands.

Reports are plain dictionaries with a ``meta`` block and a list of
``rows``.  JSON output mirrors that shape directly; CSV output writes the
meta block as leading ``# key=value`` comment lines followed by a flat
table.  Exact rationals serialize as "p/q" strings in both formats so the
two carry identical values.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

from scipy.stats import chi2 as _chi2

from .errors import CapacityError
from .exact import (
    expected_record_count,
    geometric_limit,
    joint_tail_prob_fast,
    prob_b0,
    prob_b1,
    remainder_bound,
)
from .montecarlo import (
    EmpiricalPmf,
    SimConfig,
    simulate_b,
    simulate_b_checkpoints,
    simulate_r,
)
from .oracle import DEFAULT_MAX_N, oracle_joint, oracle_pmf_r

TAIL_EXACT_MAX_N = 2000
MIN_EXPECTED_PER_BIN = 5.0


def rational_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


@dataclass
class ReportRow:
    """One (n, k) line of an analysis table.

    ``abs_dev`` is the distance from the limiting mass 2**-(k+1) of the
    best estimate present, preferring enumeration, then the closed forms,
    then simulation, then the survivor-tail formula.
    """

    n: int
    k: int
    exact_full: Fraction | None
    exact_tail: Fraction | None
    oracle_exact: Fraction | None
    empirical: float | None
    limit: float
    abs_dev: float | None
    remainder_bound: float | None

    def best_estimate(self) -> tuple[Fraction | float, str] | None:
        if self.oracle_exact is not None:
            return self.oracle_exact, "oracle"
        if self.exact_full is not None:
            return self.exact_full, "closed-form"
        if self.empirical is not None:
            return self.empirical, "empirical"
        if self.exact_tail is not None:
            return self.exact_tail, "tail"
        return None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "exact_full": self.exact_full,
            "exact_tail": self.exact_tail,
            "oracle_exact": self.oracle_exact,
            "empirical": self.empirical,
            "limit": self.limit,
            "abs_dev": self.abs_dev,
            "remainder_bound": self.remainder_bound,
        }


def build_row(
    n: int,
    k: int,
    *,
    exact_full: Fraction | None = None,
    exact_tail: Fraction | None = None,
    oracle_exact: Fraction | None = None,
    empirical: float | None = None,
) -> ReportRow:
    limit_exact = geometric_limit(k)
    if oracle_exact is not None:
        abs_dev = float(abs(oracle_exact - limit_exact))
    elif exact_full is not None:
        abs_dev = float(abs(exact_full - limit_exact))
    elif empirical is not None:
        abs_dev = abs(empirical - float(limit_exact))
    elif exact_tail is not None:
        abs_dev = float(abs(exact_tail - limit_exact))
    else:
        abs_dev = None
    if k == 0:
        bound = 0.0
    elif n >= 2:
        bound = remainder_bound(n, k)
    else:
        bound = None
    return ReportRow(
        n=n,
        k=k,
        exact_full=exact_full,
        exact_tail=exact_tail,
        oracle_exact=oracle_exact,
        empirical=empirical,
        limit=float(limit_exact),
        abs_dev=abs_dev,
        remainder_bound=bound,
    )


def exact_table(n: int, kmax: int | None = None, *, tail_max_n: int = TAIL_EXACT_MAX_N) -> dict:
    """Closed-form table for one n: full masses at k <= 1, survivor tails beyond.

    Tail columns stop at ``tail_max_n`` because the rational prefix sums
    grow with the least common denominators; a larger n keeps the closed
    forms and leaves the tails empty.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    top = min(kmax, n) if kmax is not None else min(n, 8)
    with_tails = n <= tail_max_n
    rows = []
    for k in range(top + 1):
        full = prob_b0(n) if k == 0 else prob_b1(n) if k == 1 else None
        tail = joint_tail_prob_fast(n, k) if with_tails and k >= 1 else None
        rows.append(build_row(n, k, exact_full=full, exact_tail=tail))
    meta = {"command": "exact", "n": n, "kmax": top, "tail_max_n": tail_max_n}
    return {"meta": meta, "rows": [r.to_dict() for r in rows]}


def oracle_table(n: int, *, max_n: int = DEFAULT_MAX_N, view: str = "b") -> dict:
    """Enumeration table: break-count pmf, record-count pmf, or the joint law."""
    if view not in ("b", "r", "joint"):
        raise ValueError(f"view must be b, r, or joint, got {view!r}")
    meta = {"command": "oracle", "n": n, "view": view, "max_n": max_n}
    if view == "r":
        pmf = oracle_pmf_r(n, max_n=max_n)
        rows = [
            {"n": n, "r": r, "mass": pmf.prob(r), "mass_float": float(pmf.prob(r))}
            for r in pmf.support()
        ]
        meta["mean"] = pmf.mean()
        return {"meta": meta, "rows": rows}
    joint = oracle_joint(n, max_n=max_n)
    if view == "joint":
        rows = [
            {"n": n, "k": b, "r_prev": r, "mass": p, "mass_float": float(p)}
            for (b, r), p in sorted(joint.mass.items())
        ]
        return {"meta": meta, "rows": rows}
    pmf = joint.marginal_b()
    rows = [
        build_row(n, k, oracle_exact=pmf.prob(k)).to_dict() for k in pmf.support()
    ]
    return {"meta": meta, "rows": rows}


def simulate_table(
    config: SimConfig, *, stat: str = "b", closed_forms: bool = False
) -> dict:
    """Frequency table from one simulation run.

    For break counts every row carries the limiting mass and the observed
    deviation from it.  For record counts the table is the observed pmf,
    with the exact and sample means in the meta block.
    """
    if stat not in ("b", "r"):
        raise ValueError(f"stat must be b or r, got {stat!r}")
    if stat == "r":
        emp = simulate_r(config)
        rows = [
            {
                "n": config.n,
                "r": r,
                "count": c,
                "frequency": c / config.trials,
            }
            for r, c in sorted(emp.counts.items())
        ]
        exact_mean = expected_record_count(config.n)
        meta = dict(emp.meta)
        meta["command"] = "simulate"
        meta["stat"] = "r"
        meta["sample_mean"] = emp.mean()
        meta["sample_mean_stderr"] = emp.mean_stderr()
        meta["exact_mean"] = exact_mean
        meta["abs_mean_dev"] = abs(emp.mean() - float(exact_mean))
        return {"meta": meta, "rows": rows}
    emp = simulate_b(config)
    rows = []
    for k in sorted(emp.counts):
        full = None
        if closed_forms:
            full = prob_b0(config.n) if k == 0 else prob_b1(config.n) if k == 1 else None
        rows.append(
            build_row(config.n, k, empirical=emp.frequency(k), exact_full=full).to_dict()
        )
    meta = dict(emp.meta)
    meta["command"] = "simulate"
    meta["stat"] = "b"
    meta["overflow"] = emp.overflow
    return {"meta": meta, "rows": rows}


def checkpoint_table(
    config: SimConfig, checkpoints: tuple[int, ...] | None = None
) -> dict:
    """Break-count frequencies at several horizons of shared trajectories.

    Rows use n = checkpoint horizon, since the break count of step t has
    the same law as a final-step count at that horizon.
    """
    table = simulate_b_checkpoints(config, checkpoints)
    rows = []
    for t, emp in sorted(table.items()):
        for k in sorted(emp.counts):
            rows.append(build_row(t, k, empirical=emp.frequency(k)).to_dict())
    final = table[max(table)]
    meta = dict(final.meta)
    meta.pop("checkpoint", None)
    meta["command"] = "simulate"
    meta["stat"] = "b"
    meta["n"] = config.n
    meta["overflow_by_checkpoint"] = {t: table[t].overflow for t in sorted(table)}
    return {"meta": meta, "rows": rows}


def converge_table(
    n_list: Sequence[int],
    kmax: int,
    trials: int,
    seed: int,
    *,
    workers: int = 1,
    oracle_max_n: int = DEFAULT_MAX_N,
    tail_max_n: int = TAIL_EXACT_MAX_N,
) -> dict:
    """Deviation-from-limit table across a sweep of n.

    Each n gets its best exact source: full enumeration up to
    ``oracle_max_n``, otherwise a simulation of ``trials`` trajectories
    (sharing one seed across the sweep).  Survivor tails and the k <= 1
    closed forms ride along wherever they are computable.
    """
    if not n_list:
        raise ValueError("n_list must name at least one n")
    if kmax < 0:
        raise ValueError(f"kmax must be nonnegative, got {kmax}")
    rows = []
    oracle_ns: list[int] = []
    simulated_ns: list[int] = []
    for n in n_list:
        if n < 1:
            raise ValueError(f"every n must be at least 1, got {n}")
        opmf = None
        if n <= oracle_max_n:
            opmf = oracle_joint(n, max_n=oracle_max_n).marginal_b()
            oracle_ns.append(n)
        emp = None
        if opmf is None and trials > 0:
            emp = simulate_b(
                SimConfig(n=n, trials=trials, seed=seed, kmax=kmax, workers=workers)
            )
            simulated_ns.append(n)
        for k in range(min(kmax, n) + 1):
            full = prob_b0(n) if k == 0 else prob_b1(n) if k == 1 else None
            tail = joint_tail_prob_fast(n, k) if n <= tail_max_n and k >= 1 else None
            rows.append(
                build_row(
                    n,
                    k,
                    exact_full=full,
                    exact_tail=tail,
                    oracle_exact=opmf.prob(k) if opmf is not None else None,
                    empirical=emp.frequency(k) if emp is not None else None,
                ).to_dict()
            )
    meta = {
        "command": "converge",
        "n_list": list(n_list),
        "kmax": kmax,
        "trials": trials,
        "seed": seed,
        "oracle_n": oracle_ns,
        "simulated_n": simulated_ns,
        "tail_max_n": tail_max_n,
    }
    return {"meta": meta, "rows": rows}


def tv_distance(p: Iterable[float | Fraction], q: Iterable[float | Fraction]) -> float:
    """Total variation distance between two aligned mass vectors."""
    return 0.5 * math.fsum(abs(float(a) - float(b)) for a, b in zip(p, q, strict=True))


def _merge_tail_bins(
    observed: list[int], probs: list[Fraction], trials: int
) -> tuple[list[int], list[Fraction]]:
    """Pool trailing bins until each expected count clears the floor."""
    observed = list(observed)
    probs = list(probs)
    while len(observed) > 2 and float(probs[-1]) * trials < MIN_EXPECTED_PER_BIN:
        probs[-2] += probs[-1]
        probs.pop()
        observed[-2] += observed[-1]
        observed.pop()
    return observed, probs


def chi_square_fit(
    observed: Sequence[int], probs: Sequence[Fraction], trials: int
) -> tuple[float, int, float, int]:
    """Pearson statistic of observed counts against exact bin masses.

    Trailing bins pool until every expected count reaches
    ``MIN_EXPECTED_PER_BIN``.  Returns (statistic, dof, p-value, bins).
    """
    obs, ps = _merge_tail_bins(list(observed), list(probs), trials)
    stat = math.fsum(
        (o - float(p) * trials) ** 2 / (float(p) * trials) for o, p in zip(obs, ps)
    )
    dof = len(obs) - 1
    return stat, dof, float(_chi2.sf(stat, dof)), len(obs)


def _pooled_bins(emp: EmpiricalPmf, kmax: int) -> list[int]:
    body = [emp.counts.get(k, 0) for k in range(kmax + 1)]
    return body + [emp.trials - sum(body)]


def _geometric_bins(kmax: int) -> list[Fraction]:
    body = [geometric_limit(k) for k in range(kmax + 1)]
    return body + [Fraction(1) - sum(body)]


def gof_report(
    config: SimConfig, *, oracle_max_n: int = DEFAULT_MAX_N
) -> dict:
    """Fit of simulated break counts against the limit law and, when the
    enumeration cap allows, against the exact finite-n law.

    Bins are the pooled support 0..kmax plus one overflow bin.  Each
    reference yields a total variation row and a Pearson chi-square row.
    """
    emp = simulate_b(config)
    kmax = config.kmax
    observed = _pooled_bins(emp, kmax)
    rows = []
    geo = _geometric_bins(kmax)
    tv = tv_distance([o / config.trials for o in observed], geo)
    stat, dof, pval, bins = chi_square_fit(observed, geo, config.trials)
    rows.append(
        {
            "reference": "geometric-limit",
            "statistic": "tv",
            "value": tv,
            "dof": None,
            "p_value": None,
            "bins": len(observed),
        }
    )
    rows.append(
        {
            "reference": "geometric-limit",
            "statistic": "chi2",
            "value": stat,
            "dof": dof,
            "p_value": pval,
            "bins": bins,
        }
    )
    if config.n <= oracle_max_n:
        opmf = oracle_joint(config.n, max_n=oracle_max_n).marginal_b()
        body = [opmf.prob(k) for k in range(kmax + 1)]
        exact_bins = body + [Fraction(1) - sum(body)]
        tv = tv_distance([o / config.trials for o in observed], exact_bins)
        stat, dof, pval, bins = chi_square_fit(observed, exact_bins, config.trials)
        rows.append(
            {
                "reference": "enumeration",
                "statistic": "tv",
                "value": tv,
                "dof": None,
                "p_value": None,
                "bins": len(observed),
            }
        )
        rows.append(
            {
                "reference": "enumeration",
                "statistic": "chi2",
                "value": stat,
                "dof": dof,
                "p_value": pval,
                "bins": bins,
            }
        )
    meta = dict(emp.meta)
    meta["command"] = "gof"
    meta["overflow"] = emp.overflow
    return {"meta": meta, "rows": rows}


def _scalar(value) -> object:
    if isinstance(value, Fraction):
        return rational_str(value)
    return value


def _flatten_meta(meta: dict, prefix: str = "") -> list[tuple[str, object]]:
    out: list[tuple[str, object]] = []
    for key, value in meta.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.extend(_flatten_meta(value, f"{name}."))
        elif isinstance(value, (list, tuple)):
            out.append((name, ",".join(str(v) for v in value)))
        else:
            out.append((name, _scalar(value)))
    return out


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def emit_json(report: dict, stream: TextIO) -> None:
    json.dump(_jsonable(report), stream, indent=2)
    stream.write("\n")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return rational_str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _header(rows: list[dict]) -> list[str]:
    header: list[str] = []
    for row in rows:
        for key in row:
            if key not in header:
                header.append(key)
    return header


def emit_csv(report: dict, stream: TextIO) -> None:
    for key, value in _flatten_meta(report.get("meta", {})):
        stream.write(f"# {key}={value}\n")
    rows = report.get("rows", [])
    if not rows:
        return
    header = _header(rows)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(row.get(col)) for col in header])


def emit_table(report: dict, stream: TextIO) -> None:
    """Aligned plain-text rendering for terminals."""
    for key, value in _flatten_meta(report.get("meta", {})):
        stream.write(f"# {key}={value}\n")
    rows = report.get("rows", [])
    if not rows:
        return
    header = _header(rows)
    cells = [header] + [
        [_csv_cell(row.get(col)) or "-" for col in header] for row in rows
    ]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        stream.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
