"""Performance reporting: empirical CDFs, nearest-rank percentiles,
throughput/SINR summaries and the fixed-layout CSV outputs.

UEs in outage carry a -inf SINR sentinel; they enter throughput statistics
at 0 Mbps and are excluded from SINR statistics.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

FLOAT_FORMAT = "%.8g"  # at least 6 significant digits in every CSV


@dataclass
class EpisodeTrace:
    """Per-TTI log of one episode."""

    episode: int
    tti: np.ndarray          # (T,) 1-based TTI index
    state: np.ndarray        # (T,) control state the action was taken in
    action: np.ndarray       # (T,)
    reward: np.ndarray       # (T,)
    alarm_count: np.ndarray  # (T,) register population after the TTI
    sinr_db: np.ndarray      # (T, N)
    rate_mbps: np.ndarray    # (T, N)
    cell_mbps: np.ndarray    # (T, C)

    def __post_init__(self):
        if len(self.tti) and np.any(np.diff(self.tti) <= 0):
            raise ValueError("tti column must be strictly increasing")


@dataclass
class ThroughputSummary:
    peak_mbps: float       # 95th percentile of per-UE average throughput
    average_mbps: float    # mean of per-UE average throughput
    edge_mbps: float       # 5th percentile
    cell_average_mbps: float


@dataclass
class RunSummary:
    throughput: ThroughputSummary
    mean_sinr_db: float
    mean_clearance_ttis: float
    cleared_fraction: float


def empirical_cdf(samples) -> list[tuple[float, float]]:
    """Empirical distribution function as (value, cumulative probability)
    steps over the distinct sorted values; the last probability is 1."""
    arr = np.sort(np.asarray(samples, dtype=float))
    if arr.size == 0:
        raise ValueError("empirical_cdf needs at least one sample")
    values, counts = np.unique(arr, return_counts=True)
    cum = np.cumsum(counts) / arr.size
    return list(zip(values.tolist(), cum.tolist()))


def percentile(samples, p: float) -> float:
    """Nearest-rank percentile: the smallest sample value whose rank is at
    least p * n (a tiny slack absorbs binary rounding in p * n)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    arr = np.sort(np.asarray(samples, dtype=float))
    if arr.size == 0:
        raise ValueError("percentile needs at least one sample")
    rank = max(1, math.ceil(p * arr.size - 1e-9))
    return float(arr[rank - 1])


def ue_average_rates(traces) -> np.ndarray:
    """Per-UE time-averaged throughput, pooled over all traces."""
    return np.concatenate([tr.rate_mbps.mean(axis=0) for tr in traces])


def ue_average_sinrs(traces) -> np.ndarray:
    """Per-UE time-averaged SINR over finite TTIs, pooled over all traces;
    UEs with no finite sample (never served) are dropped."""
    out = []
    for tr in traces:
        finite = np.isfinite(tr.sinr_db)
        with np.errstate(invalid="ignore"):
            sums = np.where(finite, tr.sinr_db, 0.0).sum(axis=0)
            n = finite.sum(axis=0)
        mask = n > 0
        out.append(sums[mask] / n[mask])
    return np.concatenate(out)


def clearance_ttis(trace: EpisodeTrace, ttis_per_episode: int) -> int:
    """First TTI with an empty register; the episode budget if never."""
    zeros = np.nonzero(trace.alarm_count == 0)[0]
    if zeros.size == 0:
        return ttis_per_episode
    return int(trace.tti[zeros[0]])


def summarize_run(traces, ttis_per_episode: int) -> RunSummary:
    """Pool per-UE time averages over the given traces and compute the
    throughput percentiles, mean SINR and alarm-clearance statistics."""
    if not traces:
        raise ValueError("summarize_run needs at least one trace")
    rates = ue_average_rates(traces)
    sinrs = ue_average_sinrs(traces)
    cell_means = np.concatenate([tr.cell_mbps.ravel() for tr in traces])

    clear = np.array([clearance_ttis(tr, ttis_per_episode) for tr in traces], dtype=float)
    cleared = np.array([bool(np.any(tr.alarm_count == 0)) for tr in traces])

    summary = ThroughputSummary(
        peak_mbps=percentile(rates, 0.95),
        average_mbps=float(rates.mean()),
        edge_mbps=percentile(rates, 0.05),
        cell_average_mbps=float(cell_means.mean()),
    )
    return RunSummary(
        throughput=summary,
        mean_sinr_db=float(sinrs.mean()) if sinrs.size else float("nan"),
        mean_clearance_ttis=float(clear.mean()),
        cleared_fraction=float(cleared.mean()),
    )


def _fmt(x) -> str:
    return FLOAT_FORMAT % float(x)


def write_cdf_csv(path, samples) -> None:
    """cdf_<agent>.csv: value, probability."""
    steps = empirical_cdf(samples)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "probability"])
        for value, prob in steps:
            writer.writerow([_fmt(value), _fmt(prob)])


def write_episodes_csv(path, episode_results) -> None:
    """episodes_<agent>.csv: episode, total_reward, ttis, cleared."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["episode", "total_reward", "ttis", "cleared"])
        for episode, result in episode_results:
            writer.writerow([episode, _fmt(result.total_reward),
                             result.ttis, int(result.cleared)])


def write_summary_csv(path, rows) -> None:
    """summary.csv: agent, q, peak, average, edge, cell_average,
    mean_clearance_ttis.  ``rows`` holds (agent, q, RunSummary)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["agent", "q", "peak", "average", "edge",
                         "cell_average", "mean_clearance_ttis"])
        for agent, q, summary in rows:
            tp = summary.throughput
            writer.writerow([agent, q, _fmt(tp.peak_mbps),
                             _fmt(tp.average_mbps), _fmt(tp.edge_mbps),
                             _fmt(tp.cell_average_mbps),
                             _fmt(summary.mean_clearance_ttis)])


def write_trace_csv(path, traces) -> None:
    """traces_<agent>.csv: one row per TTI with the mean UE SINR."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["episode", "tti", "state", "action", "reward",
                         "alarm_count", "mean_sinr_db"])
        for tr in traces:
            for i in range(len(tr.tti)):
                row_sinr = tr.sinr_db[i]
                finite = row_sinr[np.isfinite(row_sinr)]
                mean_sinr = finite.mean() if finite.size else float("nan")
                writer.writerow([tr.episode, int(tr.tti[i]), int(tr.state[i]),
                                 int(tr.action[i]), _fmt(tr.reward[i]),
                                 int(tr.alarm_count[i]), _fmt(mean_sinr)])
