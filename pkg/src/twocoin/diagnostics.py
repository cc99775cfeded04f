"""Chain diagnostics: batch-means ESS, MCSE, acceptance, KS distance, loops."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np


class DegenerateSeriesError(ValueError):
    pass


@dataclass(frozen=True)
class EssEstimate:
    ess: float
    batch_size: int
    n: int
    method: str = "batch-means"


def ess_batch_means(series, batch_size: int | None = None) -> EssEstimate:
    """n * var(series) / (batch-means long-run variance), batches of floor(sqrt(n))."""
    x = np.asarray(series, dtype=float).ravel()
    n = x.size
    if n < 100:
        raise ValueError("batch-means ESS needs at least 100 draws")
    b = int(math.isqrt(n)) if batch_size is None else int(batch_size)
    a = n // b
    if a < 2:
        raise ValueError("need at least two batches")
    var = float(x.var(ddof=1))
    if var == 0.0:
        raise DegenerateSeriesError("series is constant")
    means = x[: a * b].reshape(a, b).mean(axis=1)
    lrv = b * float(means.var(ddof=1))
    if lrv == 0.0:
        raise DegenerateSeriesError("batch means are identical")
    return EssEstimate(ess=n * var / lrv, batch_size=b, n=n)


def min_ess(states) -> float:
    """Smallest coordinate-wise ESS of an ``(n, d)`` array."""
    s = np.asarray(states, dtype=float)
    s = s.reshape(len(s), -1)
    return min(ess_batch_means(s[:, j]).ess for j in range(s.shape[1]))


def mcse(series, batch_size: int | None = None) -> float:
    """Monte Carlo standard error of the mean by batch means."""
    x = np.asarray(series, dtype=float).ravel()
    b = int(math.isqrt(x.size)) if batch_size is None else int(batch_size)
    a = x.size // b
    means = x[: a * b].reshape(a, b).mean(axis=1)
    return math.sqrt(b * float(means.var(ddof=1)) / x.size)


def acceptance_rate(trace) -> float:
    """Mean of the acceptance indicators of a trace (or of a bit array)."""
    acc = getattr(trace, "accepted", trace)
    acc = np.asarray(acc)
    if acc.size == 0:
        raise ValueError("empty trace")
    return float(acc.mean())


def ks_distance(sample, cdf: Callable) -> float:
    """sup |F_n - F| between the empirical CDF of ``sample`` and ``cdf``."""
    x = np.sort(np.asarray(sample, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise ValueError("empty sample")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max((i / n - F).max(), (F - (i - 1) / n).max()))


def autocorrelation(series, max_lag: int = 100) -> np.ndarray:
    """Sample autocorrelation at lags 0..max_lag (FFT, biased normalization)."""
    x = np.asarray(series, dtype=float).ravel()
    n = x.size
    if n < 2:
        raise ValueError("need at least two points")
    x = x - x.mean()
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, size)
    acov = np.fft.irfft(f * np.conj(f), size)[: max_lag + 1] / n
    if acov[0] == 0:
        raise DegenerateSeriesError("series is constant")
    return acov / acov[0]


def loop_summary(traces: Iterable, block: int | None = None) -> dict:
    """Grand mean of per-call loops and mean over runs of per-run maxima.

    For block traces, ``block`` selects one block; ``None`` pools blocks.
    """
    total = calls = 0
    maxima = []
    for tr in traces:
        accs = tr.loop_stats if block is None else [tr.loop_stats[block]]
        run_calls = sum(a.calls for a in accs)
        if run_calls == 0:
            raise ValueError("trace carries no loop statistics")
        total += sum(a.total for a in accs)
        calls += run_calls
        maxima.append(max(a.max for a in accs))
    if not maxima:
        raise ValueError("no traces")
    return {"mean_loops": total / calls, "mean_of_max_loops": float(np.mean(maxima))}


SUMMARY_COLUMNS = ("method", "ess", "acceptance_rate", "mean_loops", "max_loops")
TIMING_COLUMNS = ("method", "ess", "ess_per_sec", "wall_time_sec")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return "nan" if math.isnan(v) else f"{float(v):.10g}"
    return str(v)


class SummaryTable:
    """Per-method rows of ESS, timing, acceptance and loop statistics."""

    def __init__(self, rows: Sequence[dict] | None = None):
        self.rows: list[dict] = []
        for r in rows or []:
            self.add(**r)

    def add(self, method: str, ess: float, wall_time_sec: float = math.nan,
            acceptance_rate: float = math.nan, mean_loops: float = math.nan,
            max_loops: float = math.nan, **extra) -> None:
        ess_per_sec = ess / wall_time_sec if wall_time_sec and wall_time_sec > 0 else math.nan
        self.rows.append(dict(
            method=method, ess=ess, ess_per_sec=ess_per_sec, wall_time_sec=wall_time_sec,
            acceptance_rate=acceptance_rate, mean_loops=mean_loops, max_loops=max_loops, **extra,
        ))

    def write_csv(self, path, columns: Sequence[str] = SUMMARY_COLUMNS) -> None:
        with Path(path).open("w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(columns)
            for r in self.rows:
                out.writerow([_fmt(r.get(c, math.nan)) for c in columns])

    def to_text(self, columns: Sequence[str] | None = None) -> str:
        cols = list(columns or self.rows[0].keys()) if self.rows else []
        cells = [[_fmt(r.get(c, "")) for c in cols] for r in self.rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        line = "  ".join(c.ljust(w) for c, w in zip(cols, widths))
        rule = "-" * len(line)
        body = ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
        return "\n".join([rule, line, rule, *body, rule])
