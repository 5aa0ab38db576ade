"""Mergeable running statistics for seat-excess sweeps and Monte Carlo runs.

``RunningMoments`` keeps vector means and the full comoment matrix with a
numerically stable pairwise (Chan) merge, so a sweep can be split into
chunks, processed independently, and recombined associatively.
``SweepStats`` bundles the moments with per-party histograms, quota
violation counters, and tie counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InputError


class RunningMoments:
    """Running mean vector and comoment matrix of vector observations."""

    def __init__(self, dim: int):
        self.dim = dim
        self.count = 0.0
        self.mean = np.zeros(dim)
        self.comoment = np.zeros((dim, dim))  # sum of outer(x - mean, x - mean)

    def push(self, x) -> None:
        self.push_batch(np.asarray(x, dtype=float)[None, :])

    def push_batch(self, xs) -> None:
        xs = np.asarray(xs, dtype=float)
        if xs.ndim != 2 or xs.shape[1] != self.dim:
            raise DimensionMismatchError(f"expected (k, {self.dim}) batch, got {xs.shape}")
        k = xs.shape[0]
        if k == 0:
            return
        batch_mean = xs.mean(axis=0)
        centered = xs - batch_mean
        batch_como = centered.T @ centered
        self._combine(k, batch_mean, batch_como)

    def merge(self, other: "RunningMoments") -> None:
        if other.dim != self.dim:
            raise DimensionMismatchError("dimension mismatch in merge")
        self._combine(other.count, other.mean, other.comoment)

    def _combine(self, n2, mean2, como2) -> None:
        n1 = self.count
        n = n1 + n2
        if n2 == 0:
            return
        if n1 == 0:
            self.count, self.mean, self.comoment = n2, np.array(mean2, dtype=float), np.array(como2, dtype=float)
            return
        delta = np.asarray(mean2, dtype=float) - self.mean
        self.mean = self.mean + delta * (n2 / n)
        self.comoment = self.comoment + como2 + np.outer(delta, delta) * (n1 * n2 / n)
        self.count = n

    @property
    def variance(self) -> np.ndarray:
        """Population variance (the sweep average is over the full range)."""
        if self.count == 0:
            return np.full(self.dim, np.nan)
        return np.diag(self.comoment) / self.count

    @property
    def covariance(self) -> np.ndarray:
        if self.count == 0:
            return np.full((self.dim, self.dim), np.nan)
        return self.comoment / self.count

    def copy(self) -> "RunningMoments":
        out = RunningMoments(self.dim)
        out.count = self.count
        out.mean = self.mean.copy()
        out.comoment = self.comoment.copy()
        return out


class DeltaHistogram:
    """Fixed-width per-party histograms of the seat excess, clipped to bounds."""

    def __init__(self, bounds, bin_width: float = 0.01):
        self.bin_width = float(bin_width)
        self.low = np.asarray([b[0] for b in bounds], dtype=float)
        high = np.asarray([b[1] for b in bounds], dtype=float)
        if np.any(high <= self.low):
            raise InputError("histogram bounds must have positive width")
        self.n_bins = int(np.ceil((high - self.low).max() / self.bin_width)) + 1
        self.counts = np.zeros((len(bounds), self.n_bins), dtype=np.int64)

    def push_batch(self, xs) -> None:
        xs = np.asarray(xs, dtype=float)
        idx = np.clip(((xs - self.low) / self.bin_width).astype(int), 0, self.n_bins - 1)
        for i in range(self.counts.shape[0]):
            self.counts[i] += np.bincount(idx[:, i], minlength=self.n_bins)

    def merge(self, other: "DeltaHistogram") -> None:
        if (
            other.counts.shape != self.counts.shape
            or other.bin_width != self.bin_width
            or not np.array_equal(other.low, self.low)
        ):
            raise DimensionMismatchError("histogram configurations differ")
        self.counts += other.counts

    def copy(self) -> "DeltaHistogram":
        out = object.__new__(DeltaHistogram)
        out.bin_width = self.bin_width
        out.low = self.low.copy()
        out.n_bins = self.n_bins
        out.counts = self.counts.copy()
        return out


@dataclass
class SweepStats:
    """Accumulated seat-excess statistics over house sizes or MC trials."""

    moments: RunningMoments
    histogram: DeltaHistogram | None = None
    lower_violations: np.ndarray = None
    upper_violations: np.ndarray = None
    any_violation: float = 0.0
    ties: float = 0.0
    near_ties: float = 0.0
    n_from: int | None = None
    n_to: int | None = None

    @classmethod
    def empty(cls, dim: int, bounds=None, bin_width: float = 0.01) -> "SweepStats":
        hist = DeltaHistogram(bounds, bin_width) if bounds is not None else None
        return cls(
            moments=RunningMoments(dim),
            histogram=hist,
            lower_violations=np.zeros(dim),
            upper_violations=np.zeros(dim),
        )

    @property
    def count(self) -> float:
        return self.moments.count

    @property
    def dim(self) -> int:
        return self.moments.dim

    def record_batch(self, deltas, lower=None, upper=None, any_violation=None) -> None:
        """Record a batch of excess rows and optional violation indicators."""
        deltas = np.asarray(deltas, dtype=float)
        self.moments.push_batch(deltas)
        if self.histogram is not None:
            self.histogram.push_batch(deltas)
        if lower is None:
            lower = deltas <= -1.0
        if upper is None:
            upper = deltas >= 1.0
        lower = np.asarray(lower)
        upper = np.asarray(upper)
        self.lower_violations += lower.sum(axis=0)
        self.upper_violations += upper.sum(axis=0)
        if any_violation is None:
            any_violation = float(np.logical_or(lower, upper).any(axis=1).sum())
        self.any_violation += any_violation

    def merge(self, other: "SweepStats") -> None:
        """Combine with stats over a disjoint range; associative."""
        self.moments.merge(other.moments)
        if self.histogram is not None and other.histogram is not None:
            self.histogram.merge(other.histogram)
        self.lower_violations = self.lower_violations + other.lower_violations
        self.upper_violations = self.upper_violations + other.upper_violations
        self.any_violation += other.any_violation
        self.ties += other.ties
        self.near_ties += other.near_ties
        if other.n_from is not None:
            self.n_from = other.n_from if self.n_from is None else min(self.n_from, other.n_from)
        if other.n_to is not None:
            self.n_to = other.n_to if self.n_to is None else max(self.n_to, other.n_to)

    @property
    def mean(self) -> np.ndarray:
        return self.moments.mean

    @property
    def variance(self) -> np.ndarray:
        return self.moments.variance

    @property
    def covariance(self) -> np.ndarray:
        return self.moments.covariance

    def violation_frequency(self) -> dict:
        n = max(self.count, 1.0)
        return {
            "lower": self.lower_violations / n,
            "upper": self.upper_violations / n,
            "total": (self.lower_violations + self.upper_violations) / n,
            "any": self.any_violation / n,
        }


# -- comparison against predictions ----------------------------------------


@dataclass(frozen=True)
class Tolerances:
    mean: float = 0.01
    variance: float = 0.01
    covariance: float = 0.01
    violation: float | None = None


@dataclass(frozen=True)
class ComparisonRow:
    statistic: str
    index: tuple
    empirical: float
    predicted: float
    tolerance: float

    @property
    def abs_error(self) -> float:
        return abs(self.empirical - self.predicted)

    @property
    def passed(self) -> bool:
        return self.abs_error <= self.tolerance


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[ComparisonRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> list[ComparisonRow]:
        return [r for r in self.rows if not r.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "rows": [
                {
                    "statistic": r.statistic,
                    "index": list(r.index),
                    "empirical": r.empirical,
                    "predicted": r.predicted,
                    "abs_error": r.abs_error,
                    "tolerance": r.tolerance,
                    "passed": r.passed,
                }
                for r in self.rows
            ],
        }

    def format_table(self) -> str:
        lines = [f"{'statistic':<14}{'index':<10}{'empirical':>14}{'predicted':>14}{'abs err':>12}{'tol':>9}  ok"]
        for r in self.rows:
            idx = ",".join(str(i + 1) for i in r.index)
            lines.append(
                f"{r.statistic:<14}{idx:<10}{r.empirical:>14.6g}{r.predicted:>14.6g}"
                f"{r.abs_error:>12.3g}{r.tolerance:>9.3g}  {'pass' if r.passed else 'FAIL'}"
            )
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)
