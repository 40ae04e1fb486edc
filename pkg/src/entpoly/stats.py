"""Goodness-of-fit machinery for distance sample sets.

The gamma distribution here is ALWAYS in the rate parametrization:
``GammaLaw(alpha, beta)`` has density beta^alpha / Gamma(alpha) *
x^(alpha-1) * exp(-beta * x), mean alpha/beta and variance alpha/beta^2.
NumPy and many texts use the scale convention (scale = 1/rate); mixing
the two up is the easiest way to get silently wrong fits, so every API
in this package takes a rate and converts internally.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import special


@dataclass(frozen=True)
class GammaLaw:
    """Gamma distribution with shape ``alpha`` and RATE ``beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("alpha and beta must be positive")

    @property
    def mean(self) -> float:
        return self.alpha / self.beta

    @property
    def variance(self) -> float:
        return self.alpha / self.beta**2

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        xa = x[pos]
        out[pos] = np.exp(
            self.alpha * math.log(self.beta)
            - special.gammaln(self.alpha)
            + (self.alpha - 1) * np.log(xa)
            - self.beta * xa
        )
        return out


@dataclass
class DistanceSampleSet:
    """Multiset of nonnegative squared-distance values with provenance.

    ``weights`` (optional integer multiplicities) represent exhaustive
    sweeps compactly; Monte Carlo sets leave it None.  ``meta`` records
    at least the generating parameters (L, n, seed, source tag).
    """

    values: np.ndarray
    meta: dict
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.weights is not None:
            self.weights = np.asarray(self.weights)
            if self.weights.shape != self.values.shape:
                raise ValueError("weights must match values")
        if self.values.size and self.values.min() < 0:
            raise ValueError("distance samples must be nonnegative")

    @property
    def count(self) -> int:
        if self.weights is None:
            return int(self.values.size)
        return int(self.weights.sum())


@dataclass(frozen=True)
class KSResult:
    """Kolmogorov-Smirnov sup-distance and the sample count behind it."""

    statistic: float
    n: int

    def noise_floor(self) -> float:
        """95% two-sided KS quantile ~ 1.36/sqrt(n) for a true-model draw."""
        return 1.36 / math.sqrt(self.n)


def gamma_cdf(law: GammaLaw, x) -> np.ndarray | float:
    """Regularized lower incomplete gamma P(alpha, beta * x)."""
    scalar = np.isscalar(x)
    xs = np.asarray(x, dtype=float)
    if xs.size and xs.min() < 0:
        raise ValueError("gamma_cdf requires x >= 0")
    out = special.gammainc(law.alpha, law.beta * xs)
    return float(out) if scalar else out


def gamma_ppf(law: GammaLaw, q) -> np.ndarray | float:
    """Inverse of `gamma_cdf` (quantile function)."""
    scalar = np.isscalar(q)
    out = special.gammaincinv(law.alpha, np.asarray(q, dtype=float)) / law.beta
    return float(out) if scalar else out


def _sorted_with_weights(samples: DistanceSampleSet | Sequence[float]):
    if isinstance(samples, DistanceSampleSet):
        values, weights = samples.values, samples.weights
    else:
        values, weights = np.asarray(samples, dtype=float), None
    if values.size == 0:
        raise ValueError("empty sample set")
    order = np.argsort(values, kind="stable")
    values = values[order]
    if weights is None:
        weights = np.ones_like(values)
    else:
        weights = np.asarray(weights, dtype=float)[order]
    return values, weights


def ks_distance(samples: DistanceSampleSet | Sequence[float], law: GammaLaw) -> KSResult:
    """Exact sup-distance between the empirical CDF and a gamma CDF.

    Evaluated at both one-sided limits of every ECDF jump, via a single
    sorted sweep; duplicate values (and integer weights) merge into one
    jump of the combined mass.
    """
    values, weights = _sorted_with_weights(samples)
    total = weights.sum()
    cum = np.cumsum(weights) / total
    model = gamma_cdf(law, values)
    upper = np.max(np.abs(cum - model))
    lower = np.max(np.abs(np.concatenate(([0.0], cum[:-1])) - model))
    return KSResult(float(max(upper, lower)), int(round(total)))


def ks_two_sample(a: Sequence[float] | DistanceSampleSet, b: Sequence[float] | DistanceSampleSet) -> KSResult:
    """Two-sample KS sup-distance between empirical CDFs."""
    av, aw = _sorted_with_weights(a)
    bv, bw = _sorted_with_weights(b)
    grid = np.concatenate([av, bv])
    grid.sort(kind="stable")
    ca = np.cumsum(aw) / aw.sum()
    cb = np.cumsum(bw) / bw.sum()
    fa = ca[np.searchsorted(av, grid, side="right") - 1]
    fb = cb[np.searchsorted(bv, grid, side="right") - 1]
    fa[np.searchsorted(av, grid, side="right") == 0] = 0.0
    fb[np.searchsorted(bv, grid, side="right") == 0] = 0.0
    d = float(np.max(np.abs(fa - fb)))
    na, nb = int(round(aw.sum())), int(round(bw.sum()))
    return KSResult(d, (na * nb) // max(na + nb, 1))


@dataclass(frozen=True)
class HistogramResult:
    """Binned counts plus, optionally, a model density on the same grid.

    With the log transform the bins live on y = ln(x) and the reference
    density carries the Jacobian: g(y) = e^y * f(e^y).
    """

    bin_left: np.ndarray
    bin_right: np.ndarray
    counts: np.ndarray
    model_density: Optional[np.ndarray] = None
    transform: str = "identity"

    @property
    def total(self) -> float:
        return float(self.counts.sum())

    def density(self) -> np.ndarray:
        """Empirical density normalized over the binned grid."""
        widths = self.bin_right - self.bin_left
        return self.counts / (self.total * widths)


def histogram(
    samples: DistanceSampleSet | Sequence[float],
    bins: int,
    transform: str = "identity",
    law: Optional[GammaLaw] = None,
) -> HistogramResult:
    """Histogram of a sample set, optionally on the ln(x) axis.

    The log transform maps samples x -> ln x; a reference gamma density,
    when given, transforms with the Jacobian e^y * f(e^y) so it can be
    overlaid on the binned density directly.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    values, weights = _sorted_with_weights(samples)
    if transform == "log":
        if values[0] <= 0:
            raise ValueError("log transform requires strictly positive values")
        values = np.log(values)
    elif transform != "identity":
        raise ValueError(f"unknown transform {transform!r}")
    counts, edges = np.histogram(values, bins=bins, weights=weights)
    model = None
    if law is not None:
        mids = 0.5 * (edges[:-1] + edges[1:])
        if transform == "log":
            model = np.exp(mids) * law.pdf(np.exp(mids))
        else:
            model = law.pdf(mids)
    return HistogramResult(edges[:-1], edges[1:], counts, model, transform)


def moment_report(samples: DistanceSampleSet | Sequence[float]) -> tuple[float, float]:
    """(mean, population variance) in a single compensated-sum pass.

    A single sample reports variance 0 by the population (divide by n)
    convention.
    """
    values, weights = _sorted_with_weights(samples)
    total = float(weights.sum())
    mean = float(math.fsum((values * weights).tolist()) / total)
    var = float(math.fsum((weights * (values - mean) ** 2).tolist()) / total)
    return mean, var


# ---------------------------------------------------------------------------
# CSV emission: plot data and raw sample columns
# ---------------------------------------------------------------------------

def write_metadata_header(fh, meta: dict) -> None:
    """Leading '# key=value' comment lines; keys in sorted order."""
    for key in sorted(meta):
        value = meta[key]
        fh.write(f"# {key}={'' if value is None else value}\n")


def write_histogram_csv(path, hist: HistogramResult, meta: dict) -> None:
    """Plot-data CSV: bin_left, bin_right, count, model_density."""
    with open(path, "w", newline="") as fh:
        write_metadata_header(fh, meta)
        writer = csv.writer(fh)
        writer.writerow(["bin_left", "bin_right", "count", "model_density"])
        model = hist.model_density
        for i in range(len(hist.counts)):
            writer.writerow(
                [
                    repr(float(hist.bin_left[i])),
                    repr(float(hist.bin_right[i])),
                    repr(float(hist.counts[i])),
                    "" if model is None else repr(float(model[i])),
                ]
            )


def write_samples_csv(path, samples: DistanceSampleSet) -> None:
    """Single-column CSV of sample values; the header names the source."""
    meta = samples.meta
    header = "value_" + "_".join(
        f"{k}{meta[k]}" for k in ("L", "n", "seed", "path") if meta.get(k) is not None
    )
    with open(path, "w", newline="") as fh:
        write_metadata_header(fh, meta)
        writer = csv.writer(fh)
        writer.writerow([header])
        for v in samples.values:
            writer.writerow([repr(float(v))])


def read_samples_csv(path) -> DistanceSampleSet:
    meta: dict = {}
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                meta[key] = val
            elif line.startswith("value"):
                continue
            else:
                values.append(float(line))
    return DistanceSampleSet(values=np.array(values), meta=meta)
