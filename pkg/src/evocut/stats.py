"""Degree distributions and tail fits.

Power law: discrete maximum likelihood on the tail ``k >= k_min``, with
``P(k) = k**-gamma / zeta(gamma, k_min)``. The continuity-corrected closed
form ``1 + n / sum(log(k / (k_min - 0.5)))`` seeds the search and is kept
in the report as ``gamma_approx``.

Stretched exponential: ``CCDF(k) = exp(-(k / kappa)**beta)`` fitted by
least squares of ``log(-log CCDF)`` against ``log k``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from .graph import Graph

MIN_TAIL = 10
MIN_SUPPORT = 5
# log-likelihood units; |ll_stretched - ll_power| below this is a tie
VERDICT_MARGIN = 2.0
GAMMA_BOUNDS = (1.0 + 1e-6, 30.0)

POWER_LAW = "power_law"
STRETCHED = "stretched_exponential"
INCONCLUSIVE = "inconclusive"


class FitError(ValueError):
    pass


class InsufficientTail(FitError):
    pass


class DegenerateSample(FitError):
    pass


class InsufficientSupport(FitError):
    pass


@dataclass(frozen=True)
class DegreeHistogram:
    counts: dict[int, int]
    n: int
    two_m: int

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "DegreeHistogram":
        c = Counter(int(d) for d in degrees)
        if any(d < 0 for d in c):
            raise ValueError("degrees must be non-negative")
        counts = dict(sorted(c.items()))
        return cls(counts, sum(counts.values()), sum(d * x for d, x in counts.items()))

    def degrees(self) -> np.ndarray:
        """Expanded degree sample in ascending order."""
        return np.repeat(np.fromiter(self.counts, np.int64, len(self.counts)),
                         np.fromiter(self.counts.values(), np.int64, len(self.counts)))

    def ccdf(self) -> list[tuple[int, float]]:
        """``(k, fraction of nodes with degree >= k)`` for each observed degree."""
        out = []
        remaining = self.n
        for d, c in self.counts.items():
            out.append((d, remaining / self.n))
            remaining -= c
        return out

    def to_csv(self) -> str:
        return "degree,count\n" + "".join(f"{d},{c}\n" for d, c in self.counts.items())


def degree_histogram(g: Graph) -> DegreeHistogram:
    return DegreeHistogram.from_degrees(g.degrees())


def pk(h: DegreeHistogram, normalization: str = "by_n") -> list[tuple[int, float]]:
    """Degree distribution ``p(k)``.

    ``by_n`` divides counts by the node count and sums to one. ``by_2m``
    divides by the total degree instead, so values sum to ``n / 2m``.
    """
    if normalization == "by_n":
        denom = h.n
    elif normalization == "by_2m":
        denom = h.two_m
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    if denom == 0:
        return []
    return [(d, c / denom) for d, c in h.counts.items()]


# ---------------------------------------------------------------------------
# power law

@dataclass(frozen=True)
class PowerLawFit:
    gamma: float
    k_min: int
    ks_stat: float
    n_tail: int
    gamma_approx: float
    warnings: tuple[str, ...] = ()
    method: str = "discrete-mle"

    def loglik(self, tail: np.ndarray) -> float:
        return float(-self.gamma * np.log(tail).sum() - len(tail) * math.log(zeta(self.gamma, self.k_min)))

    def report(self) -> dict:
        return {
            "method": self.method,
            "params": {"gamma": self.gamma, "gamma_approx": self.gamma_approx},
            "goodness": {"ks": self.ks_stat},
            "n_tail": self.n_tail,
            "k_min": self.k_min,
            "warnings": list(self.warnings),
        }


def _power_law_ks(tail: np.ndarray, gamma: float, k_min: int) -> float:
    k = np.arange(k_min, int(tail.max()) + 2)
    emp = 1.0 - np.searchsorted(tail, k, side="left") / len(tail)
    model = zeta(gamma, k) / zeta(gamma, k_min)
    return float(np.abs(emp - model).max())


def _fit_tail(tail: np.ndarray, k_min: int) -> PowerLawFit:
    n = len(tail)
    log_sum = float(np.log(tail).sum())
    shift = k_min - 0.5
    approx = 1.0 + n / float(np.log(tail / shift).sum())

    def nll(g):
        return g * log_sum + n * math.log(zeta(g, k_min))

    res = minimize_scalar(nll, bounds=GAMMA_BOUNDS, method="bounded", options={"xatol": 1e-9})
    gamma = float(res.x)
    warnings = []
    if not 2.0 < gamma <= 3.0:
        warnings.append(f"gamma={gamma:.3f} outside the scale-free range (2, 3]")
    if gamma >= GAMMA_BOUNDS[1] - 1e-3:
        warnings.append("gamma hit the search bound")
    return PowerLawFit(gamma, k_min, _power_law_ks(tail, gamma, k_min), n, approx, tuple(warnings))


def fit_power_law(h: DegreeHistogram, k_min: int | str = 1) -> PowerLawFit:
    """Discrete power-law fit on degrees ``>= k_min``.

    ``k_min="auto"`` scans every observed degree with at least ``MIN_TAIL``
    nodes at or above it and keeps the cutoff with the smallest KS distance.
    """
    degrees = h.degrees()
    if isinstance(k_min, str):
        if k_min != "auto":
            raise ValueError(f"k_min must be an integer or 'auto', got {k_min!r}")
        return _fit_power_law_auto(degrees)
    if k_min < 1:
        raise ValueError("k_min must be >= 1")
    tail = degrees[degrees >= k_min]
    if len(tail) < MIN_TAIL:
        raise InsufficientTail(f"{len(tail)} nodes with degree >= {k_min}; need {MIN_TAIL}")
    if tail[0] == tail[-1]:
        raise DegenerateSample(f"all {len(tail)} tail degrees equal {tail[0]}")
    return _fit_tail(tail, k_min)


def _fit_power_law_auto(degrees: np.ndarray) -> PowerLawFit:
    candidates = [int(d) for d in np.unique(degrees) if d >= 1]
    best = None
    for k_min in candidates:
        tail = degrees[degrees >= k_min]
        if len(tail) < MIN_TAIL:
            break
        if tail[0] == tail[-1]:
            continue
        fit = _fit_tail(tail, k_min)
        if best is None or fit.ks_stat < best.ks_stat:
            best = fit
    if best is None:
        if not candidates or (degrees >= candidates[0]).sum() < MIN_TAIL:
            raise InsufficientTail(f"no cutoff leaves {MIN_TAIL} nodes in the tail")
        raise DegenerateSample("every admissible tail has a single distinct degree")
    return best


# ---------------------------------------------------------------------------
# stretched exponential

@dataclass(frozen=True)
class StretchedExpFit:
    beta: float
    kappa: float
    r2: float
    n_points: int
    warnings: tuple[str, ...] = ()
    method: str = "ccdf-loglog-least-squares"

    def log_survival(self, k) -> np.ndarray:
        return -np.power(np.asarray(k, dtype=float) / self.kappa, self.beta)

    def loglik(self, tail: np.ndarray, k_min: int) -> float:
        """Log-likelihood of the discretized form conditioned on ``k >= k_min``."""
        a = self.log_survival(tail)
        b = self.log_survival(tail + 1)
        with np.errstate(divide="ignore"):
            terms = a + np.log(-np.expm1(b - a))
        return float(terms.sum() - len(tail) * self.log_survival(k_min))

    def report(self) -> dict:
        return {
            "method": self.method,
            "params": {"beta": self.beta, "kappa": self.kappa},
            "goodness": {"r2": self.r2},
            "n_tail": self.n_points,
            "k_min": 1,
            "warnings": list(self.warnings),
        }


def fit_stretched_exponential(h: DegreeHistogram) -> StretchedExpFit:
    pts = [(k, s) for k, s in h.ccdf() if k >= 1 and 0.0 < s < 1.0]
    if len(pts) < MIN_SUPPORT:
        raise InsufficientSupport(f"{len(pts)} usable CCDF points; need {MIN_SUPPORT}")
    x = np.log([k for k, _ in pts])
    y = np.log(-np.log([s for _, s in pts]))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid ** 2).sum()) / ss_tot if ss_tot > 0 else 0.0
    beta = float(slope)
    if beta <= 0:
        raise DegenerateSample(f"non-positive stretch exponent {beta:.3f}")
    kappa = float(math.exp(-intercept / beta))
    warnings = []
    if beta > 1.0:
        warnings.append(f"beta={beta:.3f} > 1: lighter than exponential")
    if beta > 1.5:
        warnings.append("beta outside (0, 1.5]")
    return StretchedExpFit(beta, kappa, r2, len(pts), tuple(warnings))


# ---------------------------------------------------------------------------
# model comparison

@dataclass(frozen=True)
class Comparison:
    verdict: str
    reason: str
    power: PowerLawFit | None = None
    stretched: StretchedExpFit | None = None
    ll_power: float | None = None
    ll_stretched: float | None = None
    margin: float = VERDICT_MARGIN
    errors: dict[str, str] = field(default_factory=dict)

    def report(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "margin": self.margin,
            "loglik": {"power_law": self.ll_power, "stretched_exponential": self.ll_stretched},
            "power_law": self.power.report() if self.power else {"error": self.errors.get("power_law")},
            "stretched_exponential": self.stretched.report() if self.stretched else {"error": self.errors.get("stretched_exponential")},
        }


def compare_fits(h: DegreeHistogram, k_min: int | str = 1, margin: float = VERDICT_MARGIN) -> Comparison:
    """Pick the better of the two fitted forms on the power-law tail.

    Both fits are scored by log-likelihood on the degrees ``>= k_min`` of
    the power-law fit; a difference smaller than ``margin`` is inconclusive.
    The default ``k_min=1`` scores the whole positive-degree range. A
    KS-selected cutoff (``"auto"``) tends to retreat into a short far tail
    where the two forms are indistinguishable.
    """
    errors = {}
    pl = se = None
    try:
        pl = fit_power_law(h, k_min)
    except FitError as exc:
        errors[POWER_LAW] = f"{type(exc).__name__}: {exc}"
    try:
        se = fit_stretched_exponential(h)
    except FitError as exc:
        errors[STRETCHED] = f"{type(exc).__name__}: {exc}"
    if errors:
        return Comparison(INCONCLUSIVE, "; ".join(errors.values()), pl, se, margin=margin, errors=errors)

    degrees = h.degrees()
    tail = degrees[degrees >= pl.k_min]
    ll_pl = pl.loglik(tail)
    ll_se = se.loglik(tail, pl.k_min)
    diff = ll_se - ll_pl
    if not math.isfinite(diff):
        verdict = POWER_LAW if ll_se == -math.inf else INCONCLUSIVE
        reason = "non-finite log-likelihood"
    elif diff > margin:
        verdict, reason = STRETCHED, f"stretched exponential ahead by {diff:.2f}"
    elif diff < -margin:
        verdict, reason = POWER_LAW, f"power law ahead by {-diff:.2f}"
    else:
        verdict, reason = INCONCLUSIVE, f"log-likelihood gap {diff:.2f} within margin {margin}"
    return Comparison(verdict, reason, pl, se, ll_pl, ll_se, margin)
