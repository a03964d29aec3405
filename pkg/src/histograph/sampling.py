"""
Journal productivity distributions and citation aging.

Kendall's question asks how many more journals show up on a topic when the
sampling period is doubled. Brookes' answer is the alternating sum
``M = f1 - f2 + f3 - ...`` over the histogram of journals by number of papers.
"""

import logging
import math
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import HistographError, InsufficientDataError
from .ingest import Collection, SourceRecord, merge_collections
from .linker import CitationGraph

log = logging.getLogger(__name__)

PARETO_SHARE = 0.20


@dataclass(frozen=True)
class FrequencyDistribution:
    counts: Dict[int, int]   # papers per journal -> number of journals

    def __post_init__(self):
        for r, f in self.counts.items():
            if r < 1 or f < 1:
                raise ValueError(f"invalid histogram entry {r}: {f}")

    @property
    def total_journals(self) -> int:
        return sum(self.counts.values())

    @property
    def total_papers(self) -> int:
        return sum(r * f for r, f in self.counts.items())

    def f(self, r: int) -> int:
        return self.counts.get(r, 0)

    @property
    def max_rank(self) -> int:
        return max(self.counts, default=0)


def journal_frequency(c: Collection) -> FrequencyDistribution:
    per_source = Counter(r.source for r in c.records)
    hist = Counter(per_source.values())
    return FrequencyDistribution(dict(sorted(hist.items())))


def brookes_estimate(d: FrequencyDistribution) -> int:
    """Predicted number of additional journals when the period doubles.

    Signs follow the rank parity, so absent ranks still flip the sign of the
    next present one.
    """
    if d.total_journals == 0:
        raise HistographError("empty frequency distribution")
    return sum(f if r % 2 == 1 else -f for r, f in d.counts.items())


def predicted_total(d: FrequencyDistribution) -> int:
    return d.total_journals + brookes_estimate(d)


def prediction_error(predicted: int, actual: int) -> float:
    """|predicted - actual| / predicted."""
    if predicted == 0:
        raise HistographError("prediction is zero")
    return abs(predicted - actual) / predicted


def augment_8020(outer, target_year: int, share: float = PARETO_SHARE):
    """Keep the top ``floor(share * n)`` outer references published in ``target_year``.

    ``outer`` is the ranked list from :func:`linker.outer_references`
    (key, count) and must already be sorted by count, descending.
    """
    hits = [item for item in outer if item[0][1] == target_year]
    # integer arithmetic keeps floor(0.2 * n) exact
    keep = math.floor(round(share * 100) * len(hits) / 100)
    return hits[:keep]


def stub_record(key) -> SourceRecord:
    """Minimal SourceRecord for a reference added by the 80/20 step."""
    author, year, source, volume, page = key
    return SourceRecord(pub_year=year, source=(source or "").upper(),
                        authors=(author,) if author else (), volume=volume,
                        begin_page=page)


def augment_collection(c: Collection, selected) -> Collection:
    stubs = Collection.build((stub_record(k) for k, _ in selected),
                             c.download_date, c.query_label)
    return merge_collections(c, stubs)


# --------------------------------------------------------------------------
# Weibull aging


@dataclass(frozen=True)
class WeibullFit:
    shape: float
    scale: float
    log_likelihood: float
    n_events: int
    n_censored: int
    iterations: int = 0


def weibull_loglik(shape, scale, ages, censored) -> float:
    """Right-censored Weibull log-likelihood (vectorised over ages)."""
    t = np.asarray(ages, dtype=float)
    cen = np.asarray(censored, dtype=bool)
    z = (t / scale) ** shape
    ev = ~cen
    ll = np.sum(np.log(shape / scale) + (shape - 1) * np.log(t[ev] / scale)) - np.sum(z)
    return float(ll)


def _profile_equation(k, t, logt, sum_log_events, r):
    # d/dk of the profiled log-likelihood, scaled by 1/r; returns (g, g')
    tk = t ** k
    s0 = tk.sum()
    s1 = (tk * logt).sum()
    s2 = (tk * logt * logt).sum()
    g = s1 / s0 - 1.0 / k - sum_log_events / r
    dg = s2 / s0 - (s1 / s0) ** 2 + 1.0 / k ** 2
    return g, dg


def weibull_fit(observations: Sequence[Tuple[float, bool]], tol: float = 1e-9,
                max_iter: int = 200) -> WeibullFit:
    """Maximum-likelihood two-parameter Weibull fit with right censoring.

    ``observations`` holds ``(age, censored)`` pairs. The shape solves the
    profiled score equation (safeguarded Newton on a bracket); the scale then
    has the closed form ``(sum t^k / r) ** (1/k)`` with ``r`` events.
    """
    if not observations:
        raise InsufficientDataError("insufficient data: no observations")
    t = np.array([float(a) for a, _ in observations])
    cen = np.array([bool(c) for _, c in observations])
    if np.any(~np.isfinite(t)) or np.any(t <= 0):
        raise HistographError("ages must be positive")
    r = int((~cen).sum())
    if r == 0:
        raise InsufficientDataError("all observations are censored")
    if r < 3:
        warnings.warn("fewer than 3 uncensored ages: shape is unbounded", RuntimeWarning)
        raise InsufficientDataError(f"insufficient data: {r} events, need at least 3")

    # work on rescaled ages so t**k stays finite for large shapes
    t = t / t.max()
    logt = np.log(t)
    sum_log_events = logt[~cen].sum()
    if np.ptp(logt) == 0:
        raise InsufficientDataError("insufficient data: all ages identical, shape unbounded")

    def g(k):
        return _profile_equation(k, t, logt, sum_log_events, r)

    # g is increasing in k; bracket the root
    lo, hi = 1e-3, 1.0
    while g(hi)[0] < 0:
        lo, hi = hi, hi * 2
        if hi > 1e4:
            raise InsufficientDataError("shape diverges: data too concentrated")
    while g(lo)[0] > 0:
        lo /= 2
        if lo < 1e-12:
            raise HistographError("shape collapses towards zero")

    k = 0.5 * (lo + hi)
    it = 0
    for it in range(1, max_iter + 1):
        val, der = g(k)
        if val > 0:
            hi = k
        else:
            lo = k
        step = val / der if der > 0 else None
        new = k - step if step is not None else None
        if new is None or not lo < new < hi:
            new = 0.5 * (lo + hi)
        if abs(new - k) < tol:
            k = new
            break
        k = new
    else:
        log.warning("weibull_fit: no convergence after %d iterations", max_iter)

    t_orig_max = max(float(a) for a, _ in observations)
    scale = float(((t ** k).sum() / r) ** (1.0 / k)) * t_orig_max
    ages = [float(a) for a, _ in observations]
    ll = weibull_loglik(k, scale, ages, cen)
    return WeibullFit(float(k), scale, ll, r, int(cen.sum()), it)


def citation_ages(c: Collection, g: CitationGraph,
                  window_end: Optional[int] = None) -> List[Tuple[int, bool]]:
    """Age at first local citation for each record.

    Age is ``first citing year - pub_year + 1``; never-cited records are
    censored at ``window_end - pub_year + 1`` (window_end defaults to the
    last year of the collection).
    """
    if not c.records:
        return []
    if window_end is None:
        window_end = c.year_span[1]
    out = []
    for rec in c.records:
        years = [c.node(u).pub_year for u in g.in_neighbors(rec.node_id)]
        if years:
            out.append((max(1, min(years) - rec.pub_year + 1), False))
        else:
            out.append((max(1, window_end - rec.pub_year + 1), True))
    return out
