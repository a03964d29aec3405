import random

import pytest

from brute import weibull_grid, weibull_sample
from fixtures.muscle_fiber import FREQ_2002, FREQ_2003
from histograph.errors import HistographError, InsufficientDataError
from histograph.ingest import Collection, merge_collections
from histograph.linker import link_citations, outer_references
from histograph.sampling import (FrequencyDistribution, augment_8020, augment_collection,
                                 brookes_estimate, citation_ages, journal_frequency,
                                 predicted_total, prediction_error, weibull_fit,
                                 weibull_loglik)


def test_frequencies(muscle):
    a, b = muscle
    fa, fb = journal_frequency(a), journal_frequency(b)
    assert fa.counts == {1: 114, 2: 23, 3: 7, 4: 2, 5: 2, 8: 1, 11: 2, 12: 1}
    assert fa.total_journals == 152 and fa.total_papers == len(a)
    assert fb.total_journals == 133 and fb.f(17) == 1
    assert fb.counts == FREQ_2003


def test_empty_frequency():
    d = journal_frequency(Collection.build([]))
    assert d.counts == {} and d.total_journals == 0
    with pytest.raises(HistographError):
        brookes_estimate(d)


def test_brookes_2002():
    d = FrequencyDistribution(FREQ_2002)
    assert brookes_estimate(d) == 114 - 23 + 7 - 2 + 2 - 1 + 2 - 1 == 98
    assert predicted_total(d) == 250


def test_brookes_singletons():
    assert brookes_estimate(FrequencyDistribution({1: 37})) == 37


def test_brookes_random_oracle():
    rng = random.Random(1)
    for _ in range(200):
        counts = {r: rng.randint(1, 50) for r in rng.sample(range(1, 30), rng.randint(1, 10))}
        d = FrequencyDistribution(counts)
        oracle = 0
        for r in range(1, max(counts) + 1):
            oracle += (-1) ** (r + 1) * counts.get(r, 0)
        assert brookes_estimate(d) == oracle
        doubled = FrequencyDistribution({r: 2 * f for r, f in counts.items()})
        assert brookes_estimate(doubled) == 2 * oracle


def test_prediction_errors():
    assert prediction_error(250, 231) == pytest.approx(0.076)
    assert prediction_error(250, 243) == pytest.approx(0.028)


def test_invalid_histogram():
    with pytest.raises(ValueError):
        FrequencyDistribution({0: 3})


def test_8020_cuts(muscle):
    a, b = muscle
    outer_a = outer_references(link_citations(a))
    outer_b = outer_references(link_citations(b))
    hits_a = [o for o in outer_a if o[0][1] == 2002]
    hits_b = [o for o in outer_b if o[0][1] == 2003]
    assert (len(hits_a), len(hits_b)) == (96, 117)
    sel_a, sel_b = augment_8020(outer_a, 2002), augment_8020(outer_b, 2003)
    assert (len(sel_a), len(sel_b)) == (19, 23)
    for sel, hits in ((sel_a, hits_a), (sel_b, hits_b)):
        rest = [n for item, n in hits if (item, n) not in sel]
        assert min(n for _, n in sel) >= max(rest)


def test_8020_floor():
    outer = [((f"A{i}", 2000, "J", "1", str(i)), 100 - i) for i in range(14)]
    assert len(augment_8020(outer, 2000)) == 2
    assert augment_8020(outer, 1999) == []


def test_augmented_merge(muscle):
    a, b = muscle
    sel_a = augment_8020(outer_references(link_citations(a)), 2002)
    sel_b = augment_8020(outer_references(link_citations(b)), 2003)
    merged = merge_collections(augment_collection(a, sel_a), augment_collection(b, sel_b))
    actual = len(merged.sources)
    assert actual == 243
    pred = predicted_total(journal_frequency(a))
    assert round(100 * prediction_error(pred, actual), 1) == 2.8


# Weibull


def _check_fit(obs, shape=1.5, scale=3.0):
    fit = weibull_fit(obs)
    assert abs(fit.shape - shape) / shape < 0.10
    assert abs(fit.scale - scale) / scale < 0.10
    assert fit.n_events + fit.n_censored == len(obs)
    best_grid = max(ll for ll, _, _ in weibull_grid(obs))
    assert fit.log_likelihood >= best_grid - 1e-6
    return fit


def test_weibull_uncensored():
    fit = _check_fit(weibull_sample(2024))
    assert fit.n_censored == 0
    assert fit.iterations <= 200


def test_weibull_censored():
    obs = weibull_sample(99, censor_share=0.2)
    share = sum(c for _, c in obs) / len(obs)
    assert 0.15 < share < 0.25
    _check_fit(obs)


def test_weibull_exponential():
    fit = weibull_fit(weibull_sample(5, shape=1.0, scale=2.0))
    assert 0.9 <= fit.shape <= 1.1


def test_weibull_stationary():
    obs = weibull_sample(8, n=300)
    fit = weibull_fit(obs)
    ages = [a for a, _ in obs]
    cen = [c for _, c in obs]
    for dk, dl in ((1e-3, 0), (-1e-3, 0), (0, 1e-3), (0, -1e-3)):
        assert weibull_loglik(fit.shape + dk, fit.scale + dl, ages, cen) <= fit.log_likelihood


def test_weibull_degenerate():
    with pytest.warns(RuntimeWarning):
        with pytest.raises(InsufficientDataError):
            weibull_fit([(2.0, False)])
    with pytest.raises(InsufficientDataError):
        weibull_fit([(2.0, True), (3.0, True)])
    with pytest.raises(HistographError):
        weibull_fit([(0.0, False), (1.0, False), (2.0, False)])


def test_citation_ages(alert92, alert92_graph):
    ages = citation_ages(alert92, alert92_graph)
    assert len(ages) == 15
    # node 2 (1987) first cited in 1989 by node 4 and 5
    assert ages[1] == (3, False)
    # node 7 (1991) never cited: censored at 1992
    assert ages[6] == (2, True)
    assert all(a >= 1 for a, _ in ages)


def test_citation_ages_window(alert92, alert92_graph):
    ages = citation_ages(alert92, alert92_graph, window_end=2000)
    assert ages[6] == (10, True)
