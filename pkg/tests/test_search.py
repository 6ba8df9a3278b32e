from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from thetablocks import search
from thetablocks.config import load_fixture


def test_pattern_syntax():
    assert search.pattern("5_.2.7") == (1, 2, 3, 4, 5, 2, 7)
    assert search.pattern("5̲·2·7") == (1, 2, 3, 4, 5, 2, 7)
    with pytest.raises(ValueError):
        search.pattern("5__")


def test_table_rows():
    report = search.verify_table(load_fixture("best_values"))
    assert len(report) == 50 and all(r["ok"] for r in report)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_exhaustive_small(N):
    rows = {r["N"]: r for r in load_fixture("best_values")}
    assert search.exhaustive(N, 8).k == F(rows[N]["k"])


@given(st.lists(st.integers(-20, 20).filter(bool), min_size=1, max_size=6))
def test_normalize_invariances(a):
    rep = search.normalize(a)
    assert search.normalize([2 * x for x in a]) == rep
    assert search.normalize([-x for x in reversed(a)]) == rep
    assert search.evaluate(a).k == search.evaluate(rep).k


@given(st.integers(1, 40), st.integers(1, 40))
def test_pair_closed_form(a, b):
    from thetablocks.order import s_and_k
    assert s_and_k((a, b))[0] == search.pair_s_closed_form(a, b)


@pytest.mark.parametrize("strategy", ["pattern", "random", "exhaustive"])
def test_random_search_never_worse(strategy):
    start = search.evaluate(range(1, 5))
    best = search.random_search(4, 300, strategy, seed=1, max_entry=8)
    assert best.k <= start.k
    assert search.random_search(4, 300, strategy, seed=1, max_entry=8) == best


def test_search_usage_errors():
    with pytest.raises(ValueError):
        search.random_search(3, 0)
    with pytest.raises(ValueError):
        search.random_search(3, 10, "sideways")


def test_weight_bounds():
    lo, hi = search.weight_bounds(50)
    assert round(lo, 5) == 0.00933
    assert 1 / search.lower_constant() == pytest.approx(555.93, abs=0.01)
    assert hi > lo
