"""All acceptance criteria.  One summary line per criterion is printed at the end of the run."""
import pytest

from thetablocks import acceptance

NUMBERS = range(1, len(acceptance.CRITERIA) + 1)


@pytest.fixture(scope="session")
def results(request):
    out = {r.number: r for r in acceptance.run()}
    request.config.acceptance_lines = [out[n].line() for n in NUMBERS]
    for n in NUMBERS:
        print(out[n].line())
    return out


def _param(n):
    if n in acceptance.KNOWN_ERRATA:
        return pytest.param(n, marks=pytest.mark.xfail(strict=True, reason="printed value not reproducible"))
    return n


@pytest.mark.parametrize("n", [_param(n) for n in NUMBERS])
def test_criterion(results, n):
    r = results[n]
    assert r.checks > 0
    assert r.ok, r.line()


@pytest.mark.parametrize("n", sorted(acceptance.KNOWN_ERRATA))
def test_criterion_remainder(results, n):
    """Everything except the recorded errata holds."""
    assert results[n].failures == acceptance.KNOWN_ERRATA[n]
