import json

import pytest

from thetablocks.config import FIXTURE_ENV, Config, FixtureError, fixture_dir, load_fixture


def test_defaults_are_positive():
    c = Config()
    assert c.q_prec > 0 and c.search_budget > 0 and c.weyl_cap > 0


@pytest.mark.parametrize("field", ["q_prec", "search_budget", "weyl_cap"])
def test_nonpositive_rejected(field):
    with pytest.raises(ValueError):
        Config(**{field: 0})


def test_bad_output_rejected():
    with pytest.raises(ValueError):
        Config(output="xml")


def test_bundled_fixtures_verify():
    rows = load_fixture("best_values")
    assert len(rows) == 50


def _copy_fixtures(tmp_path, tamper=False):
    src = fixture_dir()
    for f in src.glob("*.json"):
        (tmp_path / f.name).write_bytes(f.read_bytes())
    if tamper:
        p = tmp_path / "best_values.json"
        rows = json.loads(p.read_text())
        rows[0]["k"] = "1/3"
        p.write_text(json.dumps(rows))


def test_checksum_mismatch(tmp_path):
    _copy_fixtures(tmp_path, tamper=True)
    with pytest.raises(FixtureError):
        load_fixture("best_values", tmp_path)


def test_env_override(tmp_path, monkeypatch):
    _copy_fixtures(tmp_path)
    monkeypatch.setenv(FIXTURE_ENV, str(tmp_path))
    assert fixture_dir() == tmp_path
    assert Config.from_env().fixture_dir == tmp_path
    assert load_fixture("weight2_census.json")


def test_unlisted_fixture(tmp_path):
    _copy_fixtures(tmp_path)
    with pytest.raises(FixtureError):
        load_fixture("missing", tmp_path)
