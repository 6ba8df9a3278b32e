import io
import json

import pytest

from thetablocks import cli


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_classify_text():
    code, out = run("--format", "text", "classify", "--block", "eta:-6 1:3 2:3 3:2 4:1 5:1")
    assert code == 0
    assert out.strip() == "weight 2, index 37, character 0, cusp"


def test_classify_json():
    code, out = run("classify", "--block", "eta:-6 1:3 2:3 3:2 4:1 5:1")
    d = json.loads(out)
    assert code == 0 and d["index"] == "37" and d["class"] == "cusp"


def test_expand_is_deterministic():
    a = run("expand", "--block", "eta:-3 1:5 2:3 3:1", "--prec", "4")
    b = run("expand", "--block", "eta:-3 1:5 2:3 3:1", "--prec", "4")
    assert a == b and a[0] == 0
    s = json.loads(a[1])["series"]
    assert set(s) == {"q_scale", "zeta_vars", "terms", "q_prec"}


def test_order_profile():
    code, out = run("order", "--block", "1:1")
    d = json.loads(out)
    assert d["min_order"] == "0" and d["argmins"] == ["1/2"]
    code, out = run("--format", "text", "order", "--block", "1:1", "--x", "0")
    assert out.strip() == "ord(0) = 1/8"


def test_macdonald_pass():
    code, out = run("--format", "text", "macdonald", "--type", "G2", "--prec", "5")
    assert code == 0 and out.strip() == "PASS"


def test_bounds():
    code, out = run("bounds", "--n", "50")
    assert code == 0 and round(json.loads(out)["lower"], 5) == 0.00933


def test_search_pattern_and_run():
    code, out = run("search", "--pattern", "5_.2.7")
    assert json.loads(out)["k"] == "11/9"
    code, out = run("search", "--n", "3", "--strategy", "exhaustive", "--max-entry", "8")
    assert json.loads(out)["k"] == "6/7"


def test_family_subcommands():
    assert run("family", "quark", "--a", "1", "--b", "2", "--prec", "3")[0] == 0
    assert run("family", "an", "--spectrum", "0,1,3", "--prec", "3")[0] == 0
    code, out = run("family", "g2", "--a", "1", "--b", "1")
    assert json.loads(out)["dual_bound"] == "4/3"


def test_rootfam():
    code, out = run("rootfam", "--type", "G2", "--a", "1,1")
    d = json.loads(out)
    assert d["parameters"]["pos_roots"] == 6 and d["weight"] == "1"


def test_lift_verify():
    code, out = run("lift", "--block", "eta:-3 1:5 2:3 3:1", "--p-prec", "3", "--q-prec", "3",
                    "--verify-borcherds")
    assert code == 0 and json.loads(out)["borcherds_agrees"] is True


def test_relations(tmp_path):
    from thetablocks.span import J291_BLOCKS
    p = tmp_path / "blocks.json"
    p.write_text(json.dumps(J291_BLOCKS))
    code, out = run("relations", "--blocks", str(p))
    assert code == 0 and json.loads(out)["relations"] == [{"A": "1", "B": "1", "C": "-1"}]


def test_census_csv():
    code, out = run("--format", "csv", "census", "--upto", "43", "--start", "36")
    assert out.splitlines() == ["m,te,tc", "37,0,1", "43,0,1"]


def test_tables_exit_code():
    code, out = run("tables", "--name", "best-values")
    assert code == 0
    code, out = run("tables", "--name", "parameters")
    assert code == 0


def test_check_reports_mismatch():
    code, out = run("check", "--criterion", "3")
    assert code == 0 and "[PASS]" in out
    code, out = run("check", "--criterion", "10")
    assert code == 1 and "[FAIL]" in out


@pytest.mark.parametrize("argv", [
    ("classify", "--block", "x:y"),
    ("frobnicate",),
    ("bounds", "--n", "0"),
    ("check", "--criterion", "99"),
    ("relations", "--blocks", "/nonexistent.json"),
])
def test_usage_errors(argv, capsys):
    assert cli.main(list(argv), out=io.StringIO()) == 2
