import csv
import io
import json
import math
import subprocess
import sys

import pytest

from fracentropy.cli import IoError, ParseError, main, parse_grid, read_values, run
from fracentropy.empirical import PLANE_CRASH_CASUALTIES


def ok(*argv):
    code, out, err = run(list(argv))
    assert code == 0, err
    assert err == ""
    return out


def ok_json(*argv):
    return json.loads(ok(*argv))


def fail(code, *argv):
    c, out, err = run(list(argv))
    assert c == code, (c, err)
    assert out == ""
    return json.loads(err)["error"]


@pytest.fixture
def crash_file(tmp_path):
    p = tmp_path / "crashes.txt"
    lines = ["# casualties per crash", ""] + [str(v) for v in PLANE_CRASH_CASUALTIES]
    p.write_text("\n".join(lines) + "\n")
    return p


# grids and input


def test_parse_grid():
    assert parse_grid("0.5:2:0.5") == [0.5, 1.0, 1.5, 2.0]
    assert len(parse_grid("0:2:0.1", allow_zero=True)) == 21
    assert parse_grid("1, 2,3") == [1.0, 2.0, 3.0]
    assert parse_grid("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
    for bad in ("", "a:b:c", "1:2", "2:1:0.5", "1:2:0", "0,1", "-1"):
        with pytest.raises(ParseError):
            parse_grid(bad)
    with pytest.raises(ParseError):
        parse_grid("-0.1:1:0.1", allow_zero=True)


def test_read_values(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("# header\n3\n1, 2  # trailing\n\n2.5\n")
    assert sorted(read_values(str(p)).tolist()) == [1.0, 2.0, 2.5, 3.0]
    p.write_text("1\nabc\n")
    with pytest.raises(IoError, match="not a number"):
        read_values(str(p))
    with pytest.raises(IoError):
        read_values(str(tmp_path / "missing.txt"))


# measure


def test_measure_uniform_closed_form():
    env = ok_json("measure", "--dist", "uniform:l=1", "--alpha", "1")
    assert env["results"]["value"] == 0.25
    assert env["results"]["method"] == "closed_form"
    assert env["provenance"]["method"] == ["closed_form"]
    assert env["request"]["dist"] == "uniform:l=1"
    assert set(env["provenance"]) == {"method", "tolerances", "seed", "revision"}


def test_measure_methods_agree():
    vals = {}
    for method in ("closed_form", "quadrature", "rl"):
        r = ok_json("measure", "--dist", "half-logistic", "--alpha", "1", "--method", method)["results"]
        vals[method] = r["value"]
        assert "err_estimate" in r
    assert vals["closed_form"] == pytest.approx(math.pi**2 / 24.0, rel=1e-12)
    assert vals["quadrature"] == pytest.approx(vals["closed_form"], rel=1e-8)
    assert vals["rl"] == pytest.approx(vals["closed_form"], rel=1e-6)


def test_measure_grid_and_fgcre():
    rows = ok_json("measure", "--dist", "exponential:lam=2", "--measure", "fgcre", "--alpha-grid",
                   "0.5:1.5:0.5")["results"]
    assert [r["alpha"] for r in rows] == [0.5, 1.0, 1.5]
    assert rows[1]["value"] == pytest.approx(0.5, rel=1e-9)


def test_measure_domain_error():
    err = fail(3, "measure", "--dist", "frechet:b=1,eta=1", "--alpha", "0.5")
    assert err["type"] == "OutOfDomain" and err["subcommand"] == "measure"


def test_usage_errors():
    assert fail(2, "measure", "--dist", "uniform:l=1")["type"] == "ParseError"
    assert fail(2, "measure", "--dist", "uniform:l=1", "--alpha", "1", "--alpha-grid", "1,2")
    assert fail(2, "nosuch")["type"] == "ParseError"
    assert fail(2, "measure", "--dist", "uniform:l=1", "--alpha-grid", "0,1")["type"] == "ParseError"
    assert fail(3, "measure", "--dist", "nosuch:x=1", "--alpha", "1")
    assert fail(3, "measure", "--dist", "uniform:l=1", "--alpha", "-1")


# other subcommands


def test_dynamic_series_csv_round_trip():
    out = ok("dynamic", "--dist", "half-logistic", "--alpha", "0.7", "--t-grid", "0.5:2:0.5", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["t"]) for r in rows] == [0.5, 1.0, 1.5, 2.0]
    env = ok_json("dynamic", "--dist", "half-logistic", "--alpha", "0.7", "--t-grid", "0.5:2:0.5")
    for r, j in zip(rows, env["results"]):
        assert float(r["value"]) == j["value"]  # 17 significant digits survive the text form
        assert r["method"] == j["method"]


def test_dynamic_idfce_and_kinds():
    env = ok_json("dynamic", "--dist", "exponential:lam=1", "--alpha", "1", "--t-grid", "0.5,1,2", "--idfce")
    assert env["results"]["idfce"]["verdict"] == "increasing"
    for kind in ("residual", "normalized"):
        r = ok_json("dynamic", "--dist", "exponential:lam=1", "--alpha", "1", "--t", "1", "--kind", kind)
        assert r["results"]["value"] > 0


def test_prhm():
    r = ok_json("prhm", "--dist", "exponential:lam=1", "--theta", "2", "--alpha", "1.5", "--n", "3",
                "--t", "1")["results"]
    assert all(c["holds"] for c in r["identities"])
    assert len(r["identities"]) == 3
    assert r["fgce"]["value"] == pytest.approx(r["e_theta_alpha"] - r["e_theta_alpha_plus_1"], rel=1e-12)
    assert r["dynamic"]["sandwich"]["holds"]


def test_bounds():
    rows = ok_json("bounds", "--dist", "uniform:l=1", "--alpha-grid", "0.5,1,2")["results"]
    assert rows and all(r["holds"] for r in rows)
    names = {r["name"] for r in rows}
    assert {"entropy_exp", "one_minus", "psi_form", "alpha_over_e", "power_of_ce"} <= names
    rows = ok_json("bounds", "--dist", "uniform:l=1", "--alpha", "1", "--with-dist", "power:b=2,l=1")["results"]
    assert any(r["name"] == "sum_max" and r["holds"] for r in rows)
    rows = ok_json("bounds", "--dist", "exponential:lam=1", "--alpha", "0.5", "--t", "1")["results"]
    assert all(r["holds"] for r in rows)


def test_orders():
    r = ok_json("orders", "--x", "exponential:lam=2", "--y", "exponential:lam=1", "--alpha", "1")["results"]
    assert all(o["holds"] for o in r["orders"])
    assert r["dfr"] == {"x": True, "y": True}
    assert all(i["holds"] for i in r["implications"])
    r = ok_json("orders", "--x", "uniform:l=2", "--y", "uniform:l=1")["results"]
    st = next(o for o in r["orders"] if o["relation"] == "st")
    assert st["holds"] is False and st["witness"] is not None


def test_scan_csv():
    out = ok("scan", "--b-grid", "0.1:10:0.1", "--d-grid", "0.1:10:0.1", "--l", "3", "--alpha", "0.25",
             "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["b", "d", "diff"]
    assert len(rows) == 100 * 100
    upper = [float(r["diff"]) for r in rows if float(r["b"]) <= float(r["d"])]
    assert max(upper) > 0 > min(upper)


def test_empirical_sweep(crash_file):
    env = ok_json("empirical", "--input", str(crash_file), "--alpha-grid", "0:2:0.1")
    rows = env["results"]
    assert len(rows) == 21
    assert rows[0]["alpha"] == 0.0
    assert rows[0]["value"] == pytest.approx(85 - 786 / 44, rel=1e-14)
    assert all(r["method"] == "empirical" and r["n"] == 44 for r in rows)


def test_empirical_prefix_and_comma_input(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("3, 1, 2\n")
    r = ok_json("empirical", "--input", str(p), "--alpha", "1")["results"]
    assert r["value"] == pytest.approx(0.63651, abs=1e-5)
    rows = ok_json("empirical", "--input", str(p), "--alpha", "1", "--prefix")["results"]
    assert [x["n"] for x in rows] == [2, 3]


def test_empirical_missing_file(tmp_path):
    err = fail(2, "empirical", "--input", str(tmp_path / "nope.txt"), "--alpha", "1")
    assert err["type"] == "IoError"


def test_mc():
    r = ok_json("mc", "--n", "100", "--reps", "200", "--alpha", "1", "--seed", "4")
    assert r["provenance"]["seed"] == 4
    res = r["results"]
    assert set(res) >= {"mean", "var", "ks", "z_quantiles"}
    assert abs(res["mean"]) < 0.5


def test_mc_seed_from_environment(monkeypatch):
    monkeypatch.setenv("FRACENTROPY_SEED", "77")
    a = run(["mc", "--n", "50", "--reps", "30", "--alpha", "1"])
    b = run(["mc", "--n", "50", "--reps", "30", "--alpha", "1", "--seed", "77"])
    assert json.loads(a[1])["provenance"]["seed"] == 77
    assert a[1] == b[1]
    c = run(["mc", "--n", "50", "--reps", "30", "--alpha", "1", "--seed", "78"])
    assert json.loads(c[1])["results"] != json.loads(a[1])["results"]


def test_catalog():
    rows = ok_json("catalog")["results"]
    names = {r["name"] for r in rows}
    assert {"uniform", "power", "frechet", "bounded-frechet", "half-logistic", "exponential"} <= names


def test_verify_identities():
    env = ok_json("verify-identities", "--alpha", "1", "--theta", "2")
    rows = env["results"]
    assert rows and all(r["holds"] for r in rows)
    kinds = {r["identity"] for r in rows}
    assert {"closed_form", "rl_fgce", "rl_fgcre", "prhm_two_term", "recurrence_n2", "recurrence_n4"} <= kinds


def test_verify_failure_exit_code(monkeypatch):
    import fracentropy.cli as cli

    monkeypatch.setattr(cli, "fgce_prhm", lambda p, a: type("R", (), {"value": -1.0})())
    err = fail(4, "verify-identities", "--alpha", "1", "--theta", "2")
    assert err["type"] == "IdentityViolation" and err["subcommand"] == "verify-identities"
    assert any(not c["holds"] for c in err["checks"])


# output handling and determinism


def test_output_file_is_byte_identical(tmp_path):
    argv = ["mc", "--n", "60", "--reps", "50", "--alpha", "0.5", "--seed", "9"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(argv + ["-o", str(a)]) == (0, "", "")
    assert run(argv + ["-o", str(b)]) == (0, "", "")
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["results"]["ks"] >= 0


def test_unwritable_output(tmp_path):
    err = fail(2, "catalog", "-o", str(tmp_path / "no" / "such" / "dir.json"))
    assert err["type"] == "IoError"


def test_main_and_console_entry(capsys):
    assert main(["measure", "--dist", "power:b=2,l=1", "--alpha", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["results"]["value"] == pytest.approx(2.0 / 9.0, rel=1e-12)
    assert main(["measure", "--dist", "frechet:b=1,eta=1", "--alpha", "0.5"]) == 3
    assert "OutOfDomain" in capsys.readouterr().err


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "fracentropy", "measure", "--dist", "uniform:l=1", "--alpha", "1",
                        "--format", "csv"], capture_output=True, text=True, check=False)
    assert p.returncode == 0
    rows = list(csv.DictReader(io.StringIO(p.stdout)))
    assert rows[0]["value"] == "0.25" and rows[0]["method"] == "closed_form"
