import json
import subprocess
import sys

import pytest

from supportcert import cli
from supportcert.ellcurve import CURVE_B, good_primes
from supportcert.linalg import Matrix
from supportcert.torus import TORUS_X, TorusConstants


def run(argv, capsys, **kwargs):
    code = cli.main(argv, **kwargs)
    out = capsys.readouterr()
    return code, out.out, out.err


def structured(text):
    return [json.loads(line) for line in text.splitlines()]


@pytest.fixture(autouse=True)
def no_default_cache(monkeypatch):
    monkeypatch.delenv(cli.CACHE_ENV, raising=False)


def test_verify_torus_suite(capsys):
    code, out, _ = run(["verify", "appendix", "--format", "structured"], capsys)
    assert code == 0
    recs = structured(out)
    assert [r["check"] for r in recs] == [
        "torus.matrices", "torus.riemann", "torus.endomorphisms", "torus.two_torsion",
    ]
    assert all(r["status"] == "pass" for r in recs)
    # every detail carries a provenance tag
    assert all(d["tag"] in ("PAPER", "DERIVED", "TRIVIAL") for r in recs for d in r["details"].values())
    assert all("duration" not in r for r in recs)


def test_verify_torus_suite_deterministic(capsys):
    _, first, _ = run(["verify", "appendix", "--format", "structured"], capsys)
    _, second, _ = run(["verify", "appendix", "--format", "structured"], capsys)
    assert first == second


def test_verify_torus_suite_mutated_x(capsys):
    rows = [list(r) for r in TORUS_X.rows]
    rows[0][1] += 1
    code, out, _ = run(
        ["verify", "appendix", "--format", "structured"], capsys, constants=TorusConstants(x=Matrix(rows))
    )
    assert code == 1
    matrices = structured(out)[0]
    assert matrices["status"] == "fail"
    assert not matrices["details"]["X symmetric"]["ok"]


def test_text_output(capsys, tmp_path):
    path = tmp_path / "report.txt"
    code, out, _ = run(["verify", "order-counterexample", "--output", str(path)], capsys)
    assert code == 0 and out == ""
    text = path.read_text()
    assert "[PASS] order.support_constant: c = 8 = 2^3" in text


@pytest.mark.parametrize("t,c", [(0, 2), (2, 8), (5, 64)])
def test_order_counterexample_constant(capsys, t, c):
    code, out, _ = run(["verify", "order-counterexample", "--t", str(t), "--format", "structured"], capsys)
    assert code == 0
    sc = structured(out)[2]
    assert sc["details"]["c"]["value"] == c


def test_order_counterexample_census(capsys):
    _, out, _ = run(["verify", "order-counterexample", "--format", "structured"], capsys)
    census = structured(out)[0]
    assert census["status"] == "pass"
    assert census["details"]["annihilators outside {(1), (2), m}"]["value"] == 0
    assert census["details"]["census"]["value"] == {"(1)": 1, "(2)": 4, "m": 3}


def test_t_guard(capsys):
    code, _, err = run(["verify", "order-counterexample", "--t", "13"], capsys)
    assert code == 2 and "--t" in err


def test_cm_counterexample(capsys, tmp_path):
    cache = tmp_path / "c.jsonl"
    argv = ["verify", "cm-counterexample", "--prime-bound", "2000", "--cache", str(cache), "--format", "structured"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    recs = {r["check"]: r for r in structured(out)}
    assert recs["cm.non_isogeny"]["details"]["witness prime"]["value"] == 13
    assert recs["cm.twist"]["details"]["violations"]["value"] == []
    assert cache.exists()
    code, again, _ = run(argv, capsys)
    assert code == 0 and again == out


def test_cm_small_bound_skips(capsys):
    code, out, _ = run(["verify", "cm-counterexample", "--prime-bound", "10", "--format", "structured"], capsys)
    assert code == 0
    recs = {r["check"]: r for r in structured(out)}
    assert recs["cm.non_isogeny"]["status"] == "skip"
    assert "inconclusive" in recs["cm.non_isogeny"]["summary"]


def test_scan_warm_cache(capsys, tmp_path):
    cache = tmp_path / "scan.jsonl"
    spec = json.dumps({"bound": 1000, "P": [[[0, 5], [-1, 2]]]})
    code, first, err = run(["scan", "--spec", spec, "--cache", str(cache), "--format", "structured"], capsys)
    assert code == 0
    rep = structured(first)[0]
    assert rep["details"]["good primes"]["value"] == len(good_primes([CURVE_B], 1000))
    assert [row["p"] for row in rep["details"]["orders"]["value"]] == good_primes([CURVE_B], 1000)
    assert "records computed: 0" not in err
    code, second, err = run(["scan", "--spec", spec, "--cache", str(cache), "--format", "structured"], capsys)
    assert second == first
    assert "records computed: 0" in err


def test_scan_spm_and_spec_file(capsys, tmp_path):
    spec = {
        "bound": 500,
        "condition": "spm",
        "P": [[[0, 5], [-1, 2]], [[0, 5], ["41/16", "-299/64"]]],
        "Q": [[[0, 5], [-1, 2]]],
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run(["scan", "--spec", str(path), "--format", "structured"], capsys)
    assert code == 0
    assert structured(out)[0]["details"]["violations"]["value"] == []


def test_scan_reports_violations(capsys):
    spec = json.dumps({"bound": 200, "P": [[[0, 5], ["41/16", "-299/64"]]], "Q": [[[0, 5], [-1, 2]]]})
    code, out, _ = run(["scan", "--spec", spec, "--format", "structured"], capsys)
    assert code == 1
    assert 11 in structured(out)[0]["details"]["violations"]["value"]


@pytest.mark.parametrize(
    "spec",
    [
        "not json",
        "[1, 2]",
        '{"P": []}',
        '{"P": [[[0, 5], [1, 1]]]}',
        '{"P": [[[0, 5], [-1, 2]]], "condition": "xx"}',
        '{"P": [[[0, 5], ["a", 2]]]}',
    ],
)
def test_scan_usage_errors(capsys, spec):
    code, _, err = run(["scan", "--spec", spec], capsys)
    assert code == 2 and "error" in err


@pytest.mark.parametrize(
    "spec,verdict",
    [("R/2R + R/2R", False), ("R/2R ⊕ R/2R", False), ("Z/8", True), ("R/m", True), ("(R/m)^3", False), ("R/2R", False)],
)
def test_semicyclic(capsys, spec, verdict):
    code, out, _ = run(["semicyclic", "--spec", spec, "--format", "structured"], capsys)
    assert code == 0
    rep = structured(out)[0]
    assert rep["details"]["semicyclic"]["value"] is verdict
    if not verdict:
        assert rep["details"]["witness violates the definition"]["ok"]


def test_semicyclic_witness_coordinates(capsys):
    _, out, _ = run(["semicyclic", "--spec", "R/2R + R/2R", "--format", "structured"], capsys)
    d = structured(out)[0]["details"]
    assert d["witness T1"]["value"] == [0, 0, 0, 0, 0, 1]
    assert d["witness T2"]["value"] == [0, 0, 0, 0, 1, 0]


def test_module_spec_forms():
    assert len(cli.parse_module_spec("R/2^2R")) == 64
    assert len(cli.parse_module_spec("R/m^3")) == 8
    assert len(cli.parse_module_spec("(R/m)^2 ⊕ R/2R")) == 32
    with pytest.raises(cli.UsageError):
        cli.parse_module_spec("(R/2R)^2 + Z/4")


def test_semicyclic_expect(capsys):
    assert run(["semicyclic", "--spec", "Z/8", "--expect", "true"], capsys)[0] == 0
    assert run(["semicyclic", "--spec", "Z/8", "--expect", "false"], capsys)[0] == 1


@pytest.mark.parametrize("spec", ["", "Q/2", "Z/1", "Z/4 + R/m", "(R/2R)^7", "R/2R +"])
def test_semicyclic_usage_errors(capsys, spec):
    assert run(["semicyclic", "--spec", spec], capsys)[0] == 2


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 2
    assert run(["verify"], capsys)[0] == 2
    assert run(["verify", "nothing"], capsys)[0] == 2
    assert run(["verify", "appendix", "--format", "xml"], capsys)[0] == 2
    assert run(["verify", "cm-counterexample", "--prime-bound", "2"], capsys)[0] == 2
    assert run(["verify", "cm-counterexample", "--prime-bound", "200000"], capsys)[0] == 2


def test_env_cache_directory(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    code, _, _ = run(["verify", "cm-counterexample", "--prime-bound", "100"], capsys)
    assert code == 0
    assert (tmp_path / cli.CACHE_FILENAME).exists()


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "supportcert", "semicyclic", "--spec", "Z/8", "--format", "structured"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["details"]["semicyclic"]["value"] is True
