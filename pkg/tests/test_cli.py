import json
import math
from pathlib import Path

import pytest

from strongmoments import DistributionSpec
from strongmoments.cli import main

GOLDEN = str(Path(__file__).parent / "data" / "golden.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_moments_json(capsys):
    code, out, _ = run(capsys, "moments", "--spec", "lognormal-s",
                       "--c", "1", "--d", "1", "--n-range", "-4:4")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["entries"]) == 9
    mu4 = [e for e in doc["entries"] if e["n"] == 4][0]
    assert mu4["value"] == pytest.approx(54.598150033, rel=1e-9)
    # output round-trips through the spec parser
    assert DistributionSpec.from_json_dict(doc["spec"]) == \
        DistributionSpec("lognormal-s", {"c": 1.0, "d": 1.0})


def test_moments_csv(capsys):
    code, out, _ = run(capsys, "moments", "--spec", "lognormal-s", "--c", "1",
                       "--d", "1", "--n-range", "0:2", "--output", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,sign,ln_mag,value,method,err_est"
    assert len(lines) == 4


def test_methods_agree(capsys):
    args = ("--spec", "lognormal-s", "--c", "1", "--d", "1", "--n-range", "-3:3")
    _, closed, _ = run(capsys, "moments", *args, "--method", "closed-form")
    _, quad, _ = run(capsys, "moments", *args, "--method", "quadrature")
    for a, b in zip(json.loads(closed)["entries"], json.loads(quad)["entries"]):
        assert abs(math.expm1(a["ln_mag"] - b["ln_mag"])) < 1e-8


def test_bad_range_is_usage_error(capsys):
    code, _, err = run(capsys, "moments", "--spec", "lognormal-s",
                       "--c", "1", "--d", "1", "--n-range", "4:-4")
    assert code == 1
    assert "range" in err


def test_missing_params_usage_error(capsys):
    code, _, _ = run(capsys, "moments", "--spec", "lognormal-s", "--d", "1")
    assert code == 1
    code, _, _ = run(capsys, "classify", "--spec", "family9")
    assert code == 1


@pytest.mark.parametrize("args,want", [
    (("--spec", "lognormal-s", "--c", "1", "--d", "0.25"), "indeterminate"),
    (("--spec", "family9", "--d", "0"), "determinate"),
    (("--spec", "family9", "--d", "1"), "unknown"),
])
def test_classify_verdicts(capsys, args, want):
    code, out, _ = run(capsys, "classify", *args)
    assert code == 0
    assert json.loads(out)["classification"] == want


def test_classify_spec_json(capsys):
    spec = DistributionSpec("lognormal-s", {"c": 1.0, "d": 0.25})
    code, out, _ = run(capsys, "classify", "--spec-json", spec.to_json())
    assert code == 0
    assert json.loads(out)["classification"] == "indeterminate"


def test_symmetrize_fixed_point(capsys):
    code, out, _ = run(capsys, "symmetrize", "--spec", "lognormal-s",
                       "--c", "1", "--d", "1", "--n-range", "-3:3")
    assert code == 0
    doc = json.loads(out)
    assert doc["fixed_point"] is True
    assert doc["symmetry_after"]["symmetric"] is True


def test_symmetrize_table_and_gap(capsys):
    code, out, _ = run(capsys, "symmetrize", "--spec", "lognormal-h",
                       "--c", "2", "--d", "1", "--n-range", "-4:4",
                       "--krein-compare")
    assert code == 0
    doc = json.loads(out)
    # table equals (mu_n + mu_-n)/2 of the closed forms
    for e in doc["symmetrized_moments"]["entries"]:
        n = e["n"]
        if n % 2 != 0:
            assert e["sign"] == 0
            continue
        want = 0.5 * (math.exp((n + 1 - 2) ** 2 / 4) + math.exp((-n + 1 - 2) ** 2 / 4))
        assert e["value"] == pytest.approx(want, rel=1e-10)
    assert doc["krein_comparison"]["gap"] == pytest.approx(
        math.pi * math.log(2.0), abs=1e-3)


def test_witness_pass_and_exit_codes(capsys):
    code, out, _ = run(capsys, "witness", "--d", "1", "--s", "1", "--k", "1",
                       "--n-max", "4")
    assert code == 0
    assert json.loads(out)["passed"] is True

    code, out, _ = run(capsys, "witness", "--d", "1", "--s", "0", "--n-max", "2")
    assert code == 4  # not distinct
    assert json.loads(out)["passed"] is False

    code, _, _ = run(capsys, "witness", "--d", "1", "--s", "1.5")
    assert code == 1  # out of range


def test_golden_comparison_pass(capsys):
    code, _, err = run(capsys, "moments", "--spec", "lognormal-s", "--c", "1",
                       "--d", "1", "--n-range", "-8:8", "--golden", GOLDEN)
    assert code == 0, err


def test_classify_golden_comparison(capsys):
    code, _, err = run(capsys, "classify", "--spec", "lognormal-s", "--c", "1",
                       "--d", "1", "--golden", GOLDEN)
    assert code == 0, err


def test_golden_comparison_catches_corruption(tmp_path, capsys):
    entries = json.loads(Path(GOLDEN).read_text())
    for e in entries:
        if e["key"] == "moment/lognormal-s/c=1/d=1/n=3":
            e["value_ln_mag"] = "2.40"
    bad = tmp_path / "golden.json"
    bad.write_text(json.dumps(entries))
    code, _, err = run(capsys, "moments", "--spec", "lognormal-s", "--c", "1",
                       "--d", "1", "--n-range", "-8:8", "--golden", str(bad))
    assert code == 3
    assert "mismatch" in err


def test_witness_golden(capsys):
    code, _, err = run(capsys, "witness", "--d", "1", "--s", "1", "--k", "1",
                       "--n-max", "8", "--golden", GOLDEN)
    assert code == 0, err


def test_config_file_overridden_by_flags(tmp_path, capsys):
    conf = tmp_path / "conf.txt"
    conf.write_text("rel_tol = 1e-6\nmax_levels = 12\n")
    code, out1, _ = run(capsys, "moments", "--spec", "lognormal-s", "--c", "1",
                        "--d", "1", "--n-range", "0:2", "--method", "quadrature",
                        "--config", str(conf))
    assert code == 0
    code, out2, _ = run(capsys, "moments", "--spec", "lognormal-s", "--c", "1",
                        "--d", "1", "--n-range", "0:2", "--method", "quadrature",
                        "--config", str(conf), "--rel-tol", "1e-10")
    assert code == 0
    e1 = json.loads(out1)["entries"][1]
    e2 = json.loads(out2)["entries"][1]
    assert e2["err_est"] <= e1["err_est"]


def test_deterministic_output(capsys):
    args = ("classify", "--spec", "lognormal-s", "--c", "1", "--d", "4")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
