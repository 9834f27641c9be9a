import json

import pytest

from pcurv.cli import run


def run_to(tmp_path, argv):
    out = tmp_path / "out.json"
    code = run([*argv, "--output", str(out)])
    return code, out.read_bytes() if out.exists() else b""


GOLDEN_CASES = [
    ("local-p1 connection", ["build-connection", "--prime", "5", "--truncation", "15"], "local_p1_p5_E15.connection.json"),
    ("local-p1 psi", ["pcurv", "--input", "{g}/local_p1_p5_E15.connection.json"], "psi_local_p1_p5_E15.json"),
    ("gv invert all ones", ["gv-invert", "--input", "{g}/gw_all_ones_D6.json"], "bps_all_ones_D6.json"),
    ("gv expand", ["gv-expand", "--input", "{g}/quintic_low_bps.json"], "quintic_low_gw_D14.json"),
    (
        "divisor connection",
        ["build-connection", "--input", "{g}/quintic_low_gw_D14.json", "--kappa", "5", "--prime", "7", "--truncation", "14"],
        "divisor_k5_p7_E14.connection.json",
    ),
    ("divisor psi", ["pcurv", "--input", "{g}/divisor_k5_p7_E14.connection.json"], "psi_divisor_k5_p7_E14.json"),
    (
        "divisor psi by recursion",
        ["pcurv", "--input", "{g}/divisor_k5_p7_E14.connection.json", "--engine", "recursion"],
        "psi_divisor_k5_p7_E14.json",
    ),
]


@pytest.mark.parametrize("label,argv,expected", GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES])
def test_golden(tmp_path, golden, label, argv, expected):
    argv = [a.format(g=golden) for a in argv]
    code, data = run_to(tmp_path, argv)
    assert code == 0
    assert data == (golden / expected).read_bytes()


def test_local_p1_psi_without_input_matches_golden(tmp_path, golden):
    code, data = run_to(tmp_path, ["pcurv", "--prime", "5", "--truncation", "15"])
    assert code == 0 and data == (golden / "psi_local_p1_p5_E15.json").read_bytes()


def test_closed_form_matches_direct_output(tmp_path, golden):
    code, data = run_to(tmp_path, ["closed-form", "--prime", "5", "--truncation", "15"])
    assert code == 0 and data == (golden / "psi_local_p1_p5_E15.json").read_bytes()


def test_output_is_deterministic(tmp_path):
    a = run_to(tmp_path, ["steenrod", "--prime", "7", "--truncation", "14"])[1]
    b = run_to(tmp_path, ["steenrod", "--prime", "7", "--truncation", "14"])[1]
    assert a == b and a


def test_psi_output_schema(golden):
    data = json.loads((golden / "psi_local_p1_p5_E15.json").read_text())
    powers = [item["t_power"] for item in data]
    assert powers == sorted(powers, reverse=True) == [4, 3, 2]
    for item in data:
        for row in item["matrix"]:
            for series in row:
                for term in series:
                    assert 0 <= term["coeff"] < 5


def test_verify_local_p1_passes(tmp_path):
    code, data = run_to(tmp_path, ["verify", "--suite", "local-p1", "--prime", "5", "--truncation", "15"])
    assert code == 0
    assert json.loads(data)["passed"] is True


def test_verify_failure_exit_code(tmp_path, monkeypatch):
    from pcurv import verify
    from pcurv.verdict import Verdict

    def broken(*args):
        v = Verdict("fake_invariant")
        v.record(False, row=1, col=0)
        return [v]

    monkeypatch.setitem(verify.SUITES, "local-p1", broken)
    code, data = run_to(tmp_path, ["verify", "--suite", "local-p1"])
    assert code == 1
    report = json.loads(data)
    assert report["first_failure"] == {"invariant": "fake_invariant", "detail": {"row": 1, "col": 0}}


def test_bad_prime_exit_2(capsys):
    assert run(["pcurv", "--prime", "4", "--truncation", "3"]) == 2
    assert "prime: 4 is not prime" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["frobnicate"], "invalid choice"),
        (["verify", "--suite", "nope"], "suite"),
        (["pcurv", "--input", "/nonexistent.json"], "input"),
        (["verify", "--primes", "5,6"], "prime: 6 is not prime"),
        (["closed-form", "--prime", "3", "--truncation", "6"], "prime"),
        (["gv-invert", "--input", "{g}/quintic_low_bps.json"], "kind"),
        (["pcurv", "--input", "{g}/local_p1_p5_E15.connection.json", "--prime", "7"], "prime"),
    ],
)
def test_malformed_input_exit_2(capsys, golden, argv, needle):
    argv = [a.format(g=golden) for a in argv]
    assert run(argv) == 2
    assert needle in capsys.readouterr().err


def test_ring_mismatch_names_field(tmp_path, capsys, golden):
    data = json.loads((golden / "local_p1_p5_E15.connection.json").read_text())
    data["divisor_weights"] = [1, 2]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    assert run(["pcurv", "--input", str(path)]) == 2
    assert "divisor_weights" in capsys.readouterr().err


def test_pretty_format_uses_signed_coefficients(capsys):
    assert run(["pcurv", "--prime", "5", "--truncation", "10", "--format", "pretty"]) == 0
    out = capsys.readouterr().out
    assert "C <- b: t^4(-q^5 - q^10)" in out
    assert "b <- 1: -t^4" in out


def test_gv_invert_all_ones_stdout(capsys, golden):
    assert run(["gv-invert", "--input", str(golden / "gw_all_ones_D6.json")]) == 0
    assert json.loads(capsys.readouterr().out)["values"] == {"1": "1"}


def test_verify_all_aggregates_every_suite(tmp_path):
    from pcurv.verify import SUITES

    code, data = run_to(tmp_path, ["verify", "--suite", "all"])
    report = json.loads(data)
    assert code == 0 and report["passed"]
    names = " ".join(r["name"] for r in report["results"])
    for fragment in ("local_p1_cross_check", "recursion_vs_direct", "lambda_linearity", "covariant_constancy",
                     "nilpotency_words", "classical_limit", "frobenius_scaling", "gv_round_trip", "multiple_cover"):
        assert fragment in names
    assert len(SUITES) == 10
