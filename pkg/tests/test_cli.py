import json
import subprocess
import sys

import pytest

from expfield.cli import main
from expfield.errors import ParseError
from expfield.scan import ScanConfig, cmd_scan, parse_primes, parse_scan_config, report_json

SCAN = """\
# doubling family
primes = first 6
samples = (p, 2*p)
digits = 25
bound = 10
---
n=2; X2 - 2*X1; Y2 - Y1^2
"""


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_exp_example(capsys):
    code, out, _ = run(["exp", "--prime", "5", "--prec", "3", "--value", "5"], capsys)
    assert code == 0
    assert out.strip() == "5^0 * 81 + O(5^3)"


def test_exp_outside_domain_exit_1(capsys):
    code, _, err = run(["exp", "--prime", "2", "--prec", "8", "--value", "2"], capsys)
    assert code == 1 and "DomainError" in err


def test_log_round_trip(capsys):
    code, out, _ = run(["log", "--prime", "5", "--prec", "6", "--value", "1 + 5 + 25/2"], capsys)
    assert code == 0 and "O(5^6)" in out


def test_relation_example(capsys):
    code, out, _ = run(["relation", "--prime", "5", "--digits", "6", "--bound", "4", "--values", "5,15"], capsys)
    assert code == 0
    assert json.loads(out)["relation"] == [3, -1]


def test_relation_none(capsys):
    argv = ["relation", "--prime", "5", "--digits", "20", "--bound", "10", "--values", "5, exp(5) - 1"]
    code, out, _ = run(argv, capsys)
    assert code == 0 and json.loads(out)["relation"] == "none"


def test_usage_errors_exit_2(capsys):
    code, _, err = run(["exp", "--prime", "5", "--value", "5 +"], capsys)
    assert code == 2 and "column" in err
    code, _, _ = run(["exp", "--prime", "6", "--value", "6"], capsys)
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["exp", "--value", "5"])
    assert exc.value.code == 2


def test_global_flags_either_side(tmp_path, capsys):
    out = tmp_path / "v.txt"
    assert main(["--output", str(out), "exp", "--prime", "5", "--prec", "3", "--value", "5"]) == 0
    assert out.read_text().strip() == "5^0 * 81 + O(5^3)"
    out2 = tmp_path / "w.txt"
    assert main(["exp", "--prime", "5", "--prec", "3", "--value", "5", "--output", str(out2)]) == 0
    assert out2.read_text() == out.read_text()


def test_parse_primes():
    assert parse_primes("first 5") == [2, 3, 5, 7, 11]
    assert parse_primes("3..13") == [3, 5, 7, 11, 13]
    assert parse_primes("7, 3") == [3, 7]
    assert parse_primes("") == []
    with pytest.raises(ParseError):
        parse_primes("4, 5")


def test_config_grammar(tmp_path):
    cfg = parse_scan_config(SCAN)
    assert cfg.primes == [2, 3, 5, 7, 11, 13] and cfg.samples == ["(p, 2*p)"]
    (tmp_path / "v.var").write_text("n=1; Y1 - X1 - 1")
    cfg = parse_scan_config("primes = 3\nvariety = v.var\n", base_dir=tmp_path)
    assert "Y1 - X1 - 1" in cfg.variety_text
    for bad in ["primes = first 3\nnope = 1\n---\nn=1; X1", "bound = x\n---\nn=1; X1", "primes = 3\n"]:
        with pytest.raises(ParseError):
            parse_scan_config(bad)


def test_config_errors_are_located():
    with pytest.raises(ParseError) as exc:
        parse_scan_config("primes = 3\n---\nn=1; Z1 - 1\n")
    assert "line 3" in str(exc.value)


def test_empty_prime_list(tmp_path, capsys):
    path = tmp_path / "empty.cfg"
    path.write_text("primes =\n---\nn=1; X1\n")
    code, out, _ = run(["scan", str(path)], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["primes"] == [] and report["relations"] == []


def test_scan_determinism_and_threads():
    cfg = parse_scan_config(SCAN)
    a = report_json(cmd_scan(cfg))
    b = report_json(cmd_scan(parse_scan_config(SCAN), threads=4))
    assert a == b
    report = json.loads(a)
    assert report["relations"] == [[2, -1]]
    assert report["primes"][0]["samples"][0]["status"] == "skipped"


def test_random_samples_seeded():
    base = SCAN.replace("samples = (p, 2*p)", "samples =\nrandom_samples = 2")
    r1 = report_json(cmd_scan(parse_scan_config(base)))
    r2 = report_json(cmd_scan(parse_scan_config(base)))
    r3 = report_json(cmd_scan(parse_scan_config(base.replace("bound", "seed = 7\nbound"))))
    assert r1 == r2 and r1 != r3


def test_per_sample_errors_do_not_abort():
    cfg = ScanConfig(variety_text="n=1; X1", primes=[3, 5], samples=["(p, p)"])
    report = cmd_scan(cfg)
    assert [e["p"] for e in report["primes"]] == [3, 5]
    assert all("error" in e for e in report["primes"])


def test_scan_csv(tmp_path, capsys):
    path = tmp_path / "s.cfg"
    path.write_text(SCAN)
    csv_path = tmp_path / "s.csv"
    code, _, _ = run(["--seed", "3", "scan", str(path), "--csv", str(csv_path)], capsys)
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "p,sample,status,detail,relation"
    assert lines[2].startswith("3,") and lines[2].endswith("2 -1")


def test_axcheck_examples(capsys):
    code, out, _ = run(["axcheck", "--y", "t", "--degree", "6", "--order", "100"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["independence"] == "IndependentUpTo(6)" and report["exp_pairs"]
    code, out, _ = run(["axcheck", "--y", "t, 2*t", "--degree", "1", "--order", "10"], capsys)
    report = json.loads(out)
    assert report["independence"].startswith("Relation(")
    assert report["constant_combinations"] == [[2, -1]]


def test_axcheck_variety(tmp_path, capsys):
    var = tmp_path / "v.var"
    var.write_text("n=2; X2 - 2*X1; Y2 - Y1^2")
    code, out, _ = run(["axcheck", "--y", "t, 2*t", "--degree", "1", "--order", "10", "--variety", str(var)], capsys)
    assert code == 0 and json.loads(out)["variety_member"] is True


def test_axcheck_malformed(capsys):
    code, _, err = run(["axcheck", "--y", "t + * t"], capsys)
    assert code == 2 and "line 1, column" in err


def test_hahn_batch(tmp_path, capsys):
    code, out, _ = run(["hahn", "exp(t)", "--order", "4"], capsys)
    assert code == 0
    assert out.strip() == "1 + t^(1) + 1/2*t^(2) + 1/6*t^(3) + O(t^(4))"
    src = tmp_path / "in.txt"
    src.write_text("# comment\n(1 + t)*(1 - t)\nD(t^(3))\n")
    code, out, _ = run(["hahn", "--input", str(src)], capsys)
    assert out.splitlines() == ["1 - t^(2)", "3*t^(3)"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "expfield", "exp", "--prime", "5", "--prec", "3", "--value", "5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "5^0 * 81 + O(5^3)"
