"""End-to-end CLI checks: documented examples, exit codes, replay, formats."""
import csv
import json
import math

import numpy as np
import pytest

from monoidldp.additive import Omega
from monoidldp.cli import main
from monoidldp.monoid import enumerate_monoid, read_table_cache
from monoidldp.systems import Integers


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_rate_example(tmp_path):
    code = main(["rate", "--rho", "delta1", "--grid", "0.5,1,2",
                 "--out", str(tmp_path)])
    assert code == 0
    header, rows = _read_csv(tmp_path / "rate.csv")
    assert header == ["x", "I", "theta_star", "iters", "status"]
    got = [float(r[1]) for r in rows]
    assert got == pytest.approx([0.153426, 0.0, 0.386294], abs=1e-6)
    assert [r[4] for r in rows] == ["converged"] * 3


def test_mertens_limit_example(tmp_path, capsys):
    code = main(["mertens", "--system", "integers", "--limit", "100",
                 "--out", str(tmp_path)])
    assert code == 0
    header, rows = _read_csv(tmp_path / "mertens.csv")
    assert header == ["X", "sum", "deviation"]
    assert len(rows) == 1 and rows[0][0] == "100"
    assert float(rows[0][1]) == pytest.approx(1.80282, abs=1e-5)
    assert "sum=1.80281720105" in capsys.readouterr().out
    echo = json.loads((tmp_path / "config-echo.json").read_text())
    assert echo["grid"] == [100]
    assert "limit" not in echo


def test_expect_example(tmp_path, capsys):
    code = main(["expect", "--system", "integers", "--limit", "10",
                 "--primes", "2,3", "--out", str(tmp_path)])
    assert code == 0
    assert "expect: Z=1/10 Y=1/6 ratio=3/5 primes=2*3" in capsys.readouterr().out
    header, rows = _read_csv(tmp_path / "expect.csv")
    assert header == ["X", "primes", "expect_Z", "expect_Y", "ratio"]
    assert rows == [["10", "2*3", "1/10", "1/6", "3/5"]]


def test_usage_errors_exit_64(tmp_path):
    assert main([]) == 64
    assert main(["frobnicate"]) == 64
    assert main(["primes", "--bogus"]) == 64
    assert main(["primes", "--system", "martian", "--out", str(tmp_path)]) == 64
    assert main(["primes", "--threads", "0", "--out", str(tmp_path)]) == 64
    assert main(["rate", "--grid", "geom:0:5:3", "--out", str(tmp_path)]) == 64


def test_parameter_and_source_errors_exit_65(tmp_path):
    assert main(["primes", "--system", "poly:6", "--out", str(tmp_path)]) == 65
    assert main(["primes", "--system", f"beurling:{tmp_path}/nope.txt"]) == 65
    assert main(["rate", "--rho", str(tmp_path / "missing.json"),
                 "--out", str(tmp_path)]) == 65
    assert main(["ldp-scan", "--intervals", "2:1", "--grid", "100",
                 "--out", str(tmp_path)]) == 65
    assert main(["ek", "--limit", "10", "--out", str(tmp_path)]) == 65


def test_bad_configs_exit_65(tmp_path):
    missing = tmp_path / "absent.json"
    assert main(["--config", str(missing), "--out", str(tmp_path / "o")]) == 65

    not_json = tmp_path / "broken.json"
    not_json.write_text("{nope", encoding="utf-8")
    assert main(["--config", str(not_json), "--out", str(tmp_path / "o")]) == 65

    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"command": "frobnicate", "format": "csv"}),
                       encoding="utf-8")
    assert main(["--config", str(unknown), "--out", str(tmp_path / "o")]) == 65

    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text(json.dumps({"command": "primes", "format": "csv",
                                      "seed": None}), encoding="utf-8")
    assert main(["--config", str(incomplete), "--out", str(tmp_path / "o")]) == 65

    # structurally complete but with a junk value inside
    mangled = tmp_path / "mangled.json"
    mangled.write_text(json.dumps({
        "command": "primes", "format": "csv", "seed": None,
        "system": {"kind": "integers"}, "limit": "twelve",
    }), encoding="utf-8")
    assert main(["--config", str(mangled), "--out", str(tmp_path / "o")]) == 65


def test_budget_exit_66(tmp_path):
    assert main(["count", "--limit", "200000000000", "--out", str(tmp_path)]) == 66


def test_help_exits_zero():
    assert main(["-h"]) == 0
    assert main(["rate", "-h"]) == 0


JSON_RUNS = [
    (["primes", "--limit", "50"], "primes"),
    (["count", "--limit", "200", "--g", "residue:4:1:1:0"], "count"),
    (["density", "--grid", "geom:100:10000:4"], "density"),
    (["mertens", "--grid", "100,1000"], "mertens"),
    (["expect", "--limit", "10", "--primes", "2,3"], "expect"),
    (["dominate", "--limit", "50", "--kmax", "2"], "dominate"),
    (["mgf-gap", "--grid", "100,1000"], "mgf-gap"),
    (["tail-mass", "--limit", "100"], "tail-mass"),
    (["rate"], "rate"),
    (["ek", "--limit", "1000"], "ek"),
    (["ldp-scan", "--grid", "100,1000"], "ldp-scan"),
    (["sweep", "--grid", "geom:100:10000:4"], "sweep"),
]


@pytest.mark.parametrize("argv,name", JSON_RUNS, ids=[n for _, n in JSON_RUNS])
def test_json_outputs_parse(tmp_path, argv, name):
    code = main(argv + ["--format", "json", "--out", str(tmp_path)])
    assert code == 0
    with open(tmp_path / f"{name}.json", encoding="utf-8") as fh:
        payload = json.load(fh)
    assert payload["command"] == name
    json.loads((tmp_path / "config-echo.json").read_text())


def test_ldp_scan_json_serializes_infinity_as_string(tmp_path):
    main(["ldp-scan", "--grid", "100", "--intervals", "1.5:inf",
          "--format", "json", "--out", str(tmp_path)])
    payload = json.loads((tmp_path / "ldp-scan.json").read_text())
    assert payload["rows"][0]["x_hi"] == "inf"


def test_dump_cache_roundtrip(tmp_path):
    cache = tmp_path / "table.mldp"
    code = main(["count", "--limit", "100", "--dump-cache", str(cache),
                 "--out", str(tmp_path)])
    assert code == 0
    norm, omega, gsum = read_table_cache(cache)
    table = enumerate_monoid(Integers(), 100, Omega())
    assert np.array_equal(norm, table.norm)
    assert np.array_equal(omega, table.omega)
    assert np.array_equal(gsum, table.gsum)
    # runtime-only flag stays out of the echo
    echo = json.loads((tmp_path / "config-echo.json").read_text())
    assert "dump_cache" not in echo


def test_config_echo_replay_is_byte_identical(tmp_path):
    first = tmp_path / "first"
    second = tmp_path / "second"
    assert main(["ek", "--limit", "1000", "--format", "json", "--seed", "7",
                 "--out", str(first)]) == 0
    echo = json.loads((first / "config-echo.json").read_text())
    assert echo["seed"] == 7
    assert main(["--config", str(first / "config-echo.json"),
                 "--out", str(second)]) == 0
    assert (first / "ek.json").read_bytes() == (second / "ek.json").read_bytes()
    assert (first / "config-echo.json").read_bytes() == \
        (second / "config-echo.json").read_bytes()


def test_config_replay_rejects_other_overrides(tmp_path):
    out = tmp_path / "out"
    assert main(["primes", "--limit", "20", "--out", str(out)]) == 0
    cfg = str(out / "config-echo.json")
    assert main(["--config", cfg, "--format", "json", "--out", str(tmp_path / "x")]) == 64
    assert main(["--config", cfg, "--out", str(tmp_path / "y"), "--threads", "2"]) == 0


def test_threads_do_not_change_bytes(tmp_path):
    a, b = tmp_path / "t1", tmp_path / "t4"
    args = ["ldp-scan", "--grid", "100,1000", "--intervals", "1.5:inf,0:1.5"]
    assert main(args + ["--threads", "1", "--out", str(a)]) == 0
    assert main(args + ["--threads", "4", "--out", str(b)]) == 0
    for name in ("ldp-scan.csv", "config-echo.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_sweep_exit_reflects_overall_flag(tmp_path, capsys):
    norms = tmp_path / "norms.txt"
    norms.write_text("2\n2\n2\n", encoding="utf-8")
    code = main(["sweep", "--system", f"beurling:{norms}",
                 "--grid", "10,100,1000,10000", "--out", str(tmp_path)])
    assert code == 2
    assert "overall=FAILED" in capsys.readouterr().out
