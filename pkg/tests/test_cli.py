"""End-to-end command-line behavior through main()."""

from __future__ import annotations

import json
import math

import pytest

from latmorse import cli


def _run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_alpha():
    assert cli.parse_alpha("pi") == math.pi
    assert cli.parse_alpha(" PI ") == math.pi
    assert cli.parse_alpha("3.5") == 3.5
    for bad in ("0", "-2", "abc"):
        with pytest.raises(Exception):
            cli.parse_alpha(bad)


def test_analyze_markdown(capsys):
    code, out, err = _run(capsys, ["analyze", "D16+"])
    assert code == 0
    assert err == ""
    assert "critical at every alpha: yes" in out
    assert "Saddle" in out
    assert "Morse index 120" in out
    assert "0.36093218" in out


def test_analyze_json(capsys):
    code, out, _ = _run(capsys, ["analyze", "E8^2", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["classification"] == "Saddle"
    assert payload["morse_index"] == 64
    assert payload["criticality"] == "critical_all_alpha"
    assert [row["lambda"] for row in payload["lines"]] == [0, 24, 120]


def test_analyze_defective(capsys):
    code, out, _ = _run(capsys, ["analyze", "A1^8+A3^8", "--alpha", "14"])
    assert code == 0
    assert "critical at every alpha: no" in out
    assert "NotCriticalAt(14)" in out
    assert "root term" in out


def test_analyze_defective_json(capsys):
    code, out, _ = _run(
        capsys, ["analyze", "A1^8+A3^8", "--alpha", "14", "--format", "json"]
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["result"] == "NotCriticalAt(14)"
    assert payload["criticality"] == "moment_defect"
    assert payload["root_term"] > payload["remainder"] > 0
    assert payload["defects"] == ["-3"] * 8 + ["1"] * 8


def test_analyze_unknown_lattice(capsys):
    code, _, err = _run(capsys, ["analyze", "Z99"])
    assert code == 2
    assert "error:" in err


def test_analyze_root_string_fallback(capsys):
    code, out, _ = _run(capsys, ["analyze", "D16", "--dim", "16"])
    assert code == 0
    assert "Saddle" in out
    assert "0.36093218" in out


def test_analyze_paper_digits(capsys):
    code, out, _ = _run(capsys, ["analyze", "D16+", "--paper-digits", "5"])
    assert code == 0
    assert "-0.06196" in out
    assert "0.36093" in out


def test_table24(capsys):
    code, out, _ = _run(capsys, ["table24", "--paper-digits", "4"])
    assert code == 0
    for name in ("A1^24", "A5^4+D4", "D16+E8", "E8^3", "D24"):
        assert f"| {name} |" in out
    assert "0.0018" in out
    assert "-0.2014" in out


def test_dim16_json(capsys):
    code, out, _ = _run(capsys, ["dim16", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert [r["lattice"] for r in payload] == ["D16+", "E8^2"]
    assert all(r["classification"] == "Saddle" for r in payload)


def test_dim32(capsys):
    code, out, _ = _run(capsys, ["dim32"])
    assert code == 0
    assert "LocalMax" in out
    assert "certified tail" in out
    assert "NotCriticalAt(14)" in out


def test_dim32_json(capsys):
    code, out, _ = _run(capsys, ["dim32", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["rootless"]["classification"] == "LocalMax"
    assert payload["rootless"]["isotropic_tail_m8"] < 5.4e-7
    assert payload["moment_defect"]["result"] == "NotCriticalAt(14)"


def test_sweep_to_file(tmp_path, capsys):
    out_file = tmp_path / "sweep.csv"
    code, out, _ = _run(
        capsys,
        ["sweep", "E8", "--start", "3", "--stop", "3.5", "--steps", "2",
         "--out", str(out_file)],
    )
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "alpha,lambda,mu,error_radius"
    assert len(lines) == 3  # header + one line per (alpha, lambda)
    assert lines[1].startswith("3.0,24,")


def test_sweep_stdout_and_bad_steps(capsys):
    code, out, _ = _run(capsys, ["sweep", "E8", "--start", "3", "--stop", "3.2",
                                 "--steps", "2"])
    assert code == 0
    assert out.startswith("alpha,lambda,mu,error_radius")
    code, _, err = _run(capsys, ["sweep", "E8", "--start", "3", "--stop", "3.2",
                                 "--steps", "1"])
    assert code == 2
    assert "steps" in err


def test_catalog_json(capsys):
    code, out, _ = _run(capsys, ["catalog", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert len(payload) == 29
    assert {"Leech", "E8", "Rootless32"} <= {e["name"] for e in payload}


def test_catalog_markdown(capsys):
    code, out, _ = _run(capsys, ["catalog"])
    assert code == 0
    assert "| E8 |" in out
    assert "(none)" in out  # rootless rows


def test_selftest(capsys):
    code, out, _ = _run(capsys, ["selftest"])
    assert code == 0
    lines = [l for l in out.strip().splitlines() if l]
    assert len(lines) == 8
    assert all(l.startswith("PASS") for l in lines)


def test_requires_subcommand():
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == 2
