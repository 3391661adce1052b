import io
import json

import pytest

from frameforge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


class TestBasics:
    def test_catalog_list(self, capsys):
        code, r = report(capsys, "catalog")
        assert code == 0 and r["catalog"]["shannon"] == "scaling" and r["ff-schema"] == 1

    def test_catalog_unknown(self, capsys):
        code, _, err = run(capsys, "catalog", "bogus")
        assert code == 2 and "unknown catalog entry" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify-scaling", str(tmp_path / "nope.json"))
        assert code == 2 and "cannot read" in err

    def test_bad_json(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{")
        assert run(capsys, "verify-scaling", str(p))[0] == 2

    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_reports_are_byte_identical(self, capsys):
        a = run(capsys, "verify-scaling", "phi_quarter")[1]
        b = run(capsys, "verify-scaling", "phi_quarter")[1]
        assert a == b

    def test_stdin(self, capsys, monkeypatch):
        text = run(capsys, "catalog", "shannon")[1]
        monkeypatch.setattr("sys.stdin", io.TextIOWrapper(io.BytesIO(text.encode())))
        code, r = report(capsys, "verify-scaling", "-")
        assert code == 0 and r["verdicts"]["S1"]


class TestScaling:
    def test_verify_reference(self, capsys):
        for name in ("shannon", "phi_quarter"):
            code, r = report(capsys, "verify-scaling", name)
            assert code == 0 and all(r["verdicts"].values())

    def test_verify_wavelet_as_scaling_fails(self, capsys):
        code, r = report(capsys, "verify-scaling", "psi1")
        assert code == 1 and r["verdicts"]["S1"] is False and "S1" in r["witnesses"]

    def test_maximalize_pipeline(self, capsys, tmp_path):
        out = tmp_path / "star.json"
        code, _, _ = run(capsys, "maximalize", "phi_quarter", "-o", str(out))
        r = json.loads(out.read_text())
        assert code == 0 and r["changed"] and r["tail_mass_bound"] == pytest.approx(0.0078125)
        code, r = report(capsys, "verify-scaling", str(out))
        assert code == 0 and r["is_maximal"]


class TestWavelet:
    def test_verify_reference(self, capsys):
        for name in ("psi0", "psi1"):
            code, r = report(capsys, "verify-wavelet", name)
            assert code == 0 and r["parseval"]

    def test_alias_and_flag(self, capsys):
        code, r = report(capsys, "verify", "--wavelet", "psi0", "--norm-check")
        assert code == 0 and r["orthonormal"]

    def test_synthesize_pipeline(self, capsys, tmp_path):
        out = tmp_path / "w.json"
        assert run(capsys, "synthesize", "phi_quarter", "--mu1", "random", "--seed", "4", "-o", str(out))[0] == 0
        code, r = report(capsys, "verify-wavelet", str(out))
        assert code == 0 and r["verdicts"]["telescoping"]

    def test_gauge_random(self, capsys, tmp_path):
        out = tmp_path / "w.json"
        run(capsys, "synthesize", "shannon", "-o", str(out))
        code, r = report(capsys, "gauge", str(out), "--mu", "random", "--nu", "random", "--seed", "2")
        assert code == 0 and all(r["verdicts"].values())

    def test_gauge_needs_bundle(self, capsys):
        code, _, err = run(capsys, "gauge", "psi0")
        assert code == 2 and "synthesize" in err

    def test_verify_needs_source(self, capsys):
        assert run(capsys, "verify")[0] == 2


class TestProjection:
    def test_project(self, capsys):
        code, r = report(capsys, "project", "shannon", "--set", "0:1/4,3/4:1")
        assert code == 0 and all(r["verdicts"].values())

    def test_conditions_hold(self, capsys):
        code, r = report(capsys, "check-projection", "shannon", "--set", "0:1/4,3/4:1")
        assert code == 0 and r["verdicts"]["reductive"]

    def test_not_reductive(self, capsys):
        code, r = report(capsys, "check-projection", "shannon", "--set", "0:1/16,3/16:1/4,15/16:1")
        v = r["verdicts"]
        assert code == 1 and v["cond1"] and v["cond2"] and v["cond3"] and not v["reductive"]
        assert "reductive" in r["witnesses"]


class TestFilters:
    def test_extend_then_check(self, capsys, tmp_path):
        out = tmp_path / "f.json"
        assert run(capsys, "extend-filter", "phi_quarter", "-o", str(out))[0] == 0
        code, r = report(capsys, "check-fp", str(out))
        assert code == 0 and r["verdicts"]["FP"]


class TestCsv:
    def test_export_plot(self, capsys):
        code, out, _ = run(capsys, "export-plot", "shannon", "--format", "csv")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "xi_num,xi_exp,re,im,abs"
        assert lines[1] == "-1,1,1.0,0.0,1.0"

    def test_flat_rows(self, capsys):
        code, out, _ = run(capsys, "verify-wavelet", "psi0", "--format", "csv")
        assert code == 0 and "verdicts.calderon,True" in out.splitlines()

    def test_timing(self, capsys):
        assert "wall_time_s" in report(capsys, "verify-scaling", "shannon", "--timing")[1]
