import csv
import io

import pytest

from lqlab import NumericalError, cli, inversion

BM = ["kind=brownian", "sigma=1"]
CPP = ["kind=cpp", "lambda=1", "mu=1"]


def run(argv, capsys):
    rc = cli.main(argv)
    out, err = capsys.readouterr()
    return rc, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestSurvival:
    def test_closed_row(self, capsys):
        rc, out, _ = run(["survival", *BM, "--t", "1", "--u", "0.5", "--method", "closed"], capsys)
        assert rc == 0
        assert out.splitlines()[0] == ",".join(cli.HEADER)
        (row,) = rows(out)
        assert row["method"] == "closed" and row["t"] == "1" and row["u"] == "0.5"
        assert float(row["value"]) == pytest.approx(0.0554319148, abs=1e-10)
        assert row["model"] == "kind=brownian sigma=1.0"

    def test_all_methods_by_default(self, capsys):
        rc, out, _ = run(["survival", *BM, "--t", "1", "--u", "0,1", "--paths", "2000"], capsys)
        assert rc == 0
        methods = {r["method"] for r in rows(out)}
        assert methods == {"closed", "invert-sn", "mc-bridge"}
        assert all(r["stderr"] for r in rows(out) if r["method"].startswith("mc"))

    def test_closed_unavailable_for_cpp(self, capsys):
        rc, _, err = run(["survival", *CPP, "--t", "1", "--u", "0.5", "--method", "closed"], capsys)
        assert rc == 2 and "not available" in err

    def test_output_file(self, tmp_path, capsys):
        path = tmp_path / "s.csv"
        rc, out, _ = run(["survival", *CPP, "--t", "1", "--u", "0.5", "--method", "invert",
                          "--output", str(path)], capsys)
        assert rc == 0 and out == ""
        (row,) = rows(path.read_text())
        assert row["method"] == "invert-sp"


class TestErrors:
    def test_bad_model_reports_column(self, capsys):
        rc, _, err = run(["survival", "kind=cpp", "lambda=x", "mu=1", "--t", "1", "--u", "0"], capsys)
        assert rc == 2
        assert "model specification" in err and "column" in err

    def test_bad_number_reports_column(self, capsys):
        rc, _, err = run(["survival", *BM, "--t", "1", "--u", "0,abc"], capsys)
        assert rc == 2 and "column 3" in err

    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["survival", *BM, "--bogus"])
        assert exc.value.code == 2

    def test_numerical_failure(self, capsys, monkeypatch):
        def boom(*args, **kwargs):
            raise NumericalError("did not converge")
        monkeypatch.setattr(inversion, "survival", boom)
        rc, _, err = run(["survival", *CPP, "--t", "2", "--u", "0.5", "--method", "invert"], capsys)
        assert rc == 3
        assert "t=2" in err and "u=0.5" in err

    def test_validate_needs_one_sided(self, capsys):
        rc, _, _ = run(["validate", "kind=stable", "alpha=1.5", "beta=0", "--paths", "100"], capsys)
        assert rc == 2


class TestValidate:
    ARGS = ["validate", *CPP, "--t", "1", "--u", "0.5,1", "--paths", "20000", "--seed", "7"]

    def test_summary_sidecar(self, tmp_path, capsys):
        path = tmp_path / "v.csv"
        rc, _, err = run([*self.ARGS, "--output", str(path)], capsys)
        assert rc == 0
        summary = (tmp_path / "v.csv.summary.csv").read_text()
        assert summary.splitlines()[0] == "check,max_discrepancy,allowed,status"
        assert summary in err
        (check,) = rows(summary)
        assert check["check"] == "invert-vs-mc" and check["status"] == "pass"

    def test_byte_identical_across_workers(self, tmp_path, capsys, monkeypatch):
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        run([*self.ARGS, "--workers", "1", "--output", str(a)], capsys)
        run([*self.ARGS, "--workers", "4", "--output", str(b)], capsys)
        monkeypatch.setenv("LQLAB_THREADS", "3")
        run([*self.ARGS, "--output", str(c)], capsys)
        assert a.read_bytes() == b.read_bytes() == c.read_bytes()

    def test_brownian_checks(self, capsys):
        rc, out, err = run(["validate", *BM, "--t", "1", "--u", "0,0.5", "--paths", "20000"], capsys)
        assert rc == 0
        names = [r["check"] for r in rows(err)]
        assert names == ["closed-vs-invert", "closed-vs-mc"]

    def test_failing_check_exit_code(self, capsys, monkeypatch):
        # a deliberately wrong reference must fail both comparisons against it
        monkeypatch.setattr(cli.closedform, "survival_brownian", lambda t, u: 0.9)
        rc, _, err = run(["validate", *BM, "--t", "1", "--u", "0", "--paths", "2000"], capsys)
        assert rc == 1
        assert [r["status"] for r in rows(err)] == ["fail", "fail"]


class TestWorkers:
    def test_env_default(self, monkeypatch):
        monkeypatch.setenv("LQLAB_THREADS", "5")
        args = cli._build_parser().parse_args(["simulate", *BM, "--t", "1", "--u", "0"])
        assert cli._mc_config(args).workers == 5

    def test_flag_wins(self, monkeypatch):
        monkeypatch.setenv("LQLAB_THREADS", "5")
        args = cli._build_parser().parse_args(["simulate", *BM, "--t", "1", "--u", "0", "--workers", "2"])
        assert cli._mc_config(args).workers == 2


class TestArgFile:
    def test_at_file(self, tmp_path, capsys):
        argfile = tmp_path / "args.txt"
        argfile.write_text("\n".join(["survival", *BM, "--t", "1", "--u", "0.5", "--method", "closed"]))
        rc, out, _ = run([f"@{argfile}"], capsys)
        assert rc == 0
        assert float(rows(out)[0]["value"]) == pytest.approx(0.0554319148, abs=1e-10)


class TestOtherCommands:
    def test_transform(self, capsys):
        rc, out, _ = run(["transform", *CPP, "--x", "0.5", "--q", "1", "--kind", "Qe,L"], capsys)
        assert rc == 0
        got = {r["method"]: float(r["value"]) for r in rows(out)}
        assert set(got) == {"transform-Qe", "transform-L"}
        assert all(0.0 < v <= 1.0 for v in got.values())

    def test_transform_needs_q(self, capsys):
        rc, _, _ = run(["transform", *CPP, "--x", "0.5", "--kind", "L"], capsys)
        assert rc == 2

    def test_asymp_light_proportional(self, capsys):
        rc, out, _ = run(["asymp-light", *BM, "--regime", "proportional", "--A", "1", "--T", "4"], capsys)
        assert rc == 0
        (row,) = rows(out)
        assert row["method"] == "decay-proportional" and row["flags"] == "asymptotic"
        assert float(row["value"]) == pytest.approx(-10.0)

    def test_asymp_light_window(self, capsys):
        rc, out, _ = run(["asymp-light", *BM, "--u", "10", "--T", "20"], capsys)
        assert rc == 0 and float(rows(out)[0]["value"]) == pytest.approx(-30.0)

    def test_asymp_heavy(self, capsys):
        rc, out, _ = run(["asymp-heavy", "kind=stable", "alpha=1.5", "beta=0", "--u", "10", "--T", "10"], capsys)
        assert rc == 0
        (row,) = rows(out)
        assert row["method"] == "asymp-heavy-window"
        assert float(row["value"]) == pytest.approx(0.11150775725954824, rel=1e-8)

    def test_asymp_heavy_rejects_light_model(self, capsys):
        rc, _, _ = run(["asymp-heavy", *BM, "--u", "1", "--T", "1"], capsys)
        assert rc == 2

    def test_mgf(self, capsys):
        rc, out, _ = run(["mgf", *BM, "--x", "2", "--t", "1", "--method", "invert"], capsys)
        assert rc == 0
        assert float(rows(out)[0]["value"]) == pytest.approx(0.9246602166562292, abs=1e-5)

    def test_simulate(self, capsys):
        rc, out, _ = run(["simulate", *CPP, "--t", "1", "--u", "0", "--x", "1", "--paths", "2000"], capsys)
        assert rc == 0
        assert [r["u"] != "" for r in rows(out)] == [True, False]
