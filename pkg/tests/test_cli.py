import csv

import pytest

from pi3search.cli import main, wilson_interval


def run_cli(args):
    return main(args)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def sweep_value(rows, eps0, algorithm, method="closed_form"):
    for r in rows:
        if (abs(float(r["eps0"]) - eps0) < 1e-12 and r["algorithm"] == algorithm
                and r["method"] == method):
            return float(r["integrated_failure"])
    raise AssertionError(f"row not found: {eps0} {algorithm} {method}")


class TestSweep:
    def test_endpoint_values(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run_cli(["sweep", "--eps0-max", "0.2", "--grid", "5",
                        "--out", str(out)]) == 0
        rows = read_csv(str(out))
        assert sweep_value(rows, 0.2, "pi3") == pytest.approx(0.002, abs=1e-12)
        assert sweep_value(rows, 0.2, "classical") == pytest.approx(0.04 / 3, abs=1e-12)
        assert sweep_value(rows, 0.2, "mosca") == pytest.approx(0.0105, abs=1e-12)
        assert sweep_value(rows, 0.2, "younes") == pytest.approx(
            0.1 - 4 / 3 * 0.04 + 0.008, abs=1e-12)

    def test_header_and_sorting(self, tmp_path):
        out = tmp_path / "sweep.csv"
        run_cli(["sweep", "--grid", "3", "--out", str(out)])
        text = out.read_text()
        lines = text.splitlines()
        assert lines[0] == "eps0,algorithm,queries,integrated_failure,method,n,seed"
        assert "\r" not in text
        keys = [(float(r["eps0"]), r["algorithm"]) for r in read_csv(str(out))]
        assert keys == sorted(keys)

    def test_closed_form_rows_have_no_seed(self, tmp_path):
        out = tmp_path / "sweep.csv"
        run_cli(["sweep", "--grid", "2", "--out", str(out)])
        for r in read_csv(str(out)):
            assert r["method"] == "closed_form"
            assert r["n"] == "0"
            assert r["seed"] == ""

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        flags = ["sweep", "--eps0-max", "0.2", "--grid", "7", "--seed", "3"]
        run_cli(flags + ["--out", str(a)])
        run_cli(flags + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_closed_forms_independent_of_n_and_seed(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(["sweep", "--grid", "3", "--seed", "1", "--out", str(a)])
        run_cli(["sweep", "--grid", "3", "--seed", "99", "--n", "64", "--out", str(b)])
        rows_a = [r for r in read_csv(str(a)) if r["method"] == "closed_form"]
        rows_b = [r for r in read_csv(str(b)) if r["method"] == "closed_form"]
        assert rows_a == rows_b

    def test_simulated_rows_when_n_given(self, tmp_path):
        out = tmp_path / "sweep.csv"
        run_cli(["sweep", "--grid", "2", "--n", "256", "--out", str(out)])
        rows = [r for r in read_csv(str(out)) if r["method"] == "simulated"]
        assert len(rows) == 2
        assert all(r["algorithm"] == "pi3" and r["n"] == "256" and r["seed"] == "0"
                   for r in rows)
        sim = sweep_value(read_csv(str(out)), 0.2, "pi3", "simulated")
        assert abs(sim - 0.002) < 2e-3  # discretization-limited at n = 256

    def test_simulated_tracks_closed_form_at_1024(self, tmp_path):
        out = tmp_path / "sweep.csv"
        run_cli(["sweep", "--grid", "2", "--n", "1024", "--out", str(out)])
        sim = sweep_value(read_csv(str(out)), 0.2, "pi3", "simulated")
        assert abs(sim - 0.002) < 2e-4

    def test_stdout_output(self, capsys):
        assert run_cli(["sweep", "--grid", "2"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("eps0,")
        assert len(lines) == 9  # header + 2 grid points x 4 algorithms

    def test_algorithm_subset(self, capsys):
        run_cli(["sweep", "--grid", "2", "--algorithms", "pi3,classical"])
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 5

    @pytest.mark.parametrize("flags", [
        ["sweep", "--eps0-max", "0"],
        ["sweep", "--eps0-max", "1.5"],
        ["sweep", "--grid", "1"],
        ["sweep", "--algorithms", "nope"],
        ["sweep", "--n", "100"],
    ])
    def test_usage_errors_exit_2(self, flags):
        with pytest.raises(SystemExit) as exc:
            run_cli(flags)
        assert exc.value.code == 2


class TestMultiquery:
    def test_closed_form_columns(self, tmp_path):
        out = tmp_path / "mq.csv"
        assert run_cli(["multiquery", "--depth-max", "3", "--eps0", "0.2",
                        "--n", "64", "--trials", "2000", "--out", str(out)]) == 0
        rows = {int(r["depth"]): r for r in read_csv(str(out))}
        assert int(rows[0]["queries"]) == 0
        assert int(rows[1]["queries"]) == 1
        assert int(rows[2]["queries"]) == 4
        assert int(rows[3]["queries"]) == 13
        assert float(rows[0]["pi3_integrated_failure"]) == pytest.approx(0.1, abs=1e-14)
        assert float(rows[1]["pi3_integrated_failure"]) == pytest.approx(0.002, abs=1e-14)
        assert float(rows[1]["classical_integrated_failure"]) == pytest.approx(
            0.04 / 3, abs=1e-14)
        assert float(rows[2]["pi3_integrated_failure"]) == pytest.approx(
            0.2 ** 9 / 10, abs=1e-14)
        assert float(rows[2]["classical_integrated_failure"]) == pytest.approx(
            0.2 ** 5 / 6, abs=1e-14)

    def test_simulation_columns_only_up_to_depth_two(self, tmp_path):
        out = tmp_path / "mq.csv"
        run_cli(["multiquery", "--depth-max", "3", "--n", "64",
                 "--trials", "2000", "--out", str(out)])
        rows = {int(r["depth"]): r for r in read_csv(str(out))}
        for depth in (0, 1, 2):
            assert rows[depth]["pi3_simulated_failure"] != ""
            assert rows[depth]["classical_monte_carlo_failure"] != ""
        assert rows[3]["pi3_simulated_failure"] == ""
        assert rows[3]["classical_monte_carlo_failure"] == ""

    def test_simulation_tracks_closed_form(self, tmp_path):
        out = tmp_path / "mq.csv"
        run_cli(["multiquery", "--depth-max", "1", "--n", "1024",
                 "--trials", "20000", "--out", str(out)])
        rows = {int(r["depth"]): r for r in read_csv(str(out))}
        sim = float(rows[1]["pi3_simulated_failure"])
        assert abs(sim - 0.002) < 2e-4
        mc = float(rows[1]["classical_monte_carlo_failure"])
        assert abs(mc - 0.04 / 3) < 1.5e-3  # statistical tolerance

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        flags = ["multiquery", "--depth-max", "2", "--n", "64", "--trials", "1000",
                 "--seed", "5"]
        run_cli(flags + ["--out", str(a)])
        run_cli(flags + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_usage_errors(self):
        for flags in (["multiquery", "--depth-max", "-1"],
                      ["multiquery", "--n", "63"],
                      ["multiquery", "--eps0", "0"]):
            with pytest.raises(SystemExit) as exc:
                run_cli(flags)
            assert exc.value.code == 2


class TestAncilla:
    def test_default_passes(self, capsys):
        assert run_cli(["ancilla", "--n", "8", "--trials", "20"]) == 0
        out = capsys.readouterr().out
        assert "ANCILLA pass" in out

    def test_non_power_of_two_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["ancilla", "--n", "3"])
        assert exc.value.code == 2


class TestMontecarlo:
    def test_pi3_small_run(self, tmp_path, capsys):
        out = tmp_path / "mc.csv"
        assert run_cli(["montecarlo", "--n", "64", "--trials", "4000",
                        "--seed", "4", "--out", str(out)]) == 0
        row = read_csv(str(out))[0]
        assert row["algorithm"] == "pi3"
        lo, hi = float(row["ci_low"]), float(row["ci_high"])
        assert lo <= float(row["predicted_failure"]) <= hi
        assert int(row["failures"]) == round(float(row["empirical_failure"]) * 4000)

    def test_classical_small_run(self, tmp_path):
        out = tmp_path / "mc.csv"
        assert run_cli(["montecarlo", "--algorithm", "classical", "--n", "100",
                        "--trials", "30000", "--seed", "3", "--out", str(out)]) == 0
        row = read_csv(str(out))[0]
        lo, hi = float(row["ci_low"]), float(row["ci_high"])
        assert lo <= float(row["predicted_failure"]) <= hi
        assert abs(float(row["empirical_failure"]) - 0.04 / 3) < 4e-3

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        flags = ["montecarlo", "--n", "64", "--trials", "500", "--seed", "11"]
        run_cli(flags + ["--out", str(a)])
        run_cli(flags + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_zero_trials_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["montecarlo", "--trials", "0"])
        assert exc.value.code == 2

    def test_pi3_requires_power_of_two(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["montecarlo", "--n", "100"])
        assert exc.value.code == 2


class TestVerify:
    def test_reduced_battery_passes(self, capsys):
        assert run_cli(["verify", "--n", "256", "--dims", "2,8",
                        "--trials", "10", "--seed", "1"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[-1].startswith("VERIFY pass=")
        assert lines[-1].endswith("fail=0")
        assert all(line.startswith("[ok]") for line in lines[:-1])

    def test_non_power_of_two_n_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli(["verify", "--n", "3"])
        assert exc.value.code == 2
        assert "power of 2" in capsys.readouterr().err

    def test_bad_dims_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["verify", "--dims", "2,x"])
        assert exc.value.code == 2


class TestWilsonInterval:
    def test_contains_point_estimate(self):
        lo, hi = wilson_interval(20, 1000)
        assert lo < 0.02 < hi

    def test_degenerate_zero(self):
        lo, hi = wilson_interval(0, 100)
        assert lo == pytest.approx(0.0, abs=1e-15)
        assert hi > 0.0


class TestOutputErrors:
    def test_unwritable_output_path_exits_2(self):
        assert main(["sweep", "--grid", "2",
                     "--out", "/nonexistent-dir/x.csv"]) == 2
