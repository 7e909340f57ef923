"""CLI and sweep-layer tests: row contracts, determinism, exit codes."""

import csv
import io
import json

import pytest

from fasnoma.channel import SystemConfig
from fasnoma.cli import main
from fasnoma.montecarlo import McConfig
from fasnoma.sweep import CSV_HEADER, SweepSpec, run_sweep, write_csv

FAST_MC = McConfig(seed=3, trials=4_000, chunk_size=2_000)


def rows_to_csv(rows):
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


class TestSweepSpec:
    def test_grid_inclusive(self):
        spec = SweepSpec(variable="rho_db", start=0, stop=60, step=5)
        grid = spec.grid()
        assert len(grid) == 13
        assert grid[0] == 0.0 and grid[-1] == 60.0

    def test_validation(self):
        with pytest.raises(ValueError):
            SweepSpec(variable="W")
        with pytest.raises(ValueError):
            SweepSpec(step=0.0)
        with pytest.raises(ValueError):
            SweepSpec(methods=())
        with pytest.raises(ValueError):
            SweepSpec(users=("nobody",))


class TestRunSweep:
    def test_row_count_contract(self):
        # 13 grid points x 2 users x 2 methods = 52 rows
        cfg = SystemConfig(N=2, W=0.5)
        spec = SweepSpec(variable="rho_db", start=0, stop=60, step=5,
                         methods=("theory", "mc"), users=("cu_cc", "ceu"))
        rows, ok = run_sweep(cfg, FAST_MC, spec)
        assert len(rows) == 52
        assert ok

    def test_rows_sorted(self):
        cfg = SystemConfig(N=2, W=0.5)
        spec = SweepSpec(variable="rho_db", start=10, stop=30, step=10,
                         methods=("theory", "asymptotic"),
                         users=("cu_cc", "cu_bound"))
        rows, _ = run_sweep(cfg, FAST_MC, spec)
        keys = [(r.value, r.user, r.method) for r in rows]
        assert keys == sorted(keys)

    def test_mc_rows_carry_stderr_and_samples(self):
        cfg = SystemConfig(N=2, W=0.5)
        spec = SweepSpec(variable="rho_db", start=20, stop=20, step=5,
                         methods=("theory", "mc"), users=("cu_cc",))
        rows, _ = run_sweep(cfg, FAST_MC, spec)
        by_method = {r.method: r for r in rows}
        assert by_method["mc"].stderr is not None
        assert by_method["mc"].samples == FAST_MC.trials
        assert by_method["theory"].stderr is None
        assert by_method["theory"].samples is None

    def test_siso_users_use_single_port(self):
        cfg = SystemConfig(N=3, W=10.0, rho_db=40.0)
        spec = SweepSpec(variable="rho_db", start=40, stop=40, step=5,
                         methods=("mc",), users=("ceu", "siso_ceu"))
        rows, _ = run_sweep(cfg, FAST_MC, spec)
        vals = {r.user: r.bler for r in rows}
        assert vals["ceu"] <= vals["siso_ceu"]

    def test_alpha_sweep_feasibility_boundary(self):
        # CEU theory rows are exactly 1 once beta_e >= alpha_e / alpha_c
        cfg = SystemConfig(N=2, W=0.5, rho_db=40.0)
        spec = SweepSpec(variable="alpha_c", start=0.4, stop=0.6, step=0.05,
                         methods=("theory", "asymptotic"), users=("cu_ce", "ceu"))
        rows, ok = run_sweep(cfg, FAST_MC, spec)
        assert ok
        for row in rows:
            if row.value >= 0.5:
                assert row.bler == 1.0

    def test_values_parse_in_unit_interval(self):
        cfg = SystemConfig(N=2, W=0.5)
        spec = SweepSpec(variable="rho_db", start=0, stop=40, step=20,
                         methods=("theory", "asymptotic", "mc"),
                         users=("cu_cc", "cu_ce", "cu_bound", "ceu"))
        rows, _ = run_sweep(cfg, FAST_MC, spec)
        text = rows_to_csv(rows)
        parsed = list(csv.reader(io.StringIO(text)))
        assert tuple(parsed[0]) == CSV_HEADER
        for record in parsed[1:]:
            value = float(record[5])
            assert 0.0 <= value <= 1.0

    def test_byte_identical_across_runs_and_workers(self):
        cfg = SystemConfig(N=2, W=0.5)
        spec = SweepSpec(variable="rho_db", start=0, stop=20, step=10,
                         methods=("theory", "mc"), users=("cu_cc", "ceu"))
        first = rows_to_csv(run_sweep(cfg, FAST_MC, spec, workers=1)[0])
        second = rows_to_csv(run_sweep(cfg, FAST_MC, spec, workers=1)[0])
        parallel = rows_to_csv(run_sweep(cfg, FAST_MC, spec, workers=3)[0])
        assert first == second == parallel


class TestCli:
    def test_sweep_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "rows.csv"
        code = main(["sweep", "--set", "trials=2000", "--set", "methods=theory",
                     "--set", "users=cu_cc", "--set", "stop=10", "--set", "step=5",
                     "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == 1 + 3

    def test_sweep_preset_stdout(self, capsys):
        code = main(["sweep", "--preset", "fig1a_caption", "--set", "stop=10",
                     "--set", "trials=2000", "--set", "methods=asymptotic",
                     "--set", "users=cu_cc"])
        assert code == 0
        header = capsys.readouterr().out.splitlines()[0]
        assert header == ",".join(CSV_HEADER)

    def test_validate_passes(self, tmp_path):
        out = tmp_path / "report.txt"
        code = main(["validate", "--set", "trials=200000", "--seed", "8",
                     "--out", str(out)])
        report = out.read_text()
        assert code == 0, report
        assert report.count("[PASS]") == 8
        assert "[FAIL]" not in report

    def test_validate_corrupted_tolerance_fails(self, tmp_path):
        out = tmp_path / "report.txt"
        code = main(["validate", "--set", "trials=50000",
                     "--tolerance-scale", "1e-12", "--out", str(out)])
        assert code == 1
        assert "[FAIL]" in out.read_text()

    def test_validate_reports_each_check_once(self, tmp_path):
        out = tmp_path / "report.txt"
        main(["validate", "--set", "trials=50000", "--out", str(out)])
        lines = [l for l in out.read_text().splitlines() if l.startswith("[")]
        names = [l.split()[1] for l in lines]
        assert len(names) == len(set(names))

    def test_cdf_dump(self, tmp_path):
        out = tmp_path / "cdf.csv"
        code = main(["cdf", "--metric", "cc", "--grid", "0:5:11",
                     "--set", "trials=20000", "--out", str(out)])
        assert code == 0
        rows = list(csv.reader(out.read_text().splitlines()))
        assert rows[0] == ["tau", "analytic", "empirical"]
        assert len(rows) == 12
        analytic = [float(r[1]) for r in rows[1:]]
        assert analytic == sorted(analytic)

    def test_config_file_roundtrip(self, tmp_path):
        cfg_file = tmp_path / "scenario.json"
        cfg_file.write_text(json.dumps({"N": 1, "rho_db": 25.0, "trials": 2000,
                                        "methods": ["theory"], "users": ["cu_cc"],
                                        "stop": 5.0, "step": 5.0}))
        out = tmp_path / "rows.csv"
        code = main(["sweep", "--config", str(cfg_file), "--out", str(out)])
        assert code == 0
        assert len(out.read_text().splitlines()) == 3

    def test_bad_config_exit_code(self, capsys):
        code = main(["sweep", "--set", "alpha_c=0.6", "--set", "alpha_e=0.6"])
        assert code == 2
        assert "error" in capsys.readouterr().err
