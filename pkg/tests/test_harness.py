import filecmp
import os

import numpy as np
import pytest

from paretodescent import cli
from paretodescent.harness import (ConfigError, ExperimentConfig, RunRecord, build_problem, compare,
                                   config_from_mapping, diagnose, load_config, on_rosenbrock_front,
                                   pareto_front_check, read_csv, run_multistart, run_single, start_rng,
                                   statistics)
from paretodescent.solver import solve
from paretodescent.stepsize import ArmijoConfig, LipschitzConfig

INI = """
[instance]
family = rosenbrock
geometry = riemannian

[strategy]
name = armijo
t_min = 1e-2  ; inline comment

[experiment]
starts = 12
seed = 7
x0 = 0.5, 0.2
"""


def _write(tmp_path, text, name="exp.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_load_config(tmp_path):
    cfg = load_config(_write(tmp_path, INI))
    assert cfg.family == "rosenbrock" and cfg.starts == 12 and cfg.seed == 7
    assert cfg.x0 == (0.5, 0.2) and cfg.strategy_params == {"t_min": 1e-2}
    assert cfg.box == (-5.0, 5.0)


@pytest.mark.parametrize("text", [
    "[instance]\nfamily = sphere\n",
    "[instance]\ncolour = red\n",
    "[strategy]\nname = armijo\nzeta = 0.5\n",
    "[strategy]\nname = newton\n",
    "[experiment]\nstarts = many\n",
    "[experiment]\nstarts = 0\n",
    "[experiment]\nbox_low = 3\nbox_high = 1\n",
    "[output]\npath = x\n",
    "no section header\n",
])
def test_config_errors(tmp_path, text):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, text))


def test_missing_config_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.ini"))


def test_strategy_building():
    cfg = config_from_mapping({"strategy": {"name": "lipschitz", "L": "auto"}})
    from paretodescent.harness import build_strategy
    s = build_strategy(cfg, build_problem(cfg))
    assert isinstance(s, LipschitzConfig) and s.L == 200.0
    cfg = config_from_mapping({"strategy": {"name": "armijo", "first_trial": "100", "safeguard": "upper"}})
    s = build_strategy(cfg, build_problem(cfg))
    assert isinstance(s, ArmijoConfig) and s.first_trial == 100.0
    bad = config_from_mapping({"strategy": {"name": "armijo", "delta": "2"}})
    with pytest.raises(ConfigError):
        build_strategy(bad, build_problem(bad))


def test_front_membership_examples():
    assert on_rosenbrock_front([1.0, 1.0])
    assert on_rosenbrock_front([2.0, 4.0])
    assert on_rosenbrock_front([1.5, 2.25])
    assert not on_rosenbrock_front([1.5, 2.0])
    assert not on_rosenbrock_front([2.5, 6.25])
    rep = pareto_front_check([[1, 1], [1.5, 2.0]])
    assert rep.n_points == 2 and rep.n_pass == 1 and not rep.ok


def test_statistics_use_converged_runs_only():
    def rec(i, term, it):
        return RunRecord(i, term, it, 3 * it, 2 * it, np.zeros(2), np.zeros(2))

    recs = [rec(0, "converged", 4), rec(1, "converged", 7), rec(2, "max_iter", 10000),
            rec(3, "converged", 5), rec(4, "converged", 10)]
    st = statistics(recs)
    assert st.pct_converged == 80.0
    assert st.median_it == 6.0  # ordinary median of 4, 5, 7, 10
    assert st.median_evalf == 18.0
    assert np.isnan(statistics([rec(0, "max_iter", 3)]).median_it)


def test_single_start_matches_direct_solve():
    cfg = ExperimentConfig("rosenbrock", starts=1, seed=3)
    res = run_multistart(cfg)
    prob = build_problem(cfg)
    tr = solve(prob.objective, prob.manifold, prob.sample_start(start_rng(3, 0)))
    assert res.stats.median_it == tr.iter_count
    assert res.records[0].evalf == tr.evalf and res.records[0].evalg == tr.evalg


def test_run_single_outputs(tmp_path):
    cfg = ExperimentConfig("rosenbrock", x0=(0.5, 0.2))
    tr, summary = run_single(cfg, str(tmp_path))
    header, rows = read_csv(tmp_path / "trace.csv")
    assert header == ["k", "theta", "v_norm", "t", "f_1", "f_2"]
    assert len(rows) == tr.iter_count + 1
    assert "converged" in summary and (tmp_path / "summary.txt").read_text().strip() == summary


def test_already_critical_single_run():
    tr, _ = run_single(ExperimentConfig("rosenbrock", x0=(1.5, 2.25)))
    assert tr.converged and tr.iter_count == 0


def test_spd_x0_from_lower_triangle():
    cfg = ExperimentConfig("spd_logdet2", n=2, m=2, x0=(2.0, 0.5, 3.0))
    tr, _ = run_single(cfg)
    np.testing.assert_array_equal(tr.points[0], [[2.0, 0.5], [0.5, 3.0]])
    with pytest.raises(ConfigError):
        run_single(ExperimentConfig("spd_logdet2", n=2, x0=(1.0, 2.0)))


def test_multistart_outputs_and_counter_conservation(tmp_path):
    cfg = ExperimentConfig("orthant", n=5, m=3, starts=6, seed=11)
    res = run_multistart(cfg, str(tmp_path))
    header, rows = read_csv(tmp_path / "runs.csv")
    assert header[:5] == ["run", "termination", "it", "evalf", "evalg"]
    prob = build_problem(cfg)
    for row in rows:
        i = int(row[0])
        tr = solve(prob.objective, prob.manifold, prob.sample_start(start_rng(11, i)))
        assert (int(row[3]), int(row[4])) == (tr.evalf, tr.evalg)
    assert sum(int(r[3]) for r in rows) == sum(r.evalf for r in res.records)
    fh, frows = read_csv(tmp_path / "front.csv")
    assert fh == [f"x_{i}" for i in range(1, 6)] + ["f_1", "f_2", "f_3"]
    assert len(frows) == sum(r.converged for r in res.records)


def test_outputs_are_byte_identical_across_runs_and_worker_counts(tmp_path):
    cfg = ExperimentConfig("rosenbrock", starts=16, seed=5)
    run_multistart(cfg, str(tmp_path / "a"))
    run_multistart(cfg, str(tmp_path / "b"))
    run_multistart(cfg.with_overrides(workers=2), str(tmp_path / "c"))
    for name in ("runs.csv", "front.csv", "stats.csv"):
        assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "b" / name, shallow=False)
        assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "c" / name, shallow=False)


def test_compare_geometries(tmp_path):
    res = compare(ExperimentConfig("rosenbrock", starts=4, seed=2), str(tmp_path))
    assert set(res) == {"riemannian", "euclidean"}
    assert (tmp_path / "compare.csv").exists() and (tmp_path / "euclidean" / "runs.csv").exists()
    with pytest.raises(ConfigError):
        compare(ExperimentConfig("spd_logdet1", n=3))


def test_diagnose_flat_and_curved():
    rep = diagnose(ExperimentConfig("rosenbrock", x0=(0.5, 0.2), strategy_params={"t_min": 1e-4}))
    assert rep.ok and rep.rate_bound.details["K"] == 1.0
    rep = diagnose(ExperimentConfig("spd_logdet1", n=3, m=2, seed=1))
    assert rep.descent and rep.fejer


# ---------------------------------------------------------------- CLI

def test_cli_solve_and_front_round_trip(tmp_path, capsys):
    out = str(tmp_path / "out")
    ini = _write(tmp_path, INI)
    assert cli.main(["solve", "--config", ini, "--out-dir", out]) == 0
    assert "converged" in capsys.readouterr().out
    assert cli.main(["multistart", "--config", ini, "--out-dir", out, "--starts", "5", "--seed", "1"]) == 0
    assert "pct=100.0" in capsys.readouterr().out
    code = cli.main(["check-front", "--out-dir", out, "--tol", "1e-3"])
    assert code == 0


def test_cli_check_front_reports_off_front_points(tmp_path, capsys):
    path = tmp_path / "front.csv"
    path.write_text("x_1,x_2,f_1,f_2\n1.0,1.0,0,1\n1.5,2.0,0,0\n")
    assert cli.main(["check-front", str(path)]) == 3
    assert "on Pareto set: 1" in capsys.readouterr().out


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["solve", "--config", _write(tmp_path, "[instance]\nfamily = torus\n")]) == 2
    assert cli.main(["solve", "--config", str(tmp_path / "missing.ini")]) == 2
    assert cli.main(["check-front", str(tmp_path / "missing.csv")]) == 3
    bad = _write(tmp_path, "[strategy]\nname = armijo\nmax_trials = 1\n[experiment]\nx0 = -3, 4\n", "b.ini")
    assert cli.main(["solve", "--config", bad]) == 3
    assert cli.main(["multistart", "--starts", "0"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["solve", "--strategy", "newton"])
    assert exc.value.code == 2


def test_cli_strategy_override_and_compare(tmp_path, capsys):
    ini = _write(tmp_path, INI)
    assert cli.main(["solve", "--config", ini, "--strategy", "lipschitz"]) == 0
    assert cli.main(["compare", "--starts", "3"]) == 0
    text = capsys.readouterr().out
    assert "euclidean" in text and "riemannian" in text
    assert cli.main(["diagnose", "--config", ini]) == 0
    assert "descent inequality: holds" in capsys.readouterr().out


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "paretodescent", "solve"], capture_output=True, text=True,
                       cwd=os.path.dirname(__file__))
    assert r.returncode == 0 and "converged" in r.stdout
