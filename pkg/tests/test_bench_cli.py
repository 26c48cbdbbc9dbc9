"""Experiment runner, metric files, and the command line.

Determinism is the load-bearing property here: the same configuration
must yield byte-identical CSVs whether run once, twice, or across a
process pool, because the acceptance checks diff files, not floats.
"""

import json
from itertools import islice

import pytest

from efgsolve.bench import (ConfigError, EnumerationOverflow,
                            ExperimentConfig, guard_enumerable, list_games,
                            run_experiment, run_psro_hist, run_seed,
                            run_size_report, validate_config)
from efgsolve.cli import main
from efgsolve.games import make_game
from efgsolve.metrics import (CSV_COLUMNS, cadence_thresholds, check_rows,
                              read_rows_csv, write_rows_csv)


def small_cfg(**over):
    base = dict(game="kuhn", algo="cfr_plus", seeds=(0,), max_iters=40,
                eval_start=100, out_dir="runs")
    base.update(over)
    return ExperimentConfig(**base)


def test_cadence_is_geometric():
    assert list(islice(cadence_thresholds(100, 2), 5)) \
        == [100, 200, 400, 800, 1600]
    with pytest.raises(ValueError):
        next(cadence_thresholds(0, 2))
    with pytest.raises(ValueError):
        next(cadence_thresholds(10, 1))


def test_check_rows_rejects_bad_rows():
    check_rows([dict(nodes_visited=5, exploitability=0.1),
                dict(nodes_visited=5, exploitability=0.0)])
    with pytest.raises(ValueError, match="unknown columns"):
        check_rows([dict(bogus=1)])
    with pytest.raises(ValueError, match="decreased"):
        check_rows([dict(nodes_visited=5), dict(nodes_visited=4)])
    with pytest.raises(ValueError, match="below floor"):
        check_rows([dict(exploitability=-1e-3)])


def test_csv_roundtrip_preserves_types(tmp_path):
    rows = [dict(algo="xdo", game="kuhn", seed=0, outer_iter=1,
                 inner_iter=None, nodes_visited=55,
                 exploitability=0.0078125, pop1=2, pop2=2,
                 restricted_states=51, wall_ms=0.0)]
    path = tmp_path / "r.csv"
    write_rows_csv(path, rows)
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert read_rows_csv(path) == rows
    # repr keeps floats exact through the round trip.
    assert "0.0078125" in text


def test_validate_config_rejects_bad_inputs():
    with pytest.raises(ConfigError, match="unknown algorithm"):
        validate_config(small_cfg(algo="sarsa"))
    with pytest.raises(ConfigError, match="unknown game"):
        validate_config(small_cfg(game="chess"))
    with pytest.raises(ConfigError, match="seed"):
        validate_config(small_cfg(seeds=()))
    with pytest.raises(ConfigError, match="budget"):
        validate_config(small_cfg(max_iters=None))
    with pytest.raises(ConfigError, match="does not take parameters"):
        validate_config(small_cfg(params={"inner": "lp"}))
    with pytest.raises(ConfigError, match="needs --node-budget"):
        validate_config(small_cfg(algo="xdo", max_iters=None,
                                  max_wall_s=1.0))


def test_guard_enumerable_counts_and_overflows():
    assert guard_enumerable(make_game("kuhn"), 1000) == 55
    with pytest.raises(EnumerationOverflow):
        guard_enumerable(make_game("kuhn"), 54)
    assert guard_enumerable(make_game("kuhn"), None) == 0


def test_run_experiment_writes_expected_files(tmp_path):
    cfg = small_cfg(out_dir=str(tmp_path), seeds=(0, 1))
    summary = run_experiment(cfg)
    for seed in (0, 1):
        rows = read_rows_csv(tmp_path / f"cfr_plus_kuhn_seed{seed}.csv")
        assert rows[-1]["outer_iter"] == 40
        assert rows[-1]["nodes_visited"] == 40 * 2 * 55
        assert all(r["algo"] == "cfr_plus" and r["seed"] == seed
                   for r in rows)
    on_disk = json.loads(
        (tmp_path / "cfr_plus_kuhn_summary.json").read_text())
    assert on_disk["schema_version"] == 1
    assert summary["truncated"] is True
    assert set(summary["final_exploitability"]) == {"0", "1"}


def test_repeat_runs_are_byte_identical(tmp_path):
    texts = []
    for sub in ("a", "b"):
        cfg = small_cfg(algo="mccfr_es", out_dir=str(tmp_path / sub),
                        seeds=(3,), max_iters=60)
        run_experiment(cfg)
        texts.append((tmp_path / sub / "mccfr_es_kuhn_seed3.csv").read_text())
    assert texts[0] == texts[1]


def test_process_pool_matches_serial_output(tmp_path):
    outs = []
    for sub, jobs in (("serial", 1), ("pool", 3)):
        cfg = small_cfg(out_dir=str(tmp_path / sub), seeds=(0, 1, 2),
                        jobs=jobs)
        run_experiment(cfg)
        outs.append([(tmp_path / sub / f"cfr_plus_kuhn_seed{s}.csv")
                     .read_text() for s in (0, 1, 2)])
    assert outs[0] == outs[1]


def test_wall_clock_column_is_zero_unless_requested(tmp_path):
    cfg = small_cfg(out_dir=str(tmp_path))
    run_experiment(cfg)
    rows = read_rows_csv(tmp_path / "cfr_plus_kuhn_seed0.csv")
    assert all(r["wall_ms"] == 0.0 for r in rows)
    cfg = small_cfg(out_dir=str(tmp_path / "timed"), wall_clock=True)
    run_experiment(cfg)
    rows = read_rows_csv(tmp_path / "timed" / "cfr_plus_kuhn_seed0.csv")
    assert rows[-1]["wall_ms"] > 0.0


def test_node_budget_truncates_iterative_runs():
    rows, summary = run_seed(small_cfg(max_iters=None, node_budget=3000), 0)
    assert summary["truncated"]
    assert summary["nodes"] >= 3000
    assert rows[-1]["nodes_visited"] == summary["nodes"]


def test_xdo_run_reports_restricted_sizes(tmp_path):
    cfg = ExperimentConfig(game="kuhn", algo="xdo", seeds=(0,), max_iters=3,
                           out_dir=str(tmp_path), params={"inner": "lp"})
    summary = run_experiment(cfg)
    seed = summary["seeds"]["0"]
    assert seed["terminated"] is True
    assert seed["restricted_histories"] > 0
    assert len(seed["restricted_infostates"]) == 2
    rows = read_rows_csv(tmp_path / "xdo_kuhn_seed0.csv")
    assert rows[-1]["restricted_states"] == seed["restricted_histories"]
    assert rows[-1]["pop1"] >= 1 and rows[-1]["pop2"] >= 1


def test_run_psro_hist_writes_histogram(tmp_path):
    summary = run_psro_hist(trials=4, seed0=0, horizon=12, eps=1e-3,
                            out_dir=str(tmp_path))
    trials_csv = (tmp_path / "psro_hist_trials.csv").read_text()
    assert trials_csv.splitlines()[0] \
        == "seed,expanded1,expanded2,eps_pass_iter,iters,exploitability"
    assert len(trials_csv.strip().splitlines()) == 5
    data = json.loads((tmp_path / "psro_hist_summary.json").read_text())
    assert data["trials"] == 4
    assert set(data["histogram"]) == {"player1", "player2"}
    assert summary["proportion_full"]["player1"] <= 1.0


def test_run_psro_hist_pool_matches_serial(tmp_path):
    serial = run_psro_hist(trials=5, seed0=3, horizon=10,
                           out_dir=str(tmp_path / "s"), jobs=1)
    pooled = run_psro_hist(trials=5, seed0=3, horizon=10,
                           out_dir=str(tmp_path / "p"), jobs=3)
    assert serial["histogram"] == pooled["histogram"]
    assert (tmp_path / "s" / "psro_hist_trials.csv").read_text() \
        == (tmp_path / "p" / "psro_hist_trials.csv").read_text()


def test_size_report_on_kuhn(tmp_path):
    report = run_size_report("kuhn", max_outer=50, inner="lp",
                             out_dir=str(tmp_path))
    assert report["terminated"] is True
    assert 0 < report["history_ratio"] < 1
    assert report["full_histories"] == 55
    assert (tmp_path / "size_kuhn.json").exists()
    with pytest.raises(ConfigError):
        run_size_report("kuhn", out_dir=str(tmp_path))


def test_cli_run_and_exit_codes(tmp_path, capsys):
    code = main(["run", "--game", "kuhn", "--algo", "cfr_plus",
                 "--seeds", "0", "--max-iters", "30",
                 "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "seed 0: exploitability" in out
    assert (tmp_path / "cfr_plus_kuhn_seed0.csv").exists()

    assert main(["run", "--game", "kuhn", "--algo", "nope",
                 "--max-iters", "5"]) == 2
    assert main(["run", "--game", "kuhn", "--algo", "cfr_plus"]) == 2

    code = main(["run", "--game", "leduc", "--algo", "cfr_plus",
                 "--max-iters", "5", "--max-states", "100",
                 "--out", str(tmp_path)])
    assert code == 3


def test_cli_config_file_with_flag_overrides(tmp_path, capsys):
    cfgfile = tmp_path / "exp.yaml"
    cfgfile.write_text(
        "game: kuhn\nalgo: cfr_plus\nseeds: [0, 1]\nmax_iters: 10\n"
        f"out_dir: {tmp_path / 'from_file'}\n")
    code = main(["run", "--config", str(cfgfile),
                 "--seeds", "2", "--out", str(tmp_path / "flag")])
    assert code == 0
    assert (tmp_path / "flag" / "cfr_plus_kuhn_seed2.csv").exists()
    assert not (tmp_path / "from_file").exists()

    code = main(["run", "--config", str(tmp_path / "missing.yaml")])
    assert code == 2


def test_cli_param_values_are_yaml_typed(tmp_path):
    code = main(["run", "--game", "kuhn", "--algo", "xdo",
                 "--max-iters", "3", "--param", "inner=lp",
                 "--param", "term_eps=1e-5", "--out", str(tmp_path)])
    assert code == 0
    summary = json.loads((tmp_path / "xdo_kuhn_summary.json").read_text())
    assert summary["config"]["params"] == {"inner": "lp", "term_eps": 1e-5}
    assert main(["run", "--game", "kuhn", "--algo", "xdo",
                 "--max-iters", "3", "--param", "nonsense"]) == 2


def test_cli_seed_ranges(tmp_path):
    code = main(["run", "--game", "kuhn", "--algo", "xfp",
                 "--seeds", "0,2-3", "--max-iters", "4",
                 "--out", str(tmp_path)])
    assert code == 0
    for seed in (0, 2, 3):
        assert (tmp_path / f"xfp_kuhn_seed{seed}.csv").exists()
    assert not (tmp_path / "xfp_kuhn_seed1.csv").exists()


def test_cli_list_games(capsys):
    assert main(["list-games"]) == 0
    out = capsys.readouterr().out
    for pattern in list_games():
        assert pattern in out
    assert "kgmp_<k>_<n>" in out


def test_cli_psro_hist(tmp_path, capsys):
    code = main(["psro-hist", "--trials", "2", "--horizon", "8",
                 "--out", str(tmp_path)])
    assert code == 0
    assert "player 1 expanded" in capsys.readouterr().out
    assert (tmp_path / "psro_hist_summary.json").exists()


def test_cli_size_report(tmp_path, capsys):
    code = main(["size-report", "--game", "kuhn", "--max-iters", "50",
                 "--inner", "lp", "--out", str(tmp_path)])
    assert code == 0
    assert "restricted/full histories" in capsys.readouterr().out
