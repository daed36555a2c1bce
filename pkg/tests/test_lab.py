import json
import logging
import subprocess
import sys

import numpy as np
import pytest

from geomod import InvalidArgument
from geomod.lab import cli
from geomod.lab.config import ExperimentConfig, eps_schedule, load_schema
from geomod.lab.csvio import format_csv, read_csv
from geomod.lab.experiments import BASE_COLUMNS, EXPERIMENTS, run_experiment, validate_rate
from geomod.seeding import derive_seed, mix64

INTERVAL = {"kind": "interval", "lo": [0.0], "hi": [1.0]}
STRIP = {"kind": "box", "lo": [0.0, 0.0], "hi": [1.0, 4.0]}


def _cfg(**kw):
    base = {"domain": INTERVAL, "n": [200, 400], "beta": 0.3, "trials": 2, "seed": 5}
    base.update(kw)
    return ExperimentConfig.from_dict(base)


def test_eps_schedule():
    assert eps_schedule(10_000, 0.3) == pytest.approx(0.0631, abs=5e-5)
    assert eps_schedule(1, 0.7) == 1.0
    with pytest.raises(InvalidArgument):
        eps_schedule(0, 0.3)


@pytest.mark.parametrize("alpha,d,beta,cond,valid", [
    (1.0, 2, 0.3, "I2", True),
    (2.0, 2, 0.3, "I2", True),
    (2.0, 2, 0.4, "I2", False),
    (1.0, 1, 0.6, "I1", True),
    (0.5, 1, 0.5, "I1", False),
    (0.0, 3, 1 / 3, "I2", False),
])
def test_validate_rate(alpha, d, beta, cond, valid):
    check = validate_rate(alpha, d, beta, cond)
    assert check.valid is valid
    assert check.reason


def test_validate_rate_bad_inputs():
    with pytest.raises(ValueError):
        validate_rate(1.0, 4, 0.3, "I1")
    with pytest.raises(ValueError):
        validate_rate(1.0, 2, 0.3, "I3")


@pytest.mark.parametrize("bad", [
    {"domain": INTERVAL, "mystery": 1},
    {"domain": INTERVAL, "n": [100, 100]},
    {"domain": INTERVAL, "n": [200, 100]},
    {"domain": INTERVAL, "beta": 0.0},
    {"domain": INTERVAL, "trials": 0},
    {"domain": INTERVAL, "beta": 0.3, "eps": [0.1]},
    {"domain": INTERVAL, "n": [10, 20, 30], "eps": [0.1, 0.2]},
    {"domain": {"kind": "interval", "lo": [0.0], "hi": [1.0], "extra": 2}},
    {"domain": INTERVAL, "optimizer": "annealing"},
    {"n": [10]},
])
def test_config_rejections(bad):
    with pytest.raises(InvalidArgument):
        ExperimentConfig.from_dict(bad)


def test_schema_ships_with_package():
    schema = load_schema()
    assert schema["additionalProperties"] is False
    assert "domain" in schema["required"]


def test_seed_derivation_reference_values():
    # SplitMix64 reference output for a zero state
    assert mix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF
    assert derive_seed(0, 1) == 0xE220A8397B1DCDAF
    assert derive_seed(7, 0) == mix64(7)
    assert len({derive_seed(42, t) for t in range(1000)}) == 1000


def test_csv_format_roundtrip():
    text = format_csv({"b": 1, "a": [1, 2]}, ["x", "y", "z"],
                      [[1, 0.1, float("nan")], [np.int64(2), np.float64(1 / 3), "s"]])
    lines = text.splitlines()
    assert lines[0] == '# {"a": [1, 2], "b": 1}'
    assert lines[2] == "1,0.1,"
    assert lines[3] == "2,0.3333333333333333,s"
    head, cols, rows = read_csv(text)
    assert head == {"a": [1, 2], "b": 1} and cols == ["x", "y", "z"]
    assert float(rows[1][1]) == 1 / 3


def test_experiment_rows_ordered_and_deterministic():
    cfg = _cfg(experiment="balance", partition={"cuts": [0.3]})
    a = run_experiment(cfg)
    assert a.columns[:5] == BASE_COLUMNS
    keys = [(r[1], r[3]) for r in a.rows]
    assert keys == sorted(keys) and len(keys) == 4
    assert [r[4] for r in a.rows] == [derive_seed(5, t) for t in (0, 1)] * 2
    b = run_experiment(cfg.with_overrides(threads=2))
    assert format_csv({}, a.columns, a.rows) == format_csv({}, b.columns, b.rows)


@pytest.mark.parametrize("name", sorted(EXPERIMENTS))
def test_each_experiment_runs(name):
    extra = {"K_list": [1, 2, 3]} if name == "qstar" else {}
    cfg = _cfg(experiment=name, **extra)
    table = run_experiment(cfg)
    assert table.columns == BASE_COLUMNS + EXPERIMENTS[name][1]
    per_trial = {"qstar": 3, "resolution": 3}.get(name, 1)
    assert len(table.rows) == 2 * 2 * per_trial
    assert table.header["experiment"] == name


def test_balance_identity_columns():
    table = run_experiment(_cfg(experiment="balance", alpha=0.0, partition={"cuts": [0.3]}))
    assert np.all(np.abs(table.column("residual")) < 1e-9)
    assert np.allclose(table.column("deficit_target"), 0.08)


def test_qstar_single_cluster_is_zero():
    table = run_experiment(_cfg(experiment="qstar", K_list=[1, 4]))
    assert np.all(table.where(K=1).column("Q") == 0.0)


def test_consistency_reference_fed_back():
    table = run_experiment(_cfg(experiment="consistency", labels="induced"))
    assert np.all(table.column("overall") == 1.0)
    assert np.all(table.column("min_ratio") == 1.0)
    assert np.all(table.column("method") == "induced")


def test_resolution_unit_lambda_is_plain_modularity():
    cfg = _cfg(experiment="resolution", kappa=1.0, beta_lambda=[0.0], K=2, n=[300], trials=1)
    row = run_experiment(cfg).rows[0]
    assert row[-4] == 1.0
    cons = run_experiment(_cfg(experiment="consistency", K=2, n=[300], trials=1))
    assert row[-1] == pytest.approx(cons.column("Q")[0], abs=1e-12)


def test_rate_warning_does_not_abort(caplog):
    cfg = _cfg(experiment="balance", alpha=2.0, beta=0.9, n=[100], trials=1,
               rate_condition="I2")
    with caplog.at_level(logging.WARNING):
        table = run_experiment(cfg)
    assert len(table.rows) == 1
    assert any("rate condition" in r.message for r in caplog.records)


def test_explicit_eps_list():
    cfg = ExperimentConfig.from_dict({"domain": INTERVAL, "n": [100, 200], "eps": [0.2, 0.1],
                                      "experiment": "perimeter"})
    assert run_experiment(cfg).column("eps").tolist() == [0.2, 0.1]


# ---------------------------------------------------------------------------
# command line

@pytest.fixture
def config_file(tmp_path):
    def write(**kw):
        spec = {"domain": INTERVAL, "n": [300], "beta": 0.3, "seed": 3, "K": 2,
                "partition": {"cuts": [0.5]}}
        spec.update(kw)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(spec))
        return str(path)
    return write


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_sample(config_file, capsys):
    code, out, _ = _run(["--config", config_file(), "sample", "--n", "5"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# ") and lines[1] == "index,x" and len(lines) == 7
    code, again, _ = _run(["sample", "--config", config_file(), "--n", "5"], capsys)
    assert again == out
    _, other, _ = _run(["sample", "--config", config_file(), "--n", "5", "--seed", "4"], capsys)
    assert other != out


def test_cli_graph_and_decompose(config_file, capsys):
    code, out, _ = _run(["--config", config_file(), "graph", "--eps", "0.05"], capsys)
    assert code == 0
    head = json.loads(out.splitlines()[0][2:])
    assert head["n"] == 300 and head["eps"] == 0.05
    assert out.splitlines()[1] == "i,j,weight"
    code, out, _ = _run(["--config", config_file(), "decompose"], capsys)
    head, cols, rows = read_csv(out)
    assert cols == ["n", "eps", "alpha", "K", "Q", "quad", "gtv", "residual"]
    assert abs(float(rows[0][-1])) < 1e-9 and head["seed"] == 3


def test_cli_optimize(config_file, capsys, tmp_path):
    labels = tmp_path / "labels.csv"
    out_path = tmp_path / "opt.csv"
    code, _, _ = _run(["--config", config_file(), "--out", str(out_path), "optimize",
                       "--method", "spectral", "--labels-out", str(labels)], capsys)
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "method,n,eps,alpha,K,Q,moves,seed"
    assert lines[1].startswith("spectral,300,")
    assert labels.read_text().splitlines()[0] == "vertex_index,label"
    assert len(labels.read_text().splitlines()) == 301


def test_cli_transport(config_file, capsys):
    code, out, _ = _run(["--config", config_file(), "transport", "--n", "1000"], capsys)
    head, cols, rows = read_csv(out)
    assert cols == ["n", "seed", "sup", "lil", "tl1_surrogate"]
    assert 0 < float(rows[0][2]) < 0.1
    code, _, err = _run(["--config", config_file(domain=STRIP), "transport"], capsys)
    assert code == 2 and "d = 1" in err


def test_cli_experiment_threads(config_file, capsys):
    path = config_file(experiment="balance", n=[200, 300], trials=3)
    _, one, _ = _run(["--config", path, "experiment", "balance"], capsys)
    _, two, _ = _run(["--config", path, "--threads", "2", "experiment", "balance"], capsys)
    h1, c1, r1 = read_csv(one)
    h2, c2, r2 = read_csv(two)
    assert r1 == r2 and c1 == c2 and h2["threads"] == 2
    assert [(int(r[1]), int(r[3])) for r in r1] == [(200, 0), (200, 1), (200, 2),
                                                    (300, 0), (300, 1), (300, 2)]


def test_cli_errors(config_file, capsys, tmp_path):
    code, _, err = _run(["sample", "--n", "3"], capsys)
    assert code == 2 and "--config" in err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"domain": INTERVAL, "colour": "red"}))
    code, _, err = _run(["--config", str(bad), "sample", "--n", "3"], capsys)
    assert code == 2 and "invalid config" in err
    code, _, err = _run(["--config", str(tmp_path / "missing.json"), "sample"], capsys)
    assert code == 2
    with pytest.raises(SystemExit):
        cli.main(["experiment", "nonsense"])


def test_module_entry_point(config_file):
    proc = subprocess.run([sys.executable, "-m", "geomod", "--config", config_file(),
                           "sample", "--n", "2"], capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[1] == "index,x"
