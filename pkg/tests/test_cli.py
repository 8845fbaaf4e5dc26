import numpy as np
import pytest

from genphase import (RngStream, forward, load_weights, random_generator,
                      save_weights)
from genphase.cli import main

from test_experiment import QUICK_CONFIG


def test_run_command(tmp_path, capsys):
    cfg = tmp_path / "exp.toml"
    cfg.write_text(QUICK_CONFIG)
    out = tmp_path / "out"
    rc = main(["run", "--config", str(cfg), "--out-dir", str(out)])
    assert rc == 0
    assert (out / "results.csv").exists()
    assert (out / "manifest.json").exists()
    assert "12 trial records" in capsys.readouterr().out


def test_run_command_solver_filter(tmp_path, capsys):
    cfg = tmp_path / "exp.toml"
    cfg.write_text(QUICK_CONFIG)
    out = tmp_path / "out"
    rc = main(["run", "--config", str(cfg), "--out-dir", str(out),
               "--solver", "gd"])
    assert rc == 0
    assert "6 trial records" in capsys.readouterr().out


def test_run_command_missing_config(tmp_path, capsys):
    rc = main(["run", "--config", str(tmp_path / "absent.toml")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_run_command_invalid_config(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("measurements = []\nseeds = [0]\n")
    rc = main(["run", "--config", str(cfg)])
    assert rc == 2


def test_threads_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv("GENPHASE_THREADS", "3")
    cfg = tmp_path / "exp.toml"
    cfg.write_text(QUICK_CONFIG)
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--out-dir", str(out)]) == 0
    assert (out / "results.csv").exists()


def test_project_command(tmp_path, capsys):
    G = random_generator(3, [8], 12, RngStream(2))
    weights = tmp_path / "gen.json"
    save_weights(G, weights)
    target = forward(G, RngStream(3).standard_normal(3))
    vec = tmp_path / "w.txt"
    vec.write_text("\n".join(repr(float(v)) for v in target) + "\n")
    out = tmp_path / "x.txt"
    rc = main(["project", "--weights", str(weights), "--input", str(vec),
               "--output", str(out), "--steps", "800",
               "--step-size", "0.02", "--seed", "5"])
    assert rc == 0
    x = np.array([float(line) for line in out.read_text().splitlines()])
    assert x.shape == (12,)
    assert "residual" in capsys.readouterr().err


def test_train_glo_command(tmp_path, capsys):
    data = np.stack([RngStream(i).standard_normal(10) for i in range(3)])
    npy = tmp_path / "data.npy"
    np.save(npy, data)
    weights_out = tmp_path / "trained.json"
    cfg = tmp_path / "train.toml"
    cfg.write_text(
        "latent_dim = 3\nhidden_dims = [8]\nepochs = 30\n"
        "weight_step = 0.01\nlatent_step = 0.01\nseed = 4\n"
        f'weights_out = "{weights_out}"\n')
    rc = main(["train-glo", "--data", str(npy), "--config", str(cfg)])
    assert rc == 0
    G = load_weights(weights_out)
    assert G.latent_dim == 3 and G.output_dim == 10
    assert "final epoch loss" in capsys.readouterr().out


def test_unknown_solver_choice_rejected(tmp_path):
    cfg = tmp_path / "exp.toml"
    cfg.write_text(QUICK_CONFIG)
    with pytest.raises(SystemExit):
        main(["run", "--config", str(cfg), "--solver", "newton"])
