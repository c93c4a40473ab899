import os
import subprocess

import numpy as np
import pytest

import robgxe


@pytest.fixture(scope="module")
def data():
    return robgxe.simulate(n=120, p=12, seed=5)


def test_simulate_shapes(data):
    assert (data.n, data.p, data.q, data.m) == (120, 12, 4, 3)
    assert data.X.shape == (120, 12)
    assert data.truth is not None
    assert len(data.truth.main_idx) == 8
    assert len(data.truth.int_idx) == 12


def test_simulate_is_deterministic(data):
    again = robgxe.simulate(n=120, p=12, seed=5)
    np.testing.assert_array_equal(data.y, again.y)
    other = robgxe.simulate(n=120, p=12, seed=5, replicate=1)
    assert not np.array_equal(data.y, other.y)


def test_fit_summary(data):
    gene = data.truth.main_idx[0]
    s = robgxe.fit(data, gene, method="ladblss", iters=1500, burnin=500, chains=2)
    assert s.ok and s.gene == gene
    assert s.retained == 1000 and s.chains == 2
    assert s.main.lower95 <= s.main.median <= s.main.upper95
    assert 0.0 <= s.main.inclusion <= 1.0
    assert len(s.effects) == 3 + 4 + 1 + 4


def test_scan_and_auc(data):
    genes = robgxe.scan(data, method="blss", iters=600, burnin=300, threads=2)
    assert len(genes) == data.p
    again = robgxe.scan(data, method="blss", iters=600, burnin=300, threads=1)
    assert [g.main.median for g in genes] == [g.main.median for g in again]
    for category in ("pooled", "main", "interaction"):
        assert 0.0 <= robgxe.auc(genes, data.truth, category) <= 1.0
    with pytest.raises(robgxe.ConfigError):
        robgxe.auc(genes, data.truth, "bogus")


def test_bad_method(data):
    with pytest.raises(robgxe.Error):
        robgxe.fit(data, 0, method="ols")


def test_psrf_agreeing_chains():
    rng = np.random.default_rng(3)
    draws = rng.standard_normal((4, 2000))
    r, upper = robgxe.psrf(draws.tolist())
    assert 0.99 < r < 1.02
    assert upper >= r


def test_inverse_gaussian_moments():
    x = robgxe.sample_inverse_gaussian(2.0, 3.0, 200000, seed=9)
    assert abs(x.mean() - 2.0) < 0.02
    assert abs(x.var() - 8.0 / 3.0) < 0.1
    with pytest.raises(robgxe.DomainError):
        robgxe.sample_inverse_gaussian(-1.0, 1.0, 1)


def test_dataset_round_trip(data, tmp_path):
    path = tmp_path / "d.csv"
    robgxe.write_dataset(data, path)
    back = robgxe.load_dataset(path)
    np.testing.assert_allclose(back.y, data.y, rtol=1e-12)
    np.testing.assert_allclose(back.X, data.X, rtol=1e-12)


@pytest.mark.skipif("ROBGXE_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_pipeline(tmp_path):
    cli = os.environ["ROBGXE_CLI"]
    run = lambda *args: subprocess.run([cli, *args], capture_output=True, text=True)
    assert run("simulate", "--n", "80", "--p", "10", "--seed", "2", "--out", str(tmp_path / "sim")).returncode == 0
    r = run("scan", "--method", "bl", "--data", str(tmp_path / "sim" / "data.csv"), "--iters", "400",
            "--burnin", "200", "--quiet", "--out", str(tmp_path / "scan"))
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "scan" / "results.csv").exists()
    assert run("scan", "--method", "nope").returncode == 2
