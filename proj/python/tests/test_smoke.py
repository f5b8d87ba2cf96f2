import itertools
import json
import os
import subprocess

import numpy as np
import pytest

import specdte


def sym(rng, n):
    a = rng.normal(size=(n, n))
    return (a + a.T) / 2


def binary(rng, n, p=0.5):
    a = np.triu((rng.random((n, n)) < p).astype(float))
    return a + np.triu(a, 1).T


def test_eigenvalues_match_numpy():
    rng = np.random.default_rng(1)
    y = sym(rng, 7)
    values, vectors = specdte.eig_sorted(y)
    np.testing.assert_allclose(values, np.sort(np.linalg.eigvalsh(y))[::-1] / 7, atol=1e-12)
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(7), atol=1e-12)


def test_dpo_bounds_contain_enumerated_interval():
    rng = np.random.default_rng(2)
    for _ in range(10):
        y1, y0 = binary(rng, 4), binary(rng, 4)
        a1, a0 = (y1 <= 0.5).astype(float), (y0 <= 0.5).astype(float)
        vals = [np.mean(a1[np.ix_(p, p)] * a0) for p in itertools.permutations(range(4))]
        b = specdte.dpo_bounds(y1, y0, 0.5, 0.5)
        assert b.lower <= min(vals) + 1e-9
        assert max(vals) <= b.upper + 1e-9
        s = specdte.qap_sharp_dpo(a1, a0)
        assert s["min"] == pytest.approx(min(vals))
        assert s["max"] == pytest.approx(max(vals))


def test_stt_recovers_effect_on_generated_experiment():
    g = specdte.random_graph(12, 0.4, 5)
    e = specdte.gen_diffusion(g, 0.2, 0.3, 5, 5)
    assert e["rank_invariant"]
    truth = np.sort((e["y1_star"] - e["y0_star"]).ravel())
    got = np.sort(specdte.stt(e["y1_obs"], e["y0_obs"]).ravel())
    np.testing.assert_allclose(got, truth, atol=1e-8)


def test_hw_gap_and_weights():
    rng = np.random.default_rng(3)
    y1, y0 = sym(rng, 5), sym(rng, 5)
    lhs, rhs = specdte.hw_gap(y1, y0)
    assert lhs <= rhs + 1e-10
    w = specdte.non_extrapolative_weights(y1, y0)
    np.testing.assert_allclose(w["weights"].sum(axis=0), 1, atol=1e-8)
    np.testing.assert_allclose(w["weights"].sum(axis=1), 1, atol=1e-8)
    assert all(b <= a for a, b in zip(w["objective_trace"], w["objective_trace"][1:]))


def test_decomposition_is_doubly_centered():
    rng = np.random.default_rng(4)
    y = sym(rng, 6)
    alpha, eps = specdte.decompose_additive(y)
    np.testing.assert_allclose(eps.sum(axis=0), 0, atol=1e-12)
    np.testing.assert_allclose(alpha[:, None] + alpha[None, :] + eps, y, atol=1e-12)


def test_randomization_p_value_formula():
    rng = np.random.default_rng(5)
    y0 = binary(rng, 10)
    r = specdte.censored_test(y0[:4, :4], y0, 0.4, 49, 11)
    hits = sum(t >= r["statistic"] for t in r["resampled"])
    assert r["p_value"] == (1 + hits) / 50
    assert specdte.censored_test(y0[:4, :4], y0, 0.4, 49, 11)["resampled"] == r["resampled"]


def test_domain_errors_raise():
    with pytest.raises(specdte.Error):
        specdte.dpo_bounds(np.array([[0.0, 1.0], [2.0, 0.0]]), np.zeros((2, 2)), 0, 0)
    with pytest.raises(ValueError):
        specdte.dpo_bounds_hetero(np.eye(2), np.eye(2), 0, 0, mode="sideways")


@pytest.mark.skipif("SPECDTE_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_matches_library_bit_for_bit(tmp_path):
    rng = np.random.default_rng(6)
    y1, y0 = sym(rng, 5), sym(rng, 5)
    np.savetxt(tmp_path / "y1.csv", y1, delimiter=",", fmt="%.17g")
    np.savetxt(tmp_path / "y0.csv", y0, delimiter=",", fmt="%.17g")
    y1 = specdte.read_csv(tmp_path / "y1.csv")
    y0 = specdte.read_csv(tmp_path / "y0.csv")
    out = subprocess.run(
        [os.environ["SPECDTE_CLI"], "dpo", "--y1", "y1.csv", "--y0", "y0.csv", "--t1", "0.1", "--t0", "-0.2"],
        cwd=tmp_path, check=True, capture_output=True, text=True).stdout
    doc = json.loads(out)
    b = specdte.dpo_bounds(y1, y0, 0.1, -0.2)
    assert doc["payload"]["lower"] == b.lower
    assert doc["payload"]["upper"] == b.upper
    assert doc["payload"]["binding_upper"] == b.binding_upper
