import numpy as np
import pytest

from choroidseg.errors import ParameterError, UndefinedInputError
from choroidseg.neutrosophic import (
    NeutroConfig,
    NeutrosophicImage,
    alpha_mean,
    local_mean,
    set_entropy,
    to_neutrosophic,
    total_entropy,
)
from choroidseg.scan_io import GrayImage

from conftest import loop_alpha_mean, loop_local_mean, loop_to_neutrosophic


def test_local_mean_constant():
    m = np.full((6, 7), 3.25)
    assert np.allclose(local_mean(m, 5), 3.25)


def test_local_mean_single_cell():
    assert local_mean(np.array([[7.0]]), 3) == pytest.approx(7.0)


def test_local_mean_center_of_ramp():
    m = np.arange(9, dtype=float).reshape(3, 3)
    out = local_mean(m, 3)
    assert out[1, 1] == pytest.approx(4.0)  # (0+1+...+8)/9


def test_local_mean_matches_loop_oracle():
    rng = np.random.default_rng(3)
    for _ in range(10):
        m = rng.uniform(0, 255, size=(rng.integers(1, 12), rng.integers(1, 12)))
        for w in (1, 3, 5):
            assert np.allclose(local_mean(m, w), loop_local_mean(m, w), atol=1e-9)


def test_local_mean_rejects_even_window():
    with pytest.raises(ParameterError):
        local_mean(np.zeros((4, 4)), 4)


def test_to_neutrosophic_constant_image():
    ns = to_neutrosophic(GrayImage(np.full((8, 8), 99.0)))
    assert np.all(ns.T == 0.5)
    assert np.all(ns.F == 0.5)
    assert np.all(ns.I == 0.0)


def test_to_neutrosophic_normalization_endpoints():
    rng = np.random.default_rng(4)
    img = GrayImage(rng.uniform(0, 255, size=(16, 16)))
    ns = to_neutrosophic(img)
    assert ns.T.min() == 0.0 and ns.T.max() == 1.0
    assert ns.I.min() == 0.0 and ns.I.max() == 1.0


def test_to_neutrosophic_matches_loop_oracle():
    # ramp defeats the 5x5 degeneracy of a lone spike
    g = np.linspace(0, 40, 25).reshape(5, 5)
    g[2, 2] = 255.0
    t, i, f = loop_to_neutrosophic(g, window=5)
    ns = to_neutrosophic(GrayImage(g), NeutroConfig(window=5))
    assert np.allclose(ns.T, t, atol=1e-9)
    assert np.allclose(ns.I, i, atol=1e-9)
    assert np.allclose(ns.F, f, atol=1e-9)


def test_truth_falsity_complementary():
    rng = np.random.default_rng(5)
    img = GrayImage(rng.uniform(0, 255, size=(12, 20)))
    ns = to_neutrosophic(img)
    assert np.abs(ns.T + ns.F - 1.0).max() < 1e-12


def test_affine_intensity_invariance():
    rng = np.random.default_rng(6)
    g = rng.uniform(10, 100, size=(14, 14))
    ns1 = to_neutrosophic(GrayImage(g))
    ns2 = to_neutrosophic(GrayImage(2.2 * g + 9.0))
    assert np.allclose(ns1.T, ns2.T, atol=1e-9)
    assert np.allclose(ns1.I, ns2.I, atol=1e-9)
    assert np.allclose(ns1.F, ns2.F, atol=1e-9)


def test_set_entropy_single_bin():
    assert set_entropy(np.full((4, 4), 0.3), bins=10) == 0.0


def test_set_entropy_uniform_bins():
    # one value per bin center: uniform distribution over n bins
    for n in (2, 8, 64):
        values = (np.arange(n) + 0.5) / n
        assert set_entropy(values.reshape(1, -1), bins=n) == pytest.approx(
            np.log(n), abs=1e-9
        )


def test_set_entropy_two_equal_bins():
    m = np.array([0.1] * 4 + [0.9] * 4)
    assert set_entropy(m, bins=10) == pytest.approx(np.log(2), abs=1e-12)


def test_set_entropy_bounds():
    rng = np.random.default_rng(7)
    for _ in range(20):
        m = rng.uniform(0, 1, size=(9, 9))
        e = set_entropy(m, bins=16)
        assert 0.0 <= e <= np.log(16) + 1e-12


def test_set_entropy_empty_input():
    with pytest.raises(UndefinedInputError):
        set_entropy(np.zeros((0,)))


def test_total_entropy_constant_image():
    ns = to_neutrosophic(GrayImage(np.full((6, 6), 42.0)))
    assert total_entropy(ns, bins=32) == 0.0


def test_total_entropy_is_sum():
    rng = np.random.default_rng(8)
    ns = to_neutrosophic(GrayImage(rng.uniform(0, 255, size=(10, 10))))
    total = total_entropy(ns, bins=64)
    parts = sum(set_entropy(m, bins=64) for m in (ns.T, ns.I, ns.F))
    assert total == parts


def test_total_entropy_matches_loop_oracle():
    g = np.linspace(0, 40, 25).reshape(5, 5)
    g[2, 2] = 255.0
    t, i, f = loop_to_neutrosophic(g)
    ns = to_neutrosophic(GrayImage(g))
    expected = sum(set_entropy(m, bins=256) for m in (t, i, f))
    assert total_entropy(ns, bins=256) == pytest.approx(expected, abs=1e-9)


def test_alpha_mean_identity_when_alpha_above_max_i():
    rng = np.random.default_rng(9)
    ns = to_neutrosophic(GrayImage(rng.uniform(0, 255, size=(9, 9))))
    scaled = NeutrosophicImage(T=ns.T, I=ns.I * 0.5, F=ns.F)  # max I = 0.5
    out = alpha_mean(scaled, NeutroConfig(alpha=0.85))
    assert np.array_equal(out.T, scaled.T)
    assert np.array_equal(out.F, scaled.F)


def test_alpha_mean_constant_truth_gives_zero_indeterminacy():
    ns = NeutrosophicImage(
        T=np.full((7, 7), 0.4), I=np.random.default_rng(10).uniform(0, 1, (7, 7)),
        F=np.full((7, 7), 0.6),
    )
    out = alpha_mean(ns, NeutroConfig(alpha=0.5))
    assert np.all(out.I == 0.0)


def test_alpha_mean_replaces_only_high_indeterminacy_cells():
    g = np.zeros((5, 5))
    g[2, 2] = 255.0
    img = GrayImage(g)
    ns = to_neutrosophic(img)
    assert (ns.I >= 0.5).sum() == 1  # lone spike carries all indeterminacy
    out = alpha_mean(ns, NeutroConfig(alpha=0.5))
    t_bar = local_mean(ns.T, 5)
    expected_t = ns.T.copy()
    expected_t[2, 2] = t_bar[2, 2]
    assert np.array_equal(out.T, expected_t)


def test_alpha_mean_matches_loop_oracle():
    g = np.linspace(0, 60, 25).reshape(5, 5)
    g[1, 3] = 255.0
    ns = to_neutrosophic(GrayImage(g))
    t_a, i_a, f_a = loop_alpha_mean(ns.T, ns.I, ns.F, window=5, alpha=0.5)
    out = alpha_mean(ns, NeutroConfig(alpha=0.5))
    assert np.allclose(out.T, t_a, atol=1e-9)
    assert np.allclose(out.I, i_a, atol=1e-9)
    assert np.allclose(out.F, f_a, atol=1e-9)


def test_alpha_mean_stays_in_unit_interval():
    rng = np.random.default_rng(11)
    for _ in range(5):
        ns = to_neutrosophic(GrayImage(rng.uniform(0, 255, size=(11, 13))))
        out = alpha_mean(ns, NeutroConfig(alpha=0.3))
        for m in (out.T, out.I, out.F):
            assert m.min() >= 0.0 and m.max() <= 1.0


def test_neutro_config_validation():
    with pytest.raises(ParameterError):
        NeutroConfig(window=4)
    with pytest.raises(ParameterError):
        NeutroConfig(alpha=1.5)
