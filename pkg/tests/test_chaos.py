import numpy as np
import pytest

from dcskcd.chaos import ChaosConfig, carrier_batch, generate, initial_state, seed_to_unit
from dcskcd.errors import ConfigurationError, InvalidSeedError

G = 0x9E3779B97F4A7C15


def seed_for_unit(u_bits):
    """Seed whose hashed state is exactly ``u_bits * 2**-53``."""
    return ((u_bits << 11) * pow(G, -1, 2**64)) % 2**64


@pytest.mark.parametrize("kind", ["chebyshev2", "logistic"])
def test_long_run_moments(kind):
    seq = generate(ChaosConfig(kind, seed=12345), 10**5, target_energy=1.0)
    assert abs(seq.samples.mean()) < 0.01
    assert abs(seq.energy - 1.0) < 0.01
    assert np.all(np.isfinite(seq.samples))


def test_target_energy_scales():
    seq = generate(ChaosConfig(seed=7), 10**5, target_energy=3.5)
    assert abs(seq.energy / 3.5 - 1.0) < 0.01


def test_deterministic():
    a = generate(ChaosConfig(seed=99), 500)
    b = generate(ChaosConfig(seed=99), 500)
    assert np.array_equal(a.samples, b.samples)
    c = generate(ChaosConfig(seed=100), 500)
    assert not np.array_equal(a.samples, c.samples)


def test_no_repeated_consecutive_samples():
    s = generate(ChaosConfig(seed=2024), 10**4).samples
    assert np.all(np.diff(s) != 0)


def test_seed_zero_is_degenerate():
    # u = 0 gives x = -1 for Chebyshev and x = 0 for the logistic map
    for kind in ("chebyshev2", "logistic"):
        with pytest.raises(InvalidSeedError):
            generate(ChaosConfig(kind, seed=0), 10)


def test_logistic_fixed_point_seed():
    seed = seed_for_unit(3 << 51)   # u = 3/4
    assert seed_to_unit(seed) == 0.75
    assert initial_state("logistic", seed) == 0.75
    with pytest.raises(InvalidSeedError):
        generate(ChaosConfig("logistic", seed=seed, burn_in=0), 10)


def test_chebyshev_fixed_point_seed():
    seed = seed_for_unit(3 << 51)   # x = 2u - 1 = 1/2
    with pytest.raises(InvalidSeedError):
        generate(ChaosConfig("chebyshev2", seed=seed), 10)


def test_bad_arguments():
    with pytest.raises(ConfigurationError):
        ChaosConfig("tent")
    with pytest.raises(ConfigurationError):
        ChaosConfig(burn_in=-1)
    with pytest.raises(ConfigurationError):
        generate(ChaosConfig(), 0)
    with pytest.raises(ConfigurationError):
        generate(ChaosConfig(), 10, target_energy=0.0)


@pytest.mark.parametrize("kind", ["chebyshev2", "logistic"])
def test_carrier_batch_energy(kind):
    rng = np.random.default_rng(1)
    c = carrier_batch(rng, 4000, 32, 2.0, kind)
    assert c.shape == (4000, 32)
    assert abs(np.mean(c**2) / 2.0 - 1) < 0.01
    assert abs(c.mean()) < 0.02
