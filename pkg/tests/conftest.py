import pytest

import cornplan as cp

# The shared desk-scale benchmark instance: 50 populations over a 40-week
# horizon, capacity set low enough that a random-in-window baseline wastes
# well over a tenth of the crop.
SEED42_CONFIG = cp.SyntheticConfig(n_populations=50, horizon_days=280,
                                   capacity=2000, rng_seed=42)


@pytest.fixture(scope="session")
def seed42():
    instance, history = cp.generate_instance(SEED42_CONFIG)
    forecast = cp.average_forecast(history, SEED42_CONFIG.horizon_start,
                                   SEED42_CONFIG.horizon_days)
    return SEED42_CONFIG, instance, history, forecast


@pytest.fixture(scope="session")
def seed42_scenario2():
    config = cp.SyntheticConfig(n_populations=50, horizon_days=280,
                                capacity=None, rng_seed=42)
    instance, history = cp.generate_instance(config)
    forecast = cp.average_forecast(history, config.horizon_start, config.horizon_days)
    return config, instance, history, forecast
