import numpy as np
import pytest

import cornplan as cp
from helpers import constant_forecast, tiny_instance


@pytest.fixture
def flat30():
    return constant_forecast(30, 10.0)


def test_well_formed_instance_has_no_violations(flat30):
    instance = tiny_instance([(1, 5), (3, 8)], [40.0, 60.0], [100, 200], 30)
    assert cp.validate_instance(instance, flat30) == []


def test_inverted_window_reported(flat30):
    instance = tiny_instance([(6, 5)], [40.0], [100], 30)
    violations = cp.validate_instance(instance, flat30)
    assert len(violations) == 1
    assert "window inverted" in violations[0]


def test_unharvestable_from_late_day(flat30):
    # From day 25 the forecast supplies 6 * 10 = 60 GDUs; 100 is unreachable.
    instance = tiny_instance([(1, 25)], [100.0], [100], 30)
    violations = cp.validate_instance(instance, flat30)
    assert len(violations) == 1
    assert "unharvestable" in violations[0]


def test_boundary_requirement_also_unharvestable(flat30):
    # Exactly 60 GDUs remain from day 25; accumulation must strictly exceed
    # the requirement, so 60.0 is still a violation.
    instance = tiny_instance([(1, 25)], [60.0], [100], 30)
    assert len(cp.validate_instance(instance, flat30)) == 1


def test_various_violations(flat30):
    populations = (
        cp.SeedPopulation("a", 0, 1, 5, 40.0, 100),
        cp.SeedPopulation("a", 0, 1, 5, 40.0, 100),        # duplicate id
        cp.SeedPopulation("b", 1, 1, 5, 40.0, 100),        # wrong site
        cp.SeedPopulation("c", 0, 0, 5, 40.0, 100),        # early_day out of range
        cp.SeedPopulation("d", 0, 1, 5, -3.0, 100),        # nonpositive GDUs
        cp.SeedPopulation("e", 0, 1, 5, 40.0, -1),         # negative quantity
        cp.SeedPopulation("f", 0, 1, 5, 40.0, 100, 31),    # original_day out of range
    )
    instance = cp.Instance(populations, horizon_days=30, capacity=100, site=0)
    violations = cp.validate_instance(instance, flat30)
    for needle in ("duplicate id", "site 1", "early_day 0", "required_gdu",
                   "harvest_qty", "original_day 31"):
        assert any(needle in v for v in violations), needle


def test_validation_is_order_stable(flat30):
    instance = tiny_instance([(6, 5), (1, 25)], [40.0, 100.0], [100, 100], 30)
    first = cp.validate_instance(instance, flat30)
    second = cp.validate_instance(instance, flat30)
    assert first == second


def test_forecast_must_cover_horizon():
    instance = tiny_instance([(1, 5)], [40.0], [100], 30)
    short = constant_forecast(10, 10.0)
    violations = cp.validate_instance(instance, short)
    assert any("forecast covers 10 days" in v for v in violations)


def test_empty_instance_flagged(flat30):
    instance = cp.Instance((), horizon_days=30, capacity=100, site=0)
    assert any("no populations" in v for v in cp.validate_instance(instance, flat30))


def test_schedule_windows_check():
    instance = tiny_instance([(1, 5), (3, 8)], [40.0, 60.0], [100, 200], 30)
    assert cp.schedule_in_windows(cp.Schedule((2, 8)), instance)
    assert not cp.schedule_in_windows(cp.Schedule((2, 9)), instance)
    assert not cp.schedule_in_windows(cp.Schedule((2,)), instance)


def test_schedule_coerces_days():
    schedule = cp.Schedule(np.array([3, 4], dtype=np.int64))
    assert schedule.days == (3, 4)
    assert all(isinstance(d, int) for d in schedule.days)


def test_weekly_harvest_type_invariants():
    harvest = cp.WeeklyHarvest((10, 0, 20), first_week=5)
    assert harvest.weeks == 3
    with pytest.raises(ValueError):
        cp.WeeklyHarvest((), first_week=1)
    with pytest.raises(ValueError):
        cp.WeeklyHarvest((0, 10), first_week=1)
    with pytest.raises(ValueError):
        cp.WeeklyHarvest((10, 0), first_week=1)
    with pytest.raises(ValueError):
        cp.WeeklyHarvest((10, -1, 20), first_week=1)


def test_fingerprint_tracks_content():
    a = tiny_instance([(1, 5)], [40.0], [100], 30)
    b = tiny_instance([(1, 5)], [40.0], [100], 30)
    c = tiny_instance([(1, 5)], [41.0], [100], 30)
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != c.fingerprint()
