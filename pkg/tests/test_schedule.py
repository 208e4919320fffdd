import warnings

import pytest

from splitep.schedule import ParamSchedule, ScheduleError, check_weights


@pytest.mark.parametrize("s", [1.0, 0.9, 0.8, 0.7, 0.6, 0.51])
def test_presets_certified(s):
    sched = ParamSchedule.power_law(s, norm_A=2.0)
    assert sched.certified
    rho, beta, eps, mu = sched.at(0)
    assert (rho, beta, eps, mu) == (1.0, 1.0, 0.0, 0.25)
    assert sched.at(9)[1] == pytest.approx(10 ** -s)
    assert sched.sanity_warnings() == []


@pytest.mark.parametrize("s", [0.5, 0.3, 1.5])
def test_presets_outside_range_uncertified(s):
    assert not ParamSchedule.power_law(s, 1.0).certified


def test_delta():
    sched = ParamSchedule.power_law(0.7, 1.0)
    assert sched.delta(3) == pytest.approx(2 * 4 ** -1.4)
    custom = ParamSchedule(rho=lambda n: 2.0, beta=lambda n: 0.5, eps=lambda n: 0.1,
                           mu=lambda n: 0.5, rho_min=2.0, mu_bounds=(0.5, 1.0))
    assert custom.delta(0) == pytest.approx(2 * 0.5 * 0.1 / 2.0 + 2 * 0.25)


def test_c1_violations():
    base = dict(rho=lambda n: 1.0, beta=lambda n: 1.0, eps=lambda n: 0.0, mu=lambda n: 0.5,
                rho_min=1.0, mu_bounds=(0.5, 1.0))
    with pytest.raises(ScheduleError):
        ParamSchedule(**{**base, "rho": lambda n: 0.5}).at(0)
    with pytest.raises(ScheduleError):
        ParamSchedule(**{**base, "beta": lambda n: 0.0}).at(0)
    with pytest.raises(ScheduleError):
        ParamSchedule(**{**base, "eps": lambda n: -1e-3}).at(0)


def test_c3_violation():
    sched = ParamSchedule.power_law(0.7, norm_A=2.0, mu=0.3)
    with pytest.raises(ScheduleError):
        sched.at(0)


def test_pspm_upper_bound_is_strict():
    ok = ParamSchedule.pspm_power_law(0.7, 1.0, mu=1.9)
    assert ok.at(0)[3] == 1.9
    with pytest.raises(ScheduleError):
        ParamSchedule.pspm_power_law(0.7, 1.0, mu=2.0).at(0)


def test_custom_schedule_warnings():
    sched = ParamSchedule(rho=lambda n: 1.0, beta=lambda n: 0.1, eps=lambda n: 0.0,
                          mu=lambda n: 0.5, rho_min=1.0, mu_bounds=(0.5, 1.0))
    assert not sched.certified
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        msgs = sched.sanity_warnings(1000)
    assert msgs == ["sum beta_n^2 does not look summable"]
    assert len(w) == 1

    fast = ParamSchedule(rho=lambda n: 1.0, beta=lambda n: 2.0 ** -n, eps=lambda n: 0.0,
                         mu=lambda n: 0.5, rho_min=1.0, mu_bounds=(0.5, 1.0))
    with pytest.warns(UserWarning, match="must diverge"):
        fast.sanity_warnings(1000)


def test_weights():
    assert check_weights([0.25, 0.75]) == [0.25, 0.75]
    assert check_weights([1.0]) == [1.0]
    with pytest.raises(ScheduleError):
        check_weights([0.5, 0.6])
    with pytest.raises(ScheduleError):
        check_weights([0.0, 1.0])
    with pytest.raises(ScheduleError):
        check_weights([0.2, 0.8], lo=0.3)
