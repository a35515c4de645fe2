import itertools

import numpy as np
import pytest

import atomsched as a
from atomsched.errors import InfeasibleFlowError, NotIntegralError

from conftest import random_relaxed_flows


def test_load_profile_one_hot_dish_washer(dish_washer_instance):
    flows = np.zeros((1, 24))
    flows[0, 3] = 1.0
    loads = a.load_profile(dish_washer_instance, flows)
    expected = np.zeros(24)
    expected[3] = expected[4] = 0.72
    assert np.allclose(loads, expected, atol=1e-15)


def test_load_profile_half_and_half(dish_washer_instance):
    flows = np.zeros((1, 24))
    flows[0, 0] = flows[0, 1] = 0.5
    loads = a.load_profile(dish_washer_instance, flows)
    assert loads[0] == pytest.approx(0.36, abs=1e-15)
    assert loads[1] == pytest.approx(0.72, abs=1e-15)
    assert loads[2] == pytest.approx(0.36, abs=1e-15)
    assert np.all(loads[3:] == 0.0)


def test_load_profile_disjoint_window_pair(two_window_instance):
    flows = a.schedule_to_flows(two_window_instance, (0, 9))
    loads = a.load_profile(two_window_instance, flows)
    expected = np.zeros(24)
    expected[[0, 1, 9, 10, 11]] = 1.0
    assert np.array_equal(loads, expected)


def test_load_profile_from_schedule_wraparound(phev_instance):
    loads = a.load_profile_from_schedule(phev_instance, (23,))
    assert loads[23] == loads[0] == loads[1] == 3.3
    assert np.all(loads[2:23] == 0.0)


def test_load_profile_superposition(two_tier_coefficients):
    inst = a.ProblemInstance(
        24,
        [a.catalog_appliance("dish_washer"), a.catalog_appliance("clothes_dryer")],
        two_tier_coefficients,
    )
    loads = a.load_profile_from_schedule(inst, (0, 0))
    assert loads[0] == pytest.approx(1.345, abs=1e-12)
    assert loads[1] == pytest.approx(1.345, abs=1e-12)
    assert loads[2] == pytest.approx(0.625, abs=1e-12)
    assert loads[3] == pytest.approx(0.625, abs=1e-12)
    assert np.all(loads[4:] == 0.0)


def test_schedule_round_trip(phev_instance, two_tier_coefficients):
    two = a.ProblemInstance(
        24,
        [a.catalog_appliance("phev", "p0"), a.catalog_appliance("phev", "p1")],
        two_tier_coefficients,
    )
    flows = a.schedule_to_flows(two, (22, 0))
    assert flows[0, 22] == 1.0 and flows[1, 0] == 1.0
    assert flows.sum() == 2.0
    assert a.flows_to_schedule(two, flows) == (22, 0)
    for s in a.feasible_starts(two.appliances[0], 24):
        assert a.flows_to_schedule(two, a.schedule_to_flows(two, (s, 1))) == (s, 1)


def test_schedule_to_flows_rejects_infeasible_start(dish_washer_instance):
    with pytest.raises(InfeasibleFlowError):
        a.schedule_to_flows(dish_washer_instance, (23,))  # start set is 0..22


def test_flows_to_schedule_fractional_raises(dish_washer_instance):
    flows = np.zeros((1, 24))
    flows[0, 0] = flows[0, 1] = 0.5
    with pytest.raises(NotIntegralError) as info:
        a.flows_to_schedule(dish_washer_instance, flows, integral_tol=1e-6)
    assert info.value.user == 0


def test_flows_to_schedule_threshold_boundary(dish_washer_instance):
    flows = np.zeros((1, 24))
    flows[0, 5] = 0.9999999
    flows[0, 6] = 1e-7
    assert a.flows_to_schedule(dish_washer_instance, flows, integral_tol=1e-6) == (5,)


def test_validate_flows_rejections(dish_washer_instance):
    flows = np.zeros((1, 24))
    flows[0, 0] = 0.9  # row sum != 1
    with pytest.raises(InfeasibleFlowError):
        a.validate_flows(dish_washer_instance, flows)
    flows = np.zeros((1, 24))
    flows[0, 23] = 1.0  # outside the start set
    with pytest.raises(InfeasibleFlowError):
        a.validate_flows(dish_washer_instance, flows)
    flows = np.zeros((2, 24))
    with pytest.raises(InfeasibleFlowError):
        a.validate_flows(dish_washer_instance, flows)  # wrong shape
    boolean_bad = np.zeros((1, 24))
    boolean_bad[0, 0] = boolean_bad[0, 1] = 0.5
    with pytest.raises(InfeasibleFlowError):
        a.validate_flows(dish_washer_instance, boolean_bad, boolean=True)


def test_energy_conservation_random_flows():
    rng = np.random.default_rng(7)
    for seed in (1, 2, 3):
        inst = a.generate_instance(4, seed)
        total = a.instance_total_energy(inst)
        for _ in range(50):
            flows = random_relaxed_flows(inst, rng)
            loads = a.load_profile(inst, flows)
            assert abs(loads.sum() - total) <= 1e-9


def test_load_profile_linearity():
    rng = np.random.default_rng(11)
    inst = a.generate_instance(3, 5)
    for _ in range(25):
        f = random_relaxed_flows(inst, rng)
        g = random_relaxed_flows(inst, rng)
        lam = float(rng.uniform())
        mixed = a.load_profile(inst, lam * f + (1 - lam) * g)
        combo = lam * a.load_profile(inst, f) + (1 - lam) * a.load_profile(inst, g)
        assert np.allclose(mixed, combo, atol=1e-12)


def test_schedule_and_flow_paths_agree_exhaustively(two_tier_coefficients):
    appliances = [
        a.Appliance.constant("x", 0, 5, 2, 1.0),
        a.Appliance.constant("y", 9, 14, 3, 1.0),
        a.Appliance.constant("z", 20, 26, 2, 0.5),
    ]
    inst = a.ProblemInstance(24, appliances, two_tier_coefficients)
    for schedule in itertools.product(*a.start_sets(inst)):
        direct = a.load_profile_from_schedule(inst, schedule)
        via_flows = a.load_profile(inst, a.schedule_to_flows(inst, schedule))
        assert np.array_equal(direct, via_flows)
