import numpy as np
import pytest

import atomsched as a


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT-compile (or load the on-disk cache) before any timed test runs
    inst = a.ProblemInstance(
        24, [a.catalog_appliance("dish_washer")], a.default_cost_coefficients()
    )
    a.brute_force(inst, a.ObjectiveKind.COST, workers=1)
    a.brute_force(inst, a.ObjectiveKind.PAR, workers=1)


@pytest.fixture
def two_tier_coefficients():
    return a.default_cost_coefficients(24)


@pytest.fixture
def dish_washer_instance(two_tier_coefficients):
    return a.ProblemInstance(
        24, [a.catalog_appliance("dish_washer")], two_tier_coefficients
    )


@pytest.fixture
def phev_instance(two_tier_coefficients):
    return a.ProblemInstance(24, [a.catalog_appliance("phev")], two_tier_coefficients)


@pytest.fixture
def two_window_instance(two_tier_coefficients):
    """Two unit-level appliances in disjoint windows (5 and 4 feasible starts)."""
    first = a.Appliance.constant("morning", 0, 5, 2, 1.0)
    second = a.Appliance.constant("midday", 9, 14, 3, 1.0)
    return a.ProblemInstance(24, [first, second], two_tier_coefficients)


def random_relaxed_flows(instance, rng):
    """Random point of the relaxed polytope: Dirichlet mass on each start set."""
    flows = np.zeros((instance.n_users, instance.horizon))
    for n, starts in enumerate(a.start_sets(instance)):
        flows[n, list(starts)] = rng.dirichlet(np.ones(len(starts)))
    return flows
