import pytest

from logweights import (
    AssociatedWeightFunction,
    LogPowerWeight,
    build_associated_matrix,
    build_counterexample,
    make_family,
)

HORIZON = 512

BATTERY_SPECS = [
    ("gevrey", {"s": 1}),
    ("gevrey", {"s": 2}),
    ("q_gevrey", {"q": 2, "n": 2}),
    ("q_gevrey", {"q": 3, "n": 3}),
    ("double_exp", {}),
]


@pytest.fixture(scope="session")
def gevrey1():
    return make_family("gevrey", {"s": 1}, HORIZON)


@pytest.fixture(scope="session")
def gevrey2():
    return make_family("gevrey", {"s": 2}, HORIZON)


@pytest.fixture(scope="session")
def qgev22():
    return make_family("q_gevrey", {"q": 2, "n": 2}, HORIZON)


@pytest.fixture(scope="session")
def qgev33():
    return make_family("q_gevrey", {"q": 3, "n": 3}, HORIZON)


@pytest.fixture(scope="session")
def dexp():
    return make_family("double_exp", {}, HORIZON)


@pytest.fixture(scope="session")
def staircase():
    return build_counterexample(8)


@pytest.fixture(scope="session")
def battery(gevrey1, gevrey2, qgev22, qgev33, dexp):
    return [gevrey1, gevrey2, qgev22, qgev33, dexp]


@pytest.fixture(scope="session")
def battery_with_staircase(battery, staircase):
    return battery + [staircase[1]]


@pytest.fixture(scope="session")
def staircase_matrix(staircase):
    _, seq = staircase
    return build_associated_matrix(AssociatedWeightFunction(seq))


@pytest.fixture(scope="session")
def logpow2_matrix():
    return build_associated_matrix(LogPowerWeight(2.0), horizon=HORIZON)
