import numpy as np
import pytest

from qca1d import RuleTable, make_family


def identity_rule(tol=1e-9):
    """q=2, k=2 rule copying the second cell: f(i|i1 i2) = delta(i, i2)."""
    amps = np.zeros((4, 2), dtype=complex)
    for idx, (i1, i2) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        amps[idx, i2] = 1.0
    return RuleTable(2, 2, amps, tol)


F21_SAMPLE = {"alpha": 0.3, "beta": 1.1, "theta": 0.7, "phi1": 0.2, "phi2": 2.0, "rho": 1.5}
F21_00_SAMPLE = {"alpha": 0.4, "beta": 0.9, "theta": np.pi / 3, "phi1": 0.1, "phi3": 1.7,
                 "rho": 2.0}


@pytest.fixture
def ident():
    return identity_rule()


@pytest.fixture
def f21():
    return make_family("f21", F21_SAMPLE)


@pytest.fixture
def f21_00():
    return make_family("f21_00", F21_00_SAMPLE)
