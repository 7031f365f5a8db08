import numpy as np
import pytest
from hypothesis import given, strategies as st

from echostats.sampling import default_horizon, quasi_uniform_times


def test_range_and_determinism():
    t = quasi_uniform_times(10.0, 1000, seed=3)
    assert np.all((t >= 0) & (t < 10))
    np.testing.assert_array_equal(t, quasi_uniform_times(10.0, 1000, seed=3))
    assert not np.array_equal(t, quasi_uniform_times(10.0, 1000, seed=4))


@given(st.integers(0, 5000), st.integers(1, 500), st.integers(1, 500))
def test_index_ranges_split(start, n1, n2):
    whole = quasi_uniform_times(7.0, n1 + n2, seed=1, start=start)
    a = quasi_uniform_times(7.0, n1, seed=1, start=start)
    b = quasi_uniform_times(7.0, n2, seed=1, start=start + n1)
    np.testing.assert_array_equal(whole, np.concatenate([a, b]))


def test_low_discrepancy():
    u = np.sort(quasi_uniform_times(1.0, 10_000, seed=0))
    star = np.max(np.abs(u - (np.arange(10_000) + 0.5) / 10_000))
    assert star < 5e-4  # a pseudo-random sample would sit near 1 / sqrt(N) = 1e-2


def test_validation_and_horizon():
    with pytest.raises(ValueError):
        quasi_uniform_times(0.0, 10)
    with pytest.raises(ValueError):
        quasi_uniform_times(1.0, 0)
    assert default_horizon(4) == 1e4 and default_horizon(40) == 4e4
