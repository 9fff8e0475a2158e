import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from smes import Trajectory, align_and_mse
from smes.errors import ConfigError, DimensionError

LABELS = ("y", "k", "z")


def _traj(times, states):
    return Trajectory(times, states, 0, "test", LABELS)


def test_self_comparison_is_zero():
    t = np.linspace(0, 1, 11)
    traj = _traj(t, np.random.default_rng(0).standard_normal((11, 3)))
    res = align_and_mse(traj, traj, ("y", "z"))
    assert res.mse == 0.0 and res.max_abs_error == 0.0
    assert res.samples_used == 11 and res.components == (0, 2)


@pytest.mark.parametrize("samples", [2, 7, 51])
def test_constant_offset_on_one_component(samples):
    t = np.linspace(0, 5, samples)
    base = np.column_stack([np.sin(t), t, np.cos(t)])
    shifted = base.copy()
    shifted[:, 0] += 0.1
    res = align_and_mse(_traj(t, shifted), _traj(t, base), ("y", "z"))
    assert res.mse == pytest.approx(0.005, rel=1e-12)
    assert res.max_abs_error == pytest.approx(0.1, rel=1e-12)


def test_linear_reference_interpolates_exactly():
    coarse = np.linspace(0, 1, 11)
    fine = np.linspace(0, 1, 101)
    f = lambda t: np.column_stack([2 * t + 1, -t, 0.5 * t])
    res = align_and_mse(_traj(coarse, f(coarse)), _traj(fine, f(fine)), (0, 1, 2))
    assert res.mse <= 1e-30


def test_coverage_violation():
    a = _traj([0.0, 2.0], np.zeros((2, 3)))
    b = _traj([0.0, 1.0], np.zeros((2, 3)))
    with pytest.raises(ConfigError, match="covers"):
        align_and_mse(a, b)
    # rounding-level overshoot is tolerated
    c = _traj([0.0, 1.0 + 1e-15], np.zeros((2, 3)))
    assert align_and_mse(c, b).mse == 0.0


def test_bad_components():
    a = _traj([0.0, 1.0], np.zeros((2, 3)))
    with pytest.raises(DimensionError):
        align_and_mse(a, a, ("w",))
    with pytest.raises(DimensionError):
        align_and_mse(a, a, (5,))
    with pytest.raises(ConfigError):
        align_and_mse(a, a, ())


grids = arrays(np.float64, (12, 3), elements=st.floats(-100, 100))


@settings(max_examples=60, deadline=None)
@given(grids, grids)
def test_symmetric_on_common_grid(x, y):
    t = np.arange(12.0)
    a, b = _traj(t, x), _traj(t, y)
    assert align_and_mse(a, b, (0, 2)).mse == pytest.approx(align_and_mse(b, a, (0, 2)).mse, rel=1e-14, abs=0)


@settings(max_examples=60, deadline=None)
@given(grids, grids)
def test_component_additivity(x, y):
    t = np.arange(12.0)
    a, b = _traj(t, x), _traj(t, y)
    both = align_and_mse(a, b, ("y", "z")).mse
    split = (align_and_mse(a, b, ("y",)).mse + align_and_mse(a, b, ("z",)).mse) / 2
    assert both == pytest.approx(split, rel=1e-12, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(grids, grids)
def test_mse_bounded_by_max_error(x, y):
    t = np.arange(12.0)
    res = align_and_mse(_traj(t, x), _traj(t, y), (0, 1, 2))
    assert res.mse <= res.max_abs_error ** 2 * (1 + 1e-12)
