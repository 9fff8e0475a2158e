import numpy as np
import pytest

from smes import (
    IntegratorConfig,
    build_system,
    eigenvalues,
    fem_integrate,
    rk_reference_integrate,
    smfe_integrate,
)
from smes.errors import ConfigError
from smes.systems import resolve_params, system_names


def test_registry_names():
    assert system_names() == ["adaptive-control", "adaptive-control-reduced", "linear-block", "scalar-sps"]


def test_adaptive_defaults():
    built = build_system("adaptive-control")
    assert built.system.dim == 3
    assert built.params == {"a": -1.0, "epsilon": 1e-6}
    assert built.system.epsilon == 1e-6
    np.testing.assert_array_equal(built.initial_state, [0.0, 0.0, 1.0])
    assert built.t_end == 5.0
    assert built.system.column_labels() == ["y", "k", "z"]
    assert built.reduced is not None and built.linear is None


def test_adaptive_reduced_entry():
    built = build_system("adaptive-control-reduced")
    assert built.system.dim == 2
    np.testing.assert_allclose(built.system.rhs(np.array([1.0, 2.0]), None, 0.0), [-3.0, 1.0])


def test_scalar_sps_eigenvalues():
    built = build_system("scalar-sps", dict(a=-1, b=0, c=0, d=-1, epsilon=0.01))
    assert sorted(e.real for e in eigenvalues(built.linear.full_matrix())) == pytest.approx([-100.0, -1.0])
    assert built.system.dim == 2


def test_unknown_system_and_param():
    with pytest.raises(ConfigError, match="valid names"):
        build_system("unknown-system")
    with pytest.raises(ConfigError, match="valid"):
        build_system("adaptive-control", {"b": 1.0})


def test_bad_parameter_value():
    with pytest.raises(ConfigError):
        build_system("linear-block", {"a22": 0.0})
    with pytest.raises(ConfigError):
        build_system("adaptive-control", {"epsilon": -1.0})


def test_resolve_params_merges_defaults():
    assert resolve_params("scalar-sps", {"b": 2.0}) == {"a": -1.0, "b": 2.0, "c": 0.0, "d": -1.0,
                                                        "epsilon": 0.01}


def test_linear_block_matrix_params():
    built = build_system("linear-block", {
        "a11": [[-1.0, 0.2], [0.0, -2.0]], "a12": [[1.0], [0.5]],
        "a21": [[0.3, 0.1]], "a22": [[-4.0]], "epsilon": 1e-2,
    })
    assert (built.linear.n, built.linear.m) == (2, 1)
    assert built.system.dim == 3


@pytest.mark.parametrize("method", ["fem", "smfe"])
def test_linear_block_equals_scalar_sps_bitwise(method):
    coeffs = dict(a=-1.0, b=1.0, c=1.0, d=-2.0, epsilon=0.01)
    lin = build_system("linear-block", {"a11": -1.0, "a12": 1.0, "a21": 1.0, "a22": -2.0, "epsilon": 0.01})
    sca = build_system("scalar-sps", coeffs)
    if method == "fem":
        cfg = IntegratorConfig(0.005, 1.0, [1.0, 1.0])
        a, b = fem_integrate(lin.system, cfg), fem_integrate(sca.system, cfg)
    else:
        cfg = IntegratorConfig(0.1, 1.0, [1.0, 1.0], n_small=30)
        a, b = smfe_integrate(lin.system, cfg), smfe_integrate(sca.system, cfg)
    assert a.states.tobytes() == b.states.tobytes()


def test_adaptive_full_converges_linearly_to_reduced():
    t_end = 1.0
    reduced = build_system("adaptive-control-reduced")
    ref = rk_reference_integrate(reduced.system, t_end, 1e-3, [1.0, 0.0]).final_state
    gaps = []
    for eps in (1e-4, 1e-5, 1e-6):
        full = build_system("adaptive-control", {"epsilon": eps})
        h = eps / 2
        traj = rk_reference_integrate(full.system, t_end, h, [1.0, 0.0, 0.0],
                                      record_every=int(round(0.1 / h)))
        gaps.append(np.linalg.norm(traj.final_state[:2] - ref))
    for big, small in zip(gaps, gaps[1:]):
        assert 8 <= big / small <= 12
