import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_stable_sps
from smes import (
    ConvergenceError,
    LinearSps,
    SeparationError,
    UnsupportedSizeError,
    block_triangularize,
    coupling_series_l,
    eigenvalues,
    refine_l,
    split_spectrum,
)
from smes.errors import ConfigError
from smes.spectral import decoupling_residual

# small root of 0.1 L^2 - 1.9 L - 1 = 0
L_EXACT = (1.9 - np.sqrt(1.9 ** 2 + 0.4)) / 0.2
SLOW, FAST = (-21 + np.sqrt(21 ** 2 - 40)) / 2, (-21 - np.sqrt(21 ** 2 - 40)) / 2


def _sps(a11=-1.0, a12=1.0, a21=1.0, a22=-2.0, eps=0.1):
    return LinearSps([[a11]], [[a12]], [[a21]], [[a22]], eps)


def test_oracle_constants():
    assert L_EXACT == pytest.approx(-0.51249, abs=5e-6)
    assert SLOW == pytest.approx(-0.48751, abs=5e-6)
    assert FAST == pytest.approx(-20.51249, abs=5e-6)


def test_series_l_examples():
    assert coupling_series_l(_sps(a21=0.0)).l_matrix[0, 0] == 0.0
    assert coupling_series_l(_sps(a21=0.0)).residual_norm == 0.0
    assert coupling_series_l(_sps(a22=-1.0)).l_matrix[0, 0] == pytest.approx(-1.0, rel=1e-15)
    res = coupling_series_l(_sps())
    assert res.l_matrix[0, 0] == pytest.approx(-0.5125, rel=1e-14)
    assert res.method == "series-order-1"


def test_refine_l_matches_quadratic_root():
    res = refine_l(_sps())
    assert res.l_matrix[0, 0] == pytest.approx(L_EXACT, rel=1e-13)
    assert res.residual_norm <= 1e-14
    assert res.method == "fixed-point"


def test_refine_l_zero_coupling_exact():
    res = refine_l(_sps(a21=0.0))
    assert res.l_matrix[0, 0] == 0.0 and res.residual_norm == 0.0


def test_series_start_needs_fewer_iterations():
    assert refine_l(_sps(), start="series").iterations < refine_l(_sps(), start="zero").iterations


def test_refine_l_divergence_raises():
    with pytest.raises(ConvergenceError):
        refine_l(_sps(a11=50.0, a12=50.0, a21=50.0, a22=-0.1, eps=0.5))


def test_singular_a22_rejected():
    with pytest.raises(ConfigError):
        LinearSps([[-1.0]], [[1.0]], [[1.0]], [[0.0]], 0.1)


def test_block_triangular_exact_l():
    sps = _sps()
    B = block_triangularize(sps, refine_l(sps))
    assert B[0, 0] == pytest.approx(SLOW, rel=1e-12)
    assert B[1, 1] == pytest.approx(FAST, rel=1e-12)
    assert abs(B[1, 0]) <= 1e-12
    np.testing.assert_allclose(sps.full_matrix(), [[-1, 1], [10, -20]])


def test_block_triangular_zero_coupling():
    sps = _sps(a21=0.0)
    B = block_triangularize(sps, coupling_series_l(sps))
    assert B[1, 0] == 0.0


def _leak(a11, a12, a21, a22, eps):
    sps = LinearSps(a11, a12, a21, a22, eps)
    B = block_triangularize(sps, coupling_series_l(sps))
    return np.linalg.norm(B[sps.n:, :sps.n])


def test_series_leakage_block_example():
    # here A0 = L0 A12, so the second-order term of L vanishes and the
    # leakage drops like eps^2 rather than eps
    leak = [_leak([[-1.0]], [[1.0]], [[1.0]], [[-2.0]], eps) for eps in (1e-2, 1e-3, 1e-4)]
    for eps, v in zip((1e-2, 1e-3, 1e-4), leak):
        assert v <= 10 * eps
    for big, small in zip(leak, leak[1:]):
        assert 80 <= big / small <= 120


def test_series_leakage_shrinks_linearly(rng):
    for _ in range(10):
        sps, _, _ = random_stable_sps(rng, 1e-2)
        leak = [_leak(sps.a11, sps.a12, sps.a21, sps.a22, eps) for eps in (1e-2, 1e-3, 1e-4)]
        for big, small in zip(leak, leak[1:]):
            assert 8 <= big / small <= 12


def test_series_residual_is_second_order(rng):
    for _ in range(10):
        sps, _, _ = random_stable_sps(rng, 1e-2)
        norms = []
        for eps in (1e-2, 1e-3, 1e-4):
            s = LinearSps(sps.a11, sps.a12, sps.a21, sps.a22, eps)
            norms.append(np.linalg.norm(decoupling_residual(s, coupling_series_l(s).l_matrix)))
        if norms[-1] == 0:
            continue
        for big, small in zip(norms, norms[1:]):
            assert 80 <= big / small <= 120


def test_similarity_preserved(rng):
    for eps in (1e-1, 1e-2, 1e-3):
        for _ in range(10):
            sps, eigs, _ = random_stable_sps(rng, eps)
            B = block_triangularize(sps, refine_l(sps))
            got = np.sort_complex(np.array(eigenvalues(B)))
            want = np.sort_complex(np.array(eigs))
            assert np.all(np.abs(got - want) <= 1e-8 * np.abs(want))


def test_eigenvalue_examples():
    assert sorted(e.real for e in eigenvalues(np.diag([-1.0, -100.0]))) == [-100.0, -1.0]
    rot = eigenvalues([[0.0, 1.0], [-1.0, 0.0]])
    assert sorted((e.imag for e in rot)) == pytest.approx([-1.0, 1.0])
    got = sorted(e.real for e in eigenvalues([[-1.0, 1.0], [10.0, -20.0]]))
    assert got == pytest.approx([FAST, SLOW], rel=1e-12)


def test_eigenvalues_size_cap():
    with pytest.raises(UnsupportedSizeError):
        eigenvalues(np.eye(65))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-10, 10).filter(lambda v: abs(v) > 0.1), min_size=1, max_size=6, unique=True))
def test_companion_matrix_roots(roots):
    roots = sorted(roots)
    # separate roots so the problem is well conditioned
    if len(roots) > 1 and min(np.diff(roots)) < 0.5:
        return
    coeffs = np.poly(roots)
    n = len(roots)
    C = np.zeros((n, n))
    C[0, :] = -coeffs[1:]
    C[1:, :-1] = np.eye(n - 1)
    got = np.sort(np.real(eigenvalues(C)))
    np.testing.assert_allclose(got, roots, rtol=1e-7, atol=1e-7 * max(map(abs, roots)))


def test_split_examples():
    s = split_spectrum([SLOW, FAST], 0.1, 1, 1)
    assert s.slow_eigs == [pytest.approx(SLOW)]
    assert s.fast_eigs == [pytest.approx(FAST)]
    assert s.lambda_tilde == pytest.approx(-2.051249, abs=1e-6)
    assert split_spectrum([-1.0, -1e6], 1e-6, 1, 1).lambda_tilde == pytest.approx(-1.0)
    both = split_spectrum([-1.0, -2.0], 0.5, 2, 0)
    assert len(both.slow_eigs) == 2 and both.fast_eigs == []
    assert both.lambda_tilde is None


def test_split_mismatch_raises():
    with pytest.raises(SeparationError, match="not separated"):
        split_spectrum([-1.0, -2.0], 0.1, 1, 1)


@settings(max_examples=50, deadline=None)
@given(st.permutations([-0.5, -1.5 + 0.5j, -1.5 - 0.5j, -200.0, -350.0]))
def test_split_permutation_invariant(perm):
    ref = split_spectrum([-0.5, -1.5 + 0.5j, -1.5 - 0.5j, -200.0, -350.0], 1e-3, 3, 2)
    got = split_spectrum(list(perm), 1e-3, 3, 2)
    assert got == ref
