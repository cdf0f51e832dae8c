import numpy as np
import pytest

from conftest import random_real_modes
from pmbdf2.errors import LatticeError
from pmbdf2.lattice import Lattice, tensor_to_vector
from pmbdf2.manufactured import (
    ExactSolution,
    exact_coefficients,
    exact_convolution_Lu,
    source_provider,
)
from pmbdf2.operator import QOperator, assemble_dense, build_sparse_from_modes
from pmbdf2.spectral import truncate

S5 = np.sqrt(5.0)
P1D = 2 * np.pi * np.array([[1.0, S5]])
P2D = 2 * np.pi * np.array([[1.0, S5, 0.0], [0.0, 0.0, 1.0]])
ALPHA_2D = [((0, 0, 0), 12.0)] + [
    (tuple(s * np.eye(3, dtype=int)[j]), 0.5) for j in range(3) for s in (1, -1)
]
UNIT3 = [((1, 0, 0), 1.0), ((0, 1, 0), 1.0), ((0, 0, 1), 1.0)]
BOX = [((m, k), np.exp(-(abs(m) + abs(k)))) for m in range(-16, 16) for k in range(-16, 16)]


def test_exact_solution_validation():
    with pytest.raises(LatticeError):
        ExactSolution.from_modes([((0, 0), 1.0), ((0, 0), 2.0)])
    with pytest.raises(LatticeError):
        ExactSolution.from_modes([((0, 0), np.nan)])
    with pytest.raises(LatticeError):
        ExactSolution(np.zeros((2, 2)), np.ones(3))
    with pytest.raises(LatticeError):
        ExactSolution.from_modes([])
    assert ExactSolution.from_modes([], n=3).n == 3


def test_coefficients_at_zero_are_truncation():
    lat = Lattice(8, P1D)
    sol = ExactSolution.from_modes(BOX)
    np.testing.assert_array_equal(exact_coefficients(sol, lat, 0.0).coeffs,
                                  truncate(BOX, lat).coeffs)


def test_unit_modes_with_carrier():
    lat = Lattice(4, P2D)
    t = 0.37
    s = exact_coefficients(ExactSolution.from_modes(UNIT3, rate=-1j), lat, t)
    assert np.count_nonzero(s.coeffs) == 3
    for k, _ in UNIT3:
        assert s.coeffs[tensor_to_vector(lat, k)] == pytest.approx(np.exp(-1j * t))


def test_box_fits_inside_N32():
    lat = Lattice(32, P1D)
    s = exact_coefficients(ExactSolution.from_modes(BOX), lat, 0.0)
    assert np.count_nonzero(s.coeffs) == 1024
    assert np.linalg.norm(s.coeffs) == pytest.approx(
        np.sqrt(sum(a * a for _, a in BOX)), rel=1e-14)


def test_convolution_constant_alpha():
    k0 = (2, -1)
    lam = P1D @ np.array(k0)
    out = exact_convolution_Lu([((0, 0), 3.0)], [(k0, 1.0)], P1D)
    assert len(out) == 1 and out[0][0] == k0
    assert out[0][1] == pytest.approx(3.0 * lam @ lam)


def test_convolution_by_hand():
    # alpha = 6 + cos(2 pi x), v = exp(i y_1), P = 2 pi [1, sqrt 5]
    alpha = [((0, 0), 6.0), ((1, 0), 0.5), ((-1, 0), 0.5)]
    out = dict(exact_convolution_Lu(alpha, [((1, 0), 1.0)], P1D))
    assert set(out) == {(0, 0), (1, 0), (2, 0)}
    # c_k = a_{k-m} (P k).(P m) b_m with m = (1, 0), P m = 2 pi
    assert out[(1, 0)] == pytest.approx(6 * (2 * np.pi) ** 2)
    assert out[(2, 0)] == pytest.approx(0.5 * (4 * np.pi) * (2 * np.pi))
    assert out[(0, 0)] == 0


def test_convolution_empty():
    assert exact_convolution_Lu([((0, 0), 1.0)], [], P1D) == []
    assert exact_convolution_Lu([], [((0, 0), 1.0)], P1D) == []


def test_convolution_support(rng):
    lat = Lattice(8, P2D)
    alpha = build_sparse_from_modes(lat, ALPHA_2D)
    v = [((int(a), int(b), int(c)), rng.standard_normal())
         for a, b, c in rng.integers(-6, 6, size=(20, 3))]
    v = list(dict(v).items())
    out = exact_convolution_Lu(alpha, v, P2D)
    assert len(out) <= alpha.g * len(v)
    sums = {tuple(np.add(ka, kv)) for ka, _ in alpha.modes for kv, _ in v}
    assert {k for k, _ in out} <= sums
    assert [k for k, _ in out] == sorted(k for k, _ in out)


@pytest.mark.parametrize("convolution", ["periodic", "truncated"])
def test_convolution_matches_dense_without_wrap(rng, convolution):
    lat = Lattice(8, P1D)
    alpha = build_sparse_from_modes(lat, [((0, 0), 6.0), ((1, 0), 0.5), ((-1, 0), 0.5),
                                          ((0, 1), 0.5), ((0, -1), 0.5)], convolution)
    inner = [((m, k), complex(*rng.standard_normal(2)))
             for m in range(-2, 3) for k in range(-2, 3)]
    Lv = exact_convolution_Lu(alpha, inner, lat.P)
    assert all(max(abs(c) for c in k) < 4 for k, _ in Lv)
    ref = assemble_dense(QOperator(alpha)) @ truncate(inner, lat).coeffs
    got = truncate(Lv, lat).coeffs
    assert np.linalg.norm(got - ref) <= 1e-12 * np.linalg.norm(ref)


def test_source_diagonal_case():
    lat = Lattice(4, P1D)
    c, k0 = 2.5, (1, -1)
    sol = ExactSolution.from_modes([(k0, 1.0)], rate=-1j)
    f = source_provider(sol, [((0, 0), c)], lat)
    lam = P1D @ np.array(k0)
    i = tensor_to_vector(lat, k0)
    for t in (0.0, 0.3, 2.0):
        s = f(t)
        assert s.coeffs[i] == pytest.approx(np.exp(-1j * t) * (c * lam @ lam - 1j), rel=1e-14)
        assert np.count_nonzero(s.coeffs) == 1


def test_source_at_zero():
    lat = Lattice(8, P1D)
    alpha = [((0, 0), 6.0), ((1, 0), 0.5), ((-1, 0), 0.5), ((0, 1), 0.5), ((0, -1), 0.5)]
    sol = ExactSolution.from_modes(BOX, rate=-1j)
    f0 = source_provider(sol, alpha, lat)(0.0)
    want = truncate(exact_convolution_Lu(alpha, BOX, P1D), lat) - 1j * truncate(BOX, lat)
    np.testing.assert_allclose(f0.coeffs, want.coeffs, rtol=0, atol=1e-12)


def test_source_support_2d_first_example():
    lat = Lattice(4, P2D)
    alpha = build_sparse_from_modes(lat, ALPHA_2D)
    sol = ExactSolution.from_modes(UNIT3, rate=-1j)
    f = source_provider(sol, alpha, lat)
    expect = set()
    for ka, _ in alpha.modes:
        for kv, _ in UNIT3:
            k = tuple(np.add(ka, kv))
            if all(-2 <= c < 2 for c in k) and np.any(P2D @ np.array(k)):
                expect.add(k)
    s = f(0.8)
    got = {tuple(lat.wavenumbers[i]) for i in np.flatnonzero(np.abs(s.coeffs) > 1e-14)}
    # modes with P k = 0 carry a zero weight, so the support check is on k with nonzero frequency
    assert got == expect
    np.testing.assert_allclose(s.coeffs, np.exp(-0.8j) * f(0.0).coeffs, atol=1e-13)


def test_consistency_residual_diagonal(rng):
    lat = Lattice(8, P1D)
    modes = random_real_modes(rng, lat, 12)
    c = 1.7
    op = QOperator(build_sparse_from_modes(lat, [((0, 0), c)]))
    sol = ExactSolution.from_modes(modes, rate=-1j)
    f = source_provider(sol, [((0, 0), c)], lat)
    for t in (0.0, 0.25, 1.5):
        u = exact_coefficients(sol, lat, t).coeffs
        dudt = -1j * u
        res = dudt + op.matvec(u) - f(t).coeffs
        assert np.linalg.norm(res) <= 1e-12 * np.linalg.norm(f(t).coeffs)
