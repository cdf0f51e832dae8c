import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import direct_forward, direct_inverse, random_vector
from pmbdf2.errors import LatticeError
from pmbdf2.lattice import Lattice, grid_points, tensor_to_vector
from pmbdf2.spectral import (
    GridField,
    SpectralField,
    evaluate_at,
    forward_dft,
    inverse_dft,
    truncate,
)

S5 = np.sqrt(5.0)
P1D = 2 * np.pi * np.array([[1.0, S5]])


def test_constant_samples():
    lat = Lattice(4, np.eye(2))
    s = forward_dft(GridField(lat, np.full(lat.D, 2.5)))
    assert s.coeffs[0] == pytest.approx(2.5, abs=1e-13)
    assert np.max(np.abs(s.coeffs[1:])) < 1e-13


@pytest.mark.parametrize("k0", [(0, 0), (1, -2), (-2, -2), (1, 1)])
def test_single_exponential(k0):
    lat = Lattice(4, np.eye(2))
    y = grid_points(lat)
    s = forward_dft(GridField(lat, np.exp(1j * y @ np.array(k0))))
    expect = np.zeros(lat.D)
    expect[tensor_to_vector(lat, k0)] = 1.0
    np.testing.assert_allclose(s.coeffs, expect, rtol=0, atol=1e-13)


def test_cosine_sum_against_direct_oracle():
    lat = Lattice(4, np.eye(2))
    y = grid_points(lat)
    values = np.cos(y[:, 0]) + np.cos(y[:, 1]) + 6
    oracle = direct_forward(lat, values)
    s = forward_dft(GridField(lat, values))
    np.testing.assert_allclose(s.coeffs, oracle, rtol=0, atol=1e-13)
    expect = {(0, 0): 6.0, (1, 0): 0.5, (-1, 0): 0.5, (0, 1): 0.5, (0, -1): 0.5}
    for i in range(lat.D):
        k = tuple(lat.wavenumbers[i])
        assert s.coeffs[i] == pytest.approx(expect.get(k, 0.0), abs=1e-13)


@pytest.mark.parametrize("N, n", [(2, 1), (4, 1), (8, 1), (2, 2), (4, 2), (8, 2), (4, 3), (8, 3)])
def test_forward_matches_direct_sum(rng, N, n):
    lat = Lattice(N, np.eye(n))
    values = random_vector(rng, lat.D)
    oracle = direct_forward(lat, values)
    got = forward_dft(GridField(lat, values)).coeffs
    assert np.linalg.norm(got - oracle) <= 1e-12 * np.linalg.norm(oracle)


def test_inverse_of_delta():
    lat = Lattice(4, np.eye(3))
    c = np.zeros(lat.D, dtype=complex)
    c[0] = 3 - 1j
    np.testing.assert_allclose(inverse_dft(SpectralField(lat, c)).values, 3 - 1j, atol=1e-14)


def test_round_trip(rng):
    lat = Lattice(8, np.eye(3))
    values = random_vector(rng, lat.D)
    back = inverse_dft(forward_dft(GridField(lat, values))).values
    assert np.linalg.norm(back - values) <= 1e-13 * np.linalg.norm(values)
    c = random_vector(rng, lat.D)
    again = forward_dft(inverse_dft(SpectralField(lat, c))).coeffs
    assert np.linalg.norm(again - c) <= 1e-13 * np.linalg.norm(c)


def test_decaying_box_against_direct_sum():
    lat = Lattice(32, P1D)
    modes = [((m, k), np.exp(-(abs(m) + abs(k)))) for m in range(-16, 16) for k in range(-16, 16)]
    s = truncate(modes, lat)
    oracle = direct_inverse(lat, s.coeffs)
    got = inverse_dft(s).values
    np.testing.assert_allclose(got, oracle, rtol=0, atol=1e-12)


def test_evaluate_delta_and_single_mode():
    lat = Lattice(4, P1D)
    c = np.zeros(lat.D, dtype=complex)
    c[0] = 1.5
    assert evaluate_at(SpectralField(lat, c), [0.731]) == pytest.approx(1.5)
    c = np.zeros(lat.D, dtype=complex)
    c[tensor_to_vector(lat, (1, 0))] = 1.0
    assert evaluate_at(SpectralField(lat, c), [0.25]) == pytest.approx(1j, abs=1e-14)


@pytest.mark.parametrize("theta", [0.0, 0.3, 1.1])
def test_interpolation_property_at_collocation_points(rng, theta):
    # x_j = P y_j maps onto torus grid points when P has orthonormal rows
    c, s = np.cos(theta), np.sin(theta)
    P = np.array([[c, -s], [s, c]])
    lat = Lattice(4, P)
    field = SpectralField(lat, random_vector(rng, lat.D))
    x = grid_points(lat) @ P.T
    np.testing.assert_allclose(evaluate_at(field, x), inverse_dft(field).values, atol=1e-12)


def test_evaluation_is_parent_function_on_slice(rng):
    # u(x) = U(P^T x) with U the parent trigonometric polynomial
    P = np.array([[1.0, S5, 0.0], [0.0, 0.0, 1.0]]) * 2 * np.pi
    lat = Lattice(4, P)
    field = SpectralField(lat, random_vector(rng, lat.D))
    xs = rng.uniform(-3, 3, size=(7, 2))
    parent = np.exp(1j * (xs @ P) @ lat.wavenumbers.T) @ field.coeffs
    np.testing.assert_allclose(evaluate_at(field, xs), parent, atol=1e-11)
    values = inverse_dft(field).values
    assert evaluate_at(field, [0.0, 0.0]) == pytest.approx(values[0], abs=1e-12)


def test_truncate_examples():
    lat = Lattice(4, np.eye(2))
    modes = [((0, 0), 1.0), ((1, -2), 2j), ((-1, 1), -0.5)]
    s = truncate(modes, lat)
    for k, a in modes:
        assert s.coeffs[tensor_to_vector(lat, k)] == a
    assert np.count_nonzero(s.coeffs) == 3
    s = truncate([((2, 0), 1.0), ((0, 0), 1.0)], lat)
    assert np.count_nonzero(s.coeffs) == 1


def test_truncate_decaying_box_at_N8():
    modes = [((m, k), np.exp(-(abs(m) + abs(k)))) for m in range(-16, 16) for k in range(-16, 16)]
    lat = Lattice(8, P1D)
    s = truncate(modes, lat)
    assert np.count_nonzero(s.coeffs) == 64
    outside = [a for k, a in modes if not all(-4 <= c < 4 for c in k)]
    total = sum(a * a for _, a in modes)
    dropped = np.sqrt(sum(a * a for a in outside))
    assert np.sqrt(total - np.sum(np.abs(s.coeffs) ** 2)) == pytest.approx(dropped, rel=1e-6)
    assert len(outside) == 1024 - 64


def test_truncate_rejects_duplicates():
    with pytest.raises(LatticeError):
        truncate([((0, 0), 1.0), ((0, 0), 2.0)], Lattice(4, np.eye(2)))


def test_orthogonality_table_exhaustive():
    lat = Lattice(4, np.eye(2))
    y = grid_points(lat)
    box = list(itertools.product(range(-2, 2), repeat=2))
    for k1 in box:
        e1 = np.exp(1j * y @ np.array(k1))
        for k2 in box:
            e2 = np.exp(1j * y @ np.array(k2))
            ip = np.vdot(e2, e1) / lat.D
            assert abs(ip - (k1 == k2)) < 1e-13


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), N=st.sampled_from([2, 4, 8]), n=st.integers(1, 3))
def test_discrete_parseval(seed, N, n):
    rng = np.random.default_rng(seed)
    lat = Lattice(N, np.eye(n))
    values = random_vector(rng, lat.D)
    s = forward_dft(GridField(lat, values))
    lhs = np.mean(np.abs(values) ** 2)
    assert np.sum(np.abs(s.coeffs) ** 2) == pytest.approx(lhs, rel=1e-12)


def test_conjugate_symmetry_for_real_samples(rng):
    lat = Lattice(8, np.eye(2))
    s = forward_dft(GridField(lat, rng.standard_normal(lat.D))).as_array()
    mirrored = np.conj(np.roll(s[::-1, ::-1], 1, axis=(0, 1)))
    np.testing.assert_allclose(s, mirrored, atol=1e-13)


def test_field_validation():
    lat = Lattice(4, np.eye(1))
    with pytest.raises(LatticeError):
        SpectralField(lat, np.zeros(3))
    with pytest.raises(LatticeError):
        GridField(lat, [0, np.nan, 0, 0])
    a = SpectralField(lat, np.ones(4))
    with pytest.raises(LatticeError):
        a + SpectralField(Lattice(2, np.eye(2)), np.ones(4))
    np.testing.assert_array_equal((2 * a - a).coeffs, np.ones(4))
