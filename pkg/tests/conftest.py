import itertools

import numpy as np
import pytest

from pmbdf2.lattice import Lattice, fold, grid_points


def direct_forward(lat: Lattice, values):
    """O(D^2) discrete transform by explicit summation."""
    y = grid_points(lat)
    K = lat.wavenumbers
    return np.exp(-1j * K @ y.T) @ values / lat.D


def direct_inverse(lat: Lattice, coeffs):
    y = grid_points(lat)
    return np.exp(1j * y @ lat.wavenumbers.T) @ coeffs


def random_real_modes(rng, lat: Lattice, count: int):
    """Random conjugate-symmetric modes on ``K_N^n`` (folded partners)."""
    box = list(itertools.product(range(-lat.N // 2, lat.N // 2), repeat=lat.n))
    picks = rng.choice(len(box), size=min(count, len(box)), replace=False)
    modes = {}
    for p in picks:
        k = box[p]
        mk = fold(lat, tuple(-c for c in k))
        if k in modes:
            continue
        if mk == k:
            a = complex(rng.standard_normal(), 0.0)
        else:
            a = complex(rng.standard_normal(), rng.standard_normal())
        modes[k] = a
        modes[mk] = np.conj(a) if mk != k else a
    return list(modes.items())


def random_vector(rng, D):
    return rng.standard_normal(D) + 1j * rng.standard_normal(D)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
