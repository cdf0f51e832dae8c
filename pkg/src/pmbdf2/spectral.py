"""Discrete Fourier-Bohr transforms on the torus grid.

Coefficients carry the ``1/D`` factor, so ``coeffs[i]`` is directly the
amplitude of ``exp(i lambda_i . x)``; the inverse transform has no factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LatticeError
from .lattice import Lattice, grid_points


def _as_vector(lat: Lattice, data, what: str) -> np.ndarray:
    a = np.asarray(data, dtype=complex).reshape(-1)
    if a.shape != (lat.D,):
        raise LatticeError(f"{what} needs {lat.D} entries, got {a.size}")
    if not np.all(np.isfinite(a)):
        raise LatticeError(f"{what} has non-finite entries")
    return a


@dataclass(eq=False)
class SpectralField:
    """Fourier coefficients of a parent function, indexed by vector index."""

    lat: Lattice
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = _as_vector(self.lat, self.coeffs, "SpectralField")

    @classmethod
    def zeros(cls, lat: Lattice) -> "SpectralField":
        return cls(lat, np.zeros(lat.D, dtype=complex))

    def as_array(self) -> np.ndarray:
        """Coefficients reshaped to the ``(N,) * n`` FFT bin layout (a view)."""
        return self.coeffs.reshape(self.lat.shape)

    def copy(self) -> "SpectralField":
        return SpectralField(self.lat, self.coeffs.copy())

    def _other(self, other):
        if isinstance(other, SpectralField):
            if not self.lat.same_as(other.lat):
                raise LatticeError("fields live on different lattices")
            return other.coeffs
        return NotImplemented

    def __add__(self, other):
        c = self._other(other)
        return c if c is NotImplemented else SpectralField(self.lat, self.coeffs + c)

    def __sub__(self, other):
        c = self._other(other)
        return c if c is NotImplemented else SpectralField(self.lat, self.coeffs - c)

    def __mul__(self, scalar):
        if np.ndim(scalar) != 0:
            return NotImplemented
        return SpectralField(self.lat, scalar * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return SpectralField(self.lat, -self.coeffs)


@dataclass(eq=False)
class GridField:
    """Samples of a parent function on the torus grid, vector-index order."""

    lat: Lattice
    values: np.ndarray

    def __post_init__(self):
        self.values = _as_vector(self.lat, self.values, "GridField")

    @classmethod
    def from_function(cls, lat: Lattice, func) -> "GridField":
        """Sample ``func(y)`` where ``y`` has shape (D, n) of torus grid points."""
        return cls(lat, func(grid_points(lat)))


def forward_dft(g: GridField) -> SpectralField:
    lat = g.lat
    c = np.fft.fftn(g.values.reshape(lat.shape)) / lat.D
    return SpectralField(lat, c.ravel())


def inverse_dft(s: SpectralField) -> GridField:
    lat = s.lat
    v = np.fft.ifftn(s.as_array()) * lat.D
    return GridField(lat, v.ravel())


def evaluate_at(s: SpectralField, x) -> complex:
    """Trigonometric interpolant ``sum_k c_k exp(i (P k) . x)`` at a physical point.

    Direct summation, O(D) per point; ``x`` may be a single d-vector or an
    array of shape (m, d), in which case an array of m values is returned.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1
    x = np.atleast_2d(x.reshape(1, -1) if single else x)
    if x.shape[1] != s.lat.d:
        raise LatticeError(f"points must have d={s.lat.d} components")
    phase = x @ s.lat.frequencies.T
    out = np.exp(1j * phase) @ s.coeffs
    return complex(out[0]) if single else out


def _mode_arrays(modes, n):
    modes = list(modes)
    if not modes:
        return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=complex)
    ks = np.array([np.asarray(k, dtype=np.int64) for k, _ in modes]).reshape(len(modes), n)
    amps = np.array([a for _, a in modes], dtype=complex)
    return ks, amps


def truncate(exact, lat: Lattice) -> SpectralField:
    """Keep the modes of ``exact`` that lie in ``K_N^n``; drop the rest (no aliasing).

    ``exact`` is an iterable of ``(k, amplitude)`` pairs with integer n-vectors.
    """
    ks, amps = _mode_arrays(exact, lat.n)
    if len(np.unique(ks, axis=0)) != len(ks):
        raise LatticeError("duplicate wavenumbers in mode list")
    inside = np.all((ks >= -lat.N // 2) & (ks < lat.N // 2), axis=1)
    out = np.zeros(lat.shape, dtype=complex)
    idx = tuple((ks[inside] % lat.N).T)
    out[idx] = amps[inside]
    return SpectralField(lat, out.ravel())

