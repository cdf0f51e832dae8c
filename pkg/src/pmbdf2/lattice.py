"""Frequency lattice bookkeeping.

A quasiperiodic function on R^d is the restriction of a periodic parent
function on the n-torus.  The parent is discretized with ``N`` modes per
torus direction; its integer wavenumbers ``k`` live in the symmetric box

    K_N^n = {k in Z^n : -N/2 <= k_l < N/2}

and map to physical frequencies ``lambda_k = P k``.

Vector indices follow numpy's C order over the nonnegative residues
``k_l mod N``, i.e. ``i = sum_l (k_l mod N) N^(n-l)``.  This is exactly the
bin layout of ``numpy.fft.fftn`` on an array of shape ``(N,) * n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import LatticeError

MAX_MODES = 2**31


class ProjectionMatrix:
    """A d x n real matrix of full row rank, d <= n."""

    def __init__(self, entries):
        P = np.atleast_2d(np.asarray(entries, dtype=float))
        if P.ndim != 2:
            raise LatticeError(f"projection matrix must be 2-D, got shape {P.shape}")
        d, n = P.shape
        if d > n:
            raise LatticeError(f"projection matrix needs d <= n, got d={d}, n={n}")
        if not np.all(np.isfinite(P)):
            raise LatticeError("projection matrix has non-finite entries")
        s = np.linalg.svd(P, compute_uv=False)
        if s[0] == 0.0 or s[-1] <= 1e-12 * s[0]:
            raise LatticeError("projection matrix is not of full row rank")
        P.setflags(write=False)
        self.entries = P

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self):
        return f"ProjectionMatrix({self.entries.tolist()!r})"


@dataclass(frozen=True, eq=False)
class Lattice:
    """Discretization context: ``N`` modes in each of ``n`` torus directions.

    Parameters
    ----------
    N : int
        Even number of modes per torus dimension.
    P : array_like or ProjectionMatrix
        d x n projection matrix.
    """

    N: int
    P: ProjectionMatrix = field(repr=False)

    def __post_init__(self):
        if not isinstance(self.P, ProjectionMatrix):
            object.__setattr__(self, "P", ProjectionMatrix(self.P))
        N = self.N
        if isinstance(N, bool) or int(N) != N:
            raise LatticeError(f"N must be an integer, got {N!r}")
        N = int(N)
        object.__setattr__(self, "N", N)
        if N < 2 or N % 2:
            raise LatticeError(f"N must be even and >= 2, got {N}")
        if N**self.n > MAX_MODES:
            raise LatticeError(f"N^n = {N}^{self.n} exceeds {MAX_MODES} modes")

    @property
    def n(self) -> int:
        return self.P.n

    @property
    def d(self) -> int:
        return self.P.d

    @property
    def D(self) -> int:
        return self.N**self.n

    @property
    def shape(self) -> tuple:
        return (self.N,) * self.n

    @cached_property
    def axis_wavenumbers(self) -> np.ndarray:
        """Signed wavenumber of each bin along one axis, in FFT bin order."""
        k = np.fft.fftfreq(self.N, d=1.0 / self.N).round().astype(np.int64)
        k.setflags(write=False)
        return k

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Integer vectors ``k_i`` for all vector indices, shape (D, n)."""
        grids = np.meshgrid(*([self.axis_wavenumbers] * self.n), indexing="ij")
        k = np.stack([g.ravel() for g in grids], axis=1)
        k.setflags(write=False)
        return k

    @cached_property
    def frequencies(self) -> np.ndarray:
        """Physical frequencies ``lambda_i = P k_i``, shape (D, d)."""
        lam = self.wavenumbers @ self.P.entries.T
        lam.setflags(write=False)
        return lam

    def contains(self, k) -> bool:
        k = np.asarray(k)
        return bool(np.all((k >= -self.N // 2) & (k < self.N // 2)))

    def same_as(self, other: "Lattice") -> bool:
        return self is other or (
            self.N == other.N and np.array_equal(self.P.entries, other.P.entries)
        )


def _check_k(lat: Lattice, k) -> np.ndarray:
    k = np.asarray(k)
    if k.shape != (lat.n,):
        raise LatticeError(f"index must have length n={lat.n}, got shape {k.shape}")
    if not np.issubdtype(k.dtype, np.integer):
        if not np.all(k == np.round(k)):
            raise LatticeError(f"index {k.tolist()} is not integral")
        k = k.astype(np.int64)
    if not lat.contains(k):
        raise LatticeError(
            f"index {k.tolist()} outside [-{lat.N // 2}, {lat.N // 2}) for N={lat.N}"
        )
    return k


def tensor_to_vector(lat: Lattice, k) -> int:
    """Vector index of the wavenumber ``k`` in ``K_N^n``."""
    k = _check_k(lat, k)
    i = 0
    for kl in k % lat.N:
        i = i * lat.N + int(kl)
    return i


def vector_to_tensor(lat: Lattice, i: int) -> tuple:
    """Inverse of :func:`tensor_to_vector`."""
    if isinstance(i, bool) or int(i) != i or not 0 <= i < lat.D:
        raise LatticeError(f"vector index {i!r} outside [0, {lat.D})")
    i = int(i)
    N, half = lat.N, lat.N // 2
    k = []
    for p in range(lat.n - 1, -1, -1):
        kbar = (i % N ** (p + 1)) // N**p
        k.append(kbar if kbar < half else kbar - N)
    return tuple(k)


def frequency_of(lat: Lattice, k) -> np.ndarray:
    return lat.P.entries @ _check_k(lat, k).astype(float)


def fold(lat: Lattice, k) -> tuple:
    """Map any integer vector to its representative in ``K_N^n``."""
    N, half = lat.N, lat.N // 2
    return tuple(int((kl + half) % N - half) for kl in np.asarray(k))


def grid_points(lat: Lattice) -> np.ndarray:
    """Uniform torus grid ``y_j = 2 pi j / N``, shape (D, n), vector-index order."""
    y = 2.0 * np.pi * np.arange(lat.N) / lat.N
    grids = np.meshgrid(*([y] * lat.n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def collocation_points(lat: Lattice) -> np.ndarray:
    """Collocation points ``x_j = P y_j``, shape (D, d)."""
    return grid_points(lat) @ lat.P.entries.T
