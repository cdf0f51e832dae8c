"""Manufactured solutions ``u(x, t) = exp(sigma t) v(x)`` and their sources.

``v`` is given by integer wavenumbers and amplitudes whose support may
exceed the computational lattice.  The source ``f = du/dt + L u`` is
synthesized exactly in wavenumber space (no wrap, no truncation) and only
truncated when it is handed to a run on a particular lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LatticeError
from .lattice import Lattice, ProjectionMatrix
from .operator import SparseCoefficient
from .spectral import SpectralField, truncate


@dataclass(frozen=True, eq=False)
class ExactSolution:
    """``u(x, t) = exp(rate * t) * sum_k b_k exp(i (P k) . x)``.

    ``rate = -1j`` gives the ``exp(-i t)`` carrier.
    """

    ks: np.ndarray
    amps: np.ndarray
    rate: complex = -1j

    def __post_init__(self):
        ks = np.asarray(self.ks, dtype=np.int64)
        if ks.ndim != 2:
            raise LatticeError("wavenumbers must form a (count, n) array")
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if len(amps) != len(ks):
            raise LatticeError("one amplitude per wavenumber required")
        if len(np.unique(ks, axis=0)) != len(ks):
            raise LatticeError("duplicate wavenumbers in exact solution")
        if not np.all(np.isfinite(amps)):
            raise LatticeError("non-finite amplitudes in exact solution")
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "rate", complex(self.rate))

    @classmethod
    def from_modes(cls, modes, rate=-1j, n=None) -> "ExactSolution":
        modes = list(modes)
        if not modes:
            if n is None:
                raise LatticeError("empty mode list needs an explicit n")
            return cls(np.zeros((0, n), dtype=np.int64), np.zeros(0), rate)
        ks = np.array([np.asarray(k).reshape(-1) for k, _ in modes], dtype=np.int64)
        return cls(ks, np.array([a for _, a in modes], dtype=complex), rate)

    @property
    def n(self) -> int:
        return self.ks.shape[1]

    @property
    def modes(self) -> list:
        return [(tuple(int(c) for c in k), complex(a)) for k, a in zip(self.ks, self.amps)]

    def time_factor(self, t: float) -> complex:
        return complex(np.exp(self.rate * t))


def exact_coefficients(sol: ExactSolution, lat: Lattice, t: float) -> SpectralField:
    return sol.time_factor(t) * truncate(sol.modes, lat)


def _alpha_arrays(alpha_modes):
    if isinstance(alpha_modes, SparseCoefficient):
        return alpha_modes.ks, alpha_modes.amps
    modes = list(alpha_modes)
    if not modes:
        return np.zeros((0, 0), dtype=np.int64), np.zeros(0, dtype=complex)
    ks = np.array([np.asarray(k).reshape(-1) for k, _ in modes], dtype=np.int64)
    return ks, np.array([a for _, a in modes], dtype=complex)


def exact_convolution_Lu(alpha_modes, sol_modes, P) -> list:
    """Modes of ``-div(alpha grad v)`` by exact integer index arithmetic.

    ``c_k = sum_m a_{k-m} (P k) . (P m) b_m``.  Both inputs are lists of
    ``(k, amplitude)`` pairs (or a :class:`SparseCoefficient` for alpha).
    The result is sorted lexicographically by ``k``; exact cancellations are
    kept as zero entries.
    """
    P = np.asarray(P.entries if isinstance(P, ProjectionMatrix) else P, dtype=float)
    P = np.atleast_2d(P)
    a_ks, a_amps = _alpha_arrays(alpha_modes)
    v_ks, v_amps = _alpha_arrays(sol_modes)
    if len(a_amps) == 0 or len(v_amps) == 0:
        return []
    lam_v = v_ks @ P.T
    out_ks, out_vals = [], []
    for m, a in zip(a_ks, a_amps):
        k = v_ks + m
        out_ks.append(k)
        out_vals.append(a * np.einsum("ij,ij->i", k @ P.T, lam_v) * v_amps)
    ks = np.concatenate(out_ks)
    vals = np.concatenate(out_vals)
    uniq, inverse = np.unique(ks, axis=0, return_inverse=True)
    acc = np.zeros(len(uniq), dtype=complex)
    np.add.at(acc, inverse.reshape(-1), vals)
    return [(tuple(int(c) for c in k), complex(c)) for k, c in zip(uniq, acc)]


class ManufacturedSource:
    """Callable ``t -> SpectralField`` giving ``F(t) = exp(rate t) (T_N Lv + rate T_N v)``."""

    def __init__(self, sol: ExactSolution, alpha_modes, lat: Lattice):
        self.sol = sol
        self.lat = lat
        Lv = exact_convolution_Lu(alpha_modes, sol.modes, lat.P)
        self.spatial = truncate(Lv, lat) + sol.rate * truncate(sol.modes, lat)

    def __call__(self, t: float) -> SpectralField:
        return self.sol.time_factor(t) * self.spatial


def source_provider(sol: ExactSolution, alpha_modes, lat: Lattice) -> ManufacturedSource:
    return ManufacturedSource(sol, alpha_modes, lat)
