"""The discrete elliptic operator ``Q = B o W`` in Fourier space.

``Q`` is the spectral form of ``L u = -div(alpha grad u)``:

    (Q v)_i = sum_m  a_m (lambda_i . lambda_{i-m}) v_{i-m}

where ``a_m`` are the nonzero Fourier modes of ``alpha``'s parent function.
``B`` (multiplication by ``alpha``) is an n-level block circulant, ``W`` the
frequency weight ``W_ij = lambda_i . lambda_j``.  Storing only the ``g``
modes of ``alpha`` plus the frequency table gives an O(g D d) matvec.

Two conventions for ``i - m`` are supported:

``"periodic"``
    the index difference is folded back into ``K_N^n`` mod N (circulant ``B``).
``"truncated"``
    differences leaving ``K_N^n`` are dropped, so ``B`` is the Toeplitz
    section of multiplication by ``alpha`` (Galerkin projection of ``L``).
"""

from __future__ import annotations

from dataclasses import dataclass

import itertools

import numpy as np

from .errors import LatticeError
from .lattice import Lattice, fold
from .spectral import GridField, SpectralField, forward_dft

CONVOLUTIONS = ("periodic", "truncated")
DENSE_LIMIT = 65536
_BLOCK = 8192  # complex entries per cache block


@dataclass(frozen=True, eq=False)
class SparseCoefficient:
    """The ``g`` nonzero Fourier modes of a coefficient's parent function."""

    lat: Lattice
    ks: np.ndarray
    amps: np.ndarray
    convolution: str = "periodic"

    @property
    def g(self) -> int:
        return len(self.amps)

    @property
    def modes(self) -> list:
        return [(tuple(int(c) for c in k), complex(a)) for k, a in zip(self.ks, self.amps)]

    def is_real_valued(self, atol=1e-14) -> bool:
        """True if every mode ``(k, a)`` has its partner ``(-k, conj(a))``."""
        lookup = {k: a for k, a in self.modes}
        for k, a in lookup.items():
            mk = tuple(-c for c in k)
            if self.convolution == "periodic":
                mk = fold(self.lat, mk)
            b = lookup.get(mk)
            if b is None or abs(b - np.conj(a)) > atol * max(1.0, abs(a)):
                return False
        return True


def _runs(dst, src):
    """Split matched index arrays into maximal runs of unit stride."""
    if dst.size == 0:
        return []
    cut = np.flatnonzero((np.diff(dst) != 1) | (np.diff(src) != 1)) + 1
    bounds = np.concatenate(([0], cut, [dst.size]))
    return [
        (slice(int(dst[b]), int(dst[e - 1]) + 1), slice(int(src[b]), int(src[e - 1]) + 1))
        for b, e in zip(bounds[:-1], bounds[1:])
    ]


def build_sparse_from_modes(lat: Lattice, modes, convolution="periodic", drop_below=1e-15):
    """Validate an analytic mode list ``[(k, amplitude), ...]``.

    With ``convolution="periodic"`` every ``k`` must lie in ``K_N^n`` and no
    two modes may fold to the same residue.  With ``"truncated"`` the modes
    may reach ``|k_l| <= N - 1`` (all differences of two lattice indices).
    Amplitudes with modulus below ``drop_below`` are discarded.
    """
    if convolution not in CONVOLUTIONS:
        raise LatticeError(f"unknown convolution {convolution!r}")
    ks, amps, seen, residues = [], [], set(), {}
    for k, a in modes:
        k = tuple(int(c) for c in np.asarray(k).reshape(-1))
        if len(k) != lat.n:
            raise LatticeError(f"mode {k} must have length n={lat.n}")
        if k in seen:
            raise LatticeError(f"duplicate mode {k}")
        seen.add(k)
        if convolution == "periodic":
            if not lat.contains(k):
                raise LatticeError(f"mode {k} outside K_N^n for N={lat.N}")
        elif any(abs(c) >= lat.N for c in k):
            raise LatticeError(f"mode {k} out of range |k_l| < N={lat.N}")
        r = tuple(c % lat.N for c in k)
        if convolution == "periodic" and r in residues:
            raise LatticeError(
                f"modes {residues[r]} and {k} alias to the same residue for N={lat.N}"
            )
        residues[r] = k
        a = complex(a)
        if not np.isfinite(a):
            raise LatticeError(f"mode {k} has non-finite amplitude")
        if abs(a) < drop_below:
            continue
        ks.append(k)
        amps.append(a)
    ks = np.array(ks, dtype=np.int64).reshape(len(ks), lat.n)
    return SparseCoefficient(lat, ks, np.array(amps, dtype=complex), convolution)


def build_sparse_from_samples(g: GridField, threshold: float, convolution="periodic"):
    """Transform grid samples of ``alpha``'s parent and keep modes above ``threshold``."""
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    s = forward_dft(g)
    keep = np.flatnonzero(np.abs(s.coeffs) > threshold)
    if keep.size == 0:
        raise LatticeError("all modes filtered: threshold exceeds every amplitude")
    lat = g.lat
    return SparseCoefficient(lat, lat.wavenumbers[keep].copy(), s.coeffs[keep].copy(), convolution)


class QOperator:
    """Matrix-free ``Q = B o W`` built from a sparse coefficient.

    Immutable after construction; :meth:`matvec` allocates its own buffers,
    so one operator may be shared between threads.
    """

    def __init__(self, alpha: SparseCoefficient):
        self.alpha = alpha
        self.lat = lat = alpha.lat
        self.convolution = alpha.convolution
        # freq_cache[l] holds lambda_l over the (N,)*n grid
        self.freq_cache = np.stack(
            [lat.frequencies[:, l].reshape(lat.shape) for l in range(lat.d)]
        )
        self.freq_cache.setflags(write=False)
        # complex copy: mixed real/complex ufuncs go through a slow cast path
        self._lam = self.freq_cache.astype(complex)
        self._shifts = [tuple(int(c) for c in k) for k in alpha.ks]
        self._plan = self._build_plan()

    def _axis_runs(self, ml):
        kax = self.lat.axis_wavenumbers
        N, half = self.lat.N, self.lat.N // 2
        src = kax - ml
        if self.convolution == "periodic":
            keep = np.ones(N, dtype=bool)
        else:
            keep = (src >= -half) & (src < half)
        return _runs(np.flatnonzero(keep), src[keep] % N)

    def _build_plan(self):
        # Work is blocked along axis 0 so that each block of the output and
        # the matching window of the input stay cache resident.
        lat = self.lat
        rows = max(1, _BLOCK // (lat.D // lat.N))
        plan = []
        for c0 in range(0, lat.N, rows):
            c1 = min(c0 + rows, lat.N)
            todo = []
            for m, a in zip(self._shifts, self.alpha.amps):
                rest = [self._axis_runs(ml) for ml in m[1:]]
                for d0, s0 in self._axis_runs(m[0]):
                    lo, hi = max(d0.start, c0), min(d0.stop, c1)
                    if lo >= hi:
                        continue
                    dst0 = slice(lo - c0, hi - c0)
                    src0 = slice(s0.start + lo - d0.start, s0.start + hi - d0.start)
                    for combo in itertools.product(*rest):
                        todo.append((
                            a,
                            (dst0,) + tuple(p[0] for p in combo),
                            (src0,) + tuple(p[1] for p in combo),
                        ))
            plan.append((slice(c0, c1), todo))
        return plan

    @property
    def D(self) -> int:
        return self.lat.D

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Apply ``Q`` to a raw coefficient vector of length D."""
        v = np.asarray(x, dtype=complex).reshape(self.lat.shape)
        out = np.zeros_like(v)
        if self.alpha.g == 0:
            return out.ravel()
        rows = self._plan[0][0].stop
        acc = np.empty((rows,) + v.shape[1:], dtype=complex)
        tmp = np.empty_like(acc)
        for block, todo in self._plan:
            a_blk = acc[: block.stop - block.start]
            for lam in self._lam:
                a_blk.fill(0.0)
                for a, dst, src in todo:
                    t = tmp[dst]
                    np.multiply(lam[src], v[src], out=t)
                    t *= a
                    a_blk[dst] += t
                a_blk *= lam[block]
                out[block] += a_blk
        return out.ravel()

    def apply(self, v: SpectralField) -> SpectralField:
        return apply_Q(self, v)


def apply_Q(op: QOperator, v: SpectralField) -> SpectralField:
    if not op.lat.same_as(v.lat):
        raise LatticeError("operator and field live on different lattices")
    return SpectralField(op.lat, op.matvec(v.coeffs))


def assemble_dense(op: QOperator) -> np.ndarray:
    """Dense D x D matrix of ``Q``, entrywise ``a(k_i - k_j) lambda_i . lambda_j``.

    Testing facility; refuses lattices with more than ``DENSE_LIMIT`` modes.
    """
    lat = op.lat
    if lat.D > DENSE_LIMIT:
        raise LatticeError(f"dense assembly refused for D={lat.D} > {DENSE_LIMIT}")
    D, N, half = lat.D, lat.N, lat.N // 2
    Q = np.zeros((D, D), dtype=complex)
    K = lat.wavenumbers
    lam = lat.frequencies
    rows = np.arange(D)
    for m, a in zip(op.alpha.ks, op.alpha.amps):
        src = K - m
        if op.convolution == "periodic":
            ok = np.ones(D, dtype=bool)
        else:
            ok = np.all((src >= -half) & (src < half), axis=1)
        cols = np.zeros(D, dtype=np.int64)
        for l in range(lat.n):
            cols = cols * N + src[:, l] % N
        i, j = rows[ok], cols[ok]
        Q[i, j] += a * np.einsum("ij,ij->i", lam[i], lam[j])
    return Q
