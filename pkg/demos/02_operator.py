"""
The matrix-free elliptic operator
=================================

``-div(alpha grad u)`` becomes a sum of shifted, frequency weighted copies
of the coefficient vector, one per Fourier mode of ``alpha``.  Nothing of
size D x D is ever formed unless asked for.
"""

import time

import numpy as np

from pmbdf2 import Lattice, QOperator, apply_Q, assemble_dense, build_sparse_from_modes
from pmbdf2 import SpectralField

P = 2 * np.pi * np.array([[1.0, np.sqrt(5.0)]])
alpha_modes = [((0, 0), 6.0), ((1, 0), 0.5), ((-1, 0), 0.5), ((0, 1), 0.5), ((0, -1), 0.5)]

lat = Lattice(8, P)
rng = np.random.default_rng(1)
v = SpectralField(lat, rng.standard_normal(lat.D) + 1j * rng.standard_normal(lat.D))

# %%
# Two conventions for shifts that leave the box: wrap them around
# (circulant) or drop them (Toeplitz section, a Galerkin projection).
for conv in ("periodic", "truncated"):
    op = QOperator(build_sparse_from_modes(lat, alpha_modes, conv))
    Q = assemble_dense(op)
    diff = np.linalg.norm(apply_Q(op, v).coeffs - Q @ v.coeffs) / np.linalg.norm(Q @ v.coeffs)
    eig = np.linalg.eigvalsh(Q)
    print(f"{conv:9s} matvec vs dense {diff:.1e}, eigenvalues in [{eig[0]:.2e}, {eig[-1]:.2e}]")

# %%
# The mean mode has zero frequency, so its row and column of Q vanish.
print("row 0 of Q is zero:", not np.any(Q[0]))

# %%
# Cost is linear in D for a fixed number of coefficient modes.
for N in (2**14, 2**15, 2**16):
    lat1 = Lattice(N, np.eye(1))
    op = QOperator(build_sparse_from_modes(lat1, [((0,), 6.0), ((1,), 0.5), ((-1,), 0.5)]))
    x = np.ones(N, dtype=complex)
    op.matvec(x)
    t = time.perf_counter()
    for _ in range(20):
        op.matvec(x)
    print(f"D = {N:6d}: {(time.perf_counter() - t) / 20 * 1e3:.3f} ms per matvec")
