"""
Lattices, index maps and the discrete transform
===============================================

A quasiperiodic function in d dimensions is the restriction of a periodic
parent function on the n-torus.  The parent is sampled on an N^n grid and
its Fourier modes are indexed by the box K_N^n.
"""

import numpy as np

from pmbdf2 import (
    GridField,
    Lattice,
    SpectralField,
    evaluate_at,
    forward_dft,
    grid_points,
    inverse_dft,
    tensor_to_vector,
    vector_to_tensor,
)

# One physical dimension, two torus dimensions: x -> (x, sqrt(5) x).
P = 2 * np.pi * np.array([[1.0, np.sqrt(5.0)]])
lat = Lattice(8, P)
print("D =", lat.D, "modes, grid shape", lat.shape)

# The vector index follows numpy's FFT bin order.
for k in [(0, 0), (1, 0), (-4, 3)]:
    i = tensor_to_vector(lat, k)
    print(k, "->", i, "->", vector_to_tensor(lat, i), " frequency", lat.frequencies[i])

# %%
# Sample the parent of alpha(x) = cos(2 pi x) + cos(2 sqrt(5) pi x) + 6
# and recover its five modes.

y = grid_points(lat)
samples = np.cos(y[:, 0]) + np.cos(y[:, 1]) + 6
coeffs = forward_dft(GridField(lat, samples))
big = np.flatnonzero(np.abs(coeffs.coeffs) > 1e-12)
for i in big:
    print(vector_to_tensor(lat, i), coeffs.coeffs[i].real)

back = inverse_dft(coeffs).values
print("round trip error", np.max(np.abs(back - samples)))

# %%
# A spectral field can be evaluated anywhere on the physical line, which is
# where the quasiperiodic function actually lives.
xs = np.linspace(0, 3, 7)[:, None]
vals = evaluate_at(coeffs, xs).real
exact = np.cos(2 * np.pi * xs[:, 0]) + np.cos(2 * np.sqrt(5) * np.pi * xs[:, 0]) + 6
print("max point error", np.max(np.abs(vals - exact)))

# %%
# Single exponentials make a handy sanity check.
c = np.zeros(lat.D, dtype=complex)
c[tensor_to_vector(lat, (1, 1))] = 1.0
s = SpectralField(lat, c)
x0 = 0.3
print(evaluate_at(s, [x0]), np.exp(1j * 2 * np.pi * (1 + np.sqrt(5)) * x0))
