"""
BDF2 time stepping on a model problem
=====================================

With a constant coefficient every Fourier mode decays independently as
exp(-c |lambda|^2 t).  That gives an exact answer to measure the order of
the scheme against.
"""

import numpy as np

from pmbdf2 import Lattice, QOperator, SpectralField, TimeGrid, build_sparse_from_modes, run
from pmbdf2 import order_kappa, tensor_to_vector

lat = Lattice(4, np.array([[1.0, 0.0]]))
c, T = 2.0, 0.02
op = QOperator(build_sparse_from_modes(lat, [((0, 0), c)]))
i = tensor_to_vector(lat, (1, 0))
u0 = np.zeros(lat.D, dtype=complex)
u0[i] = 1.0
exact = np.exp(-c * np.sum(lat.frequencies[i] ** 2) * T)


def no_source(t):
    return SpectralField.zeros(lat)


# %%
# Halving tau cuts the error by four.
prev = None
for tau in (2e-3, 1e-3, 5e-4, 2.5e-4):
    uM, stats = run(op, SpectralField(lat, u0), no_source, TimeGrid.from_final_time(T, tau))
    err = abs(uM.coeffs[i] - exact)
    kappa = "" if prev is None else f"order {order_kappa(prev[1], prev[0], err, tau):.2f}"
    print(f"tau = {tau:.2e}  error = {err:.3e}  {kappa}")
    prev = (tau, err)

# %%
# The first step is explicit by default.  An implicit Euler start is
# available and gives the same order here.
uM, _ = run(op, SpectralField(lat, u0), no_source, TimeGrid(2.5e-4, 80), first_step="implicit")
print("implicit start error", abs(uM.coeffs[i] - exact))
