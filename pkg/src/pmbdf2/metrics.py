"""Error norms and convergence orders."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import LatticeError
from .manufactured import ExactSolution, exact_coefficients
from .spectral import SpectralField


@dataclass
class ErrorReport:
    err: float
    N: int
    tau: float
    wall_seconds: float = 0.0
    solver_iterations: int = 0
    err_in_lattice: float = float("nan")
    tail: float = float("nan")
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isfinite(self.err) and self.err >= 0):
            raise ValueError(f"error must be finite and nonnegative, got {self.err}")


def l2qp_norm(s: SpectralField) -> float:
    """L2 norm of a quasiperiodic trigonometric sum via Parseval."""
    return float(np.linalg.norm(s.coeffs))


def error_parts(u_num: SpectralField, sol: ExactSolution, t_M: float):
    """Return ``(total, in_lattice, tail)``; total is the quadrature sum of the parts."""
    lat = u_num.lat
    if sol.n != lat.n:
        raise LatticeError("exact solution and field have different torus dimension")
    exact = exact_coefficients(sol, lat, t_M)
    inside = l2qp_norm(u_num - exact)
    outside = ~np.all((sol.ks >= -lat.N // 2) & (sol.ks < lat.N // 2), axis=1)
    tail = abs(sol.time_factor(t_M)) * float(np.linalg.norm(sol.amps[outside]))
    return math.hypot(inside, tail), inside, tail


def final_error(u_num: SpectralField, sol: ExactSolution, t_M: float) -> float:
    """``||u_num - u(., t_M)||`` including exact modes outside the lattice."""
    return error_parts(u_num, sol, t_M)[0]


def order_kappa(err1: float, tau1: float, err2: float, tau2: float) -> float:
    """Observed order ``ln(err1 / err2) / ln(tau1 / tau2)``."""
    if not (err1 > 0 and err2 > 0):
        raise ValueError(f"order undefined for errors {err1!r}, {err2!r}")
    if not (tau1 > 0 and tau2 > 0) or tau1 == tau2:
        raise ValueError(f"order undefined for step sizes {tau1!r}, {tau2!r}")
    return math.log(err1 / err2) / math.log(tau1 / tau2)
