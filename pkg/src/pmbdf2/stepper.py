"""BDF2 time integration of ``du/dt + Q u = f`` in Fourier space.

The first step is the explicit update ``u1 = u0 - tau Q u0 + tau f(0)``;
every later step solves the shifted system

    (3 I + 2 tau Q) u^m = 4 u^{m-1} - u^{m-2} + 2 tau f(t_m)

with conjugate gradients on the matrix-free operator.  For real elliptic
coefficients ``Q`` is Hermitian positive semidefinite, so the shifted
matrix is Hermitian positive definite for every ``tau > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import SolverError
from .operator import DENSE_LIMIT, QOperator, assemble_dense
from .spectral import SpectralField

SourceProvider = Callable[[float], SpectralField]

FIRST_STEPS = ("paper_explicit", "implicit")


@dataclass(frozen=True)
class TimeGrid:
    tau: float
    M: int

    def __post_init__(self):
        if not self.tau > 0 or not math.isfinite(self.tau):
            raise ValueError(f"tau must be positive, got {self.tau}")
        if isinstance(self.M, bool) or int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M}")

    @property
    def T(self) -> float:
        return self.M * self.tau

    @classmethod
    def from_final_time(cls, T: float, tau: float, rtol: float = 1e-12) -> "TimeGrid":
        M = int(round(T / tau))
        if M < 1 or abs(M * tau - T) > rtol * T:
            raise ValueError(f"T={T} is not an integer multiple of tau={tau}")
        return cls(tau, M)

    def times(self) -> np.ndarray:
        return self.tau * np.arange(self.M + 1)


@dataclass
class SolveConfig:
    """Linear solver settings.

    ``max_iter=None`` means ``max(20, ceil(10 sqrt(D)))``.  The direct method
    assembles the dense matrix and is limited to ``D <= 65536``.
    """

    method: str = "iterative"
    rel_tol: float = 1e-13
    max_iter: int | None = None
    max_restarts: int = 5

    def __post_init__(self):
        if self.method not in ("iterative", "direct"):
            raise ValueError(f"unknown solver method {self.method!r}")
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be positive")

    def iteration_cap(self, D: int) -> int:
        if self.max_iter is not None:
            return self.max_iter
        return max(20, math.ceil(10 * math.sqrt(D)))


@dataclass
class SolveInfo:
    iterations: int
    residual: float
    history: list = field(default_factory=list)


@dataclass
class StepStats:
    """Per-step solver record.  Index 0 is the first (explicit) step."""

    iterations: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)

    @property
    def total_iterations(self) -> int:
        return int(sum(self.iterations))


def _cg(matvec, b, x0, rel_tol, max_iter, max_restarts):
    """Conjugate gradients for a Hermitian positive definite operator.

    Converges on the recursive residual, then confirms with the true
    residual and restarts from it if rounding made the two drift apart.
    """
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return np.zeros_like(b), SolveInfo(0, 0.0, [0.0])
    target = rel_tol * bnorm
    x = x0.copy()
    history = []
    its = 0
    for _ in range(max_restarts + 1):
        r = b - matvec(x)
        rnorm = np.linalg.norm(r)
        history.append(rnorm / bnorm)
        if rnorm <= target:
            return x, SolveInfo(its, rnorm / bnorm, history)
        p = r.copy()
        rho = np.vdot(r, r).real
        while its < max_iter:
            Ap = matvec(p)
            pAp = np.vdot(p, Ap).real
            if not pAp > 0:
                raise SolverError(
                    f"CG breakdown (p^H A p = {pAp:.3e}); operator not positive definite",
                    history,
                )
            step = rho / pAp
            x += step * p
            r -= step * Ap
            rho_new = np.vdot(r, r).real
            its += 1
            history.append(math.sqrt(rho_new) / bnorm)
            if math.sqrt(rho_new) <= target:
                break
            p *= rho_new / rho
            p += r
            rho = rho_new
        else:
            break
    r = b - matvec(x)
    res = np.linalg.norm(r) / bnorm
    if res <= rel_tol:
        return x, SolveInfo(its, res, history)
    raise SolverError(
        f"CG did not reach rel_tol={rel_tol:.1e} in {its} iterations "
        f"(final relative residual {res:.3e})",
        history,
    )


def solve_hpd(op: QOperator, shift3: float, scale2tau: float, rhs: SpectralField,
              cfg: SolveConfig | None = None, x0: SpectralField | None = None):
    """Solve ``(shift3 I + scale2tau Q) x = rhs``.

    Returns ``(x, SolveInfo)``.  ``x0`` is the initial guess for the
    iterative method (zero if omitted).
    """
    cfg = cfg or SolveConfig()
    if not shift3 > 0:
        raise ValueError("shift3 must be positive")
    b = rhs.coeffs
    if not np.all(np.isfinite(b)):
        raise SolverError("right-hand side has non-finite entries")
    lat = op.lat

    if cfg.method == "direct":
        if lat.D > DENSE_LIMIT:
            raise SolverError(f"direct solve refused for D={lat.D} > {DENSE_LIMIT}")
        A = scale2tau * assemble_dense(op)
        A[np.diag_indices_from(A)] += shift3
        x = scipy.linalg.solve(A, b, assume_a="her")
        bnorm = np.linalg.norm(b)
        res = np.linalg.norm(A @ x - b) / bnorm if bnorm else 0.0
        return SpectralField(lat, x), SolveInfo(0, res, [res])

    if scale2tau == 0.0 or op.alpha.g == 0:
        x = b / shift3
        return SpectralField(lat, x), SolveInfo(0, 0.0, [0.0])

    def matvec(v):
        return shift3 * v + scale2tau * op.matvec(v)

    start = np.zeros_like(b) if x0 is None else x0.coeffs.copy()
    x, info = _cg(matvec, b, start, cfg.rel_tol, cfg.iteration_cap(lat.D), cfg.max_restarts)
    if not np.all(np.isfinite(x)):
        raise SolverError("CG produced non-finite iterates", info.history)
    return SpectralField(lat, x), info


def step_first(op: QOperator, u0: SpectralField, f: SourceProvider, tau: float,
               first_step: str = "paper_explicit", cfg: SolveConfig | None = None):
    """First step from ``t0`` to ``t1``.

    ``"paper_explicit"`` returns ``u0 - tau Q u0 + tau f(0)`` with no solve.
    ``"implicit"`` solves ``(I + tau Q) u1 = u0 + tau f(tau)`` instead.
    Returns ``(u1, SolveInfo)``.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    if first_step == "paper_explicit":
        u1 = u0.coeffs - tau * op.matvec(u0.coeffs) + tau * f(0.0).coeffs
        _check_finite(u1, 1)
        return SpectralField(u0.lat, u1), SolveInfo(0, 0.0, [])
    if first_step == "implicit":
        rhs = u0 + tau * f(tau)
        return solve_hpd(op, 1.0, tau, rhs, cfg, x0=u0)
    raise ValueError(f"unknown first_step {first_step!r}")


def step_bdf2(op: QOperator, u_prev: SpectralField, u_prev2: SpectralField,
              f_m: SpectralField, tau: float, cfg: SolveConfig | None = None):
    """One BDF2 step; returns ``(u_m, SolveInfo)``.  Warm-started from ``u_prev``."""
    b = 4.0 * u_prev.coeffs - u_prev2.coeffs + 2.0 * tau * f_m.coeffs
    if not np.all(np.isfinite(b)):
        raise SolverError("right-hand side has non-finite entries")
    return solve_hpd(op, 3.0, 2.0 * tau, SpectralField(u_prev.lat, b), cfg, x0=u_prev)


def run(op: QOperator, u0: SpectralField, f: SourceProvider, grid: TimeGrid,
        cfg: SolveConfig | None = None, first_step: str = "paper_explicit",
        snapshot_stride: int | None = None):
    """Integrate from ``t=0`` to ``t=grid.T``; returns ``(u_M, StepStats)``."""
    cfg = cfg or SolveConfig()
    tau = grid.tau
    stats = StepStats()
    if snapshot_stride:
        stats.snapshots[0] = u0.copy()

    try:
        u1, info = step_first(op, u0, f, tau, first_step, cfg)
    except SolverError as exc:
        exc.step = 1
        raise
    stats.iterations.append(info.iterations)
    stats.residuals.append(info.residual)
    if snapshot_stride and 1 % snapshot_stride == 0:
        stats.snapshots[1] = u1.copy()

    u_prev2, u_prev = u0, u1
    for m in range(2, grid.M + 1):
        try:
            u_m, info = step_bdf2(op, u_prev, u_prev2, f(m * tau), tau, cfg)
        except SolverError as exc:
            exc.step = m
            raise
        stats.iterations.append(info.iterations)
        stats.residuals.append(info.residual)
        if snapshot_stride and m % snapshot_stride == 0:
            stats.snapshots[m] = u_m.copy()
        u_prev2, u_prev = u_prev, u_m
    return u_prev, stats


def _check_finite(x: np.ndarray, m: int):
    if not np.all(np.isfinite(x)):
        raise SolverError(f"non-finite solution at step {m}", step=m)
