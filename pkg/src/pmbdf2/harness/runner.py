"""Single runs, convergence sweeps and their CSV/JSON tables."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

from ..lattice import Lattice
from ..manufactured import ExactSolution, exact_coefficients, source_provider
from ..metrics import error_parts, order_kappa
from ..operator import QOperator, build_sparse_from_modes
from ..stepper import TimeGrid, run
from .config import ExperimentConfig

SPACE_COLUMNS = ("N", "err", "wall_seconds", "iters")
TIME_COLUMNS = ("tau", "err", "kappa", "wall_seconds", "iters")
SOLVE_COLUMNS = ("N", "tau", "M", "err", "wall_seconds", "iters")


@dataclass
class ResultRow:
    N: int
    tau: float
    M: int
    err: float
    kappa: float | None = None
    wall_seconds: float = 0.0
    total_solver_iterations: int = 0
    err_in_lattice: float = float("nan")
    tail: float = float("nan")

    def __post_init__(self):
        if not self.err >= 0:
            raise ValueError(f"negative or NaN error {self.err}")


def run_single(cfg: ExperimentConfig, N: int | None = None, tau: float | None = None) -> ResultRow:
    """Build lattice, operator and source for one ``(N, tau)`` and integrate.

    Defaults to the finest entries of the config (largest N, smallest tau).
    Wall time covers the time-stepping loop only.
    """
    N = cfg.N_list[-1] if N is None else N
    tau = cfg.tau_list[-1] if tau is None else tau
    grid = TimeGrid(tau, cfg.steps_for(tau))
    lat = Lattice(N, cfg.projection)
    alpha = build_sparse_from_modes(lat, cfg.alpha, cfg.convolution)
    op = QOperator(alpha)
    sol = ExactSolution.from_modes(cfg.exact_modes, rate=cfg.carrier_rate, n=cfg.n)
    f = source_provider(sol, alpha, lat)
    u0 = exact_coefficients(sol, lat, 0.0)

    t0 = time.perf_counter()
    u, stats = run(op, u0, f, grid, cfg.solver, cfg.first_step)
    wall = time.perf_counter() - t0

    err, inside, tail = error_parts(u, sol, grid.T)
    return ResultRow(N=N, tau=tau, M=grid.M, err=err, wall_seconds=wall,
                     total_solver_iterations=stats.total_iterations,
                     err_in_lattice=inside, tail=tail)


def _map(fn, items, threads):
    if threads and threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def space_sweep(cfg: ExperimentConfig, threads: int = 1) -> list[ResultRow]:
    """One row per N at the smallest configured tau."""
    tau = cfg.tau_list[-1]
    return _map(lambda N: run_single(cfg, N, tau), list(cfg.N_list), threads)


def time_sweep(cfg: ExperimentConfig, threads: int = 1) -> list[ResultRow]:
    """One row per tau at the largest configured N, with pairwise orders."""
    N = cfg.N_list[-1]
    rows = _map(lambda tau: run_single(cfg, N, tau), list(cfg.tau_list), threads)
    for prev, row in zip(rows, rows[1:]):
        try:
            row.kappa = order_kappa(prev.err, prev.tau, row.err, row.tau)
        except ValueError:
            row.kappa = math.nan
    return rows


def _fmt(x) -> str:
    if x is None:
        return ""
    return "nan" if isinstance(x, float) and math.isnan(x) else f"{x:.3e}"


def _cell(row: ResultRow, col: str) -> str:
    if col == "N":
        return str(row.N)
    if col == "M":
        return str(row.M)
    if col == "iters":
        return str(row.total_solver_iterations)
    if col == "kappa":
        if row.kappa is None:
            return ""
        return "nan" if math.isnan(row.kappa) else f"{row.kappa:.2f}"
    return _fmt(getattr(row, col))


def rows_to_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r, c) for c in columns])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    def clean(d):
        return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()}

    return json.dumps([clean(asdict(r)) for r in rows], indent=2) + "\n"


def csv_to_rows(text: str) -> list[ResultRow]:
    """Parse a table written by :func:`rows_to_csv` back into rows.

    Columns absent from the table take their defaults (``N``/``tau``/``M``
    become 0 when missing).
    """
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        kappa = rec.get("kappa")
        rows.append(ResultRow(
            N=int(rec["N"]) if "N" in rec else 0,
            tau=float(rec["tau"]) if "tau" in rec else 0.0,
            M=int(rec["M"]) if "M" in rec else 0,
            err=float(rec["err"]),
            kappa=None if kappa in (None, "") else float(kappa),
            wall_seconds=float(rec.get("wall_seconds", 0.0)),
            total_solver_iterations=int(rec.get("iters", 0)),
        ))
    return rows
