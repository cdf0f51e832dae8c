"""Command line entry point: ``pmbdf2 {solve,space-sweep,time-sweep,selftest}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from ..errors import ConfigError, LatticeError, SolverError
from .config import load_config
from .runner import (
    SOLVE_COLUMNS,
    SPACE_COLUMNS,
    TIME_COLUMNS,
    rows_to_csv,
    rows_to_json,
    run_single,
    space_sweep,
    time_sweep,
)

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmbdf2",
        description="Projection-method BDF2 solver for quasiperiodic parabolic equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("solve", "run the finest (N, tau) of a config and print one row"),
        ("space-sweep", "error versus N at the smallest tau"),
        ("time-sweep", "error and order versus tau at the largest N"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--output", help="write the table here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--threads", type=int, default=1, help="concurrent sweep entries")
    sub.add_parser("selftest", help="run quick internal consistency checks")
    return parser


def selftest(out=None) -> bool:
    from ..lattice import Lattice, tensor_to_vector, vector_to_tensor
    from ..operator import QOperator, assemble_dense, build_sparse_from_modes
    from ..spectral import GridField, SpectralField, forward_dft, inverse_dft
    from ..stepper import SolveConfig, solve_hpd

    rng = np.random.default_rng(0)
    P = 2 * np.pi * np.array([[1.0, np.sqrt(5.0)]])
    checks = []

    lat = Lattice(4, P)
    ok = all(tensor_to_vector(lat, vector_to_tensor(lat, i)) == i for i in range(lat.D))
    checks.append(("index bijection N=4 n=2", ok))

    g = GridField(lat, rng.standard_normal(lat.D) + 1j * rng.standard_normal(lat.D))
    s = forward_dft(g)
    ok = np.isclose(np.mean(np.abs(g.values) ** 2), np.sum(np.abs(s.coeffs) ** 2), rtol=1e-12)
    ok &= np.allclose(inverse_dft(s).values, g.values, rtol=0, atol=1e-13)
    checks.append(("discrete Parseval and round trip", bool(ok)))

    alpha = build_sparse_from_modes(
        lat, [((0, 0), 6), ((1, 0), 0.5), ((-1, 0), 0.5), ((0, 1), 0.5), ((0, -1), 0.5)])
    op = QOperator(alpha)
    v = rng.standard_normal(lat.D) + 1j * rng.standard_normal(lat.D)
    Q = assemble_dense(op)
    ok = np.linalg.norm(op.matvec(v) - Q @ v) <= 1e-12 * np.linalg.norm(Q @ v)
    checks.append(("compressed Q matches dense Q", bool(ok)))

    rhs = SpectralField(lat, v)
    x_it, _ = solve_hpd(op, 3.0, 2e-3, rhs, SolveConfig(rel_tol=1e-14))
    x_d, _ = solve_hpd(op, 3.0, 2e-3, rhs, SolveConfig(method="direct"))
    ok = np.linalg.norm(x_it.coeffs - x_d.coeffs) <= 1e-10 * np.linalg.norm(x_d.coeffs)
    checks.append(("CG matches dense solve", bool(ok)))

    out = out or sys.stdout
    for name, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'}  {name}", file=out)
    return all(p for _, p in checks)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "selftest":
        return EXIT_OK if selftest() else EXIT_SOLVER

    try:
        cfg = load_config(args.config)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.command == "solve":
            rows, cols = [run_single(cfg)], SOLVE_COLUMNS
        elif args.command == "space-sweep":
            rows, cols = space_sweep(cfg, args.threads), SPACE_COLUMNS
        else:
            rows, cols = time_sweep(cfg, args.threads), TIME_COLUMNS
    except (ConfigError, LatticeError) as exc:
        print(f"pmbdf2: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        where = f" at step {exc.step}" if exc.step is not None else ""
        print(f"pmbdf2: solver failure{where}: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    text = rows_to_csv(rows, cols) if args.format == "csv" else rows_to_json(rows)
    output = args.output or cfg.output
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
