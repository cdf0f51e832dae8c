"""
Two dimensions and the time-step floor
======================================

With three unit modes as exact solution the spatial error vanishes once the
lattice holds them, so the error at every N >= 8 is set by tau alone.
This script writes plot data and, if matplotlib is around, a figure.
"""

import csv

from pmbdf2.harness import parse_config, run_single
from pmbdf2.harness.setups import two_d_first

Ns = [4, 8, 16, 32]
taus = [1e-6, 1e-12]
cfg = parse_config(two_d_first(Ns, taus, M=20))

table = []
for tau in taus:
    for N in Ns:
        row = run_single(cfg, N, tau)
        table.append((tau, N, row.err))
        print(f"tau = {tau:.0e}  N = {N:2d}  err = {row.err:.3e}")

with open("floor.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["tau", "N", "err"])
    w.writerows((f"{t:.0e}", N, f"{e:.3e}") for t, N, e in table)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    for tau in taus:
        ax.semilogy(Ns, [e for t, _, e in table if t == tau], "o-", label=f"tau = {tau:.0e}")
    ax.set_xlabel("N")
    ax.set_ylabel("error")
    ax.legend()
    fig.savefig("floor.png", dpi=120)
    print("wrote floor.png")
