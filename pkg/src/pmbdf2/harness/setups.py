"""Config documents for the reference 1D and 2D experiments.

All setups use the non-wrapping convolution, the ``exp(-2 pi i t)`` carrier
and a 1e-15 solver tolerance.  These are the settings under which the
reference error tables are reproduced.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

COMMON = {
    "convolution": "truncated",
    "first_step": "paper_explicit",
    "solver": {"method": "iterative", "rel_tol": 1e-15},
}
CARRIER = "exp(-2pi*it)"

ALPHA_1D = [[[0, 0], 6], [[1, 0], 0.5], [[-1, 0], 0.5], [[0, 1], 0.5], [[0, -1], 0.5]]
ALPHA_2D = [[[0, 0, 0], 12]] + [
    [[s * e for e in unit], 0.5]
    for unit in ([1, 0, 0], [0, 1, 0], [0, 0, 1])
    for s in (1, -1)
]


def decaying_box(n_extra: int = 0) -> list:
    """``exp(-(|m| + |n|))`` on ``-16 <= m, n <= 15``, padded with zero components."""
    return [
        [[m, k] + [0] * n_extra, math.exp(-(abs(m) + abs(k)))]
        for m in range(-16, 16)
        for k in range(-16, 16)
    ]


def one_d(N_list, tau_list, T=1e-4, name="one_d"):
    return {
        "name": name, "d": 1, "n": 2,
        "projection": [["2*pi", "2*pi*sqrt(5)"]],
        "alpha": ALPHA_1D,
        "exact_solution": {"carrier": CARRIER, "modes": decaying_box()},
        "N_list": N_list, "tau_list": tau_list, "T": T, **COMMON,
    }


def two_d_first(N_list, tau_list, T=None, M=None, name="two_d_first"):
    doc = {
        "name": name, "d": 2, "n": 3,
        "projection": [["2*pi", "2*pi*sqrt(5)", 0], [0, 0, "2*pi"]],
        "alpha": ALPHA_2D,
        "exact_solution": {
            "carrier": CARRIER,
            "modes": [[[1, 0, 0], 1], [[0, 1, 0], 1], [[0, 0, 1], 1]],
        },
        "N_list": N_list, "tau_list": tau_list, **COMMON,
    }
    doc.update({"T": T} if T is not None else {"M": M})
    return doc


def two_d_second(N_list, tau_list, T=1e-5, name="two_d_second"):
    return {
        "name": name, "d": 2, "n": 3,
        "projection": [[1, "sqrt(5)", 0], [0, 0, 1]],
        "alpha": ALPHA_2D,
        "exact_solution": {"carrier": CARRIER, "modes": decaying_box(1) + [[[0, 0, 1], 1]]},
        "N_list": N_list, "tau_list": tau_list, "T": T, **COMMON,
    }


def all_setups() -> dict:
    """File name -> config document for every shipped experiment."""
    return {
        "one_d.json": one_d([32], [1e-5, 5e-6, 2.5e-6, 1.25e-6], name="one_d"),
        "one_d_space.json": one_d([4, 8, 16, 32, 64], [1e-7], name="one_d_space"),
        "one_d_time.json": one_d([32], [1e-5, 5e-6, 2.5e-6], name="one_d_time"),
        "two_d_first.json": two_d_first([4, 8, 16, 32], [1e-6, 1e-12], M=20),
        "two_d_space.json": two_d_second([4, 8, 16, 32], [1e-7], name="two_d_space"),
        "two_d_time.json": two_d_second([32], [1e-6, 5e-7, 2.5e-7, 1.25e-7], name="two_d_time"),
    }


def write_setups(directory) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for fname, doc in all_setups().items():
        path = directory / fname
        path.write_text(json.dumps(doc) + "\n", encoding="utf-8")
        paths.append(path)
    return paths
