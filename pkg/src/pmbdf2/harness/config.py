"""JSON experiment configuration.

Numeric fields accept plain numbers or short expressions such as
``"2*pi"``, ``"2*pi*sqrt(5)"`` or ``"-2*pi"`` so projection matrices keep
full double precision.  Expressions are evaluated by a restricted AST
walker (numbers, ``pi``, ``e``, ``sqrt``, ``+ - * / **``, unary minus).
"""

from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..errors import ConfigError
from ..stepper import FIRST_STEPS, SolveConfig

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt}

# carrier tags for exp(rate * t)
CARRIERS = {"exp(-it)": -1j, "exp(-2pi*it)": -2j * math.pi}


def eval_expr(value, where="value") -> float:
    """Evaluate a number or an arithmetic expression string to a float."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{where}: expected a number or expression, got {value!r}")
    try:
        tree = ast.parse(value.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"{where}: cannot parse {value!r}") from exc

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](walk(node.args[0]))
        raise ConfigError(f"{where}: unsupported element in {value!r}")

    try:
        out = walk(tree)
    except (ZeroDivisionError, ValueError, OverflowError) as exc:
        raise ConfigError(f"{where}: cannot evaluate {value!r}: {exc}") from exc
    if not math.isfinite(out):
        raise ConfigError(f"{where}: {value!r} is not finite")
    return out


@dataclass
class ExperimentConfig:
    d: int
    n: int
    projection: np.ndarray
    alpha: list
    exact_modes: list
    carrier_rate: complex
    N_list: list
    tau_list: list
    T: float | None = None
    M: int | None = None
    convolution: str = "periodic"
    solver: SolveConfig = field(default_factory=SolveConfig)
    first_step: str = "paper_explicit"
    output: str | None = None
    name: str = ""

    def steps_for(self, tau: float) -> int:
        """Step count for ``tau``: fixed ``M`` if given, else ``round(T / tau)``."""
        if self.M is not None:
            return self.M
        M = int(round(self.T / tau))
        if M < 1 or abs(M * tau - self.T) > 1e-9 * self.T:
            raise ConfigError(f"tau={tau} does not divide T={self.T}")
        return M

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


def _modes(raw, n, where):
    if not isinstance(raw, list):
        raise ConfigError(f"{where}: expected a list of [k, re, im] entries")
    out = []
    for j, entry in enumerate(raw):
        w = f"{where}[{j}]"
        if not isinstance(entry, (list, tuple)) or len(entry) not in (2, 3):
            raise ConfigError(f"{w}: expected [k, re] or [k, re, im]")
        k = entry[0]
        if not isinstance(k, list) or len(k) != n or not all(
                isinstance(c, int) and not isinstance(c, bool) for c in k):
            raise ConfigError(f"{w}: wavenumber must be a list of {n} integers")
        re = eval_expr(entry[1], f"{w}.re")
        im = eval_expr(entry[2], f"{w}.im") if len(entry) == 3 else 0.0
        out.append((tuple(k), complex(re, im)))
    return out


def _carrier(raw, where):
    if isinstance(raw, str):
        if raw not in CARRIERS:
            raise ConfigError(f"{where}: unknown carrier {raw!r}; use one of {sorted(CARRIERS)}")
        return complex(CARRIERS[raw])
    if isinstance(raw, dict) and set(raw) <= {"rate_re", "rate_im"}:
        return complex(eval_expr(raw.get("rate_re", 0), f"{where}.rate_re"),
                       eval_expr(raw.get("rate_im", 0), f"{where}.rate_im"))
    raise ConfigError(f"{where}: expected a carrier tag or {{rate_re, rate_im}}")


def _require(doc, key, kind=None):
    if key not in doc:
        raise ConfigError(f"missing field {key!r}")
    v = doc[key]
    if kind is not None and not isinstance(v, kind):
        raise ConfigError(f"field {key!r} has wrong type {type(v).__name__}")
    return v


def parse_config(doc: dict) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    d = _require(doc, "d", int)
    n = _require(doc, "n", int)
    if d < 1 or n < d:
        raise ConfigError(f"need 1 <= d <= n, got d={d}, n={n}")
    P = _require(doc, "projection", list)
    if len(P) != d or not all(isinstance(r, list) and len(r) == n for r in P):
        raise ConfigError(f"projection must be a {d}x{n} nested list")
    P = np.array([[eval_expr(v, f"projection[{i}][{j}]") for j, v in enumerate(r)]
                  for i, r in enumerate(P)])

    alpha = _modes(_require(doc, "alpha"), n, "alpha")
    ex = _require(doc, "exact_solution", dict)
    exact = _modes(ex.get("modes"), n, "exact_solution.modes")
    rate = _carrier(ex.get("carrier", "exp(-it)"), "exact_solution.carrier")

    N_list = _require(doc, "N_list", list)
    if not N_list or not all(isinstance(N, int) and not isinstance(N, bool)
                             and N >= 2 and N % 2 == 0 for N in N_list):
        raise ConfigError("N_list must be a nonempty list of even integers >= 2")
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ConfigError("N_list must be strictly ascending")
    tau_list = [eval_expr(t, f"tau_list[{j}]") for j, t in enumerate(_require(doc, "tau_list", list))]
    if not tau_list or any(t <= 0 for t in tau_list):
        raise ConfigError("tau_list must be a nonempty list of positive numbers")
    if any(b >= a for a, b in zip(tau_list, tau_list[1:])):
        raise ConfigError("tau_list must be strictly decreasing")

    T = doc.get("T")
    M = doc.get("M")
    if (T is None) == (M is None):
        raise ConfigError("give exactly one of 'T' (final time) or 'M' (steps per run)")
    if T is not None:
        T = eval_expr(T, "T")
        if T <= 0:
            raise ConfigError("T must be positive")
    elif not isinstance(M, int) or isinstance(M, bool) or M < 1:
        raise ConfigError("M must be a positive integer")

    conv = doc.get("convolution", "periodic")
    if conv not in ("periodic", "truncated"):
        raise ConfigError(f"convolution must be 'periodic' or 'truncated', got {conv!r}")
    first = doc.get("first_step", "paper_explicit")
    if first not in FIRST_STEPS:
        raise ConfigError(f"first_step must be one of {FIRST_STEPS}, got {first!r}")

    s = doc.get("solver", {})
    if not isinstance(s, dict) or not set(s) <= {"method", "rel_tol", "max_iter", "max_restarts"}:
        raise ConfigError("solver must be an object with method/rel_tol/max_iter/max_restarts")
    try:
        solver = SolveConfig(
            method=s.get("method", "iterative"),
            rel_tol=eval_expr(s.get("rel_tol", 1e-13), "solver.rel_tol"),
            max_iter=s.get("max_iter"),
            max_restarts=s.get("max_restarts", 5),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"solver: {exc}") from exc

    cfg = ExperimentConfig(
        d=d, n=n, projection=P, alpha=alpha, exact_modes=exact, carrier_rate=rate,
        N_list=list(N_list), tau_list=tau_list, T=T, M=M, convolution=conv,
        solver=solver, first_step=first, output=doc.get("output"),
        name=str(doc.get("name", "")),
    )
    for tau in tau_list:
        cfg.steps_for(tau)
    return cfg


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(doc)
