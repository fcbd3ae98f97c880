"""Flat key-value configuration files for scan runs.

Format: INI-like sections, one section per run.  Values are arithmetic
expressions over numbers and `pi` (e.g. `pi/3`, `2*pi`), or inclusive
ranges `start:stop:step` of such expressions.  Unknown keys are errors;
diagnostics carry file line numbers.

    [demo]
    theta = pi/3
    phi = pi/2
    tau = pi/360 : pi - pi/360 : pi/360
    eta = 0.05 : 1.0 : 0.05
    bias = eta-1            # zero | eta-1 | x=<expr>
    axis_alpha = 0
    axis_beta = pi/2
    families = slgi,wlgi,elgi
    tolerance = 1e-10
    out = demo.csv
"""

from __future__ import annotations

import ast
import math
import operator

import numpy as np

from .errors import ConfigError
from .scan import FAMILIES, ScanConfig

_KEYS = {
    "theta", "phi", "tau", "eta", "bias", "axis_alpha", "axis_beta",
    "families", "tolerance", "out", "jobs",
}

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def eval_expr(text: str, where: str = "") -> float:
    """Safely evaluate an arithmetic expression over numbers and pi."""
    try:
        node = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ConfigError(f"{where}: cannot parse value {text!r}") from exc

    def walk(n):
        if isinstance(n, ast.Constant) and isinstance(n.value, (int, float)):
            return float(n.value)
        if isinstance(n, ast.Name) and n.id == "pi":
            return math.pi
        if isinstance(n, ast.UnaryOp) and isinstance(n.op, (ast.USub, ast.UAdd)):
            v = walk(n.operand)
            return -v if isinstance(n.op, ast.USub) else v
        if isinstance(n, ast.BinOp) and type(n.op) in _BINOPS:
            return _BINOPS[type(n.op)](walk(n.left), walk(n.right))
        raise ConfigError(f"{where}: unsupported expression {text!r}")

    return walk(node)


def parse_grid(text: str, where: str = "") -> np.ndarray:
    """Single expression, or inclusive range start:stop:step."""
    parts = text.split(":")
    if len(parts) == 1:
        return np.array([eval_expr(parts[0], where)])
    if len(parts) != 3:
        raise ConfigError(f"{where}: expected 'value' or 'start:stop:step', got {text!r}")
    start, stop, step = (eval_expr(p, where) for p in parts)
    if step <= 0:
        raise ConfigError(f"{where}: step must be positive")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    if n < 1:
        raise ConfigError(f"{where}: empty range {text!r}")
    return start + step * np.arange(n)


def _read_sections(path: str) -> dict[str, dict[str, tuple[int, str]]]:
    sections: dict[str, dict[str, tuple[int, str]]] = {}
    current: str | None = None
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if not current:
                raise ConfigError(f"line {lineno}: empty section name")
            if current in sections:
                raise ConfigError(f"line {lineno}: duplicate section {current!r}")
            sections[current] = {}
            continue
        if current is None:
            raise ConfigError(f"line {lineno}: key outside any [section]")
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r} in section {current!r}")
        if key in sections[current]:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        sections[current][key] = (lineno, value)
    if not sections:
        raise ConfigError(f"config {path!r} has no sections")
    return sections


def _build(section: str, kv: dict[str, tuple[int, str]]) -> ScanConfig:
    def grid(key: str, default: str) -> np.ndarray:
        if key in kv:
            lineno, text = kv[key]
            return parse_grid(text, f"line {lineno} ({section}.{key})")
        return parse_grid(default, f"default {key}")

    theta = grid("theta", "0")
    phi = grid("phi", "0")
    tau = grid("tau", "pi/360 : pi - pi/360 : pi/360")
    eta = grid("eta", "1")

    bias_mode, x_fixed = "zero", 0.0
    if "bias" in kv:
        lineno, text = kv["bias"]
        text = text.strip()
        if text == "zero":
            bias_mode = "zero"
        elif text in ("eta-1", "eta - 1"):
            bias_mode = "eta-1"
        elif text.startswith("x="):
            bias_mode = "fixed"
            x_fixed = eval_expr(text[2:], f"line {lineno} ({section}.bias)")
        else:
            raise ConfigError(f"line {lineno}: bias must be zero, eta-1 or x=<value>")

    families: tuple[str, ...] = FAMILIES
    if "families" in kv:
        lineno, text = kv["families"]
        families = tuple(f.strip() for f in text.split(",") if f.strip())
        bad = [f for f in families if f not in FAMILIES]
        if bad:
            raise ConfigError(f"line {lineno}: unknown families {bad}")

    def scalar(key: str, default: float) -> float:
        if key in kv:
            lineno, text = kv[key]
            return eval_expr(text, f"line {lineno} ({section}.{key})")
        return default

    jobs = 1
    if "jobs" in kv:
        lineno, text = kv["jobs"]
        try:
            jobs = int(text)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: jobs must be an integer") from exc

    out = kv["out"][1].strip() if "out" in kv else None

    return ScanConfig(
        theta=theta, phi=phi, tau=tau, eta=eta,
        bias_mode=bias_mode, x_fixed=x_fixed,
        axis_alpha=scalar("axis_alpha", 0.0),
        axis_beta=scalar("axis_beta", math.pi / 2),
        families=families,
        nsit_tol=scalar("tolerance", 1e-10),
        jobs=jobs,
        out=out,
    )


def load_configs(path: str) -> dict[str, ScanConfig]:
    """Parse a config file into one ScanConfig per section."""
    return {name: _build(name, kv) for name, kv in _read_sections(path).items()}
