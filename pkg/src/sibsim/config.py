"""Run configuration: INI parsing, validation, and construction of grids,
initial states, and system parameters.

The schema (documented in docs/config.md) has sections [grid], [data],
[run], [output], [sweep].  Scalar values accept plain numbers or small
arithmetic expressions in pi (e.g. ``Lx = 2*pi``); initial data are given
as a named preset, explicit mode coefficients, or expressions in x and y
sampled on the grid.
"""

from __future__ import annotations

import ast
import configparser
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import State, SystemParams, make_state
from .grids import Field, Grid2D, analyze, field_from_coef, make_grid

__all__ = [
    "RunConfig",
    "load_config",
    "parse_config_text",
    "build_grid",
    "build_initial_state",
    "build_params",
]

_SCALAR_NAMES = {"pi": math.pi, "e": math.e}
_FIELD_FUNCS = {
    name: getattr(np, name)
    for name in ("sin", "cos", "tan", "exp", "sqrt", "sinh", "cosh", "tanh", "abs")
}
_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)

_KNOWN_KEYS = {
    "grid": {"lx", "ly", "nx", "ny"},
    "data": {
        "preset",
        "phi", "phi_imag", "psi0", "psi1",
        "phi_modes", "phi_imag_modes", "psi0_modes", "psi1_modes",
    },
    "run": {
        "eps", "yosida_n", "dt", "t", "monitor_stride", "seed", "c0",
        "coupling", "dealias", "regularize_data", "checkpoint_times",
    },
    "output": {"dir"},
    "sweep": {"eps_list", "n_list", "dt_list"},
}


def _eval_node(node: ast.AST, names: dict):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, names)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.Name):
        if node.id in names:
            return names[node.id]
        raise ValueError(f"unknown name {node.id!r} in expression")
    if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
        left = _eval_node(node.left, names)
        right = _eval_node(node.right, names)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
        return left**right
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        val = _eval_node(node.operand, names)
        return val if isinstance(node.op, ast.UAdd) else -val
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        fn = names.get(node.func.id)
        if callable(fn) and not node.keywords:
            return fn(*[_eval_node(a, names) for a in node.args])
        raise ValueError(f"unknown function {node.func.id!r} in expression")
    raise ValueError(f"unsupported syntax in expression: {ast.dump(node)}")


def _safe_eval(expr: str, names: dict):
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {expr!r}: {exc}") from exc
    return _eval_node(tree, names)


def _scalar(expr: str) -> float:
    return float(_safe_eval(expr, dict(_SCALAR_NAMES)))


# ---------------------------------------------------------------------------
# data specification

# Each component spec is ("expr", text) or ("modes", ((k, l, amplitude), ...)).
_PRESETS = {
    "standard": {"phi": "sin(x)*sin(y)", "psi0": "sin(x)*sin(y)", "psi1": "0"},
    "zero": {"phi": "0", "psi0": "0", "psi1": "0"},
}


def _parse_modes(text: str, what: str) -> tuple[tuple[int, int, float], ...]:
    rows = []
    for line in text.strip().splitlines():
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(
                f"{what}: each mode row needs 'k l amplitude', got {line!r}"
            )
        try:
            k, l = int(parts[0]), int(parts[1])
            amp = float(parts[2])
        except ValueError as exc:
            raise ValueError(f"{what}: bad mode row {line!r}: {exc}") from exc
        if k < 1 or l < 1:
            raise ValueError(f"{what}: mode indices start at 1, got ({k}, {l})")
        rows.append((k, l, amp))
    if not rows:
        raise ValueError(f"{what}: empty mode list")
    return tuple(rows)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration for one run (or one sweep of runs)."""

    lx: float = math.pi
    ly: float = math.pi
    nx: int = 64
    ny: int = 64
    phi_spec: tuple = ("expr", "sin(x)*sin(y)")
    phi_imag_spec: tuple | None = None
    psi0_spec: tuple = ("expr", "sin(x)*sin(y)")
    psi1_spec: tuple = ("expr", "0")
    eps: float = 1.0
    yosida_n: float | None = None
    dt: float = 1e-3
    T: float = 1.0
    monitor_stride: int = 10
    seed: int = 0
    c0: float | None = None
    coupling: bool = True
    dealias: bool = True
    regularize_data: bool = True
    checkpoint_times: tuple[float, ...] = ()
    out_dir: str = "out"
    eps_list: tuple[float, ...] = (0.1, 0.05, 0.025, 0.0125)
    n_list: tuple[int, ...] = (8, 16, 32, 64)
    dt_list: tuple[float, ...] = (1e-2, 5e-3, 2.5e-3)
    raw: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not (self.lx > 0 and self.ly > 0):
            raise ValueError("domain lengths must be positive")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("mode counts must be >= 1")
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"eps must lie in [0, 1], got {self.eps}")
        if self.yosida_n is not None and self.yosida_n < 1:
            raise ValueError("yosida_n must be >= 1")
        if self.dt <= 0 or self.T <= 0:
            raise ValueError("dt and T must be positive")
        if self.monitor_stride < 1:
            raise ValueError("monitor_stride must be >= 1")
        if self.c0 is not None and not self.c0 > 0:
            raise ValueError("c0 override must be positive")
        if any(t < 0 for t in self.checkpoint_times):
            raise ValueError("checkpoint times must be nonnegative")
        for name in ("n_list", "dt_list"):
            vals = getattr(self, name)
            if any(v <= 0 for v in vals):
                raise ValueError(f"{name} entries must be positive")
        if any(not 0.0 <= e <= 1.0 for e in self.eps_list):
            raise ValueError("eps_list entries must lie in [0, 1]")


def parse_config_text(text: str) -> RunConfig:
    """Parse and validate INI-format configuration text."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ValueError(f"cannot parse config: {exc}") from exc

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ValueError(f"unknown config section [{section}]")
        for key in parser[section]:
            if key not in _KNOWN_KEYS[section]:
                raise ValueError(f"unknown key {key!r} in section [{section}]")

    kw: dict = {}
    raw = {s: dict(parser[s]) for s in parser.sections()}
    kw["raw"] = raw

    if parser.has_section("grid"):
        sec = parser["grid"]
        if "lx" in sec:
            kw["lx"] = _scalar(sec["lx"])
        if "ly" in sec:
            kw["ly"] = _scalar(sec["ly"])
        if "nx" in sec:
            kw["nx"] = sec.getint("nx")
        if "ny" in sec:
            kw["ny"] = sec.getint("ny")

    specs: dict = {}
    if parser.has_section("data"):
        sec = parser["data"]
        preset = sec.get("preset", fallback=None)
        if preset is not None:
            if preset not in _PRESETS:
                raise ValueError(
                    f"unknown data preset {preset!r}; known: {sorted(_PRESETS)}"
                )
            for comp, expr in _PRESETS[preset].items():
                specs[comp] = ("expr", expr)
        for comp in ("phi", "phi_imag", "psi0", "psi1"):
            if comp in sec:
                specs[comp] = ("expr", sec[comp])
            if f"{comp}_modes" in sec:
                if comp in sec:
                    raise ValueError(
                        f"give either {comp} or {comp}_modes, not both"
                    )
                specs[comp] = ("modes", _parse_modes(sec[f"{comp}_modes"], comp))
    if "phi" in specs:
        kw["phi_spec"] = specs["phi"]
    if "phi_imag" in specs:
        kw["phi_imag_spec"] = specs["phi_imag"]
    if "psi0" in specs:
        kw["psi0_spec"] = specs["psi0"]
    if "psi1" in specs:
        kw["psi1_spec"] = specs["psi1"]

    if parser.has_section("run"):
        sec = parser["run"]
        if "eps" in sec:
            kw["eps"] = _scalar(sec["eps"])
        if "yosida_n" in sec:
            kw["yosida_n"] = _scalar(sec["yosida_n"])
        if "dt" in sec:
            kw["dt"] = _scalar(sec["dt"])
        if "t" in sec:
            kw["T"] = _scalar(sec["t"])
        if "monitor_stride" in sec:
            kw["monitor_stride"] = sec.getint("monitor_stride")
        if "seed" in sec:
            kw["seed"] = sec.getint("seed")
        if "c0" in sec:
            kw["c0"] = _scalar(sec["c0"])
        if "coupling" in sec:
            kw["coupling"] = sec.getboolean("coupling")
        if "dealias" in sec:
            kw["dealias"] = sec.getboolean("dealias")
        if "regularize_data" in sec:
            kw["regularize_data"] = sec.getboolean("regularize_data")
        if "checkpoint_times" in sec:
            kw["checkpoint_times"] = tuple(
                _scalar(tok) for tok in sec["checkpoint_times"].split()
            )

    if parser.has_section("output") and "dir" in parser["output"]:
        kw["out_dir"] = parser["output"]["dir"]

    if parser.has_section("sweep"):
        sec = parser["sweep"]
        if "eps_list" in sec:
            kw["eps_list"] = tuple(_scalar(tok) for tok in sec["eps_list"].split())
        if "n_list" in sec:
            kw["n_list"] = tuple(int(_scalar(tok)) for tok in sec["n_list"].split())
        if "dt_list" in sec:
            kw["dt_list"] = tuple(_scalar(tok) for tok in sec["dt_list"].split())

    return RunConfig(**kw)


def load_config(path: str | None) -> RunConfig:
    """Load configuration from an INI file; None gives all defaults
    (the standard preset)."""
    if path is None:
        return RunConfig()
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


# ---------------------------------------------------------------------------
# construction


def build_grid(config: RunConfig) -> Grid2D:
    return make_grid(config.lx, config.ly, config.nx, config.ny)


def _build_component(grid: Grid2D, spec: tuple, what: str) -> Field:
    kind, payload = spec
    if kind == "expr":
        X, Y = np.meshgrid(grid.x, grid.y, indexing="ij")
        names = dict(_SCALAR_NAMES)
        names.update(_FIELD_FUNCS)
        names["x"] = X
        names["y"] = Y
        vals = _safe_eval(payload, names)
        vals = np.asarray(vals, dtype=float)
        if vals.shape == ():
            vals = np.full(grid.shape, float(vals))
        return analyze(grid, vals)
    coef = np.zeros(grid.shape)
    for k, l, amp in payload:
        if k > grid.Nx or l > grid.Ny:
            raise ValueError(
                f"{what}: mode ({k}, {l}) outside the {grid.Nx}x{grid.Ny} band"
            )
        coef[k - 1, l - 1] = amp
    return field_from_coef(grid, coef)


def build_initial_state(config: RunConfig, grid: Grid2D | None = None) -> State:
    """Sample (phi, psi0, psi1) on the grid and assemble the t=0 state."""
    if grid is None:
        grid = build_grid(config)
    phi = _build_component(grid, config.phi_spec, "phi")
    coef = phi.coef.astype(np.complex128)
    if config.phi_imag_spec is not None:
        coef = coef + 1j * _build_component(grid, config.phi_imag_spec, "phi_imag").coef
    psi0 = _build_component(grid, config.psi0_spec, "psi0")
    psi1 = _build_component(grid, config.psi1_spec, "psi1")
    return make_state(field_from_coef(grid, coef), psi0, psi1, t=0.0)


def build_params(config: RunConfig, **overrides) -> SystemParams:
    """SystemParams from the config; keyword overrides (eps, yosida_n, dt)
    support sweep members sharing one base config."""
    kw = dict(
        eps=config.eps,
        dt=config.dt,
        yosida_n=config.yosida_n,
        regularize_data=config.regularize_data,
        dealias=config.dealias,
        coupling=config.coupling,
    )
    kw.update(overrides)
    return SystemParams(**kw)
