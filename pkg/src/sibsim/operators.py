"""Functional calculus of the Dirichlet Laplacian as diagonal spectral multipliers.

Every operator used by the solver is a function of -Laplacian and therefore
acts diagonally on sine coefficients.  The eigenvalues are strictly positive
(no zero mode on a Dirichlet rectangle), so negative and fractional powers
need no special-casing.

Conventions:
    yosida(n)              (1 - Laplacian/n)^(-1), symbol 1/(1 + lam/n)
    omega(eps)             sqrt(-Laplacian) (1 - eps*Laplacian)^(-1/2),
                           symbol sqrt(lam / (1 + eps*lam))
    schrodinger(t)         exp(i t Laplacian), symbol exp(-i t lam)
    wave cos/sinc parts    cos(t omega), sin(t omega)/omega
    source(eps)            (1 - eps*Laplacian)^(-1) Laplacian, symbol
                           -lam/(1 + eps*lam) = -omega^2

The wave parts propagate v'' = -omega^2 v exactly:  v(t) = cos_part v0 +
sinc_part v0', and cos^2 + omega^2 sinc^2 = 1 mode by mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .grids import Field, Grid2D, field_from_coef

__all__ = [
    "DiagonalOperator",
    "yosida_op",
    "power_op",
    "omega_op",
    "schrodinger_propagator",
    "wave_propagator",
    "source_op",
    "apply",
    "compose",
]

POWER_EXPONENTS = (-1.0, -0.5, 0.5, 1.0)


@dataclass(frozen=True)
class DiagonalOperator:
    """A spectral multiplier: (Op f)^hat(k,l) = symbol[k-1,l-1] * f^hat(k,l)."""

    grid: Grid2D
    symbol: np.ndarray = dc_field(repr=False)
    tag: str = ""

    def __matmul__(self, other: "DiagonalOperator") -> "DiagonalOperator":
        return compose(self, other)


def _wrap(grid: Grid2D, symbol: np.ndarray, tag: str) -> DiagonalOperator:
    symbol = np.asarray(symbol)
    symbol.setflags(write=False)
    return DiagonalOperator(grid, symbol, tag)


def yosida_op(grid: Grid2D, n: float) -> DiagonalOperator:
    """Yosida smoothing (1 - Laplacian/n)^(-1).

    The symbol obeys, exactly in real arithmetic:  0 < sigma <= 1,
    sqrt(lam)*sigma <= sqrt(n), sqrt(lam)*sigma <= sqrt(lam), and
    lam*sigma <= lam.
    """
    if not n >= 1:
        raise ValueError(f"yosida index must satisfy n >= 1, got {n}")
    return _wrap(grid, 1.0 / (1.0 + grid.lam / n), f"yosida({n})")


def power_op(grid: Grid2D, s: float) -> DiagonalOperator:
    """(-Laplacian)^s for s in {-1, -1/2, 1/2, 1}."""
    if float(s) not in POWER_EXPONENTS:
        raise ValueError(f"unsupported power {s}; allowed: {POWER_EXPONENTS}")
    return _wrap(grid, grid.lam ** float(s), f"power({s})")


def omega_op(grid: Grid2D, eps: float) -> DiagonalOperator:
    """Dispersion frequency sqrt(-Laplacian)(1 - eps*Laplacian)^(-1/2).

    eps = 1 is the improved-Boussinesq wave operator (symbol bounded by
    1/sqrt(eps)); eps = 0 degenerates to sqrt(-Laplacian) (Zakharov limit).
    """
    if not 0 <= eps <= 1:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    return _wrap(grid, np.sqrt(grid.lam / (1.0 + eps * grid.lam)), f"omega({eps})")


def schrodinger_propagator(grid: Grid2D, t: float) -> DiagonalOperator:
    """Free Schrodinger group exp(i t Laplacian); unitary for any real t."""
    return _wrap(grid, np.exp(-1j * grid.lam * t), f"schrodinger({t})")


def wave_propagator(grid: Grid2D, t: float, eps: float) -> tuple[DiagonalOperator, DiagonalOperator]:
    """Cosine and sinc parts of the linear wave flow for v'' = -omega_eps^2 v.

    Returns (cos(t omega), sin(t omega)/omega).  At t = 0 this is
    (identity, zero).  All eigenvalues are positive so the sinc part is an
    ordinary quotient.
    """
    w = omega_op(grid, eps).symbol
    return (
        _wrap(grid, np.cos(t * w), f"wave_cos({t},{eps})"),
        _wrap(grid, np.sin(t * w) / w, f"wave_sinc({t},{eps})"),
    )


def source_op(grid: Grid2D, eps: float) -> DiagonalOperator:
    """(1 - eps*Laplacian)^(-1) Laplacian = -omega_eps^2.

    Applying it to v + |u|^2 yields the acceleration of the wave component
    of the coupled system.
    """
    if not 0 <= eps <= 1:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    return _wrap(grid, -grid.lam / (1.0 + eps * grid.lam), f"source({eps})")


def apply(op: DiagonalOperator, f: Field) -> Field:
    """Apply a diagonal operator to a field.

    Real-kind fields stay real under real symbols and are promoted to
    complex under complex symbols.
    """
    if not op.grid.compatible(f.grid):
        raise ValueError("operator and field grids do not match")
    return field_from_coef(f.grid, op.symbol * f.coef)


def compose(a: DiagonalOperator, b: DiagonalOperator) -> DiagonalOperator:
    """Composition of diagonal operators; symbols multiply pointwise."""
    if not a.grid.compatible(b.grid):
        raise ValueError("operator grids do not match")
    return _wrap(a.grid, a.symbol * b.symbol, f"{a.tag}*{b.tag}")
