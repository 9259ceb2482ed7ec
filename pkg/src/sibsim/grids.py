"""Sine-spectral discretization of a rectangle with homogeneous Dirichlet walls.

Fields on the open rectangle (0, Lx) x (0, Ly) are represented by their
coefficients against the L2-orthonormal eigenbasis of the Dirichlet Laplacian,

    e_{k,l}(x, y) = (2 / sqrt(Lx*Ly)) * sin(k pi x / Lx) * sin(l pi y / Ly),

with eigenvalues lam(k, l) = (k pi / Lx)^2 + (l pi / Ly)^2, k = 1..Nx,
l = 1..Ny.  Transforms between interior-node samples and coefficients are
DST-I (scipy.fft, orthonormal scaling), which makes Parseval exact:  the
l2 norm of the coefficient array equals the L2(Omega) norm of the
represented function.

Quadratic terms are evaluated pseudospectrally on a zero-padded grid with
at least ceil(3N/2) modes per axis, which prevents representable sine
content of a product from folding back onto the retained band.  Note that
the product of two sine polynomials is a cosine polynomial whose sine
re-expansion is an infinite series, so unlike the periodic case the padded
product is not the exact L2 projection of the product; the deviation
vanishes algebraically with resolution and is quantified in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import ceil, sqrt

import numpy as np
from scipy.fft import dstn

__all__ = [
    "Grid2D",
    "Field",
    "make_grid",
    "field_from_coef",
    "analyze",
    "synthesize",
    "product_dealiased",
    "sobolev_norm",
    "lp_norm",
]

#: Sobolev exponents for which coefficient-space norms are defined here.
SOBOLEV_EXPONENTS = (-1.0, -0.5, 0.0, 0.5, 1.0, 2.0)


@dataclass(frozen=True, eq=False)
class Grid2D:
    """Immutable spectral grid for the rectangle (0, Lx) x (0, Ly).

    Attributes:
        Lx, Ly: side lengths (positive).
        Nx, Ny: number of retained sine modes (and interior nodes) per axis.
        lam: (Nx, Ny) array of Dirichlet Laplacian eigenvalues, lam[k-1, l-1]
            corresponding to mode (k, l).  Strictly positive.
        x, y: interior collocation nodes j*L/(N+1), j = 1..N.
    """

    Lx: float
    Ly: float
    Nx: int
    Ny: int
    lam: np.ndarray = dc_field(repr=False)
    x: np.ndarray = dc_field(repr=False)
    y: np.ndarray = dc_field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.Nx, self.Ny)

    @property
    def pad_shape(self) -> tuple[int, int]:
        """Mode counts used for dealiased quadratic products (3/2 rule)."""
        return (ceil(3 * self.Nx / 2), ceil(3 * self.Ny / 2))

    def compatible(self, other: "Grid2D") -> bool:
        return (self.Lx, self.Ly, self.Nx, self.Ny) == (
            other.Lx,
            other.Ly,
            other.Nx,
            other.Ny,
        )


def make_grid(Lx: float, Ly: float, Nx: int, Ny: int) -> Grid2D:
    """Build the spectral grid, precomputing eigenvalues and nodes.

    Raises:
        ValueError: if a side length or mode count is not positive.
    """
    if not (Lx > 0 and Ly > 0):
        raise ValueError(f"side lengths must be positive, got Lx={Lx}, Ly={Ly}")
    if not (Nx >= 1 and Ny >= 1):
        raise ValueError(f"mode counts must be positive, got Nx={Nx}, Ny={Ny}")
    kx = np.arange(1, Nx + 1) * np.pi / Lx
    ky = np.arange(1, Ny + 1) * np.pi / Ly
    lam = kx[:, None] ** 2 + ky[None, :] ** 2
    x = np.arange(1, Nx + 1) * (Lx / (Nx + 1))
    y = np.arange(1, Ny + 1) * (Ly / (Ny + 1))
    for arr in (lam, x, y):
        arr.setflags(write=False)
    return Grid2D(float(Lx), float(Ly), int(Nx), int(Ny), lam, x, y)


@dataclass(frozen=True)
class Field:
    """Coefficients of a scalar field against the orthonormal sine basis.

    coef[k-1, l-1] multiplies e_{k,l}.  dtype float64 for real-kind fields,
    complex128 for complex-kind.
    """

    grid: Grid2D
    coef: np.ndarray

    @property
    def kind(self) -> str:
        return "complex" if np.iscomplexobj(self.coef) else "real"

    def __add__(self, other: "Field") -> "Field":
        _check_same_grid(self, other)
        return Field(self.grid, self.coef + other.coef)

    def __sub__(self, other: "Field") -> "Field":
        _check_same_grid(self, other)
        return Field(self.grid, self.coef - other.coef)

    def __mul__(self, scalar) -> "Field":
        return Field(self.grid, self.coef * scalar)

    __rmul__ = __mul__

    def conj(self) -> "Field":
        return Field(self.grid, np.conj(self.coef))


def field_from_coef(grid: Grid2D, coef: np.ndarray) -> Field:
    """Wrap a coefficient array, normalizing dtype to float64/complex128."""
    coef = np.asarray(coef)
    if coef.shape != grid.shape:
        raise ValueError(
            f"coefficient shape {coef.shape} does not match grid {grid.shape}"
        )
    dtype = np.complex128 if np.iscomplexobj(coef) else np.float64
    return Field(grid, coef.astype(dtype, copy=False))


def zero_field(grid: Grid2D, kind: str = "real") -> Field:
    dtype = np.complex128 if kind == "complex" else np.float64
    return Field(grid, np.zeros(grid.shape, dtype=dtype))


def _check_same_grid(a: Field, b: Field) -> None:
    if not a.grid.compatible(b.grid):
        raise ValueError("fields live on different grids")


def _scale(Lx: float, Ly: float, shape: tuple[int, int]) -> float:
    # DST-I (ortho) maps samples to sqrt((N+1)/L)-scaled coefficients; this
    # factor converts to the L2-orthonormal basis.
    return sqrt(Lx * Ly / ((shape[0] + 1) * (shape[1] + 1)))


def coef_to_values(grid: Grid2D, coef: np.ndarray, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Evaluate a coefficient array at the interior nodes of an (optionally
    refined) grid with `shape` modes per axis.  Zero-pads as needed."""
    if shape is None:
        shape = grid.shape
    if shape[0] < coef.shape[0] or shape[1] < coef.shape[1]:
        raise ValueError("synthesis grid must be at least as fine as the band")
    if shape != coef.shape:
        padded = np.zeros(shape, dtype=coef.dtype)
        padded[: coef.shape[0], : coef.shape[1]] = coef
        coef = padded
    return dstn(coef, type=1, norm="ortho") / _scale(grid.Lx, grid.Ly, shape)


def values_to_coef(grid: Grid2D, values: np.ndarray) -> np.ndarray:
    """Transform interior-node samples (on a grid of any shape) to sine
    coefficients and truncate to the retained band."""
    shape = values.shape
    coef = dstn(values, type=1, norm="ortho") * _scale(grid.Lx, grid.Ly, shape)
    return coef[: grid.Nx, : grid.Ny]


def analyze(grid: Grid2D, samples: np.ndarray) -> Field:
    """Coefficients of the unique band-limited interpolant through samples
    given at the grid's interior nodes.

    Args:
        grid: target grid.
        samples: (Nx, Ny) array, samples[j-1, m-1] = f(x_j, y_m).

    Returns:
        Field with real or complex kind matching the samples.
    """
    samples = np.asarray(samples)
    if samples.shape != grid.shape:
        raise ValueError(
            f"sample shape {samples.shape} does not match grid {grid.shape}"
        )
    return field_from_coef(grid, values_to_coef(grid, samples))


def synthesize(f: Field) -> np.ndarray:
    """Values of the field at the grid's interior nodes.  Inverse of analyze."""
    return coef_to_values(f.grid, f.coef)


def product_dealiased(a: Field, b: Field) -> Field:
    """Pointwise product a*b evaluated without quadratic wraparound.

    Both factors are zero-padded to ceil(3N/2) modes per axis, multiplied at
    the padded interior nodes, transformed back, and truncated to the
    original band.  Sine modes that a product of two band-limited factors
    can excite (up to 2N per axis) then never alias onto the retained band.
    """
    _check_same_grid(a, b)
    grid = a.grid
    shape = grid.pad_shape
    va = coef_to_values(grid, a.coef, shape)
    vb = coef_to_values(grid, b.coef, shape)
    return field_from_coef(grid, values_to_coef(grid, va * vb))


def sobolev_norm(f: Field, s: float) -> float:
    """Norm of (-Laplacian)^(s/2) applied to the field, via the exact
    eigenvalue sum (sum over modes of lam^s |c|^2)^(1/2).

    Args:
        f: field.
        s: one of -1, -1/2, 0, 1/2, 1, 2.

    Raises:
        ValueError: for unsupported exponents.
    """
    if float(s) not in SOBOLEV_EXPONENTS:
        raise ValueError(f"unsupported Sobolev exponent {s}; allowed: {SOBOLEV_EXPONENTS}")
    w = f.grid.lam ** float(s) if s != 0 else 1.0
    return float(np.sqrt(np.sum(w * np.abs(f.coef) ** 2)))


def h1_norm(f: Field) -> float:
    """(||f||_2^2 + ||grad f||_2^2)^(1/2)."""
    return float(np.sqrt(np.sum((1.0 + f.grid.lam) * np.abs(f.coef) ** 2)))


def h2_norm(f: Field) -> float:
    """(||f||_2^2 + ||Laplacian f||_2^2)^(1/2); equivalent to the usual H2 norm."""
    return float(np.sqrt(np.sum((1.0 + f.grid.lam**2) * np.abs(f.coef) ** 2)))


def lp_norm(f: Field, p: float) -> float:
    """L^p(Omega) norm by composite trapezoid quadrature on a 2x-refined
    synthesis grid.  Boundary values vanish (Dirichlet), so the rule reduces
    to a plain weighted sum over interior nodes.  For band-limited fields and
    even integer p <= 4 the quadrature is exact up to rounding.

    Args:
        p: exponent, must satisfy p >= 2.
    """
    if p < 2:
        raise ValueError(f"lp_norm requires p >= 2, got {p}")
    grid = f.grid
    shape = (2 * grid.Nx, 2 * grid.Ny)
    vals = coef_to_values(grid, f.coef, shape)
    hx = grid.Lx / (shape[0] + 1)
    hy = grid.Ly / (shape[1] + 1)
    return float((np.sum(np.abs(vals) ** p) * hx * hy) ** (1.0 / p))
