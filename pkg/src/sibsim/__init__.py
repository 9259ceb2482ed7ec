"""Pseudospectral simulator and verification harness for the coupled
Schrodinger / improved-Boussinesq system and its Zakharov limit on a
rectangle with homogeneous Dirichlet boundary conditions."""

__version__ = "0.1.0"

from .grids import Field, Grid2D, analyze, make_grid, synthesize
from .dynamics import (
    State,
    SystemParams,
    integrate,
    make_state,
    picard_duhamel,
    strang_step,
)
from .functionals import (
    DataNorms,
    EnvelopeConstants,
    charge,
    difference_metric,
    energy,
    estimate_gn_constant,
    gn_quotient,
)
from .config import RunConfig, load_config

__all__ = [
    "__version__",
    "Field",
    "Grid2D",
    "analyze",
    "make_grid",
    "synthesize",
    "State",
    "SystemParams",
    "integrate",
    "make_state",
    "picard_duhamel",
    "strang_step",
    "DataNorms",
    "EnvelopeConstants",
    "charge",
    "difference_metric",
    "energy",
    "estimate_gn_constant",
    "gn_quotient",
    "RunConfig",
    "load_config",
]
