"""bolab: a pseudospectral laboratory for the Benjamin-Ono equation on the circle.

The package is organised in layers:

* ``bolab.spectral``    -- grids, spectral fields, Fourier-multiplier operators
* ``bolab.solver``      -- time integration of the BO Cauchy problem
* ``bolab.gauge``       -- the gauge transform and its evolution-equation residuals
* ``bolab.experiments`` -- reproducible smoothing/growth experiments and fits
* ``bolab.bilinear``    -- discrete space-time (Bourgain-type) norm machinery
* ``bolab.storage``     -- trajectory container serialization
* ``bolab.cli``         -- command-line entry point (``bolab <subcommand>``)
"""

__version__ = "0.1.0"

from .spectral import (
    GridSpec,
    SpectralField,
    analyze,
    synthesize,
    hilbert,
    bessel,
    derivative,
    antiderivative,
    project,
    mean_value,
    lp_block,
    sobolev_norm,
    lp_norm,
    semigroup_bo,
    semigroup_schrodinger,
)
from .solver import SolverConfig, Trajectory, ConservedTriple, solve, conserved, energy_half

__all__ = [
    "__version__",
    "GridSpec",
    "SpectralField",
    "analyze",
    "synthesize",
    "hilbert",
    "bessel",
    "derivative",
    "antiderivative",
    "project",
    "mean_value",
    "lp_block",
    "sobolev_norm",
    "lp_norm",
    "semigroup_bo",
    "semigroup_schrodinger",
    "SolverConfig",
    "Trajectory",
    "ConservedTriple",
    "solve",
    "conserved",
    "energy_half",
]
