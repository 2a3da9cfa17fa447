"""Pure-Python numerical computing toolkit.

Dense linear algebra, decompositions, reverse-mode autodiff, root finding,
interpolation, quadrature, FFT-based spectral tools, optimizers, ODE/PDE
integrators, and small learning demos, with a deterministic CLI on top.
The core has no third-party dependencies.
"""

from . import (
    autodiff,
    dynamics,
    errors,
    interp,
    lindecomp,
    microlearn,
    ndcore,
    numcli,
    optimize,
    quadrature,
    roots,
    spectral,
)

__all__ = [
    "autodiff",
    "dynamics",
    "errors",
    "interp",
    "lindecomp",
    "microlearn",
    "ndcore",
    "numcli",
    "optimize",
    "quadrature",
    "roots",
    "spectral",
]
