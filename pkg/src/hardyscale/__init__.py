"""
hardyscale: Hardy-space numerics on the circle and the upper half-plane.

Malmquist-Takenaka bases, FFT Blaschke factorization and unwinding series,
exact finite Blaschke products with composition and iteration, fixed-point
analysis of a squared Mobius family, and a dyadic wavelet system built from
Gamma-function Blaschke products.
"""

from .blaschke import (FiniteBlaschke, IterateChain, ZeroLadder, compose, evaluate, iterate,
                       phase_layer, zero_ladder)
from .errors import (DomainError, HardyError, IllConditionedError, InvalidInputError,
                     NumericalFailureError, RenderError, ResourceError)
from .mt import MTBasis, analyze, dyadic_ring_zeros, mt_function, project_invariant, synthesize
from .numerics import (DEFAULT_N, RealLineGrid, TorusSignal, analytic_projection, complex_gamma,
                       inner_product, poly_roots)
from .unwinding import UnwindingExpansion, reconstruct, unwind, weiss_factor

__version__ = "0.1.0"

__all__ = [
    "FiniteBlaschke", "IterateChain", "ZeroLadder", "compose", "evaluate", "iterate",
    "phase_layer", "zero_ladder", "DomainError", "HardyError", "IllConditionedError",
    "InvalidInputError", "NumericalFailureError", "RenderError", "ResourceError",
    "MTBasis", "analyze", "dyadic_ring_zeros", "mt_function", "project_invariant",
    "synthesize", "DEFAULT_N", "RealLineGrid", "TorusSignal", "analytic_projection",
    "complex_gamma", "inner_product", "poly_roots", "UnwindingExpansion", "reconstruct",
    "unwind", "weiss_factor",
]
