"""Modularity clustering on random geometric graphs: α-modularity, its
decomposition into balance and total-variation terms, the continuum limit
functionals, optimizers, and 1-d transport diagnostics."""

from .continuum import (ContinuumPartition, balance_deficit, balanced_slabs,
                        continuum_energy, lambda_, lambda_eps, perimeter,
                        reference_minimizer, total_perimeter, tv_eps)
from .domain import (Density, Domain, SampleCloud, TruncatedBump, UniformDensity,
                     measure_mu, mollified_density, sample)
from .errors import (DegenerateGraph, EmptyGraph, GeomodError, InvalidArgument,
                     SamplingFailure, TooLarge, UnsupportedDimension, UnsupportedGeometry)
from .functional import (DecompositionReport, DiscretePartition, decompose, energy_en,
                         glambda, gtv, modularity, modularity_lambda)
from .geograph import GeometricGraph, build_graph, s_alpha
from .kernel import Kernel, c_eta_rho, sigma_eta
from .optimizer import (OptimizerResult, exhaustive, greedy_capped, optimize,
                        spectral_bisection)
from .quadrature import QuadratureRule
from .regions import Box, BoxUnion, HalfDisc
from .transport import (build_quantile_map, misclassification, sup_deviation,
                        tl1_surrogate, weak_convergence_diagnostic)

__version__ = "0.1.0"
