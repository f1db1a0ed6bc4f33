"""Birth-death processes and continuous-time quantum walks, both driven
by the spectral measure of one symmetric tridiagonal operator.

The pipeline: rates -> symmetrize -> eigendecompose (or a closed-form
family measure) -> classical probabilities / quantum amplitudes ->
return classification.
"""

from .errors import (ConfigurationError, DomainError, NumericError,
                     SpectralWalkError, UsageError)
from .jacobi_core import (BirthDeathRates, GeneratorMatrix, JacobiOperator,
                          PiCoefficients, generator, pi_coefficients, rates_of,
                          symmetrize)
from .spectral import (PolynomialEvaluator, SpectralMeasure, chi_table,
                       eigendecompose, evaluate_Q, evaluate_chi,
                       evaluate_chi_scaled)
from .dynamics import (AmplitudeSeries, ProbabilitySeries, bessel_j1,
                       classical_transition, modified_bessel_i, oracle_expm,
                       quantum_amplitude, series_csv, series_filename)
from .return_analysis import (CharacteristicFunction, ReturnVerdict,
                              almost_periodic_series, characteristic,
                              classify_return, detect_lattice, modified_measure,
                              return_probability_scan)
from .chain_families import (EllipticContext, FamilyBuild, MeixnerFamily,
                             StieltjesCarlitzFamily, build_from_spec,
                             elliptic_context, family_schemas, fitted_omega,
                             jacobi_cn_dn, meixner_chain, pst_demo_chain,
                             stieltjes_carlitz_chain, uniform_chain)

__version__ = "0.1.0"

__all__ = [
    "SpectralWalkError", "DomainError", "UsageError", "NumericError",
    "ConfigurationError",
    "BirthDeathRates", "GeneratorMatrix", "JacobiOperator", "PiCoefficients",
    "symmetrize", "pi_coefficients", "generator", "rates_of",
    "SpectralMeasure", "PolynomialEvaluator", "eigendecompose",
    "evaluate_chi", "evaluate_chi_scaled", "chi_table", "evaluate_Q",
    "ProbabilitySeries", "AmplitudeSeries", "classical_transition",
    "quantum_amplitude", "oracle_expm", "bessel_j1", "modified_bessel_i",
    "series_csv", "series_filename",
    "ReturnVerdict", "CharacteristicFunction", "characteristic",
    "modified_measure", "detect_lattice", "classify_return",
    "almost_periodic_series", "return_probability_scan",
    "MeixnerFamily", "StieltjesCarlitzFamily", "EllipticContext", "FamilyBuild",
    "meixner_chain", "stieltjes_carlitz_chain", "uniform_chain",
    "pst_demo_chain", "elliptic_context", "jacobi_cn_dn", "fitted_omega",
    "family_schemas", "build_from_spec",
]
