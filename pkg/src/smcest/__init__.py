"""Sequential Monte Carlo engine for Bayesian parameter estimation.

The package approximates posteriors over model parameters with weighted
particles, updated one datum at a time.  It ships likelihood models for
common characterization experiments (precession frequency estimation,
randomized benchmarking, rebit state estimation), decorator models for
repeated measurements, tempering, noise injection, and diffusive drift,
a moment-preserving resampler, credible-region estimators, experiment
design heuristics, a risk-testing harness, and information-theoretic
lower bounds.  A batch CLI (``smcest``) drives the same machinery from
declarative config files.
"""

from .derived import (BinomialModel, DerivedModel, PoisonedModel,
                      RandomWalkModel, TemperedLikelihoodModel)
from .distributions import (DiskUniformDistribution, Distribution,
                            MultivariateNormalDistribution,
                            NormalDistribution, ProductDistribution,
                            TriangleUniformDistribution, UniformDistribution)
from .exceptions import (ConfigurationError, ConvergenceError, DataError,
                         DegeneracyError, HeuristicExhaustedError,
                         ImpoverishmentWarning, ModelValidityError,
                         NumericsWarning, ResamplingWarning, SmcestError,
                         UnidentifiableParameterError,
                         UnsupportedDensityError)
from .fisher import (cramer_rao_bound, fisher_information, score,
                     van_trees_bound)
from .heuristics import (ExpSparseHeuristic, Heuristic, LinearGridHeuristic,
                         RandomAxisHeuristic)
from .model import (FiniteOutcomeModel, Model, TwoOutcomeModel,
                    pr0_to_likelihood_tensor)
from .models import (MultiCosModel, PrecessionModel,
                     RandomizedBenchmarkingModel, RebitModel,
                     multicos_likelihood, precession_likelihood,
                     rb_fidelity, rb_likelihood, rebit_likelihood)
from .particles import (ParticleFilter, effective_sample_size,
                        particle_covariance, particle_mean)
from .perf import TrialMatrix, perf_test_multiple, risk, run_trial
from .regions import (RegionEstimate, covariance_ellipsoid,
                      est_credible_region, minimum_volume_ellipsoid,
                      region_est_ellipsoid, region_est_hull)
from .resampling import LiuWestResampler, should_resample
from .simple_est import EstimateSummary, simple_est_prec, simple_est_rb
from .smc import SMCUpdater

__version__ = "0.1.0"

__all__ = [
    "BinomialModel", "DerivedModel", "PoisonedModel", "RandomWalkModel",
    "TemperedLikelihoodModel",
    "DiskUniformDistribution", "Distribution",
    "MultivariateNormalDistribution", "NormalDistribution",
    "ProductDistribution", "TriangleUniformDistribution",
    "UniformDistribution",
    "ConfigurationError", "ConvergenceError", "DataError", "DegeneracyError",
    "HeuristicExhaustedError", "ImpoverishmentWarning", "ModelValidityError",
    "NumericsWarning", "ResamplingWarning", "SmcestError",
    "UnidentifiableParameterError", "UnsupportedDensityError",
    "cramer_rao_bound", "fisher_information", "score", "van_trees_bound",
    "ExpSparseHeuristic", "Heuristic", "LinearGridHeuristic",
    "RandomAxisHeuristic",
    "FiniteOutcomeModel", "Model", "TwoOutcomeModel",
    "pr0_to_likelihood_tensor",
    "MultiCosModel", "PrecessionModel", "RandomizedBenchmarkingModel",
    "RebitModel", "multicos_likelihood", "precession_likelihood",
    "rb_fidelity", "rb_likelihood", "rebit_likelihood",
    "ParticleFilter", "effective_sample_size", "particle_covariance",
    "particle_mean",
    "TrialMatrix", "perf_test_multiple", "risk", "run_trial",
    "RegionEstimate", "covariance_ellipsoid", "est_credible_region",
    "minimum_volume_ellipsoid", "region_est_ellipsoid", "region_est_hull",
    "LiuWestResampler", "should_resample",
    "EstimateSummary", "simple_est_prec", "simple_est_rb",
    "SMCUpdater",
    "__version__",
]
