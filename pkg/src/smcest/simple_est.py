"""One-call estimation entry points.

These bind a standard model chain, prior, and updater loop for the two
most common experiment types, so a data table (or file) goes in and a
posterior summary comes out.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .dataio import load_data_records
from .derived import BinomialModel
from .distributions import (ProductDistribution, TriangleUniformDistribution,
                            UniformDistribution)
from .exceptions import ConfigurationError, DataError, NumericsWarning
from .models import PrecessionModel, RandomizedBenchmarkingModel
from .resampling import LiuWestResampler
from .smc import SMCUpdater

__all__ = ["EstimateSummary", "simple_est_prec", "simple_est_rb"]


@dataclass
class EstimateSummary:
    """Posterior summary returned by the simplified estimation calls.

    Attributes
    ----------
    mean : ndarray
        Posterior mean over the model parameters.
    covariance : ndarray
        Posterior covariance matrix.
    ess_trace : ndarray
        Effective sample size after each datum.
    min_ess : float
        Smallest pre-resample ESS observed during the run.
    log_evidence : float
        Log marginal likelihood of the data (0 for no data).
    n_resamples : int
        Number of resampling events.
    modelparam_names : list
        Labels for the parameter axes.
    """

    mean: np.ndarray
    covariance: np.ndarray
    ess_trace: np.ndarray
    min_ess: float
    log_evidence: float
    n_resamples: int
    modelparam_names: list

    def to_dict(self):
        """JSON-ready dict."""
        return {
            "mean": np.asarray(self.mean).tolist(),
            "covariance": np.asarray(self.covariance).tolist(),
            "ess_trace": np.asarray(self.ess_trace).tolist(),
            "min_ess": float(self.min_ess),
            "log_evidence": float(self.log_evidence),
            "n_resamples": int(self.n_resamples),
            "modelparam_names": list(self.modelparam_names),
        }


def _validate_rows(table, integer_field):
    """Row-level checks; returns (counts, values, shots) columns."""
    counts = table[:, 0]
    values = table[:, 1]
    shots = table[:, 2]
    for row in range(len(table)):
        if not np.all(np.isfinite(table[row])):
            raise DataError("row %d: non-finite entry" % row, row=row)
        if shots[row] < 1:
            raise DataError(
                "row %d: n_shots must be >= 1, got %g" % (row, shots[row]),
                row=row,
            )
        if shots[row] != int(shots[row]):
            raise DataError(
                "row %d: n_shots must be an integer, got %g" % (row, shots[row]),
                row=row,
            )
        if counts[row] < 0 or counts[row] > shots[row]:
            raise DataError(
                "row %d: counts must lie in [0, n_shots], got %g of %g"
                % (row, counts[row], shots[row]),
                row=row,
            )
        if counts[row] != int(counts[row]):
            raise DataError(
                "row %d: counts must be an integer, got %g" % (row, counts[row]),
                row=row,
            )
    if integer_field and len(table) and np.any(values != np.trunc(values)):
        warnings.warn(
            "experiment column holds non-integer values; truncating",
            NumericsWarning, stacklevel=3,
        )
        values = np.trunc(values)
    return counts.astype(int), values, shots.astype(int)


def _run_standard_loop(model, prior, n_particles, rng, rows, field,
                       resampler, resample_threshold):
    updater = SMCUpdater(model, n_particles, prior, rng,
                         resampler=resampler,
                         resample_threshold=resample_threshold)
    counts, values, shots = rows
    ess_trace = []
    for i in range(len(counts)):
        experiment = model.experiment(**{field: values[i], "n_meas": shots[i]})
        updater.update(counts[i], experiment)
        ess_trace.append(updater.ess())
    return EstimateSummary(
        mean=updater.est_mean(),
        covariance=updater.est_covariance(),
        ess_trace=np.array(ess_trace),
        min_ess=updater.min_ess_observed,
        log_evidence=updater.log_evidence(),
        n_resamples=updater.n_resamples,
        modelparam_names=model.modelparam_names,
    )


def simple_est_prec(data, rng, n_particles=2000, freq_min=0.0, freq_max=1.0,
                    resampler=LiuWestResampler(), resample_threshold=0.5):
    """Frequency estimation from repeated precession measurements.

    Parameters
    ----------
    data : array_like or path
        Rows of (counts, t, n_shots); see :mod:`smcest.dataio` for the
        accepted file forms.
    rng : numpy.random.Generator
        Stream for particle init and resampling.
    n_particles : int
        Particle count for the updater.
    freq_min, freq_max : float
        Uniform prior support (and validity region) for the frequency.

    Returns
    -------
    EstimateSummary
        Posterior over the single frequency parameter.  With no data
        rows, the prior's particle mean and covariance are returned and
        the evidence record is empty.
    """
    table = load_data_records(data)
    rows = _validate_rows(table, integer_field=False)
    model = BinomialModel(PrecessionModel(freq_min=freq_min, freq_max=freq_max))
    prior = UniformDistribution([freq_min, freq_max])
    return _run_standard_loop(model, prior, n_particles, rng, rows, "t",
                              resampler, resample_threshold)


def simple_est_rb(data, rng, n_particles=12000, p_min=0.0, p_max=1.0,
                  dimension=2, resampler=LiuWestResampler(),
                  resample_threshold=0.5):
    """Benchmarking-decay estimation over (p, A, B).

    Parameters
    ----------
    data : array_like or path
        Rows of (counts, m, n_shots) with integer sequence lengths m;
        float lengths are truncated with a warning.
    p_min, p_max : float
        Uniform prior support for the decay parameter p.
    dimension : int
        System dimension used by fidelity conversions.

    Returns
    -------
    EstimateSummary
        Posterior over (p, A, B), with the amplitude/offset prior
        uniform over the triangle A, B >= 0, A + B <= 1.
    """
    if not 0.0 <= p_min < p_max <= 1.0:
        raise ConfigurationError("need 0 <= p_min < p_max <= 1")
    table = load_data_records(data)
    rows = _validate_rows(table, integer_field=True)
    if len(table) and np.any(rows[1] < 1):
        bad = int(np.flatnonzero(rows[1] < 1)[0])
        raise DataError("row %d: sequence length m must be >= 1" % bad, row=bad)
    model = BinomialModel(RandomizedBenchmarkingModel(dimension=dimension))
    prior = ProductDistribution(
        UniformDistribution([p_min, p_max]),
        TriangleUniformDistribution(),
    )
    return _run_standard_loop(model, prior, n_particles, rng, rows, "m",
                              resampler, resample_threshold)
