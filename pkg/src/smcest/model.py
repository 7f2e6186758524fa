"""The estimation-problem contract.

A model maps a batch of parameter vectors and a batch of experiment
records to outcome probabilities.  Batch evaluation is the fundamental
operation here; single evaluations are the 1x1 case.  Models are
immutable after construction and safe to share across workers.
"""

import warnings

import numpy as np

from .exceptions import ConfigurationError, ModelValidityError, NumericsWarning

__all__ = ["Model", "FiniteOutcomeModel", "TwoOutcomeModel",
           "pr0_to_likelihood_tensor"]

# Drift beyond this past [0, 1] draws a warning before clamping.
LIKELIHOOD_SLACK = 1e-8


def pr0_to_likelihood_tensor(pr0):
    """Expand outcome-0 probabilities into a full two-outcome tensor.

    Parameters
    ----------
    pr0 : array_like
        (n_models, n_experiments) matrix of Pr(outcome 0), entries in [0, 1].

    Returns
    -------
    ndarray
        (2, n_models, n_experiments) tensor whose outcome-0 slice is
        ``pr0`` and whose outcome-1 slice is ``1 - pr0``.
    """
    pr0 = np.asarray(pr0, dtype=float)
    if pr0.ndim != 2:
        raise ConfigurationError("pr0 must be an (n_models, n_experiments) matrix")
    if np.any(pr0 < 0.0) or np.any(pr0 > 1.0) or not np.all(np.isfinite(pr0)):
        raise ValueError("pr0 entries must be probabilities in [0, 1]")
    return np.stack([pr0, 1.0 - pr0])


def clamp_likelihood(values):
    """Clip likelihood values to [0, 1], warning on non-trivial drift."""
    values = np.asarray(values, dtype=float)
    worst = 0.0
    if values.size:
        worst = max(float(-values.min()), float(values.max() - 1.0))
    if worst > LIKELIHOOD_SLACK:
        warnings.warn(
            "likelihood values exceeded [0, 1] by %.3g; clamping" % worst,
            NumericsWarning, stacklevel=2,
        )
    return np.clip(values, 0.0, 1.0)


class Model:
    """Abstract estimation model: likelihood, validity, weak simulation.

    Subclasses define ``n_modelparams``, ``expparams_dtype``,
    ``n_outcomes``, ``are_models_valid``, and ``likelihood``.
    """

    @property
    def n_modelparams(self):
        raise NotImplementedError

    @property
    def modelparam_names(self):
        return ["x%d" % i for i in range(self.n_modelparams)]

    @property
    def expparams_dtype(self):
        """Numpy structured dtype describing one experiment record."""
        raise NotImplementedError

    @property
    def is_n_outcomes_constant(self):
        return True

    @property
    def has_timestep(self):
        """True when ``update_timestep`` moves particles between data."""
        return False

    def n_outcomes(self, expparams):
        """Outcome count per experiment, shape (n_experiments,)."""
        raise NotImplementedError

    def are_models_valid(self, modelparams):
        """Per-row validity flags for an (n_models, n_modelparams) batch."""
        raise NotImplementedError

    def likelihood(self, outcomes, modelparams, expparams):
        """Evaluate Pr(outcome | params; experiment) on a full batch.

        Parameters
        ----------
        outcomes : array_like of int
            Outcome indices to evaluate, length n_outcomes.
        modelparams : array_like
            (n_models, n_modelparams) parameter batch.
        expparams : structured ndarray
            (n_experiments,) array with dtype ``expparams_dtype``.

        Returns
        -------
        ndarray
            Tensor of shape (n_outcomes, n_models, n_experiments) with
            entry (i, j, k) = Pr(outcomes[i] | modelparams[j]; expparams[k]).
        """
        raise NotImplementedError

    def update_timestep(self, modelparams, expparams, rng):
        """Propagate parameters through one time step per experiment.

        The default is the identity: models without intrinsic dynamics
        return their inputs tiled to (n_models, n_modelparams,
        n_experiments).
        """
        modelparams = self.canonicalize_modelparams(modelparams)
        expparams = self.canonicalize_expparams(expparams)
        return np.repeat(modelparams[:, :, np.newaxis], len(expparams), axis=2)

    # -- construction and validation helpers ------------------------------

    def experiment(self, **fields):
        """Build a single experiment record from named field values."""
        e = np.zeros(1, dtype=self.expparams_dtype)
        names = e.dtype.names
        for key, value in fields.items():
            if key not in names:
                raise ConfigurationError(
                    "unknown experiment field %r (expected %s)" % (key, names)
                )
            e[key][0] = value
        return e

    def canonicalize_expparams(self, expparams):
        """Coerce an experiment argument to a 1-D structured array."""
        dtype = np.dtype(self.expparams_dtype)
        if isinstance(expparams, dict):
            return self.experiment(**expparams)
        if isinstance(expparams, np.void):
            return np.array([expparams], dtype=expparams.dtype)
        arr = np.asarray(expparams)
        if arr.dtype.names is None:
            # Bare scalar shorthand for single-field experiment records.
            if len(dtype.names) == 1 and arr.ndim == 0:
                out = np.zeros(1, dtype=dtype)
                out[dtype.names[0]][0] = arr[()]
                return out
            raise ConfigurationError(
                "experiments must be structured arrays with fields %s"
                % (dtype.names,)
            )
        return np.atleast_1d(arr)

    def canonicalize_modelparams(self, modelparams):
        arr = np.atleast_2d(np.asarray(modelparams, dtype=float))
        if arr.shape[1] != self.n_modelparams:
            raise ConfigurationError(
                "expected %d model parameters per row, got shape %s"
                % (self.n_modelparams, arr.shape)
            )
        return arr

    def validate_modelparams(self, modelparams):
        """Raise :class:`ModelValidityError` naming any invalid rows."""
        modelparams = self.canonicalize_modelparams(modelparams)
        valid = self.are_models_valid(modelparams)
        if not np.all(valid):
            rows = np.flatnonzero(~valid)
            shown = ", ".join(str(r) for r in rows[:10])
            raise ModelValidityError(
                "invalid model parameters at row(s) %s%s"
                % (shown, "..." if rows.size > 10 else ""),
                invalid_rows=rows,
            )
        return modelparams


class FiniteOutcomeModel(Model):
    """Model with finitely many indexed outcomes per experiment.

    Provides weak simulation (sampling outcomes from the likelihood) on
    top of the subclass's strong simulation (likelihood evaluation).
    """

    def simulate_experiment(self, modelparams, expparams, rng, repeat=1):
        """Draw outcomes consistent with the model.

        Parameters
        ----------
        modelparams : array_like
            One or more parameter vectors, (n_models, n_modelparams).
        expparams : structured array or dict
            One or more experiment records.
        rng : numpy.random.Generator
            Sampling stream; outcomes are deterministic given its state.
        repeat : int
            Independent draws per (model, experiment) pair.

        Returns
        -------
        int or ndarray
            A scalar outcome when a single model, experiment, and draw is
            requested; otherwise an (n_models, n_experiments, repeat)
            integer array.
        """
        modelparams = self.validate_modelparams(modelparams)
        expparams = self.canonicalize_expparams(expparams)
        n_models = modelparams.shape[0]
        n_exp = len(expparams)
        out = np.zeros((n_models, n_exp, int(repeat)), dtype=np.int64)
        counts = np.atleast_1d(self.n_outcomes(expparams))
        for k in range(n_exp):
            n_out = int(counts[k])
            probs = self.likelihood(
                np.arange(n_out), modelparams, expparams[k:k + 1]
            )[:, :, 0]
            cum = np.cumsum(probs, axis=0)
            total = cum[-1, :]
            u = rng.random((n_models, int(repeat))) * total[:, np.newaxis]
            # searchsorted per model column over the outcome axis
            for j in range(n_models):
                out[j, k, :] = np.searchsorted(cum[:, j], u[j], side="right")
        out = np.minimum(out, (counts[np.newaxis, :, np.newaxis] - 1))
        if out.size == 1:
            return int(out[0, 0, 0])
        return out


class TwoOutcomeModel(FiniteOutcomeModel):
    """Convenience base for models defined by Pr(outcome 0) alone.

    Subclasses implement ``pr0`` returning an (n_models, n_experiments)
    matrix; this base expands it to the full likelihood tensor.
    """

    def n_outcomes(self, expparams):
        expparams = self.canonicalize_expparams(expparams)
        return np.full(len(expparams), 2, dtype=int)

    def pr0(self, modelparams, expparams):
        raise NotImplementedError

    def likelihood(self, outcomes, modelparams, expparams):
        modelparams = self.validate_modelparams(modelparams)
        expparams = self.canonicalize_expparams(expparams)
        outcomes = np.atleast_1d(np.asarray(outcomes, dtype=int))
        if np.any(outcomes < 0) or np.any(outcomes > 1):
            raise ConfigurationError("two-outcome models accept outcomes 0 and 1")
        tensor = pr0_to_likelihood_tensor(self.pr0(modelparams, expparams))
        return tensor[outcomes]
