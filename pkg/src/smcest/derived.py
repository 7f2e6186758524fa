"""Decorator models that form model chains.

A derived model computes its likelihood from the likelihood of the model
directly below it in the chain, possibly adding experiment fields of its
own.  Chains are finite and acyclic; ``base_model`` walks to the bottom.
"""

import numpy as np
from scipy.special import gammaln

from .distributions import Distribution
from .exceptions import ConfigurationError
from .model import FiniteOutcomeModel, pr0_to_likelihood_tensor

__all__ = [
    "DerivedModel",
    "BinomialModel",
    "TemperedLikelihoodModel",
    "PoisonedModel",
    "RandomWalkModel",
]


class DerivedModel(FiniteOutcomeModel):
    """Base class for models wrapping an underlying model.

    Everything not overridden delegates to the underlying model, so a
    pass-through subclass behaves identically to what it wraps.
    """

    def __init__(self, underlying_model):
        self._underlying = underlying_model

    @property
    def underlying_model(self):
        return self._underlying

    @property
    def base_model(self):
        model = self._underlying
        while isinstance(model, DerivedModel):
            model = model.underlying_model
        return model

    @property
    def model_chain(self):
        """Tuple of chain members from this model down to the base."""
        chain = [self]
        model = self._underlying
        while isinstance(model, DerivedModel):
            chain.append(model)
            model = model.underlying_model
        chain.append(model)
        return tuple(chain)

    @property
    def n_modelparams(self):
        return self._underlying.n_modelparams

    @property
    def modelparam_names(self):
        return self._underlying.modelparam_names

    @property
    def expparams_dtype(self):
        return self._underlying.expparams_dtype

    @property
    def is_n_outcomes_constant(self):
        return self._underlying.is_n_outcomes_constant

    @property
    def has_timestep(self):
        return self._underlying.has_timestep

    def n_outcomes(self, expparams):
        return self._underlying.n_outcomes(expparams)

    def are_models_valid(self, modelparams):
        return self._underlying.are_models_valid(modelparams)

    def likelihood(self, outcomes, modelparams, expparams):
        return self._underlying.likelihood(outcomes, modelparams, expparams)

    def update_timestep(self, modelparams, expparams, rng):
        return self._underlying.update_timestep(modelparams, expparams, rng)


def _require_two_outcome(model, who):
    probe = np.zeros(1, dtype=model.expparams_dtype)
    if not model.is_n_outcomes_constant or int(model.n_outcomes(probe)[0]) != 2:
        raise ConfigurationError("%s requires a two-outcome underlying model" % who)


class BinomialModel(DerivedModel):
    """Repeat the underlying two-outcome experiment ``n_meas`` times.

    The datum becomes the count of outcome-0 results over the repetitions,
    so an experiment with ``n_meas`` shots has ``n_meas + 1`` outcomes.
    Coefficients are evaluated in log space (log-gamma) so shot counts up
    to about 1e6 do not overflow.
    """

    def __init__(self, underlying_model):
        super().__init__(underlying_model)
        _require_two_outcome(underlying_model, "BinomialModel")
        self._underlying_fields = [
            name for name in np.dtype(underlying_model.expparams_dtype).names
        ]
        if "n_meas" in self._underlying_fields:
            raise ConfigurationError(
                "underlying model already defines an n_meas field"
            )

    @property
    def expparams_dtype(self):
        return np.dtype(self._underlying.expparams_dtype).descr + [("n_meas", "int")]

    @property
    def is_n_outcomes_constant(self):
        return False

    def n_outcomes(self, expparams):
        expparams = self.canonicalize_expparams(expparams)
        return np.asarray(expparams["n_meas"], dtype=int) + 1

    def likelihood(self, outcomes, modelparams, expparams):
        modelparams = self.validate_modelparams(modelparams)
        expparams = self.canonicalize_expparams(expparams)
        outcomes = np.atleast_1d(np.asarray(outcomes, dtype=int))
        shots = np.asarray(expparams["n_meas"], dtype=int)
        if np.any(shots < 1):
            raise ConfigurationError("n_meas must be >= 1")
        under = expparams[self._underlying_fields]
        if np.all(shots == 1):
            # Single shot: exactly the underlying model's likelihood.  The
            # count k maps to underlying outcome 1 - k, since the count
            # tallies outcome-0 results.
            return self._underlying.likelihood(1 - outcomes, modelparams, under)
        q = self._underlying.likelihood(np.array([0]), modelparams, under)[0]
        k = outcomes[:, np.newaxis, np.newaxis].astype(float)
        n = shots[np.newaxis, np.newaxis, :].astype(float)
        qb = q[np.newaxis, :, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            log_pmf = (
                gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
                + k * np.log(qb) + (n - k) * np.log(1.0 - qb)
            )
            pmf = np.exp(log_pmf)
        # Degenerate underlying probabilities and out-of-range counts.
        pmf = np.where((k < 0) | (k > n), 0.0, pmf)
        pmf = np.where(np.broadcast_to(qb == 0.0, pmf.shape),
                       np.where(k == 0, 1.0, 0.0), pmf)
        pmf = np.where(np.broadcast_to(qb == 1.0, pmf.shape),
                       np.where(k == n, 1.0, 0.0), pmf)
        return pmf


class TemperedLikelihoodModel(DerivedModel):
    """Raise the underlying likelihood elementwise to a power.

    Powers above one sharpen the posterior toward a maximum-likelihood
    point estimate; powers below one anneal updates against multimodal
    likelihoods.  The tempered tensor is not renormalized over outcomes:
    it feeds weight updates, whose own normalization absorbs the constant.
    """

    def __init__(self, underlying_model, power):
        super().__init__(underlying_model)
        if not power > 0:
            raise ConfigurationError("tempering power must be > 0")
        self.power = float(power)

    def likelihood(self, outcomes, modelparams, expparams):
        tensor = self._underlying.likelihood(outcomes, modelparams, expparams)
        if self.power == 1.0:
            return tensor
        return tensor ** self.power


class PoisonedModel(DerivedModel):
    """Perturb the underlying two-outcome probabilities with noise.

    Adds zero-mean normal noise of standard deviation ``noise_std`` to
    Pr(outcome 0), clipped back to [0, 1].  Models the approximation
    error of estimators that can only sample their likelihood.  Draws
    come from the model's own stream, so this is the one model whose
    likelihood is deliberately not a pure function.
    """

    def __init__(self, underlying_model, noise_std, rng):
        super().__init__(underlying_model)
        _require_two_outcome(underlying_model, "PoisonedModel")
        if noise_std < 0:
            raise ConfigurationError("noise_std must be >= 0")
        self.noise_std = float(noise_std)
        self.rng = rng

    def likelihood(self, outcomes, modelparams, expparams):
        if self.noise_std == 0.0:
            return self._underlying.likelihood(outcomes, modelparams, expparams)
        modelparams = self.validate_modelparams(modelparams)
        expparams = self.canonicalize_expparams(expparams)
        outcomes = np.atleast_1d(np.asarray(outcomes, dtype=int))
        q = self._underlying.likelihood(np.array([0]), modelparams, expparams)[0]
        q = np.clip(q + self.rng.normal(0.0, self.noise_std, q.shape), 0.0, 1.0)
        return pr0_to_likelihood_tensor(q)[outcomes]


class RandomWalkModel(DerivedModel):
    """Add a diffusive time step between Bayes updates.

    After each datum, every parameter vector moves by an increment drawn
    from ``step_distribution``.  Two scalings are available:

    - ``"per_update"`` (default): one unit kernel step per datum,
      regardless of any experiment timing.
    - ``"wiener"``: the increment standard deviation scales with the
      square root of the experiment's ``time_field`` value, treating that
      field as the duration elapsed during the step.

    Proposals falling outside the valid region are clipped to
    ``param_bounds`` when given, and otherwise revert to their original
    location.
    """

    def __init__(self, underlying_model, step_distribution,
                 scaling="per_update", time_field=None, param_bounds=None):
        super().__init__(underlying_model)
        if not isinstance(step_distribution, Distribution):
            raise ConfigurationError("step_distribution must be a Distribution")
        if step_distribution.n_params != underlying_model.n_modelparams:
            raise ConfigurationError(
                "step distribution dimension %d does not match the model's %d"
                % (step_distribution.n_params, underlying_model.n_modelparams)
            )
        if scaling not in ("per_update", "wiener"):
            raise ConfigurationError("scaling must be 'per_update' or 'wiener'")
        if scaling == "wiener":
            names = np.dtype(underlying_model.expparams_dtype).names
            if time_field is None or time_field not in names:
                raise ConfigurationError(
                    "wiener scaling needs a time_field present in the "
                    "experiment record"
                )
        self.step_distribution = step_distribution
        self.scaling = scaling
        self.time_field = time_field
        if param_bounds is not None:
            param_bounds = np.asarray(param_bounds, dtype=float)
            if param_bounds.shape != (underlying_model.n_modelparams, 2):
                raise ConfigurationError("param_bounds must be (n_modelparams, 2)")
        self.param_bounds = param_bounds

    @property
    def has_timestep(self):
        return True

    def update_timestep(self, modelparams, expparams, rng):
        modelparams = self.canonicalize_modelparams(modelparams)
        expparams = self.canonicalize_expparams(expparams)
        n_models = modelparams.shape[0]
        out = np.empty((n_models, self.n_modelparams, len(expparams)))
        for k in range(len(expparams)):
            step = self.step_distribution.sample(n_models, rng)
            if self.scaling == "wiener":
                dt = float(expparams[self.time_field][k])
                if dt < 0:
                    raise ConfigurationError("elapsed time must be >= 0")
                step = step * np.sqrt(dt)
            proposal = modelparams + step
            if self.param_bounds is not None:
                proposal = np.clip(
                    proposal, self.param_bounds[:, 0], self.param_bounds[:, 1]
                )
            else:
                bad = ~self.are_models_valid(proposal)
                if np.any(bad):
                    proposal[bad] = modelparams[bad]
            out[:, :, k] = proposal
        return out
