"""Built-in likelihood models.

Four concrete models cover the common characterization experiments:
single-frequency precession, a two-frequency product model, randomized
benchmarking decay, and rebit state estimation in the Bloch disk.

Each model also has a plain scalar/vectorized likelihood function,
usable without constructing the class.
"""

import numpy as np

from .exceptions import ConfigurationError
from .model import TwoOutcomeModel, clamp_likelihood

__all__ = [
    "precession_likelihood",
    "multicos_likelihood",
    "rb_likelihood",
    "rb_fidelity",
    "rebit_likelihood",
    "PrecessionModel",
    "MultiCosModel",
    "RandomizedBenchmarkingModel",
    "RebitModel",
]


def precession_likelihood(omega, t):
    """Pr(outcome 0) = cos^2(omega * t / 2) for evolution time ``t >= 0``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ConfigurationError("evolution time must be >= 0")
    return np.cos(np.asarray(omega, dtype=float) * t / 2.0) ** 2


def multicos_likelihood(omega1, omega2, t1, t2):
    """Product of two precession factors, cos^2(w1 t1 / 2) cos^2(w2 t2 / 2)."""
    return (
        precession_likelihood(omega1, t1) * precession_likelihood(omega2, t2)
    )


def rb_likelihood(p, amplitude, offset, m):
    """Survival probability A p^m + B over random sequences of length m.

    Clamped to [0, 1] with a warning on drift; valid parameter sets
    (p in [0, 1], A, B >= 0, A + B <= 1) keep it in range for all m >= 1.
    """
    m = np.asarray(m)
    if np.any(m < 1):
        raise ConfigurationError("sequence length m must be >= 1")
    value = np.asarray(amplitude, dtype=float) * np.asarray(p, dtype=float) ** m \
        + np.asarray(offset, dtype=float)
    return clamp_likelihood(value)


def rb_fidelity(p, dimension=2):
    """Average gate fidelity from the decay parameter, F = (p (d-1) + 1) / d."""
    if dimension < 2:
        raise ConfigurationError("system dimension must be >= 2")
    return (np.asarray(p, dtype=float) * (dimension - 1) + 1.0) / dimension


def rebit_likelihood(x, z, axis):
    """Pr(+ outcome) = (1 + x axis_0 + z axis_1) / 2 for a unit axis."""
    axis = np.asarray(axis, dtype=float)
    if abs(float(axis @ axis) - 1.0) > 1e-9:
        raise ConfigurationError("measurement axis must have unit norm")
    return (1.0 + np.asarray(x, dtype=float) * axis[0]
            + np.asarray(z, dtype=float) * axis[1]) / 2.0


class PrecessionModel(TwoOutcomeModel):
    """Single-frequency precession: Pr(0 | omega; t) = cos^2(omega t / 2).

    Parameters are valid inside the configured frequency interval, which
    should match the prior's support (defaults to [0, 1]).
    """

    def __init__(self, freq_min=0.0, freq_max=1.0):
        if not freq_min < freq_max:
            raise ConfigurationError("freq_min must be < freq_max")
        self.freq_min = float(freq_min)
        self.freq_max = float(freq_max)

    @property
    def n_modelparams(self):
        return 1

    @property
    def modelparam_names(self):
        return ["omega"]

    @property
    def expparams_dtype(self):
        return [("t", "float")]

    def are_models_valid(self, modelparams):
        omega = self.canonicalize_modelparams(modelparams)[:, 0]
        return (omega >= self.freq_min) & (omega <= self.freq_max)

    def pr0(self, modelparams, expparams):
        omega = modelparams[:, 0]
        t = expparams["t"]
        return precession_likelihood(omega[:, np.newaxis], t[np.newaxis, :])


class MultiCosModel(TwoOutcomeModel):
    """Two-frequency product model with a pair of evolution times.

    Pr(0 | w1, w2; t1, t2) = cos^2(w1 t1 / 2) cos^2(w2 t2 / 2), with both
    frequencies valid on the half-open interval (0, 1].
    """

    @property
    def n_modelparams(self):
        return 2

    @property
    def modelparam_names(self):
        return ["omega1", "omega2"]

    @property
    def expparams_dtype(self):
        return [("ts", "float", 2)]

    def are_models_valid(self, modelparams):
        modelparams = self.canonicalize_modelparams(modelparams)
        return np.all((modelparams > 0) & (modelparams <= 1), axis=1)

    def pr0(self, modelparams, expparams):
        w1, w2 = modelparams.T
        t1, t2 = expparams["ts"].T
        return multicos_likelihood(
            w1[:, np.newaxis], w2[:, np.newaxis],
            t1[np.newaxis, :], t2[np.newaxis, :],
        )


class RandomizedBenchmarkingModel(TwoOutcomeModel):
    """Benchmarking decay model over (p, A, B) with sequence length m.

    Survival probability A p^m + B; ``fidelity`` converts a decay
    parameter into the average gate fidelity for the configured system
    dimension.  Validity requires p in [0, 1] and A, B >= 0 with
    A + B <= 1 so the survival probability is a probability for all m.
    """

    def __init__(self, dimension=2):
        if dimension < 2:
            raise ConfigurationError("system dimension must be >= 2")
        self.dimension = int(dimension)

    @property
    def n_modelparams(self):
        return 3

    @property
    def modelparam_names(self):
        return ["p", "A", "B"]

    @property
    def expparams_dtype(self):
        return [("m", "int")]

    def are_models_valid(self, modelparams):
        modelparams = self.canonicalize_modelparams(modelparams)
        p, amp, off = modelparams.T
        return (
            (p >= 0) & (p <= 1)
            & (amp >= 0) & (off >= 0)
            & (amp + off <= 1)
        )

    def pr0(self, modelparams, expparams):
        p, amp, off = modelparams.T
        m = expparams["m"]
        return rb_likelihood(
            p[:, np.newaxis], amp[:, np.newaxis], off[:, np.newaxis],
            m[np.newaxis, :],
        )

    def fidelity(self, p):
        return rb_fidelity(p, self.dimension)


class RebitModel(TwoOutcomeModel):
    """State estimation for a rebit: a point (x, z) in the unit disk.

    Experiments measure along a unit axis in the same plane; the plus
    outcome (index 0) has probability (1 + x axis_0 + z axis_1) / 2.
    """

    @property
    def n_modelparams(self):
        return 2

    @property
    def modelparam_names(self):
        return ["x", "z"]

    @property
    def expparams_dtype(self):
        return [("axis", "float", 2)]

    def are_models_valid(self, modelparams):
        modelparams = self.canonicalize_modelparams(modelparams)
        return np.einsum("ij,ij->i", modelparams, modelparams) <= 1.0

    def pr0(self, modelparams, expparams):
        axes = np.atleast_2d(expparams["axis"])
        norms = np.einsum("ij,ij->i", axes, axes)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise ConfigurationError("measurement axes must have unit norm")
        x, z = modelparams.T
        pr0 = (1.0 + x[:, np.newaxis] * axes[:, 0][np.newaxis, :]
               + z[:, np.newaxis] * axes[:, 1][np.newaxis, :]) / 2.0
        return clamp_likelihood(pr0)
