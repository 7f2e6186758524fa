"""Prior and kernel distributions over model-parameter vectors.

Every distribution samples through an explicit ``numpy.random.Generator``
passed by the caller; nothing in this package touches global random
state.  Kinds with a closed-form density also expose ``log_density`` and
its gradient ``score``; kinds without one raise
:class:`~smcest.exceptions.UnsupportedDensityError`.
"""

import numpy as np

from .exceptions import ConfigurationError, UnsupportedDensityError

__all__ = [
    "Distribution",
    "UniformDistribution",
    "NormalDistribution",
    "MultivariateNormalDistribution",
    "ProductDistribution",
    "DiskUniformDistribution",
    "TriangleUniformDistribution",
]


class Distribution:
    """Abstract distribution over parameter vectors.

    Attributes
    ----------
    n_params : int
        Dimension of the vectors this distribution produces.
    smooth_density : bool
        True when ``log_density`` is differentiable everywhere on an open
        support, as required by the Bayesian (van Trees) bound's
        prior-information term.  Flat kinds with hard boundaries keep
        this False even though their interior score is defined.
    """

    n_params = None
    smooth_density = False

    def sample(self, n, rng):
        """Draw ``n`` independent vectors, returned as an (n, n_params) array."""
        raise NotImplementedError

    def log_density(self, x):
        """Natural-log density at the vector ``x``.

        Returns ``-inf`` outside the support of kinds that have one.
        """
        raise UnsupportedDensityError(
            "%s does not define a closed-form density" % type(self).__name__
        )

    def score(self, x):
        """Gradient of ``log_density`` at ``x``, shape (n_params,)."""
        raise UnsupportedDensityError(
            "%s does not define a differentiable density" % type(self).__name__
        )


def _as_param_vector(x, n_params):
    x = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if x.shape != (n_params,):
        raise ConfigurationError(
            "expected a length-%d parameter vector, got shape %s"
            % (n_params, x.shape)
        )
    return x


class UniformDistribution(Distribution):
    """Uniform distribution over an axis-aligned box.

    Parameters
    ----------
    bounds : array_like
        Either a flat ``[low, high]`` pair for one dimension or an
        (n_params, 2) array of per-axis bounds.  Each lower bound must be
        strictly below its upper bound.
    """

    def __init__(self, bounds):
        bounds = np.asarray(bounds, dtype=float)
        if bounds.ndim == 1:
            bounds = bounds.reshape(1, 2)
        if bounds.ndim != 2 or bounds.shape[1] != 2:
            raise ConfigurationError(
                "bounds must be an (n, 2) array, got shape %s" % (bounds.shape,)
            )
        if not np.all(np.isfinite(bounds)):
            raise ConfigurationError("uniform bounds must be finite")
        if not np.all(bounds[:, 0] < bounds[:, 1]):
            raise ConfigurationError("each lower bound must be < upper bound")
        self.bounds = bounds
        self.n_params = bounds.shape[0]
        self._widths = bounds[:, 1] - bounds[:, 0]
        self._log_volume = float(np.sum(np.log(self._widths)))

    def sample(self, n, rng):
        if n < 1:
            raise ConfigurationError("n must be >= 1")
        return rng.uniform(self.bounds[:, 0], self.bounds[:, 1],
                           size=(int(n), self.n_params))

    def mean(self):
        return self.bounds.mean(axis=1)

    def covariance(self):
        return np.diag(self._widths ** 2 / 12.0)

    def log_density(self, x):
        x = _as_param_vector(x, self.n_params)
        inside = np.all((x >= self.bounds[:, 0]) & (x <= self.bounds[:, 1]))
        return -self._log_volume if inside else -np.inf

    def score(self, x):
        x = _as_param_vector(x, self.n_params)
        strictly_inside = np.all((x > self.bounds[:, 0]) & (x < self.bounds[:, 1]))
        if not strictly_inside:
            raise UnsupportedDensityError(
                "uniform density is not differentiable at or outside its boundary"
            )
        return np.zeros(self.n_params)


class MultivariateNormalDistribution(Distribution):
    """Multivariate normal with mean vector and PSD covariance matrix."""

    smooth_density = True

    def __init__(self, mean, cov):
        mean = np.atleast_1d(np.asarray(mean, dtype=float))
        cov = np.atleast_2d(np.asarray(cov, dtype=float))
        d = mean.shape[0]
        if cov.shape != (d, d):
            raise ConfigurationError(
                "covariance shape %s does not match mean length %d"
                % (cov.shape, d)
            )
        if not np.allclose(cov, cov.T, atol=1e-12):
            raise ConfigurationError("covariance must be symmetric")
        eigvals = np.linalg.eigvalsh(cov)
        if eigvals.min() < -1e-10 * max(1.0, abs(eigvals.max())):
            raise ConfigurationError("covariance must be positive semi-definite")
        self._mean = mean
        self._cov = cov
        self.n_params = d

    def sample(self, n, rng):
        if n < 1:
            raise ConfigurationError("n must be >= 1")
        return rng.multivariate_normal(self._mean, self._cov, size=int(n),
                                       check_valid="ignore")

    def mean(self):
        return self._mean.copy()

    def covariance(self):
        return self._cov.copy()

    def log_density(self, x):
        x = _as_param_vector(x, self.n_params)
        sign, logdet = np.linalg.slogdet(self._cov)
        if sign <= 0:
            raise UnsupportedDensityError(
                "degenerate normal (singular covariance) has no density"
            )
        delta = x - self._mean
        maha = delta @ np.linalg.solve(self._cov, delta)
        return -0.5 * (self.n_params * np.log(2.0 * np.pi) + logdet + maha)

    def score(self, x):
        x = _as_param_vector(x, self.n_params)
        if np.linalg.matrix_rank(self._cov) < self.n_params:
            raise UnsupportedDensityError(
                "degenerate normal (singular covariance) has no score"
            )
        return -np.linalg.solve(self._cov, x - self._mean)


class NormalDistribution(MultivariateNormalDistribution):
    """One-dimensional normal, parameterized by mean and variance."""

    def __init__(self, mean, var):
        if var < 0:
            raise ConfigurationError("variance must be >= 0")
        super().__init__([float(mean)], [[float(var)]])


class ProductDistribution(Distribution):
    """Independent product of factor distributions, concatenated per axis."""

    def __init__(self, *factors):
        if not factors:
            raise ConfigurationError("product needs at least one factor")
        self.factors = tuple(factors)
        self.n_params = sum(f.n_params for f in factors)
        self.smooth_density = all(f.smooth_density for f in factors)
        self._slices = []
        start = 0
        for f in factors:
            self._slices.append(slice(start, start + f.n_params))
            start += f.n_params

    def sample(self, n, rng):
        return np.hstack([f.sample(n, rng) for f in self.factors])

    def log_density(self, x):
        x = _as_param_vector(x, self.n_params)
        return sum(f.log_density(x[s]) for f, s in zip(self.factors, self._slices))

    def score(self, x):
        x = _as_param_vector(x, self.n_params)
        return np.concatenate(
            [f.score(x[s]) for f, s in zip(self.factors, self._slices)]
        )


class DiskUniformDistribution(Distribution):
    """Uniform distribution over a disk of given radius, centered at the
    origin of a two-dimensional parameter plane.

    Used as the default prior over rebit states, whose Bloch coordinates
    fill the unit disk.
    """

    n_params = 2

    def __init__(self, radius=1.0):
        if radius <= 0:
            raise ConfigurationError("radius must be > 0")
        self.radius = float(radius)

    def sample(self, n, rng):
        if n < 1:
            raise ConfigurationError("n must be >= 1")
        # Area-uniform: radius ~ sqrt(U), angle ~ U(0, 2pi).
        u = rng.random((int(n), 2))
        r = self.radius * np.sqrt(u[:, 0])
        theta = 2.0 * np.pi * u[:, 1]
        return np.column_stack([r * np.cos(theta), r * np.sin(theta)])

    def log_density(self, x):
        x = _as_param_vector(x, 2)
        if x @ x <= self.radius ** 2:
            return -np.log(np.pi * self.radius ** 2)
        return -np.inf

    def score(self, x):
        x = _as_param_vector(x, 2)
        if x @ x >= self.radius ** 2:
            raise UnsupportedDensityError(
                "disk-uniform density is not differentiable at or outside "
                "its boundary"
            )
        return np.zeros(2)


class TriangleUniformDistribution(Distribution):
    """Uniform distribution over the triangle {(a, b) : a, b >= 0, a + b <= 1}.

    The default prior over the amplitude/offset pair of the benchmarking
    decay model, covering exactly its validity region.
    """

    n_params = 2

    def sample(self, n, rng):
        if n < 1:
            raise ConfigurationError("n must be >= 1")
        u = rng.random((int(n), 2))
        flip = u.sum(axis=1) > 1.0
        u[flip] = 1.0 - u[flip]
        return u

    def log_density(self, x):
        x = _as_param_vector(x, 2)
        if x[0] >= 0 and x[1] >= 0 and x[0] + x[1] <= 1.0:
            return np.log(2.0)
        return -np.inf

    def score(self, x):
        x = _as_param_vector(x, 2)
        if not (x[0] > 0 and x[1] > 0 and x[0] + x[1] < 1.0):
            raise UnsupportedDensityError(
                "triangle-uniform density is not differentiable at or "
                "outside its boundary"
            )
        return np.zeros(2)
