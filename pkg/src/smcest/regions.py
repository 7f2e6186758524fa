"""Posterior region estimation.

Summarizes a particle filter's uncertainty as error-bar-like regions:
a weight-ranked credible particle set, the convex hull of that set, the
minimum-volume enclosing ellipsoid (MVEE) of the hull, or the covariance
ellipsoid.  All functions are read-only over a filter snapshot.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.special import gammaln

from .exceptions import ConfigurationError, ConvergenceError, DegeneracyError

__all__ = [
    "RegionEstimate",
    "est_credible_region",
    "region_est_hull",
    "region_est_ellipsoid",
    "covariance_ellipsoid",
    "minimum_volume_ellipsoid",
]

# Above this parameter dimension the hull step is skipped and the MVEE is
# fit directly to the credible particles; facet enumeration explodes
# combinatorially with dimension while the MVEE only needs the points.
MAX_HULL_DIM = 8

MVEE_MAX_ITERATIONS = 100000


@dataclass
class RegionEstimate:
    """A posterior credible region in one of three shapes.

    Attributes
    ----------
    kind : str
        One of ``"particle-set"``, ``"convex-hull"``, ``"ellipsoid"``.
    credibility : float
        The mass level alpha the region was built for.
    indices : ndarray or None
        Credible particle indices (particle-set variant).
    vertices : ndarray or None
        Hull vertex coordinates, one row per vertex (convex-hull variant).
    facets : ndarray or None
        Half-space rows (normal..., offset) with ``normal @ x + offset <= 0``
        inside (convex-hull variant).
    center, shape_matrix : ndarray or None
        Ellipsoid {x : (x - center)^T shape_matrix (x - center) <= 1}.
    """

    kind: str
    credibility: float
    indices: np.ndarray = None
    vertices: np.ndarray = None
    facets: np.ndarray = None
    center: np.ndarray = None
    shape_matrix: np.ndarray = field(default=None, repr=False)
    _hull_volume: float = field(default=None, repr=False)

    def contains(self, points, tol=1e-9):
        """Membership test for one or more points, within tolerance."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.kind == "convex-hull":
            values = points @ self.facets[:, :-1].T + self.facets[:, -1]
            return np.all(values <= tol, axis=1)
        if self.kind == "ellipsoid":
            delta = points - self.center
            quad = np.einsum("ij,jk,ik->i", delta, self.shape_matrix, delta)
            return quad <= 1.0 + tol
        raise ConfigurationError(
            "containment is defined for hull and ellipsoid regions only"
        )

    def volume(self):
        """Region volume (hull and ellipsoid variants)."""
        if self.kind == "convex-hull":
            return self._hull_volume
        if self.kind == "ellipsoid":
            d = len(self.center)
            log_ball = (d / 2.0) * np.log(np.pi) - gammaln(d / 2.0 + 1.0)
            sign, logdet = np.linalg.slogdet(self.shape_matrix)
            return float(np.exp(log_ball - 0.5 * logdet))
        raise ConfigurationError("volume is undefined for particle sets")

    def to_record(self):
        """JSON-ready dict for serialization."""
        record = {"kind": self.kind, "credibility": self.credibility}
        if self.indices is not None:
            record["indices"] = np.asarray(self.indices).tolist()
        if self.vertices is not None:
            record["vertices"] = np.asarray(self.vertices).tolist()
        if self.center is not None:
            record["center"] = np.asarray(self.center).tolist()
        if self.shape_matrix is not None:
            record["shape_matrix"] = np.asarray(self.shape_matrix).tolist()
        return record


def est_credible_region(weights, alpha):
    """Indices of the smallest weight-ranked particle set of mass >= alpha.

    Particles are ranked by weight descending, ties broken by index
    ascending; the returned indices are sorted ascending.
    """
    if not 0.0 < alpha <= 1.0:
        raise ConfigurationError("credibility level must be in (0, 1]")
    weights = np.asarray(weights, dtype=float)
    n = len(weights)
    order = np.lexsort((np.arange(n), -weights))
    cumulative = np.cumsum(weights[order])
    # Tiny slack absorbs cumulative-sum round-off at exact-mass boundaries.
    target = min(alpha - 1e-12, cumulative[-1])
    last = int(np.searchsorted(cumulative, target, side="left"))
    return np.sort(order[:last + 1])


def _hull_1d(points):
    lo, hi = float(points.min()), float(points.max())
    if hi <= lo:
        raise DegeneracyError(
            "credible particles are affinely dependent (all equal); fit an "
            "ellipsoid on the spanned subspace instead"
        )
    vertices = np.array([[lo], [hi]])
    facets = np.array([[1.0, -hi], [-1.0, lo]])
    return vertices, facets, hi - lo


def region_est_hull(weights, locations, alpha):
    """Convex hull of the alpha-credible particles.

    Raises :class:`DegeneracyError` when the credible set does not span
    the parameter space; project onto the spanned subspace and fit an
    ellipsoid there instead.
    """
    locations = np.atleast_2d(np.asarray(locations, dtype=float))
    indices = est_credible_region(weights, alpha)
    points = locations[indices]
    d = points.shape[1]
    if d == 1:
        vertices, facets, volume = _hull_1d(points[:, 0])
    else:
        try:
            hull = ConvexHull(points)
        except QhullError as err:
            raise DegeneracyError(
                "credible particles are affinely dependent; fit an ellipsoid "
                "on the spanned subspace instead (%s)" % str(err).splitlines()[0]
            ) from err
        vertices = points[hull.vertices]
        facets = hull.equations
        volume = float(hull.volume)
    region = RegionEstimate(
        kind="convex-hull", credibility=float(alpha),
        indices=indices, vertices=vertices, facets=facets,
    )
    region._hull_volume = volume
    return region


def minimum_volume_ellipsoid(points, tol=1e-6, max_iterations=MVEE_MAX_ITERATIONS):
    """Minimum-volume enclosing ellipsoid of a point set.

    Runs the barycentric-coordinate ascent of Khachiyan until the
    optimality gap drops to ``tol``, then rescales so every input point
    satisfies the ellipsoid inequality exactly (within round-off).

    Returns
    -------
    (center, shape_matrix)
        Ellipsoid {x : (x - center)^T shape_matrix (x - center) <= 1}.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n, d = points.shape
    if n < d + 1:
        raise DegeneracyError(
            "need at least d + 1 points for a full-dimensional ellipsoid"
        )
    q = np.column_stack([points, np.ones(n)])
    u = np.full(n, 1.0 / n)
    gap = np.inf
    # Barycentric ascent with away steps: the plain ascent alone closes
    # the optimality gap only sublinearly, while shrinking the weight of
    # over-represented support points restores linear convergence.
    for _ in range(max_iterations):
        design = q.T @ (u[:, np.newaxis] * q)
        try:
            leverage = np.einsum("ij,ij->i", q @ np.linalg.inv(design), q)
        except np.linalg.LinAlgError as err:
            raise DegeneracyError(
                "points are affinely dependent; no full-dimensional "
                "enclosing ellipsoid exists"
            ) from err
        j_up = int(np.argmax(leverage))
        gap = leverage[j_up] / (d + 1.0) - 1.0
        support = u > 0.0
        j_down = int(np.flatnonzero(support)[
            np.argmin(leverage[support])])
        away_gap = 1.0 - leverage[j_down] / (d + 1.0)
        if max(gap, away_gap) <= tol:
            break
        if gap >= away_gap:
            kappa = leverage[j_up]
            step = (kappa - d - 1.0) / ((d + 1.0) * (kappa - 1.0))
            u *= 1.0 - step
            u[j_up] += step
        else:
            kappa = leverage[j_down]
            step = (kappa - d - 1.0) / ((d + 1.0) * (kappa - 1.0))
            step = max(step, -u[j_down] / (1.0 - u[j_down]))
            u *= 1.0 - step
            u[j_down] += step
            u[j_down] = max(u[j_down], 0.0)
    else:
        raise ConvergenceError(
            "ellipsoid fit did not reach tolerance %g in %d iterations "
            "(residual gap %g)" % (tol, max_iterations, gap),
            residual=gap,
        )
    center = u @ points
    centered = points - center
    second_moment = centered.T @ (u[:, np.newaxis] * centered)
    shape = np.linalg.inv(second_moment) / d
    shape = (shape + shape.T) / 2.0
    # Exact containment: grow just enough to cover the farthest point.
    quad = np.einsum("ij,jk,ik->i", centered, shape, centered)
    worst = float(quad.max())
    if worst > 1.0:
        shape = shape / worst
    return center, shape


def region_est_ellipsoid(weights, locations, alpha, tol=1e-6):
    """MVEE of the alpha-credible particles.

    The ellipsoid is fit to the credible set's hull vertices (they
    determine the MVEE); above ``MAX_HULL_DIM`` dimensions the hull step
    is skipped and the fit uses all credible particles.
    """
    locations = np.atleast_2d(np.asarray(locations, dtype=float))
    if locations.shape[1] <= MAX_HULL_DIM:
        hull = region_est_hull(weights, locations, alpha)
        points = hull.vertices
        indices = hull.indices
    else:
        indices = est_credible_region(weights, alpha)
        points = locations[indices]
    center, shape = minimum_volume_ellipsoid(points, tol=tol)
    return RegionEstimate(
        kind="ellipsoid", credibility=float(alpha), indices=indices,
        center=center, shape_matrix=shape,
    )


def covariance_ellipsoid(mean, covariance, scale=1.0, credibility=None):
    """Ellipsoid {x : (x - mean)^T Cov^-1 (x - mean) <= scale^2}.

    Requires a positive-definite covariance.
    """
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    covariance = np.atleast_2d(np.asarray(covariance, dtype=float))
    if scale <= 0:
        raise ConfigurationError("scale must be > 0")
    eigvals = np.linalg.eigvalsh(covariance)
    if eigvals.min() <= 0:
        raise DegeneracyError(
            "covariance is singular; the covariance ellipsoid is undefined"
        )
    shape = np.linalg.inv(covariance) / scale ** 2
    return RegionEstimate(
        kind="ellipsoid",
        credibility=float(credibility) if credibility is not None else float("nan"),
        center=mean, shape_matrix=(shape + shape.T) / 2.0,
    )
