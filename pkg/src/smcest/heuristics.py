"""Experiment-design heuristics.

A heuristic is a callable producing the next experiment record each time
it is invoked.  Constructors accept the updater first (even when they
ignore it) so adaptive heuristics can be added behind the same factory
interface used by the performance harness.
"""

import numpy as np

from .exceptions import ConfigurationError, HeuristicExhaustedError

__all__ = ["Heuristic", "ExpSparseHeuristic", "LinearGridHeuristic",
           "RandomAxisHeuristic"]


class Heuristic:
    """Base class; subclasses implement ``__call__`` returning one record."""

    def __init__(self, updater=None):
        self.updater = updater

    def _dtype(self, default_fields):
        if self.updater is not None:
            return np.dtype(self.updater.model.expparams_dtype)
        return np.dtype(default_fields)

    def __call__(self):
        raise NotImplementedError


class ExpSparseHeuristic(Heuristic):
    """Exponentially sparse sampling: the k-th call returns t = scale * base^k.

    The defaults scale = 1 and base = 9/8 give the growth schedule known
    to resolve a frequency with exponentially few measurements.

    Parameters
    ----------
    updater : SMCUpdater, optional
        Ignored; accepted for factory-interface compatibility.
    scale, base : float
        Schedule constants; scale > 0 and base > 1.
    field : str
        Name of the time field receiving t.
    extra_fields : dict, optional
        Constant values for any additional experiment fields (for
        example a shot count on a repetition-model chain).
    """

    def __init__(self, updater=None, scale=1.0, base=9.0 / 8.0, field="t",
                 extra_fields=None):
        super().__init__(updater)
        if not scale > 0:
            raise ConfigurationError("scale must be > 0")
        if not base > 1:
            raise ConfigurationError("base must be > 1")
        self.scale = float(scale)
        self.base = float(base)
        self.field = field
        self.extra_fields = dict(extra_fields or {})
        self._k = 0

    def __call__(self):
        record = np.zeros(1, dtype=self._dtype([(self.field, "float")]))
        record[self.field][0] = self.scale * self.base ** self._k
        for name, value in self.extra_fields.items():
            record[name][0] = value
        self._k += 1
        return record


class LinearGridHeuristic(Heuristic):
    """Walk a fixed linear grid of experiment values, one per call.

    Raises :class:`HeuristicExhaustedError` once the grid is spent; the
    caller decides whether that ends the run.

    Parameters
    ----------
    start, stop : float
        Grid endpoints (inclusive).
    count : int
        Number of grid points; at least 1.
    shots : int, optional
        When given, fills an ``n_meas`` field with this constant.
    field : str
        Name of the swept experiment field.
    """

    def __init__(self, updater=None, start=0.0, stop=1.0, count=1, shots=None,
                 field="t", extra_fields=None):
        super().__init__(updater)
        if count < 1:
            raise ConfigurationError("count must be >= 1")
        self.grid = np.linspace(start, stop, int(count))
        self.field = field
        self.extra_fields = dict(extra_fields or {})
        if shots is not None:
            self.extra_fields["n_meas"] = int(shots)
        self._index = 0

    def __call__(self):
        if self._index >= len(self.grid):
            raise HeuristicExhaustedError(
                "linear grid of %d experiments is exhausted" % len(self.grid)
            )
        default = [(self.field, "float")]
        if "n_meas" in self.extra_fields:
            default = default + [("n_meas", "int")]
        record = np.zeros(1, dtype=self._dtype(default))
        record[self.field][0] = self.grid[self._index]
        for name, value in self.extra_fields.items():
            record[name][0] = value
        self._index += 1
        return record


class RandomAxisHeuristic(Heuristic):
    """Random measurement axes in the rebit plane.

    Each call picks uniformly among ``n_axes`` choices: index 0 is the
    first coordinate axis, index 1 the second, and any further choices
    draw a fresh uniformly random unit axis.  The default ``n_axes = 2``
    reproduces random two-outcome coordinate measurements.
    """

    def __init__(self, updater=None, rng=None, n_axes=2, field="axis",
                 extra_fields=None):
        super().__init__(updater)
        if rng is None:
            raise ConfigurationError("RandomAxisHeuristic needs an rng")
        if n_axes < 1:
            raise ConfigurationError("n_axes must be >= 1")
        self.rng = rng
        self.n_axes = int(n_axes)
        self.field = field
        self.extra_fields = dict(extra_fields or {})

    def __call__(self):
        record = np.zeros(1, dtype=self._dtype([(self.field, "float", 2)]))
        choice = int(self.rng.integers(self.n_axes))
        if choice == 0:
            axis = np.array([1.0, 0.0])
        elif choice == 1:
            axis = np.array([0.0, 1.0])
        else:
            angle = self.rng.uniform(0.0, 2.0 * np.pi)
            axis = np.array([np.cos(angle), np.sin(angle)])
        record[self.field][0] = axis
        for name, value in self.extra_fields.items():
            record[name][0] = value
        return record
