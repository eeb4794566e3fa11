"""Monotone piecewise-cubic annealing schedules.

The schedule lambda(x) on x in [0,1] interpolates knots (k/N, p_k) with
p_0 = 0 and p_N = 1 fixed and the interior values free (they may leave
[0,1]).  Tangents follow the Fritsch-Carlson rule, which makes the cubic
Hermite interpolant monotone between every adjacent knot pair and C^1
globally, so a bound on the knot values is a bound on the whole function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


def _fritsch_carlson_tangents(values: np.ndarray, n_seg: int) -> np.ndarray:
    """Tangents making the uniform-grid cubic Hermite interpolant monotone.

    Secants are d_k = (p_{k+1} - p_k) * N.  Interior tangents are zero when
    the adjacent secants disagree in sign (local extremum at the knot) and
    the harmonic mean of the secants otherwise; harmonic-mean tangents stay
    within three times either secant, which is the classical sufficient
    condition for segment monotonicity.  Endpoints use the one-sided
    three-point formula clamped to [0, 3|d|] on the side of the adjacent
    secant's sign.
    """
    d = np.diff(values) * n_seg
    m = np.zeros(n_seg + 1)
    if n_seg == 1:
        m[:] = d[0]
        return m
    for k in range(1, n_seg):
        if d[k - 1] * d[k] <= 0.0:
            m[k] = 0.0
        else:
            m[k] = 2.0 / (1.0 / d[k - 1] + 1.0 / d[k])
    for idx, d0, d1 in ((0, d[0], d[1]), (n_seg, d[-1], d[-2])):
        t = 0.5 * (3.0 * d0 - d1)
        if t * d0 <= 0.0:
            t = 0.0
        elif abs(t) > 3.0 * abs(d0):
            t = 3.0 * d0
        m[idx] = t
    return m


@dataclass(frozen=True)
class Schedule:
    """Knot values, uniform knot positions k/N, and monotone tangents."""

    knot_positions: np.ndarray
    knot_values: np.ndarray
    tangents: np.ndarray

    @property
    def segments(self) -> int:
        return len(self.knot_values) - 1

    @property
    def interior(self) -> np.ndarray:
        return self.knot_values[1:-1]

    def _pieces(self, x):
        x = np.asarray(x, dtype=float)
        if x.size and (np.min(x) < 0.0 or np.max(x) > 1.0):
            raise ConfigError("schedule argument must lie in [0, 1]")
        n = self.segments
        k = np.minimum(np.floor(x * n).astype(int), n - 1)
        t = x * n - k
        return k, t

    def value(self, x):
        """Evaluate lambda(x); accepts scalars or arrays."""
        k, t = self._pieces(x)
        p, m, n = self.knot_values, self.tangents, self.segments
        u = 1.0 - t
        h00 = (1.0 + 2.0 * t) * u * u
        h10 = t * u * u
        h01 = t * t * (3.0 - 2.0 * t)
        h11 = t * t * (t - 1.0)
        out = h00 * p[k] + h01 * p[k + 1] + (h10 * m[k] + h11 * m[k + 1]) / n
        return float(out) if np.isscalar(x) else out

    def derivative(self, x):
        """First derivative d(lambda)/dx; continuous across knots."""
        k, t = self._pieces(x)
        p, m, n = self.knot_values, self.tangents, self.segments
        g00 = 6.0 * t * (t - 1.0)
        g10 = (1.0 - t) * (1.0 - 3.0 * t)
        g01 = -g00
        g11 = t * (3.0 * t - 2.0)
        out = n * g00 * p[k] + n * g01 * p[k + 1] + g10 * m[k] + g11 * m[k + 1]
        return float(out) if np.isscalar(x) else out

    __call__ = value


def build_schedule(interior) -> Schedule:
    """Schedule through (0, 0), the interior knots, and (1, 1).

    ``interior`` holds the M free knot values; the knots sit at k/(M+1).
    M = 0 gives the single-segment linear schedule lambda(x) = x.
    """
    interior = np.atleast_1d(np.asarray(interior, dtype=float))
    if interior.ndim != 1:
        raise ConfigError("interior knot values must be a flat sequence")
    if interior.size and not np.all(np.isfinite(interior)):
        raise ConfigError("interior knot values must be finite")
    values = np.concatenate(([0.0], interior, [1.0]))
    n_seg = len(values) - 1
    positions = np.arange(n_seg + 1) / n_seg
    tangents = _fritsch_carlson_tangents(values, n_seg)
    return Schedule(positions, values, tangents)


def linear_schedule() -> Schedule:
    """The baseline schedule lambda(x) = x (no free parameters)."""
    return build_schedule(())
