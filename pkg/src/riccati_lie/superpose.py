"""First integrals on four phase-plane copies and the superposition rule.

With s_i = sqrt(-p_i), the three conserved quantities are the cyclic sums

    F0 = (x1-x2) s1 s2 + (x2-x3) s2 s3 + (x3-x1) s3 s1     (copies 1..3)
    F1 = same shape over copies (0, 1, 2)
    F2 = same shape over copies (0, 1, 3)

Products sqrt(p_i p_j) are always evaluated as s_i s_j, which fixes the
branch on the half-plane p < 0.  Setting F1 = k1 and F2 = k2 and solving
for copy 0 yields the closed-form reconstruction implemented by
`superpose_point`; with Gamma(i, j) = s_i x_i - s_j x_j,

    x0 = [k1 G(1,3) + k2 G(2,1) - F0 x1 s1]
         / [k1 (s1 - s3) + k2 (s2 - s1) - s1 F0]
    p0 = -[ (k1/F0)(s3 - s1) + (k2/F0)(s1 - s2) + s1 ]^2

valid on the open set where F0 and the x0 denominator stay away from zero
and the bracketed root is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BranchError, DomainError, GenericityError
from .integrator import Trajectory, sample_at
from .model import PhasePoint

__all__ = [
    "PhaseTuple",
    "Constants",
    "integral_F0",
    "integral_F1",
    "integral_F2",
    "constants_from_four",
    "superpose_point",
    "superpose_trajectory",
]


class PhaseTuple(NamedTuple):
    """Four phase points; copy 0 is the reconstructed/unknown slot."""

    xi0: PhasePoint
    xi1: PhasePoint
    xi2: PhasePoint
    xi3: PhasePoint


@dataclass(frozen=True)
class Constants:
    """Constant values k1, k2 of F1, F2 plus F0 of the three known copies."""

    k1: float
    k2: float
    F0: float


def _root(p) -> float:
    if not p < 0:
        raise DomainError(f"momentum must be negative (half-plane O), got p={p}")
    return math.sqrt(-p)


def _cyclic_integral(a, b, c) -> float:
    (xa, pa), (xb, pb), (xc, pc) = a, b, c
    sa, sb, sc = _root(pa), _root(pb), _root(pc)
    return (xa - xb) * sa * sb + (xb - xc) * sb * sc + (xc - xa) * sc * sa


def integral_F0(xi1, xi2, xi3) -> float:
    return _cyclic_integral(xi1, xi2, xi3)


def integral_F1(xi0, xi1, xi2) -> float:
    return _cyclic_integral(xi0, xi1, xi2)


def integral_F2(xi0, xi1, xi3) -> float:
    return _cyclic_integral(xi0, xi1, xi3)


def constants_from_four(tup: PhaseTuple) -> Constants:
    """Extract (k1, k2, F0) from a full four-copy configuration."""
    xi0, xi1, xi2, xi3 = tup
    return Constants(
        k1=integral_F1(xi0, xi1, xi2),
        k2=integral_F2(xi0, xi1, xi3),
        F0=integral_F0(xi1, xi2, xi3),
    )


def superpose_point(xi1, xi2, xi3, k: Constants, eps_gen: float | None = None) -> PhasePoint:
    """Reconstruct copy 0 from three phase points and the constants.

    eps_gen is the genericity threshold; by default 1e-12 times the input
    magnitude scale.  Raises GenericityError when F0 or the x0 denominator
    is within eps_gen of zero, BranchError when the sqrt(-p0) bracket is
    not positive.
    """
    x1, p1 = xi1
    x2, p2 = xi2
    x3, p3 = xi3
    s1, s2, s3 = _root(p1), _root(p2), _root(p3)
    if eps_gen is None:
        scale = max(1.0, abs(x1), abs(x2), abs(x3), s1, s2, s3, abs(k.k1), abs(k.k2))
        eps_gen = 1e-12 * scale
    if abs(k.F0) <= eps_gen:
        raise GenericityError(f"degenerate configuration: |F0|={abs(k.F0)} <= {eps_gen}")
    num = k.k1 * (s1 * x1 - s3 * x3) + k.k2 * (s2 * x2 - s1 * x1) - k.F0 * x1 * s1
    den = k.k1 * (s1 - s3) + k.k2 * (s2 - s1) - s1 * k.F0
    if abs(den) <= eps_gen:
        raise GenericityError(f"degenerate configuration: |x0 denominator|={abs(den)} <= {eps_gen}")
    bracket = (k.k1 / k.F0) * (s3 - s1) + (k.k2 / k.F0) * (s1 - s2) + s1
    if not bracket > 0.0:
        raise BranchError(f"no p<0 reconstruction: sqrt(-p0) bracket = {bracket} <= 0")
    return PhasePoint(num / den, -bracket * bracket)


def superpose_trajectory(traj1, traj2, traj3, k: Constants, grid) -> Trajectory:
    """Apply the reconstruction at every grid time.

    The three trajectories must cover the grid; genericity and branch
    errors are re-raised with the offending time attached.  The result
    carries the grid times, the reconstructed (x0, p0) states and the
    x-only view is its first state column.
    """
    grid = np.asarray([float(t) for t in grid])
    states = np.empty((len(grid), 2))
    for row, t in enumerate(grid):
        pts = [PhasePoint(*sample_at(traj, t)) for traj in (traj1, traj2, traj3)]
        try:
            states[row] = superpose_point(*pts, k)
        except (GenericityError, BranchError) as exc:
            raise type(exc)(f"at t={t}: {exc}") from exc
    return Trajectory(ts=grid, states=states, derivs=None, system="superposed")
