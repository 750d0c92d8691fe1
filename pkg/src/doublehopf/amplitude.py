"""Planar amplitude system of the two critical modes.

After scaling, the radial dynamics of the slow/fast oscillation amplitudes
(r1, r2) reduce to

    r1' = r1*(c1 + r1^2 + b0*r2^2)
    r2' = r2*(c2 + c0*r1^2 + d0*r2^2)

truncated at third order.  Its nonnegative equilibria and limit cycles
translate back to invariant sets of the full delayed system: the origin to
the trivial equilibrium, an axis equilibrium to a periodic orbit of the
corresponding mode, an interior equilibrium to a 2-torus, and a planar
limit cycle to a 3-torus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import normalform
from .errors import DegenerateDet, WrongCase
from .normalform import UnfoldingParams, ViaLines

__all__ = [
    "AmplitudeState",
    "AmplitudeEquilibrium",
    "AttractorPrediction",
    "amplitude_rhs",
    "equilibria",
    "simulate_amplitude",
    "find_attractor",
    "predict_attractor",
]


@dataclass(frozen=True)
class AmplitudeState:
    """Polar radii of the two modes; both nonnegative."""

    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise ValueError(f"radii must be nonnegative, got {(self.r1, self.r2)}")


@dataclass(frozen=True)
class AmplitudeEquilibrium:
    state: AmplitudeState
    kind: str  # origin | r1_axis | r2_axis | interior
    eigenvalues: Tuple[complex, complex]
    stable: bool


@dataclass(frozen=True)
class AttractorPrediction:
    """Stable object predicted for one parameter region.

    kind is one of trivial_eq, periodic, torus2, torus3, none_stable;
    mode identifies the oscillating frequency (1 = slow, 2 = fast) for a
    periodic prediction, else None.
    """

    kind: str
    mode: Optional[int]
    region: int


def amplitude_rhs(
    s, c1: float, c2: float, b0: float, c0: float, d0: float
) -> np.ndarray:
    """Vector field of the truncated amplitude system at ``s`` = (r1, r2)."""
    r1, r2 = (s.r1, s.r2) if isinstance(s, AmplitudeState) else (s[0], s[1])
    return np.array(
        [
            r1 * (c1 + r1 * r1 + b0 * r2 * r2),
            r2 * (c2 + c0 * r1 * r1 + d0 * r2 * r2),
        ]
    )


def _jacobian(r1, r2, c1, c2, b0, c0, d0):
    return np.array(
        [
            [c1 + 3.0 * r1 * r1 + b0 * r2 * r2, 2.0 * b0 * r1 * r2],
            [2.0 * c0 * r1 * r2, c2 + c0 * r1 * r1 + 3.0 * d0 * r2 * r2],
        ]
    )


def _make_eq(r1, r2, kind, c1, c2, b0, c0, d0) -> AmplitudeEquilibrium:
    eigs = np.linalg.eigvals(_jacobian(r1, r2, c1, c2, b0, c0, d0))
    return AmplitudeEquilibrium(
        AmplitudeState(r1, r2),
        kind,
        (complex(eigs[0]), complex(eigs[1])),
        bool(np.max(eigs.real) < 0.0),
    )


def equilibria(
    c1: float, c2: float, b0: float, c0: float, d0: float
) -> List[AmplitudeEquilibrium]:
    """All nonnegative-quadrant equilibria with eigenvalues and stability.

    Origin always; (sqrt(-c1), 0) when c1 < 0; (0, sqrt(-c2/d0)) when
    -c2/d0 > 0; and the interior point with r1^2 = (b0*c2 - d0*c1)/det,
    r2^2 = (c0*c1 - c2)/det when both radicands are positive.  Raises
    DegenerateDet when det = d0 - b0*c0 vanishes (interior branch
    undefined).
    """
    out = [_make_eq(0.0, 0.0, "origin", c1, c2, b0, c0, d0)]
    if c1 < 0.0:
        out.append(_make_eq(math.sqrt(-c1), 0.0, "r1_axis", c1, c2, b0, c0, d0))
    if d0 != 0.0 and -c2 / d0 > 0.0:
        out.append(_make_eq(0.0, math.sqrt(-c2 / d0), "r2_axis", c1, c2, b0, c0, d0))
    det = d0 - b0 * c0
    if abs(det) < 1e-12:
        raise DegenerateDet(f"d0 - b0*c0 = {det:.3e}; interior branch undefined")
    r1_sq = (b0 * c2 - d0 * c1) / det
    r2_sq = (c0 * c1 - c2) / det
    if r1_sq > 0.0 and r2_sq > 0.0:
        out.append(
            _make_eq(math.sqrt(r1_sq), math.sqrt(r2_sq), "interior", c1, c2, b0, c0, d0)
        )
    return out


def simulate_amplitude(
    s0,
    params: Sequence[float],
    t_end: float,
    h: float,
    store_stride: int = 1,
) -> Tuple[np.ndarray, np.ndarray]:
    """Fixed-step fourth-order integration of the amplitude system.

    Radii are clamped at zero, keeping both axes exactly invariant.
    Returns (times, path) with path sampled every ``store_stride`` steps.
    """
    if h <= 0 or t_end <= 0:
        raise ValueError("need h > 0 and t_end > 0")
    c1, c2, b0, c0, d0 = params
    r1, r2 = (s0.r1, s0.r2) if isinstance(s0, AmplitudeState) else (s0[0], s0[1])
    n = int(round(t_end / h))
    kept = n // store_stride + 1
    path = np.empty((kept, 2))
    path[0] = (r1, r2)
    times = np.empty(kept)
    times[0] = 0.0
    m = 1
    for i in range(n):
        k1a = r1 * (c1 + r1 * r1 + b0 * r2 * r2)
        k1b = r2 * (c2 + c0 * r1 * r1 + d0 * r2 * r2)
        xa = r1 + 0.5 * h * k1a
        ya = r2 + 0.5 * h * k1b
        k2a = xa * (c1 + xa * xa + b0 * ya * ya)
        k2b = ya * (c2 + c0 * xa * xa + d0 * ya * ya)
        xb = r1 + 0.5 * h * k2a
        yb = r2 + 0.5 * h * k2b
        k3a = xb * (c1 + xb * xb + b0 * yb * yb)
        k3b = yb * (c2 + c0 * xb * xb + d0 * yb * yb)
        xc = r1 + h * k3a
        yc = r2 + h * k3b
        k4a = xc * (c1 + xc * xc + b0 * yc * yc)
        k4b = yc * (c2 + c0 * xc * xc + d0 * yc * yc)
        r1 += h / 6.0 * (k1a + 2.0 * (k2a + k3a) + k4a)
        r2 += h / 6.0 * (k1b + 2.0 * (k2b + k3b) + k4b)
        if r1 < 0.0:
            r1 = 0.0
        if r2 < 0.0:
            r2 = 0.0
        if (i + 1) % store_stride == 0 and m < kept:
            path[m] = (r1, r2)
            times[m] = (i + 1) * h
            m += 1
        if r1 > 1e6 or r2 > 1e6:
            return times[:m], path[:m]
    return times[:m], path[:m]


def find_attractor(
    params: Sequence[float],
    s0,
    t_end: float = 2e4,
    h: float = 0.02,
    tol: float = 1e-6,
) -> Tuple[str, Optional[np.ndarray]]:
    """Classify the omega-limit of one amplitude orbit by simulation.

    Returns ("equilibrium", point), ("cycle", tail samples) when the orbit
    revisits its state after the transient half without settling, or
    ("none", None) when it leaves the region of validity.  A cycle is
    declared when the orbit returns within ``tol`` of a reference state
    taken at t_end/2 after first moving at least 100*tol away.
    """
    times, path = simulate_amplitude(s0, params, t_end, h)
    if np.max(path[-1]) > 1e3 or len(path) < int(t_end / h):
        return "none", None
    eqs = equilibria(*params)
    end = path[-1]
    for eq in eqs:
        if math.hypot(end[0] - eq.state.r1, end[1] - eq.state.r2) < tol:
            return "equilibrium", np.array([eq.state.r1, eq.state.r2])
    half = len(path) // 2
    ref = path[half]
    dist = np.linalg.norm(path[half:] - ref, axis=1)
    moved = np.nonzero(dist > 100.0 * tol)[0]
    if len(moved) > 0 and np.min(dist[moved[0] :]) < tol:
        return "cycle", path[half:]
    return "none", None


def _representative_alpha(region: int, lines: ViaLines, radius: float) -> np.ndarray:
    """Representative parameter point inside a region at the given radius.

    Ordinary regions use the angular bisector of their bounding rays; the
    linear-order D5 sector is degenerate (the connection ray L4 is tangent
    to L5), so its probe sits exactly on the shared ray.
    """
    angles = [ln.angle for ln in lines.lines]
    two_pi = 2.0 * math.pi
    if region == 5:
        # the D5 sliver collapses onto the shared L4/L5 ray at linear
        # order; the probe sits exactly on it (see predict_attractor)
        theta = angles[4]
    else:
        lo = angles[(region - 2) % 8]
        hi = angles[region - 1]
        theta = lo + 0.5 * ((hi - lo) % two_pi)
    return radius * np.array([math.cos(theta), math.sin(theta)])


def predict_attractor(
    region: int,
    u: UnfoldingParams,
    radius: float = 0.1,
) -> AttractorPrediction:
    """Stable object of the amplitude system in one case-VIa region.

    Evaluated at a representative parameter point (bisector at ``radius``,
    see _representative_alpha), from the closed-form equilibria first and
    by simulation when no equilibrium is stable.

    The cubic truncation is degenerate across the D4/D5 band: in the
    squared radii it is a quadratic Lotka-Volterra system, whose interior
    Hopf carries no isolated cycle (a center family sits exactly on the
    L5 ray, slow spirals on either side; the band between the true L4 and
    L5 opens only at the uncomputed quadratic order).  D5 is therefore
    probed on the shared L4/L5 ray itself, where the bounded recurrent
    center orbit stands in for the amplitude limit cycle.
    """
    if not 1 <= region <= 8:
        raise ValueError(f"region must be 1..8, got {region}")
    case = u.case if u.case is not None else normalform.classify_unfolding(u)
    if case != "VIa":
        raise WrongCase(f"attractor map defined for case VIa, not {case}")
    lines = normalform.via_lines(u)

    def params_of(a):
        # the truncated system is self-similar under (r, t) -> (s*r, t/s^2),
        # c -> s^2*c, so normalizing (c1, c2) to unit length keeps the
        # portrait and makes all rates O(1) for the simulation probes
        c1 = float(u.c1_map @ a)
        c2 = float(u.c2_map @ a)
        scale = math.hypot(c1, c2)
        if scale == 0.0:
            raise ValueError("representative point maps to the origin")
        return (c1 / scale, c2 / scale, u.b0, u.c0, float(u.d0))

    alpha = _representative_alpha(region, lines, radius)
    params = params_of(alpha)
    eqs = equilibria(*params)
    stable = [e for e in eqs if e.stable]
    for kind in ("interior", "r2_axis", "r1_axis", "origin"):
        for e in stable:
            if e.kind == kind:
                if kind == "interior":
                    return AttractorPrediction("torus2", None, region)
                if kind == "origin":
                    return AttractorPrediction("trivial_eq", None, region)
                mode = 1 if kind == "r1_axis" else 2
                return AttractorPrediction("periodic", mode, region)
    # no stable equilibrium: look for a bounded recurrent amplitude orbit
    interior = next((e for e in eqs if e.kind == "interior"), None)
    if interior is not None:
        s0 = (interior.state.r1 * 0.995, interior.state.r2 * 0.995)
    else:
        s0 = (0.05, 0.05)
    label, _ = find_attractor(params, s0, t_end=4000.0, h=0.01)
    if label == "cycle":
        return AttractorPrediction("torus3", None, region)
    return AttractorPrediction("none_stable", None, region)
