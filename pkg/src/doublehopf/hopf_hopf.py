"""Locating double-Hopf points in the gain-delay plane.

The two critical-delay ladders tau_j^+(k) and tau_j^-(k) sweep curves in
the (k, tau) plane as the feedback gain varies.  Where a fast-branch curve
crosses a slow-branch curve the linearization carries two pure-imaginary
pairs simultaneously: a double-Hopf point.  It is found as a root of the
gap function g(k) = tau_jp^+(k) - tau_jm^-(k) by scan-and-bisect.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Tuple

from .chareq import check_hypotheses, hopf_frequencies, tau_branch
from .errors import NoSignChange

__all__ = [
    "HopfHopfPoint",
    "CurveRow",
    "HopfCurveTable",
    "find_hopf_hopf",
    "resonance_check",
    "scan_hopf_curves",
]

_SCAN_POINTS = 400
_GAP_TOL = 1e-10


@dataclass(frozen=True)
class HopfHopfPoint:
    """Critical gain and delay where two Hopf curves intersect.

    omega1 < omega2 are the slow/fast frequencies at k0; j_plus and j_minus
    are the ladder indices of the intersecting curves.
    """

    k0: float
    tau0: float
    omega1: float
    omega2: float
    j_plus: int
    j_minus: int


@dataclass(frozen=True)
class CurveRow:
    branch_sign: str
    j: int
    k: float
    tau: float
    omega: float


@dataclass(frozen=True)
class HopfCurveTable:
    rows: Tuple[CurveRow, ...]
    skipped_k: Tuple[float, ...]


def _gap(epsilon: float, mu: float, k: float, j_plus: int, j_minus: int) -> float:
    return tau_branch(epsilon, mu, k, "plus", j_plus) - tau_branch(
        epsilon, mu, k, "minus", j_minus
    )


def find_hopf_hopf(
    epsilon: float,
    mu: float,
    j_plus: int,
    j_minus: int,
    k_lo: float,
    k_hi: float,
) -> HopfHopfPoint:
    """Intersection of the tau_{j_plus}^+ and tau_{j_minus}^- curves in [k_lo, k_hi].

    The bracket is scanned on 400 points for a sign change of the delay gap,
    then bisected until |gap| < 1e-10.  Raises NoSignChange when the gap has
    constant sign on the bracket, HypothesisViolated when any scanned gain
    leaves the admissible region.
    """
    if not k_lo < k_hi:
        raise ValueError("need k_lo < k_hi")

    ks = [k_lo + (k_hi - k_lo) * i / (_SCAN_POINTS - 1) for i in range(_SCAN_POINTS)]
    gaps = [_gap(epsilon, mu, k, j_plus, j_minus) for k in ks]

    lo = hi = None
    for i in range(len(ks) - 1):
        if gaps[i] == 0.0:
            lo = hi = ks[i]
            break
        if gaps[i] * gaps[i + 1] < 0.0:
            lo, hi = ks[i], ks[i + 1]
            break
    if lo is None:
        raise NoSignChange(
            f"delay gap has no sign change on [{k_lo}, {k_hi}] for "
            f"branches (+,{j_plus}) / (-,{j_minus})"
        )

    g_lo = _gap(epsilon, mu, lo, j_plus, j_minus)
    k0 = 0.5 * (lo + hi)
    for _ in range(200):
        k0 = 0.5 * (lo + hi)
        g_mid = _gap(epsilon, mu, k0, j_plus, j_minus)
        if abs(g_mid) < _GAP_TOL:
            break
        if g_lo * g_mid <= 0.0:
            hi = k0
        else:
            lo, g_lo = k0, g_mid

    freqs = hopf_frequencies(epsilon, mu, k0)
    tau0 = tau_branch(epsilon, mu, k0, "plus", j_plus)
    return HopfHopfPoint(k0, tau0, freqs.omega_minus, freqs.omega_plus, j_plus, j_minus)


def resonance_check(omega1: float, omega2: float, tol: float = 1e-3) -> dict:
    """Test the frequency ratio against the low-order resonances 1:2 and 1:3.

    Returns nonresonant (true iff the ratio omega1/omega2 is farther than
    ``tol`` from both 1/2 and 1/3), the closer of the two ratios, and the
    ratio itself.
    """
    if not 0 < omega1 < omega2:
        raise ValueError("need 0 < omega1 < omega2")
    ratio = float(omega1 / omega2)
    d2 = abs(ratio - 0.5)
    d3 = abs(ratio - 1.0 / 3.0)
    return {
        "nonresonant": bool(d2 > tol and d3 > tol),
        "nearest_ratio": (1, 2) if d2 <= d3 else (1, 3),
        "ratio": ratio,
    }


def scan_hopf_curves(
    epsilon: float,
    mu: float,
    k_values: Iterable[float],
    j_max: int,
) -> HopfCurveTable:
    """Tabulate tau_j^{+-}(k) over a gain grid for plotting the Hopf curves.

    Gains failing the admissibility conditions are skipped and reported in
    ``skipped_k``.  Rows are ordered by (j, branch sign, k).
    """
    ks = list(k_values)
    rows: List[CurveRow] = []
    skipped: List[float] = []
    admissible: List[Tuple[float, float, float]] = []
    for k in ks:
        hyp = check_hypotheses(epsilon, mu, k)
        if not (hyp["h1"] and hyp["h2"]):
            skipped.append(k)
            continue
        freqs = hopf_frequencies(epsilon, mu, k)
        admissible.append((k, freqs.omega_minus, freqs.omega_plus))
    for j in range(j_max + 1):
        for sign in ("minus", "plus"):
            for k, om_m, om_p in admissible:
                omega = om_m if sign == "minus" else om_p
                rows.append(
                    CurveRow(sign, j, k, tau_branch(epsilon, mu, k, sign, j), omega)
                )
    return HopfCurveTable(tuple(rows), tuple(skipped))
