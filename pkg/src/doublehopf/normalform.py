"""Eigenbasis, duality oracle, cubic normal form, and unfolding at a double-Hopf point.

Everything here lives in rescaled time t -> t/tau, which pins the delay at
exactly 1 and moves the critical eigenvalues to +-i*omega1*tau0 and
+-i*omega2*tau0.  The linear part splits into point masses: B1 acting on the
current state, B2 on the state one delay back, and the neutral mass
M = diag(0, mu) inside the difference operator D(phi) = phi(0) - M*phi(-1).

The dual pairing used to normalize the adjoint rows is

    (psi, phi) = psi(0)*phi(0) - psi(0)*M*phi(-1)
                 + int_{-1}^{0} [ psi(s+1)*B2*phi(s) - psi'(s+1)*M*phi(s) ] ds,

whose last term is the neutral contribution: on eigenpairs the whole pairing
collapses to u * Delta'(lam) * v, the derivative of the characteristic
matrix, which is exactly what the closed-form normalizers D1, D2 invert.
Dropping the psi' term breaks (Psi, Phi) = I; the duality residual below is
the arbiter for all sign conventions.

Signs of the four unfolding quantities (b0, c0, d0, d0 - b0*c0) select one
of twelve planar unfoldings; in case VIa eight bifurcation rays divide the
parameter plane into the regions D1..D8 (D1 between L8 and L1, advancing
counterclockwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import (
    BoundaryCase,
    DegenerateCubic,
    OnBoundary,
    SingularNormalizer,
    WrongCase,
)
from .hopf_hopf import HopfHopfPoint

__all__ = [
    "LinearPieces",
    "EigenBasis",
    "NormalFormCoeffs",
    "UnfoldingParams",
    "ViaLine",
    "ViaLines",
    "UNFOLDING_TABLE",
    "eigenbasis",
    "bilinear_form",
    "duality_residual",
    "nf_coefficients",
    "unfolding_params",
    "classify_unfolding",
    "via_lines",
    "region_of",
]

# (sign d0, sign b0, sign c0, sign det) -> case label.  Four sign patterns
# are infeasible and absent: det = d0 - b0*c0 is forced positive when
# d0 = +1 with b0*c0 < 0, and forced negative when d0 = -1 with b0*c0 > 0.
UNFOLDING_TABLE = {
    (1, 1, 1, 1): "Ia",
    (1, 1, 1, -1): "Ib",
    (1, 1, -1, 1): "II",
    (1, -1, 1, 1): "III",
    (1, -1, -1, 1): "IVa",
    (1, -1, -1, -1): "IVb",
    (-1, 1, 1, -1): "V",
    (-1, 1, -1, 1): "VIa",
    (-1, 1, -1, -1): "VIb",
    (-1, -1, 1, 1): "VIIa",
    (-1, -1, 1, -1): "VIIb",
    (-1, -1, -1, -1): "VIII",
}


@dataclass(frozen=True)
class LinearPieces:
    """Point masses of the rescaled linear system (delay normalized to 1).

    B1 multiplies the current state, B2 the state at -1, and M is the
    neutral mass at -1 inside the difference operator.
    """

    B1: np.ndarray
    B2: np.ndarray
    M: np.ndarray

    @classmethod
    def at_point(cls, hh: HopfHopfPoint, epsilon: float, mu: float) -> "LinearPieces":
        t0 = hh.tau0
        b1 = np.array(
            [[0.0, t0], [t0 * (-1.0 + epsilon * hh.k0 * (1.0 - mu)), epsilon * t0]]
        )
        b2 = np.array([[0.0, 0.0], [t0 * mu, -t0 * epsilon * mu]])
        m = np.array([[0.0, 0.0], [0.0, mu]])
        return cls(b1, b2, m)


@dataclass(frozen=True)
class EigenBasis:
    """Critical eigenbasis Phi, adjoint rows Psi, and normalizers D1, D2.

    phi(theta) is 2x4 on [-1, 0]; psi(s) is 4x2 on [0, 1]; psi_deriv is the
    exact s-derivative of psi (each row is a pure exponential).  B is the
    4x4 diagonal of the rescaled critical eigenvalues.
    """

    B: np.ndarray
    phi: Callable[[float], np.ndarray]
    psi: Callable[[float], np.ndarray]
    psi_deriv: Callable[[float], np.ndarray]
    D1: complex
    D2: complex
    pieces: LinearPieces


@dataclass(frozen=True)
class NormalFormCoeffs:
    """Cubic normal-form coefficients of the four critical modes.

    a11, a12 (a21, a22) multiply the two parameter offsets in the slow
    (fast) mode; c11, c12, c21, c22 are the cubic self/cross couplings.
    The shared factor structure gives c12 = 2*c11 and c21 = 2*c22 exactly.
    """

    a11: complex
    a12: complex
    c11: complex
    c12: complex
    a21: complex
    a22: complex
    c21: complex
    c22: complex


@dataclass
class UnfoldingParams:
    """Scaled planar amplitude-system data derived from the cubic coefficients.

    c1_map and c2_map are the rows of the linear map (alpha1, alpha2) ->
    (c1, c2); det = d0 - b0*c0.  ``case`` is the unfolding label, or None
    when a sign quantity sits on a boundary.
    """

    eps1: int
    eps2: int
    b0: float
    c0: float
    d0: int
    det: float
    c1_map: np.ndarray
    c2_map: np.ndarray
    case: Optional[str] = None


@dataclass(frozen=True)
class ViaLine:
    """One bifurcation ray: alpha2 = slope*alpha1 restricted to a half plane.

    ``angle`` is the ray direction in radians; slope is None for a vertical
    ray (half_plane then constrains alpha2).  L4 carries an uncomputed
    quadratic correction and is emitted with the same leading slope as L5
    (``tangent_correction_omitted``).
    """

    name: str
    slope: Optional[float]
    half_plane: str
    angle: float
    tangent_correction_omitted: bool = False


@dataclass(frozen=True)
class ViaLines:
    """The eight case-VIa rays, ordered L1..L8 counterclockwise."""

    lines: Tuple[ViaLine, ...]
    unfolding: UnfoldingParams

    def __getitem__(self, name: str) -> ViaLine:
        for ln in self.lines:
            if ln.name == name:
                return ln
        raise KeyError(name)


def eigenbasis(hh: HopfHopfPoint, epsilon: float, mu: float) -> EigenBasis:
    """Closed-form critical eigenbasis at a double-Hopf point (rescaled time)."""
    t0, om1, om2 = hh.tau0, hh.omega1, hh.omega2
    beta1, beta2 = t0 * om1, t0 * om2
    e1 = np.exp(-1j * beta1)
    e2 = np.exp(-1j * beta2)

    den1 = (
        e1 * (1j * mu * om1 * (epsilon * t0 + 2.0) - mu * (epsilon + t0) + mu * t0 * om1**2)
        + epsilon
        - 2j * om1
    )
    den2 = (
        e2 * (1j * mu * om2 * (epsilon * t0 + 2.0) - mu * (epsilon + t0) + mu * t0 * om2**2)
        + epsilon
        - 2j * om2
    )
    if abs(den1) < 1e-12 or abs(den2) < 1e-12:
        raise SingularNormalizer(
            f"normalizer denominators {abs(den1):.3e}, {abs(den2):.3e} below 1e-12"
        )
    d1 = 1.0 / den1
    d2 = 1.0 / den2

    lams = np.array([1j * beta1, -1j * beta1, 1j * beta2, -1j * beta2])
    b_mat = np.diag(lams)

    def phi(theta: float) -> np.ndarray:
        row0 = np.exp(lams * theta)
        row1 = np.array([1j * om1, -1j * om1, 1j * om2, -1j * om2]) * row0
        return np.vstack([row0, row1])

    # first components of the four adjoint rows at s = 0; the second is -1
    u1 = (epsilon - 1j * om1) * (1.0 - mu * e1)
    u2 = (epsilon - 1j * om2) * (1.0 - mu * e2)
    heads = np.array(
        [d1 * u1, np.conj(d1 * u1), d2 * u2, np.conj(d2 * u2)]
    )
    scales = np.array([d1, np.conj(d1), d2, np.conj(d2)])

    def psi(s: float) -> np.ndarray:
        ex = np.exp(-lams * s)
        return np.column_stack([heads * ex, -scales * ex])

    def psi_deriv(s: float) -> np.ndarray:
        return (-lams)[:, None] * psi(s)

    return EigenBasis(
        b_mat, phi, psi, psi_deriv, complex(d1), complex(d2),
        LinearPieces.at_point(hh, epsilon, mu),
    )


def _gauss_nodes(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 0]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x - 1.0), 0.5 * w


def _fd_deriv(f: Callable[[float], np.ndarray], s: float, h: float = 1e-4) -> np.ndarray:
    # five-point central difference; adequate fallback for analytic rows
    return (
        -np.asarray(f(s + 2 * h))
        + 8.0 * np.asarray(f(s + h))
        - 8.0 * np.asarray(f(s - h))
        + np.asarray(f(s - 2 * h))
    ) / (12.0 * h)


def bilinear_form(
    psi_row: Callable[[float], np.ndarray],
    phi_col: Callable[[float], np.ndarray],
    pieces: LinearPieces,
    psi_row_deriv: Optional[Callable[[float], np.ndarray]] = None,
    n_nodes: int = 64,
) -> complex:
    """Neutral dual pairing of one adjoint row with one basis column.

    psi_row maps s in [0, 1] to a length-2 row, phi_col maps theta in
    [-1, 0] to a length-2 column.  The delta masses reduce the pairing to
    two point products plus one definite integral, evaluated by composite
    Gauss-Legendre quadrature with ``n_nodes`` nodes.  When the exact row
    derivative is not supplied it is approximated by central differences,
    which requires psi_row to be evaluable slightly outside [0, 1].
    """
    dpsi = psi_row_deriv if psi_row_deriv is not None else (
        lambda s: _fd_deriv(psi_row, s)
    )
    m = pieces.M
    b2 = pieces.B2
    val = np.dot(psi_row(0.0), phi_col(0.0)) - np.dot(psi_row(0.0), m @ phi_col(-1.0))
    nodes, weights = _gauss_nodes(n_nodes)
    for xi, w in zip(nodes, weights):
        val += w * (
            np.dot(psi_row(xi + 1.0), b2 @ phi_col(xi))
            - np.dot(dpsi(xi + 1.0), m @ phi_col(xi))
        )
    return complex(val)


def duality_residual(basis: EigenBasis, n_nodes: int = 64) -> float:
    """Max-norm of (Psi, Phi) - I; the joint test of Phi, Psi, D1, D2."""
    gram = np.empty((4, 4), dtype=complex)
    for i in range(4):
        row = lambda s, i=i: basis.psi(s)[i]
        drow = lambda s, i=i: basis.psi_deriv(s)[i]
        for j in range(4):
            col = lambda th, j=j: basis.phi(th)[:, j]
            gram[i, j] = bilinear_form(row, col, basis.pieces, drow, n_nodes)
    return float(np.max(np.abs(gram - np.eye(4))))


def nf_coefficients(hh: HopfHopfPoint, epsilon: float, mu: float) -> NormalFormCoeffs:
    """Closed-form cubic normal-form coefficients at the double-Hopf point.

    The parameter-linear terms a_ij come from pairing the adjoint rows with
    the parameter derivative of the linear part; the cubic terms c_ij from
    projecting the van der Pol nonlinearity (current and delayed x^2 x')
    onto the resonant monomials.  Only the normalizers D1, D2 enter beyond
    elementary functions of (k0, tau0, omega1, omega2).
    """
    basis = eigenbasis(hh, epsilon, mu)
    d1, d2 = basis.D1, basis.D2
    t0, om1, om2, k0 = hh.tau0, hh.omega1, hh.omega2, hh.k0
    e1 = np.exp(-1j * t0 * om1)
    e2 = np.exp(-1j * t0 * om2)

    a11 = -d1 * epsilon * (1.0 - mu) * t0
    a12 = d1 * (k0 * epsilon * (mu - 1.0) - mu * (om1**2 + 1.0) * e1 + om1**2 + 1.0)
    c11 = -0.5 * d1 * (2j * epsilon * mu * t0 * om1 * e1 - 2j * epsilon * t0 * om1)
    c12 = 2.0 * c11
    a21 = -d2 * epsilon * (1.0 - mu) * t0
    a22 = d2 * (k0 * epsilon * (mu - 1.0) - mu * (om2**2 + 1.0) * e2 + om2**2 + 1.0)
    c22 = -0.5 * d2 * (2j * epsilon * mu * t0 * om2 * e2 - 2j * epsilon * t0 * om2)
    c21 = 2.0 * c22
    return NormalFormCoeffs(a11, a12, c11, c12, a21, a22, c21, c22)


def unfolding_params(coeffs: NormalFormCoeffs) -> UnfoldingParams:
    """Scale the amplitude system to unit cubic self-coupling.

    eps1, eps2 are the signs of Re c11, Re c22; the rescaling
    r -> r*sqrt(|Re c|), t -> eps1*t produces coefficients
    b0 = eps1*eps2*Re c12/Re c22, c0 = Re c21/Re c11, d0 = eps1*eps2 and
    the parameter maps c_i = eps1*(Re a_i1*alpha1 + Re a_i2*alpha2).
    """
    re11, re22 = coeffs.c11.real, coeffs.c22.real
    if abs(re11) < 1e-12 or abs(re22) < 1e-12:
        raise DegenerateCubic(
            f"Re c11 = {re11:.3e}, Re c22 = {re22:.3e}; unfolding undefined"
        )
    eps1 = 1 if re11 > 0 else -1
    eps2 = 1 if re22 > 0 else -1
    b0 = eps1 * eps2 * coeffs.c12.real / re22
    c0 = coeffs.c21.real / re11
    d0 = eps1 * eps2
    u = UnfoldingParams(
        eps1=eps1,
        eps2=eps2,
        b0=b0,
        c0=c0,
        d0=d0,
        det=d0 - b0 * c0,
        c1_map=eps1 * np.array([coeffs.a11.real, coeffs.a12.real]),
        c2_map=eps1 * np.array([coeffs.a21.real, coeffs.a22.real]),
    )
    try:
        u.case = classify_unfolding(u)
    except BoundaryCase:
        u.case = None
    return u


def classify_unfolding(u: UnfoldingParams, tol: float = 1e-9) -> str:
    """Case label from the signs of (d0, b0, c0, d0 - b0*c0)."""
    for name, val in (("d0", u.d0), ("b0", u.b0), ("c0", u.c0), ("det", u.det)):
        if abs(val) < tol:
            raise BoundaryCase(f"{name} = {val:.3e} within {tol} of zero")
    key = (
        1 if u.d0 > 0 else -1,
        1 if u.b0 > 0 else -1,
        1 if u.c0 > 0 else -1,
        1 if u.det > 0 else -1,
    )
    label = UNFOLDING_TABLE.get(key)
    if label is None:
        # sign pattern incompatible with det = d0 - b0*c0
        raise BoundaryCase(f"inconsistent sign pattern {key}")
    return label


def _alpha_ray(
    u: UnfoldingParams, m1: float, m2: float, half: Tuple[str, int]
) -> Tuple[Optional[float], str, float]:
    """Ray m1*c1 + m2*c2 = 0 mapped to the parameter plane.

    ``half`` names which scaled coordinate ('c1' or 'c2') must have which
    sign on the ray.  Returns (slope or None, half-plane label, angle).
    """
    a_coef = m1 * u.c1_map[0] + m2 * u.c2_map[0]
    b_coef = m1 * u.c1_map[1] + m2 * u.c2_map[1]
    d = np.array([-b_coef, a_coef])
    nrm = math.hypot(d[0], d[1])
    if nrm == 0.0:
        raise DegenerateCubic("parameter map is singular; ray direction undefined")
    d /= nrm
    cname, csign = half
    cmap = u.c1_map if cname == "c1" else u.c2_map
    if csign * float(cmap @ d) < 0.0:
        d = -d
    angle = math.atan2(d[1], d[0])
    if abs(d[0]) < 1e-14:
        return None, ("alpha2>0" if d[1] > 0 else "alpha2<0"), angle
    slope = d[1] / d[0]
    return float(slope), ("alpha1>0" if d[0] > 0 else "alpha1<0"), angle


def via_lines(u: UnfoldingParams) -> ViaLines:
    """The eight case-VIa bifurcation rays in the parameter plane.

    In scaled coordinates: L1/L7 are the halves of c2 = 0, L2/L8 of c1 = 0,
    L3 is c2 = c0*c1, L5 is the interior-equilibrium Hopf ray
    c2 = (c0-1)/(b0+1)*c1, L6 is c2 = -c1/b0, all with c2 > 0.  L4 (the
    torus-destroying connection) is tangent to L5 at the origin; its
    quadratic correction is not computed, so it is emitted with the L5
    slope and flagged.  Raises WrongCase outside case VIa.
    """
    case = u.case if u.case is not None else classify_unfolding(u)
    if case != "VIa":
        raise WrongCase(f"bifurcation rays defined for case VIa, not {case}")
    b0, c0 = u.b0, u.c0
    hopf_slope = (c0 - 1.0) / (b0 + 1.0)
    defs = [
        ("L1", 0.0, 1.0, ("c1", 1), False),
        ("L2", 1.0, 0.0, ("c2", 1), False),
        ("L3", c0, -1.0, ("c2", 1), False),
        ("L4", hopf_slope, -1.0, ("c2", 1), True),
        ("L5", hopf_slope, -1.0, ("c2", 1), False),
        ("L6", 1.0 / b0, 1.0, ("c2", 1), False),
        ("L7", 0.0, 1.0, ("c1", -1), False),
        ("L8", 1.0, 0.0, ("c2", -1), False),
    ]
    lines = []
    for name, m1, m2, half, tangent in defs:
        slope, half_plane, angle = _alpha_ray(u, m1, m2, half)
        lines.append(ViaLine(name, slope, half_plane, angle, tangent))
    return ViaLines(tuple(lines), u)


def region_of(
    alpha1: float, alpha2: float, lines: ViaLines, tol: float = 1e-6
) -> int:
    """Sector index 1..8 of a parameter point among the eight rays.

    Region i lies between rays L_{i-1} and L_i counterclockwise, with D1
    between L8 and L1.  Raises OnBoundary within ``tol`` radians of a ray
    (the L4/L5 pair is tangent at the origin, so the linear-order D5 sector
    has zero width and maps to OnBoundary).
    """
    if alpha1 == 0.0 and alpha2 == 0.0:
        raise ValueError("region undefined at the origin")
    theta = math.atan2(alpha2, alpha1)
    angles = [ln.angle for ln in lines.lines]
    for ang in angles:
        d = abs((theta - ang + math.pi) % (2.0 * math.pi) - math.pi)
        if d < tol:
            raise OnBoundary(f"point at angle {theta:.8f} lies on a ray within {tol}")
    # work counterclockwise from L8 so the wrap sits inside D1
    two_pi = 2.0 * math.pi
    base = angles[7]
    delta = (theta - base) % two_pi
    offsets = [(a - base) % two_pi for a in angles[:7]] + [two_pi]
    # ties allowed: the tangent pair L4/L5 shares an angle (zero-width D5)
    if any(offsets[i] > offsets[i + 1] + 1e-12 for i in range(7)):
        raise ValueError("rays are not in counterclockwise order; regions undefined")
    for i, off in enumerate(offsets):
        if delta < off:
            return i + 1
    return 1
