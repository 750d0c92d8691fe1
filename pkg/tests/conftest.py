import numpy as np
import pytest

import doublehopf as dh

# the worked instance used throughout: epsilon = 0.1, mu = 0.5
EPS = 0.1
MU = 0.5

# pinned reference values for that instance (gain/delay/frequencies at the
# double-Hopf point and the derived unfolding data)
REF_K0 = 4.834585253
REF_TAU0 = 8.815987316
REF_OM1 = 0.7307969965
REF_OM2 = 0.9007354676
REF_B0 = 0.087454
REF_C0 = -45.7383
REF_C1_MAP = (0.2429777596, -0.2981855434)
REF_C2_MAP = (-0.2004123093, 0.4602126544)
REF_SLOPES = {
    "L1": 0.435478,
    "L2": 0.814854,
    "L3": 0.828102,
    "L4": 0.828985,
    "L5": 0.828985,
    "L6": 0.874050,
}


@pytest.fixture(scope="session")
def hh():
    return dh.find_hopf_hopf(EPS, MU, 1, 1, 4.5, 5.2)


@pytest.fixture(scope="session")
def coeffs(hh):
    return dh.nf_coefficients(hh, EPS, MU)


@pytest.fixture(scope="session")
def unfolding(coeffs):
    return dh.unfolding_params(coeffs)


@pytest.fixture(scope="session")
def lines(unfolding):
    return dh.via_lines(unfolding)


def draw_admissible(rng, n):
    """n random (epsilon, mu, k) triples satisfying both gain conditions."""
    out = []
    while len(out) < n:
        eps = rng.uniform(0.05, 0.6)
        mu = rng.uniform(0.1, 0.9)
        k = rng.uniform(-2.0, 1.0 / eps)
        hyp = dh.check_hypotheses(eps, mu, k)
        if hyp["h1"] and hyp["h2"]:
            out.append((eps, mu, k))
    return out


def draw_amplitude_params(rng):
    """Signed magnitudes in [0.3, 5] with a nondegenerate determinant."""
    while True:
        vals = rng.uniform(0.3, 5.0, size=5) * rng.choice([-1.0, 1.0], size=5)
        c1, c2, b0, c0, d0 = vals
        if abs(d0 - b0 * c0) > 0.1:
            return float(c1), float(c2), float(b0), float(c0), float(d0)


def grid_scan_oracle(c1, c2, b0, c0, d0, box, n=400):
    """Brute-force equilibrium finder for the amplitude system: local minima
    of |rhs|^2 on an n x n grid over [0, box]^2, refined by damped Newton
    with a finite-difference Jacobian.  Independent of the closed forms."""
    r = np.linspace(0.0, box, n)
    r1g, r2g = np.meshgrid(r, r, indexing="ij")
    f1 = r1g * (c1 + r1g**2 + b0 * r2g**2)
    f2 = r2g * (c2 + c0 * r1g**2 + d0 * r2g**2)
    mag = f1 * f1 + f2 * f2
    pad = np.pad(mag, 1, constant_values=np.inf)
    local_min = np.ones_like(mag, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == dj == 0:
                continue
            local_min &= mag <= pad[1 + di : 1 + di + n, 1 + dj : 1 + dj + n]
    seeds = np.column_stack([r1g[local_min], r2g[local_min]])

    def rhs(p):
        return np.array(
            [
                p[0] * (c1 + p[0] ** 2 + b0 * p[1] ** 2),
                p[1] * (c2 + c0 * p[0] ** 2 + d0 * p[1] ** 2),
            ]
        )

    found = []
    eps_fd = 1e-7
    for seed in seeds:
        p = seed.copy()
        ok = False
        for _ in range(80):
            f = rhs(p)
            if np.max(np.abs(f)) < 1e-12:
                ok = True
                break
            jac = np.empty((2, 2))
            for c in range(2):
                dp = np.zeros(2)
                dp[c] = eps_fd
                jac[:, c] = (rhs(p + dp) - rhs(p - dp)) / (2 * eps_fd)
            try:
                step = np.linalg.solve(jac, f)
            except np.linalg.LinAlgError:
                break
            if np.max(np.abs(step)) > 0.5 * box:
                break
            p = p - step
        if not ok or p[0] < -1e-9 or p[1] < -1e-9 or max(p) > box + 1e-9:
            continue
        p = np.maximum(p, 0.0)
        if all(np.linalg.norm(p - q) > 1e-4 for q in found):
            found.append(p)
    return sorted(found, key=lambda q: (q[0], q[1]))
