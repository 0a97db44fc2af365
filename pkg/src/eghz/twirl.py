"""Projections onto the symmetric families.

Closed-form parameter extraction for pure and mixed states, an explicit
group-averaging oracle, the twirled image of pure product states and the map
from the extended family down to the GHZ-symmetric one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import check_hermitian, min_eigenvalue
from .states import SQRT3, ExtSymParams, GhzSymParams, pure_state, require_valid

I000, I111 = 0, 7
# (partner pair) that joins |000>,|111> in each y_i
_Y_PAIRS = ((3, 4), (5, 2), (6, 1))  # y1: 011,100  y2: 101,010  y3: 110,001

_SZ_DIAG = np.array([1.0, -1.0])
SIGMA_X3 = np.fliplr(np.eye(8))


@dataclass(frozen=True)
class GroupElement:
    phi1: float
    phi2: float
    flip: bool = False


@dataclass(frozen=True)
class ProductParams:
    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        for a in (self.a1, self.a2, self.a3):
            if not 0.0 <= a <= 1.0:
                raise ValueError(f"product-state moduli must lie in [0, 1], got {a!r}")


def _phase_diagonal(phi1: float, phi2: float) -> np.ndarray:
    angles = [phi1, phi2, -(phi1 + phi2)]
    d = np.ones(1, dtype=complex)
    for a in angles:
        d = np.kron(d, np.exp(1j * a * _SZ_DIAG))
    return d


def group_element_matrix(g: GroupElement) -> np.ndarray:
    u = np.diag(_phase_diagonal(g.phi1, g.phi2))
    if g.flip:
        u = SIGMA_X3 @ u
    return u


def twirl_pure_extended(psi) -> ExtSymParams:
    psi = pure_state(psi)
    p = np.abs(psi) ** 2
    core = p[I000] + p[I111]
    x = float((psi[I000].conjugate() * psi[I111]).real)
    ys = [0.5 * (core + p[i] + p[j]) - 0.25 for i, j in _Y_PAIRS]
    return ExtSymParams(x, *ys)


def twirl_pure_ghz(psi) -> GhzSymParams:
    psi = pure_state(psi)
    x = float((psi[I000].conjugate() * psi[I111]).real)
    y = (abs(psi[I000]) ** 2 + abs(psi[I111]) ** 2 - 0.25) / SQRT3
    return GhzSymParams(x, float(y))


def check_density(rho, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise ValueError(f"expected an 8x8 density matrix, got {rho.shape}")
    check_hermitian(rho, tol=1e-12)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    lam = min_eigenvalue(rho)
    if lam < -tol:
        raise ValueError(f"density matrix not positive semidefinite: min eigenvalue {lam:.3e}")
    return rho


def twirl_density_extended(rho, validate: bool = True) -> ExtSymParams:
    """Parameters of the extended-symmetric twirl of a (mixed) three-qubit state.

    Linear extension of the pure-state map: x from the real part of the
    <000|rho|111> coherence, y_i from the diagonal.
    """
    rho = check_density(rho) if validate else np.asarray(rho, dtype=complex)
    d = np.diag(rho).real
    core = d[I000] + d[I111]
    x = float(rho[I000, I111].real)
    ys = [0.5 * (core + d[i] + d[j]) - 0.25 for i, j in _Y_PAIRS]
    return ExtSymParams(x, *map(float, ys))


def group_average(rho, n: int, rng: np.random.Generator) -> np.ndarray:
    """Monte-Carlo average of U rho U^dag over uniformly sampled group elements.

    Phases are uniform on [0, 2pi); the flip is a fair coin.
    """
    rho = np.asarray(rho, dtype=complex)
    phis = rng.uniform(0.0, 2 * np.pi, size=(n, 2))
    flips = rng.random(n) < 0.5
    acc = np.zeros((8, 8), dtype=complex)
    for (phi1, phi2), flip in zip(phis, flips):
        d = _phase_diagonal(phi1, phi2)
        r = d[:, None] * rho * d.conj()[None, :]
        if flip:
            r = r[::-1, ::-1]
        acc += r
    return acc / n


def random_density_matrix(rng: np.random.Generator, dim: int = 8) -> np.ndarray:
    """Hilbert-Schmidt ensemble: G G^dag / tr(G G^dag), G complex Gaussian."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_pure_state(rng: np.random.Generator, dim: int = 8) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def project_to_ghz(p: ExtSymParams) -> GhzSymParams:
    require_valid(p)
    return GhzSymParams(p.x, p.Y / SQRT3)


def product_image(a: ProductParams) -> ExtSymParams:
    """Twirl of (U1 x U2 x U3)|000> in terms of the moduli |A_j| (phases dropped)."""
    s = np.array([a.a1, a.a2, a.a3]) ** 2
    x = math.sqrt(float(np.prod(s * (1.0 - s))))
    mu = [s[j] * s[k] + (1 - s[j]) * (1 - s[k]) for j, k in ((1, 2), (0, 2), (0, 1))]
    return ExtSymParams(x, *((m - 0.5) / 2 for m in mu))


def product_images(moduli: np.ndarray) -> np.ndarray:
    """Vectorized ``product_image``: rows (a1, a2, a3) -> rows (x, y1, y2, y3)."""
    s = np.asarray(moduli, dtype=float) ** 2
    out = np.empty((s.shape[0], 4))
    out[:, 0] = np.sqrt(np.prod(s * (1.0 - s), axis=1))
    for col, (j, k) in enumerate(((1, 2), (0, 2), (0, 1)), start=1):
        mu = s[:, j] * s[:, k] + (1 - s[:, j]) * (1 - s[:, k])
        out[:, col] = (mu - 0.5) / 2
    return out


def product_state_vector(a: ProductParams) -> np.ndarray:
    """(U1 x U2 x U3)|000> with real non-negative A_j, B_j."""
    v = np.ones(1)
    for aj in (a.a1, a.a2, a.a3):
        v = np.kron(v, [aj, math.sqrt(max(0.0, 1 - aj * aj))])
    return v.astype(complex)
