"""State families: GHZ-symmetric (x, y), extended GHZ-symmetric (x, y1, y2, y3)
and the four-qubit GHZ-like-symmetric family.

Basis convention everywhere: |i1 i2 i3> has index 4*i1 + 2*i2 + i3 (qubit 1 is
the most significant bit).
"""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass
from fractions import Fraction

import numpy as np

from .numerics import min_eigenvalue

SQRT3 = math.sqrt(3.0)
VALID_TOL = 1e-12


class PhysicalityError(ValueError):
    """Parameters do not describe a positive semidefinite, unit-trace state."""


def basis_index(bits: str) -> int:
    return int(bits, 2)


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[basis_index(bits)] = 1.0
    return v


GHZ_PLUS = (ket("000") + ket("111")) / math.sqrt(2)
GHZ_MINUS = (ket("000") - ket("111")) / math.sqrt(2)
GHZ = GHZ_PLUS
W = (ket("001") + ket("010") + ket("100")) / math.sqrt(3)

P_GHZ_PLUS = np.outer(GHZ_PLUS, GHZ_PLUS.conj())
P_GHZ_MINUS = np.outer(GHZ_MINUS, GHZ_MINUS.conj())

# diagonal pairs of the extended family, keyed by the y-combination that sets their weight
_PAIR_001 = (basis_index("001"), basis_index("110"))  # 1/8 - (y1 + y2 - y3)/2
_PAIR_010 = (basis_index("010"), basis_index("101"))  # 1/8 - (y1 - y2 + y3)/2
_PAIR_011 = (basis_index("011"), basis_index("100"))  # 1/8 - (-y1 + y2 + y3)/2


@dataclass(frozen=True)
class ExtSymParams:
    x: float
    y1: float
    y2: float
    y3: float

    @property
    def Y(self) -> float:
        return self.y1 + self.y2 + self.y3

    @property
    def ys(self) -> tuple[float, float, float]:
        return (self.y1, self.y2, self.y3)

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    def as_dict(self) -> dict[str, float]:
        return {"x": self.x, "y1": self.y1, "y2": self.y2, "y3": self.y3}


@dataclass(frozen=True)
class GhzSymParams:
    x: float
    y: float

    def as_dict(self) -> dict[str, float]:
        return {"x": self.x, "y": self.y}


@dataclass(frozen=True)
class FourQubitParams:
    alpha1: float
    alpha2: float
    alpha3: float
    beta: float


def pure_state(amplitudes, tol: float = 1e-12) -> np.ndarray:
    """Validate eight amplitudes psi_ijk (index 4i+2j+k) and return them as an array."""
    psi = np.asarray(amplitudes, dtype=complex).ravel()
    if psi.size != 8:
        raise ValueError(f"a three-qubit pure state needs 8 amplitudes, got {psi.size}")
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"pure state not normalized: sum |psi|^2 = {norm!r}")
    return psi


def parse_number(text: str) -> float:
    """Decimal or simple fraction such as ``1/8`` or ``-3/4``."""
    text = text.strip()
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def ext_weights(p: ExtSymParams) -> dict[str, float]:
    """Coefficients of the GHZ+/- projectors and the three diagonal pairs."""
    x, y1, y2, y3 = astuple(p)
    Y = y1 + y2 + y3
    return {
        "ghz+": 1 / 8 + Y / 2 + x,
        "ghz-": 1 / 8 + Y / 2 - x,
        "001": 1 / 8 - (y1 + y2 - y3) / 2,
        "010": 1 / 8 - (y1 - y2 + y3) / 2,
        "011": 1 / 8 - (-y1 + y2 + y3) / 2,
    }


def validate_extended(p: ExtSymParams, tol: float = VALID_TOL) -> tuple[bool, list[str]]:
    """Check both physicality clauses; returns (valid, violated clause descriptions)."""
    x, y1, y2, y3 = astuple(p)
    Y = y1 + y2 + y3
    bad = []
    lo = abs(y1 + y2) - 0.25
    hi = 0.25 - abs(y1 - y2)
    if y3 < lo - tol:
        bad.append(f"|y1+y2| - 1/4 <= y3 violated: {lo:.12g} > {y3:.12g}")
    if y3 > hi + tol:
        bad.append(f"y3 <= 1/4 - |y1-y2| violated: {y3:.12g} > {hi:.12g}")
    for sign, label in ((1, "+"), (-1, "-")):
        w = 1 / 8 + Y / 2 + sign * x
        if w < -tol:
            bad.append(f"0 <= 1/8 + (y1+y2+y3)/2 {label} x violated: {w:.12g} < 0")
        if w > 1 + tol:
            bad.append(f"1/8 + (y1+y2+y3)/2 {label} x <= 1 violated: {w:.12g} > 1")
    return (not bad, bad)


def is_valid_extended(p: ExtSymParams, tol: float = VALID_TOL) -> bool:
    return validate_extended(p, tol)[0]


def require_valid(p: ExtSymParams) -> None:
    ok, bad = validate_extended(p)
    if not ok:
        raise PhysicalityError(f"unphysical parameters {p}: " + "; ".join(bad))


def make_extended(p: ExtSymParams, unchecked: bool = False) -> np.ndarray:
    if not unchecked:
        require_valid(p)
    w = ext_weights(p)
    rho = w["ghz+"] * P_GHZ_PLUS + w["ghz-"] * P_GHZ_MINUS
    for key, pair in (("001", _PAIR_001), ("010", _PAIR_010), ("011", _PAIR_011)):
        for i in pair:
            rho[i, i] += w[key]
    return rho


def validate_ghz_symmetric(q: GhzSymParams, tol: float = VALID_TOL) -> tuple[bool, list[str]]:
    x, y = q.x, q.y
    bad = []
    ymin = -1 / (4 * SQRT3)
    if y < ymin - tol:
        bad.append(f"y >= -1/(4 sqrt3) violated: {y:.12g} < {ymin:.12g}")
    if y > SQRT3 / 4 + tol:
        bad.append(f"y <= sqrt3/4 violated: {y:.12g} > {SQRT3 / 4:.12g}")
    for sign, label in ((1, "+"), (-1, "-")):
        bound = sign * 2 / SQRT3 * x + ymin
        if y < bound - tol:
            bad.append(f"y >= {label}(2/sqrt3) x - 1/(4 sqrt3) violated: {y:.12g} < {bound:.12g}")
    return (not bad, bad)


def make_ghz_symmetric(q: GhzSymParams, unchecked: bool = False) -> np.ndarray:
    if not unchecked:
        ok, bad = validate_ghz_symmetric(q)
        if not ok:
            raise PhysicalityError(f"unphysical parameters {q}: " + "; ".join(bad))
    x, y = q.x, q.y
    rho = (x + SQRT3 / 2 * y + 1 / 8) * P_GHZ_PLUS + (-x + SQRT3 / 2 * y + 1 / 8) * P_GHZ_MINUS
    d = 1 / 8 - y / (2 * SQRT3)
    for i in range(1, 7):
        rho[i, i] += d
    return rho


def ghz_to_extended(q: GhzSymParams) -> ExtSymParams:
    """Embedding of the GHZ-symmetric family as the equal-y line of the extended one."""
    y = q.y / SQRT3
    return ExtSymParams(q.x, y, y, y)


def make_werner(p: float) -> ExtSymParams:
    """p |GHZ+><GHZ+| + (1-p) I/8 in extended coordinates."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Werner weight must lie in [0, 1], got {p!r}")
    return ExtSymParams(p / 2, p / 4, p / 4, p / 4)


# Diagonal pattern: alpha1 on |0000>,|1111>; alpha2 on odd weight; alpha3 on weight two.
FOUR_QUBIT_DIAGONAL = (1, 2, 2, 3, 2, 3, 3, 2, 2, 3, 3, 2, 3, 2, 2, 1)


def validate_four_qubit(f: FourQubitParams, tol: float = VALID_TOL) -> tuple[bool, list[str]]:
    bad = []
    resid = f.alpha1 + 4 * f.alpha2 + 3 * f.alpha3 - 0.5
    if abs(resid) > tol:
        bad.append(f"alpha1 + 4 alpha2 + 3 alpha3 = 1/2 violated: residual {resid:.3e}")
    for name in ("alpha1", "alpha2", "alpha3"):
        if getattr(f, name) < -tol:
            bad.append(f"{name} >= 0 violated: {getattr(f, name):.12g}")
    if abs(f.beta) > f.alpha1 + tol:
        bad.append(f"|beta| <= alpha1 violated: {abs(f.beta):.12g} > {f.alpha1:.12g}")
    return (not bad, bad)


def make_four_qubit(f: FourQubitParams, unchecked: bool = False) -> np.ndarray:
    if not unchecked:
        ok, bad = validate_four_qubit(f)
        if not ok:
            raise PhysicalityError(f"unphysical four-qubit parameters {f}: " + "; ".join(bad))
    alphas = {1: f.alpha1, 2: f.alpha2, 3: f.alpha3}
    rho = np.diag([alphas[k] for k in FOUR_QUBIT_DIAGONAL]).astype(complex)
    rho[0, 15] = rho[15, 0] = f.beta
    return rho


def four_qubit_spectrum(f: FourQubitParams) -> np.ndarray:
    """Closed-form eigenvalues: alpha1 +/- beta, alpha2 (x8), alpha3 (x6)."""
    vals = [f.alpha1 - f.beta, f.alpha1 + f.beta] + [f.alpha2] * 8 + [f.alpha3] * 6
    return np.sort(np.array(vals))


U_FLIP_LOCAL = np.array([[0.0, 1.0], [-1.0, 0.0]])


def reflect_x(p: ExtSymParams) -> ExtSymParams:
    """Sign flip of x, realized by conjugation with u (x) u (x) u, u = [[0, 1], [-1, 0]]."""
    return ExtSymParams(-p.x, p.y1, p.y2, p.y3)


def reflection_unitary() -> np.ndarray:
    u = U_FLIP_LOCAL
    return np.kron(np.kron(u, u), u)


def psd_margin(p: ExtSymParams) -> float:
    """Smallest eigenvalue of the constructed matrix (no validity check)."""
    return min_eigenvalue(make_extended(p, unchecked=True))


# JSON state schema ---------------------------------------------------------

def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape != (8, 8, 2):
        raise ValueError(f"'matrix' must be 8 rows of 8 [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def amplitudes_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape != (8, 2):
        raise ValueError(f"'amplitudes' must be 8 [re, im] pairs, got shape {arr.shape}")
    return arr[:, 0] + 1j * arr[:, 1]


def params_from_json(data) -> ExtSymParams:
    try:
        return ExtSymParams(*(float(data[k]) for k in ("x", "y1", "y2", "y3")))
    except KeyError as exc:
        raise ValueError(f"'params' is missing field {exc.args[0]!r}") from None
