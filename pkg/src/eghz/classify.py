"""Separability bounds, PPT test, class-specific witnesses and the rough verdict.

Verdicts are intervals ``lower <= class <= upper`` in the hierarchy
Separable < Biseparable < W < GHZ.  The lower end comes from witness signs
(and NPT), the upper end collapses to Separable only when the state is
certified to lie inside the convex hull of twirled product states.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import Polyline2D, eig_hermitian, partial_transpose, upper_hull
from .states import (
    P_GHZ_MINUS,
    P_GHZ_PLUS,
    SQRT3,
    ExtSymParams,
    make_extended,
    reflect_x,
    require_valid,
    validate_extended,
)
from .twirl import project_to_ghz

DEFAULT_V0 = 0.981
SIGN_BAND = 1e-10
SANDWICH_FLAG_GAP = 1e-3


class Class(enum.IntEnum):
    Separable = 0
    Biseparable = 1
    W = 2
    GHZ = 3


class Witness(enum.Enum):
    BisepVsSep = "bisep"
    WVsBisep = "w"
    GhzVsW = "ghz"


@dataclass(frozen=True)
class WitnessKind:
    kind: Witness
    v0: float = DEFAULT_V0

    @classmethod
    def parse(cls, name: str, v0: float = DEFAULT_V0) -> "WitnessKind":
        return cls(Witness(name), v0)


BISEP = WitnessKind(Witness.BisepVsSep)
WBISEP = WitnessKind(Witness.WVsBisep)
GHZW = WitnessKind(Witness.GhzVsW)


# ---------------------------------------------------------------- stationary

def _check_y_feasible(y1: float, y2: float, y3: float) -> None:
    ok, bad = validate_extended(ExtSymParams(0.0, y1, y2, y3))
    if not ok:
        raise ValueError(f"no physical state has y = ({y1}, {y2}, {y3}): " + "; ".join(bad))


def stationary_moduli(y1: float, y2: float, y3: float) -> tuple[float, float, float] | None:
    """Moduli |A_j| of the product state whose twirl has the given y's, or None.

    With t_j = 2|A_j|^2 - 1 the three constraints read t_k t_l = 4 y_j, so for
    nonzero y's the solution is t_j = 2 sqrt(y1 y2 y3) / y_j.  When two of
    the y's vanish the constraints leave a one-parameter family and x is
    maximized at |t_i| = |t_j| = 2 sqrt|y_k|.
    """
    ys = (y1, y2, y3)
    zeros = [abs(y) == 0.0 for y in ys]
    if sum(zeros) == 1:
        return None
    if sum(zeros) >= 2:
        k = zeros.index(False) if sum(zeros) == 2 else 2
        yk = ys[k]
        r = 2.0 * math.sqrt(abs(yk))
        if r > 1.0:
            return None
        t = [0.0, 0.0, 0.0]
        i, j = [m for m in range(3) if m != k]
        t[i] = r
        t[j] = math.copysign(r, yk) if yk != 0 else r
        t[k] = 0.0
    else:
        prod = y1 * y2 * y3
        if prod <= 0.0:
            return None
        root = 2.0 * math.sqrt(prod)
        t = [root / y for y in ys]
        if any(abs(tj) > 1.0 for tj in t):
            return None
    return tuple(math.sqrt((1.0 + tj) / 2.0) for tj in t)


def separable_xmax_stationary(y1: float, y2: float, y3: float) -> float | None:
    """x of the twirled product state at (y1, y2, y3), or None when there is none.

    Three nonzero y's: (1/8) sqrt((y1-4y2y3)(y2-4y1y3)(y3-4y1y2)/(y1y2y3)),
    gated on real, in-range moduli.  Two zeros: (1/8)(1 - 4|y_k|).  Exactly
    one zero: None.  Capped by the physicality bound 1/8 + (y1+y2+y3)/2.
    """
    _check_y_feasible(y1, y2, y3)
    if stationary_moduli(y1, y2, y3) is None:
        return None
    n_zero = sum(abs(y) == 0.0 for y in (y1, y2, y3))
    if n_zero >= 2:
        yk = y1 + y2 + y3
        value = (1.0 - 4.0 * abs(yk)) / 8.0
    else:
        num = (y1 - 4 * y2 * y3) * (y2 - 4 * y1 * y3) * (y3 - 4 * y1 * y2)
        radicand = num / (y1 * y2 * y3)
        if radicand < 0.0:
            return None
        value = math.sqrt(radicand) / 8.0
    return min(value, 1 / 8 + (y1 + y2 + y3) / 2)


# ---------------------------------------------------------------------- PPT

@dataclass(frozen=True)
class PptReport:
    alpha2: float
    alpha3: float
    alpha4: float
    x_max: float
    margin: float
    numeric_min_eig: float

    @property
    def ppt(self) -> bool:
        return self.margin >= -SIGN_BAND


def ppt_alphas(y1: float, y2: float, y3: float) -> tuple[float, float, float]:
    return (
        1 / 8 - (y1 + y2 - y3) / 2,
        1 / 8 - (y1 - y2 + y3) / 2,
        1 / 8 - (-y1 + y2 + y3) / 2,
    )


def ppt_xmax(y1: float, y2: float, y3: float) -> float:
    return min(ppt_alphas(y1, y2, y3))


def pt_min_eigenvalue(rho) -> float:
    """Smallest eigenvalue over the partial transposes on qubits 1, 2 and 3."""
    return min(float(eig_hermitian(partial_transpose(rho, q))[0]) for q in (1, 2, 3))


def ppt_report(p: ExtSymParams) -> PptReport:
    require_valid(p)
    a2, a3, a4 = ppt_alphas(*p.ys)
    x_max = min(a2, a3, a4)
    margin = x_max - abs(p.x)
    numeric = pt_min_eigenvalue(make_extended(p))
    if (margin > SIGN_BAND and numeric < -SIGN_BAND) or (margin < -SIGN_BAND and numeric > SIGN_BAND):
        raise ArithmeticError(
            f"PPT closed form and spectrum disagree at {p}: margin {margin:.3e}, min eigenvalue {numeric:.3e}"
        )
    return PptReport(a2, a3, a4, x_max, margin, numeric)


# ---------------------------------------------------------------- witnesses

def _ghz_coeffs(v0: float) -> tuple[float, float]:
    return 3.0 / (v0 * v0 - 2 * v0 + 4), 3.0 / (v0 * v0 + 2 * v0 + 4)


def witness_matrix(kind: WitnessKind) -> np.ndarray:
    eye = np.eye(8, dtype=complex)
    if kind.kind is Witness.BisepVsSep:
        return eye - 4 * P_GHZ_PLUS + 2 * P_GHZ_MINUS
    if kind.kind is Witness.WVsBisep:
        return 0.5 * eye - P_GHZ_PLUS
    if kind.v0 <= 0:
        raise ValueError(f"v0 must be positive, got {kind.v0!r}")
    a, b = _ghz_coeffs(kind.v0)
    return 0.75 * eye - a * P_GHZ_PLUS - b * P_GHZ_MINUS


def ghz_witness_line(v0: float) -> tuple[float, float, float]:
    """(K, C, k) with tr(W_GHZ rho) = K * (C - Y - k x).

    k = 4 v0 / (v0^2 + 4).  This is what expanding the operator against the
    family gives; the factor v0 in k is easy to lose when simplifying.
    """
    v2 = v0 * v0
    K = 3 * (v2 + 4) / ((v2 - 2 * v0 + 4) * (v2 + 2 * v0 + 4))
    C = ((v2 + 3) * (v2 + 4) - 4 * v2) / (4 * (v2 + 4))
    k = 4 * v0 / (v2 + 4)
    return K, C, k


def witness_value(kind: WitnessKind, x: float, Y: float) -> float:
    """Closed-form expectation as a function of x and Y = y1 + y2 + y3 only."""
    if kind.kind is Witness.BisepVsSep:
        return 0.75 - Y - 6 * x
    if kind.kind is Witness.WVsBisep:
        return 0.5 * (0.75 - Y - 2 * x)
    K, C, k = ghz_witness_line(kind.v0)
    return K * (C - Y - k * x)


def witness_trace(kind: WitnessKind, p: ExtSymParams) -> float:
    require_valid(p)
    return witness_value(kind, p.x, p.Y)


def werner_threshold(kind: WitnessKind) -> float:
    """Werner weight p at which the witness expectation vanishes (x = p/2, Y = 3p/4)."""
    if kind.kind is Witness.BisepVsSep:
        return 1 / 5
    if kind.kind is Witness.WVsBisep:
        return 3 / 7
    _, C, k = ghz_witness_line(kind.v0)
    return C / (0.75 + k / 2)


# --------------------------------------------------- GHZ-symmetric boundary

GHZ_Y_MIN = -1 / (4 * SQRT3)


def ghz_boundary_point(a: float) -> tuple[float, float]:
    """(y, x) of the GHZ-symmetric twirl of a product state with equal moduli a."""
    b2 = 1 - a * a
    return (a**6 + b2**3 - 0.25) / SQRT3, a**3 * b2**1.5


def ghz_symmetric_separable_boundary(resolution: int = 2001) -> Polyline2D:
    """Upper boundary of the GHZ-symmetric separable region in the (y, x) plane."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    a = np.linspace(1 / math.sqrt(2), 1.0, resolution)
    pts = [ghz_boundary_point(float(ai)) for ai in a]
    pts.append((GHZ_Y_MIN, 0.0))  # lower vertex: diagonal, separable
    hull = upper_hull(pts)
    clipped = []
    for y, x in hull.vertices:
        y = min(max(y, GHZ_Y_MIN), SQRT3 / 4)
        x_tri = SQRT3 / 2 * (y - GHZ_Y_MIN)
        clipped.append((y, max(0.0, min(x, x_tri))))
    return Polyline2D(tuple(clipped))


_GHZ_BOUNDARY_CACHE: dict[int, Polyline2D] = {}


def ghz_separable_xmax(y: float, resolution: int = 2001) -> float:
    if resolution not in _GHZ_BOUNDARY_CACHE:
        _GHZ_BOUNDARY_CACHE[resolution] = ghz_symmetric_separable_boundary(resolution)
    poly = _GHZ_BOUNDARY_CACHE[resolution]
    if not poly.h[0] - 1e-12 <= y <= poly.h[-1] + 1e-12:
        raise ValueError(f"y = {y} outside the GHZ-symmetric range [{poly.h[0]}, {poly.h[-1]}]")
    return float(poly(min(max(y, poly.h[0]), poly.h[-1])))


# ----------------------------------------------------------- separable bound

class Certainty(str, enum.Enum):
    EXACT_POINT = "stationary"  # attained by a twirled product state: lower bound
    LOWER = "lower-bound"
    UPPER = "upper-bound"


def physical_xmax(y1: float, y2: float, y3: float) -> float:
    Y = y1 + y2 + y3
    return min(1 / 8 + Y / 2, 7 / 8 - Y / 2)


def separable_xmax(
    y1: float, y2: float, y3: float, method: str = "analytic", n_images: int = 10_000, seed: int = 42
) -> tuple[float, Certainty]:
    """Separable x_max at fixed y by one of three routes.

    ``ppt`` is an upper bound on the true value; ``hull_oracle`` and the
    stationary value are realized by separable states and so bound it from below.
    """
    _check_y_feasible(y1, y2, y3)
    if method == "ppt":
        return min(ppt_xmax(y1, y2, y3), physical_xmax(y1, y2, y3)), Certainty.UPPER
    if method == "analytic":
        v = separable_xmax_stationary(y1, y2, y3)
        if v is not None:
            return v, Certainty.EXACT_POINT
        method = "hull_oracle"
    if method == "hull_oracle":
        from .explore import hull_membership_xmax

        return hull_membership_xmax(y1, y2, y3, n_images=n_images, seed=seed), Certainty.LOWER
    raise ValueError(f"unknown method {method!r}; expected analytic, hull_oracle or ppt")


# --------------------------------------------------------------------- slices

SLICES = {
    "equal": ((-1 / 12, 1 / 4), lambda y: (y, y, y)),
    "anti": ((-1 / 4, 1 / 12), lambda y: (y, y, -y)),
    "axis": ((-1 / 4, 1 / 4), lambda y: (0.0, 0.0, y)),
}


@dataclass(frozen=True)
class BoundaryRow:
    y: float
    x_stationary: float | None
    x_hull: float
    x_ppt: float
    x_phys: float


def slice_hull(name: str, resolution: int = 2001) -> Polyline2D:
    """Upper hull of the stationary curve along a slice, closed by the x = 0 endpoints."""
    (lo, hi), embed = SLICES[name]
    pts = [(lo, 0.0), (hi, 0.0)]
    for y in np.linspace(lo, hi, resolution):
        v = separable_xmax_stationary(*embed(float(y)))
        if v is not None:
            pts.append((float(y), v))
    return upper_hull(pts)


def slice_boundary(name: str, resolution: int = 101, hull_resolution: int = 2001) -> list[BoundaryRow]:
    if name not in SLICES:
        raise ValueError(f"unknown slice {name!r}; expected one of {sorted(SLICES)}")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    (lo, hi), embed = SLICES[name]
    hull = slice_hull(name, max(resolution, hull_resolution))
    rows = []
    for y in np.linspace(lo, hi, resolution):
        y = float(y)
        ys = embed(y)
        x_phys = max(0.0, physical_xmax(*ys))
        x_hull = min(float(hull(y)), x_phys)
        x_ppt = min(ppt_xmax(*ys), x_phys)
        rows.append(BoundaryRow(y, separable_xmax_stationary(*ys), x_hull, x_ppt, x_phys))
    return rows


# ------------------------------------------------------------ Fig. 4 polygon

@dataclass(frozen=True)
class Line:
    """a*Y + b*x = c."""

    name: str
    a: float
    b: float
    c: float

    def value(self, Y, x):
        return self.c - self.a * Y - self.b * x


def fig4_lines(v0: float = DEFAULT_V0) -> dict[str, Line]:
    """Zero lines of the three witnesses and the edges of the physical (Y, x) triangle."""
    if v0 <= 0:
        raise ValueError(f"v0 must be positive, got {v0!r}")
    _, C, k = ghz_witness_line(v0)
    return {
        "bisep": Line("bisep", 1.0, 6.0, 0.75),
        "w": Line("w", 1.0, 2.0, 0.75),
        "ghz": Line("ghz", 1.0, k, C),
        "x=0": Line("x=0", 0.0, 1.0, 0.0),
        "physical": Line("physical", -0.5, 1.0, 1 / 8),  # x = 1/8 + Y/2
        "Y=3/4": Line("Y=3/4", 1.0, 0.0, 0.75),
    }


def in_physical_triangle(Y: float, x: float, tol: float = 1e-12) -> bool:
    return x >= -tol and x <= 1 / 8 + Y / 2 + tol and Y <= 0.75 + tol and Y >= -0.25 - tol


@dataclass(frozen=True)
class Fig4Vertex:
    Y: float
    x: float
    lines: tuple[str, ...]


def fig4_polygon(v0: float = DEFAULT_V0, tol: float = 1e-12) -> list[Fig4Vertex]:
    """All pairwise intersections of witness zero-lines and triangle edges inside the triangle."""
    lines = list(fig4_lines(v0).values())
    found: list[list] = []
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            l1, l2 = lines[i], lines[j]
            det = l1.a * l2.b - l1.b * l2.a
            if abs(det) < 1e-15:
                continue
            Y = (l1.c * l2.b - l1.b * l2.c) / det
            x = (l1.a * l2.c - l1.c * l2.a) / det
            if not in_physical_triangle(Y, x, tol):
                continue
            for rec in found:
                if abs(rec[0] - Y) < 1e-9 and abs(rec[1] - x) < 1e-9:
                    rec[2].update((l1.name, l2.name))
                    break
            else:
                found.append([Y, x, {l1.name, l2.name}])
    order = [ln.name for ln in lines]
    found.sort(key=lambda r: (r[0], r[1]))
    return [Fig4Vertex(Y + 0.0, x + 0.0, tuple(sorted(names, key=order.index))) for Y, x, names in found]


def _clip(poly: list[tuple[float, float]], line: Line, keep_negative: bool) -> list[tuple[float, float]]:
    """Sutherland-Hodgman against one half-plane (value < 0 if keep_negative else value >= 0)."""
    def inside(pt):
        v = line.value(*pt)
        return v < 0 if keep_negative else v >= 0

    out = []
    for k in range(len(poly)):
        cur, nxt = poly[k], poly[(k + 1) % len(poly)]
        if inside(cur):
            out.append(cur)
        if inside(cur) != inside(nxt):
            v0, v1 = line.value(*cur), line.value(*nxt)
            s = v0 / (v0 - v1)
            out.append((cur[0] + s * (nxt[0] - cur[0]), cur[1] + s * (nxt[1] - cur[1])))
    return out


PHYSICAL_TRIANGLE = [(-0.25, 0.0), (0.75, 0.0), (0.75, 0.5)]


def fig4_regions(v0: float = DEFAULT_V0) -> dict[Class, list[tuple[float, float]]]:
    """Convex polygons of the (Y, x >= 0) triangle keyed by the witness-certified lower class."""
    ln = fig4_lines(v0)
    tri = list(PHYSICAL_TRIANGLE)
    ghz = _clip(tri, ln["ghz"], keep_negative=True)
    not_ghz = _clip(tri, ln["ghz"], keep_negative=False)
    w = _clip(not_ghz, ln["w"], keep_negative=True)
    not_w = _clip(not_ghz, ln["w"], keep_negative=False)
    b = _clip(not_w, ln["bisep"], keep_negative=True)
    s = _clip(not_w, ln["bisep"], keep_negative=False)
    return {Class.GHZ: ghz, Class.W: w, Class.Biseparable: b, Class.Separable: s}


def point_in_convex_polygon(pt: tuple[float, float], poly: list[tuple[float, float]]) -> bool:
    if len(poly) < 3:
        return False
    signs = []
    for k in range(len(poly)):
        (x0, y0), (x1, y1) = poly[k], poly[(k + 1) % len(poly)]
        signs.append((x1 - x0) * (pt[1] - y0) - (y1 - y0) * (pt[0] - x0))
    return all(s >= 0 for s in signs) or all(s <= 0 for s in signs)


# -------------------------------------------------------------------- verdict

@dataclass(frozen=True)
class Evidence:
    name: str
    value: float
    threshold: float


@dataclass
class ClassVerdict:
    lower: Class
    upper: Class
    evidence: list[Evidence] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"inconsistent verdict: lower {self.lower.name} > upper {self.upper.name}")

    def interval(self) -> str:
        return self.lower.name if self.lower == self.upper else f"{self.lower.name}..{self.upper.name}"

    def to_json(self) -> dict:
        out = {
            "lower": self.lower.name,
            "upper": self.upper.name,
            "evidence": [{"name": e.name, "value": e.value, "threshold": e.threshold} for e in self.evidence],
        }
        if self.flags:
            out["flags"] = list(self.flags)
        return out


def witness_lower_class(x: float, Y: float, v0: float = DEFAULT_V0) -> Class:
    if witness_value(WitnessKind(Witness.GhzVsW, v0), x, Y) < 0:
        return Class.GHZ
    if witness_value(WBISEP, x, Y) < 0:
        return Class.W
    if witness_value(BISEP, x, Y) < 0:
        return Class.Biseparable
    return Class.Separable


def physicality_slack(p: ExtSymParams) -> float:
    """Smallest slack over the linear physicality constraints (0 on the boundary)."""
    x, y1, y2, y3 = p.x, p.y1, p.y2, p.y3
    Y = p.Y
    return min(
        y3 - (abs(y1 + y2) - 0.25),
        0.25 - abs(y1 - y2) - y3,
        1 / 8 + Y / 2 - abs(x),
        1 - (1 / 8 + Y / 2 + abs(x)),
    )


def classify_extended(
    p: ExtSymParams, v0: float = DEFAULT_V0, n_images: int = 2000, seed: int = 42
) -> ClassVerdict:
    """Rough SLOCC interval for an extended GHZ-symmetric state.

    The separability certificate solves the product-image hull LP with
    ``n_images`` sampled images (fixed by ``seed``) and is only attempted
    when the state is PPT.
    """
    require_valid(p)
    q = reflect_x(p) if p.x < 0 else p
    x, Y = q.x, q.Y
    ev: list[Evidence] = []
    flags: list[str] = []

    traces = {
        "witness_bisep": witness_value(BISEP, x, Y),
        "witness_w": witness_value(WBISEP, x, Y),
        "witness_ghz": witness_value(WitnessKind(Witness.GhzVsW, v0), x, Y),
    }
    ev.extend(Evidence(k, v, 0.0) for k, v in traces.items())
    lower = witness_lower_class(x, Y, v0)

    ppt = ppt_report(q)
    ev.append(Evidence("ppt_margin", ppt.margin, 0.0))
    ev.append(Evidence("ppt_min_eigenvalue", ppt.numeric_min_eig, 0.0))
    if not ppt.ppt:
        lower = max(lower, Class.Biseparable)

    # Projection onto the GHZ-symmetric family can only lower the class.
    g = project_to_ghz(q)
    ghz_bound = ghz_separable_xmax(g.y)
    ev.append(Evidence("projection_ghz_separable_margin", ghz_bound - g.x, 0.0))
    ev.append(Evidence("projection_witness_lower", float(witness_lower_class(g.x, SQRT3 * g.y, v0)), 0.0))
    projection_entangled = g.x > ghz_bound + SIGN_BAND
    if projection_entangled:
        lower = max(lower, Class.Biseparable)

    upper = Class.GHZ
    if ppt.ppt and not projection_entangled:
        from .explore import hull_membership_xmax

        lp = hull_membership_xmax(*q.ys, n_images=n_images, seed=seed)
        ev.append(Evidence("hull_lp_margin", lp - x, 0.0))
        if x <= lp + SIGN_BAND:
            upper = Class.Separable
        elif ppt.x_max - lp > SANDWICH_FLAG_GAP:
            flags.append("separability undetermined: hull and PPT bounds differ by more than 1e-3")
    ev.append(Evidence("physicality_slack", physicality_slack(q), 0.0))
    if upper == Class.Separable and lower > Class.Separable:
        # a witness would contradict a separable certificate; keep the interval honest
        flags.append("separable certificate contradicts a negative witness")
        upper = Class.GHZ
    return ClassVerdict(lower, upper, ev, flags)
