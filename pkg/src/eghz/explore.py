"""Monte-Carlo exploration of the extended family.

Rejection sampling of the physical polytope, verdict-frequency tables, the
y1+y2+y3 conjecture scan, the LP separability oracle and figure data.
"""

from __future__ import annotations

import csv
import functools
import io
import itertools
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import classify as cl
from .numerics import lp_maximize
from .states import ExtSymParams, validate_extended
from .twirl import product_images

BOX = np.array([[-0.5, 0.5], [-0.25, 0.25], [-0.25, 0.25], [-0.25, 0.25]])
POLYTOPE_FRACTION = 1 / 12  # polytope volume 1/96 over box volume 1/8


class InfeasibleHullError(RuntimeError):
    """The requested y-triple is outside the hull of the sampled product images."""


def valid_mask(pts: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Vectorized physicality test on rows (x, y1, y2, y3)."""
    x, y1, y2, y3 = pts.T
    Y = y1 + y2 + y3
    w = 1 / 8 + Y / 2
    return (
        (y3 >= np.abs(y1 + y2) - 0.25 - tol)
        & (y3 <= 0.25 - np.abs(y1 - y2) + tol)
        & (w - np.abs(x) >= -tol)
        & (w + np.abs(x) <= 1 + tol)
    )


def _sample_array(n: int, seed: int) -> tuple[np.ndarray, int]:
    rng = np.random.default_rng(seed)
    kept = []
    n_kept = 0
    n_drawn = 0
    batch = max(1024, 16 * n)
    while n_kept < n:
        draws = rng.uniform(BOX[:, 0], BOX[:, 1], size=(batch, 4))
        ok = valid_mask(draws)
        acc = draws[ok]
        need = n - n_kept
        if len(acc) >= need:
            # count the draws actually consumed up to the n-th acceptance
            last = np.flatnonzero(ok)[need - 1]
            n_drawn += int(last) + 1
            acc = acc[:need]
        else:
            n_drawn += batch
        kept.append(acc)
        n_kept += len(acc)
    return np.vstack(kept), n_drawn


def sample_polytope(n: int, seed: int = 42) -> list[ExtSymParams]:
    """n uniform points of the physical polytope by rejection from the bounding box."""
    if n < 1:
        raise ValueError("n must be at least 1")
    arr, _ = _sample_array(n, seed)
    return [ExtSymParams(*map(float, row)) for row in arr]


def acceptance_rate(n: int, seed: int = 42) -> float:
    _, drawn = _sample_array(n, seed)
    return n / drawn


# ---------------------------------------------------------------- LP oracle

CORNER_MODULI = np.array(list(itertools.product((0.0, 1.0), repeat=3)))
CENTER_MODULI = np.full((1, 3), 1 / math.sqrt(2))


@functools.lru_cache(maxsize=8)
def _base_images(n_images: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    moduli = np.vstack([rng.uniform(0.0, 1.0, size=(n_images, 3)), CORNER_MODULI, CENTER_MODULI])
    imgs = product_images(moduli)
    refl = imgs.copy()
    refl[:, 0] *= -1
    return np.vstack([imgs, refl[refl[:, 0] != 0]])


def hull_membership_xmax(y1: float, y2: float, y3: float, n_images: int = 10_000, seed: int = 42) -> float:
    """Largest x reachable by mixing twirled product states at the given y's.

    Sampled images (uniform moduli), the eight basis-state corners, the
    equal-superposition image and the stationary image at this y (when it
    exists) form the LP columns; x-reflected copies are included.  The value
    is a certified lower bound on the separable x_max.
    """
    if n_images < 10:
        raise ValueError("n_images must be at least 10")
    cl._check_y_feasible(y1, y2, y3)
    imgs = _base_images(n_images, seed)
    mod = cl.stationary_moduli(y1, y2, y3)
    if mod is not None:
        extra = product_images(np.array([mod]))
        imgs = np.vstack([imgs, extra])
    a_eq = np.vstack([imgs[:, 1:].T, np.ones(len(imgs))])
    b_eq = np.array([y1, y2, y3, 1.0])
    res = lp_maximize(imgs[:, 0], a_eq, b_eq)
    if not res.ok:
        raise InfeasibleHullError(f"LP {res.status} for y = ({y1}, {y2}, {y3}) with {n_images} images")
    return res.value


# ------------------------------------------------------------------ volumes

@dataclass
class SampleReport:
    n_total: int
    n_valid: int
    fractions: dict[str, float]
    seed: int
    counts: dict[str, int] = field(default_factory=dict)
    flagged: int = 0

    def to_json(self) -> dict:
        return asdict(self)


def _classify_chunk(args) -> list[tuple[str, bool]]:
    rows, v0, n_images, seed = args
    out = []
    for row in rows:
        v = cl.classify_extended(ExtSymParams(*row), v0=v0, n_images=n_images, seed=seed)
        out.append((v.interval(), bool(v.flags)))
    return out


def classify_many(arr: np.ndarray, v0: float, n_images: int, seed: int, workers: int = 1) -> list[tuple[str, bool]]:
    """Classify rows of ``arr``; results are ordered and independent of ``workers``."""
    arr = [tuple(map(float, r)) for r in arr]
    if workers <= 1:
        return _classify_chunk((arr, v0, n_images, seed))
    chunks = [arr[k::workers] for k in range(workers)]
    with ProcessPoolExecutor(workers) as pool:
        parts = list(pool.map(_classify_chunk, [(c, v0, n_images, seed) for c in chunks]))
    out: list = [None] * len(arr)
    for k, part in enumerate(parts):
        out[k::workers] = part
    return out


def estimate_volumes(
    n: int, seed: int = 42, v0: float = cl.DEFAULT_V0, n_images: int = 2000, workers: int = 1
) -> SampleReport:
    """Verdict-interval frequencies over n uniform polytope samples."""
    if n < 1:
        raise ValueError("n must be at least 1")
    arr, drawn = _sample_array(n, seed)
    results = classify_many(arr, v0, n_images, seed, workers)
    counts = Counter(k for k, _ in results)
    keys = sorted(counts, key=lambda s: (cl.Class[s.split("..")[0]], cl.Class[s.split("..")[-1]]))
    return SampleReport(
        n_total=drawn,
        n_valid=n,
        fractions={k: counts[k] / n for k in keys},
        seed=seed,
        counts={k: counts[k] for k in keys},
        flagged=sum(f for _, f in results),
    )


# --------------------------------------------------------------- conjecture

@dataclass
class ConjectureReport:
    n_pairs: int
    witness_max_discrepancy: float
    ppt_bound_discrepancies: list[tuple[tuple[list[float], list[float]], float]]
    verdict_mismatches: list[tuple[list[float], list[float]]]
    stationary_discrepancies: int
    n_skipped: int
    seed: int

    def to_json(self) -> dict:
        return asdict(self)


def resplit_y(p: ExtSymParams, rng: np.random.Generator, tries: int = 1000) -> ExtSymParams | None:
    """A random valid point with the same x and y1+y2+y3 (None if none found)."""
    Y = p.Y
    for _ in range(tries):
        y1, y2 = rng.uniform(-0.25, 0.25, size=2)
        q = ExtSymParams(p.x, float(y1), float(y2), float(Y - y1 - y2))
        if validate_extended(q)[0]:
            return q
    return None


def compare_pair(
    p: ExtSymParams, q: ExtSymParams, v0: float = cl.DEFAULT_V0, n_images: int = 2000, seed: int = 42
) -> dict:
    kinds = (cl.BISEP, cl.WBISEP, cl.WitnessKind(cl.Witness.GhzVsW, v0))
    wdiff = max(abs(cl.witness_trace(k, p) - cl.witness_trace(k, q)) for k in kinds)
    ppt_delta = cl.ppt_xmax(*p.ys) - cl.ppt_xmax(*q.ys)
    sp, sq = cl.separable_xmax_stationary(*p.ys), cl.separable_xmax_stationary(*q.ys)
    vp = cl.classify_extended(p, v0=v0, n_images=n_images, seed=seed)
    vq = cl.classify_extended(q, v0=v0, n_images=n_images, seed=seed)
    return {
        "witness": wdiff,
        "ppt": ppt_delta,
        "stationary_differs": (sp is None) != (sq is None) or (sp is not None and abs(sp - sq) > 1e-12),
        "verdict_differs": (vp.lower, vp.upper) != (vq.lower, vq.upper),
    }


def conjecture_scan(
    n_pairs: int, seed: int = 42, v0: float = cl.DEFAULT_V0, n_images: int = 2000
) -> ConjectureReport:
    """Compare indicators across pairs sharing (x, y1+y2+y3) but not the individual y's."""
    if n_pairs < 1:
        raise ValueError("n_pairs must be at least 1")
    rng = np.random.default_rng([seed, 1])
    base = sample_polytope(n_pairs, seed)
    wmax = 0.0
    ppt_d, mism = [], []
    stat = skipped = 0
    for p in base:
        q = resplit_y(p, rng)
        if q is None:
            skipped += 1
            continue
        r = compare_pair(p, q, v0, n_images, seed)
        wmax = max(wmax, r["witness"])
        pair = (list(p.as_array()), list(q.as_array()))
        if abs(r["ppt"]) > 1e-12:
            ppt_d.append((pair, r["ppt"]))
        if r["verdict_differs"]:
            mism.append(pair)
        stat += r["stationary_differs"]
    return ConjectureReport(n_pairs, wmax, ppt_d, mism, stat, skipped, seed)


# ------------------------------------------------------------------ figures

FIGURES = {"fig3a": "equal", "fig3b": "anti", "fig3c": "axis"}
BOUNDARY_HEADER = ["y", "x_stationary", "x_hull", "x_ppt", "x_phys"]


def fmt(v: float | None) -> str:
    return "" if v is None else repr(float(f"{v:.12g}"))


def boundary_csv(rows, extra: dict[str, list[float]] | None = None, header_comment: str | None = None) -> str:
    buf = io.StringIO()
    if header_comment:
        buf.write(f"# {header_comment}\n")
    w = csv.writer(buf, lineterminator="\n")
    extra = extra or {}
    w.writerow(BOUNDARY_HEADER + list(extra))
    for k, r in enumerate(rows):
        w.writerow([fmt(r.y), fmt(r.x_stationary), fmt(r.x_hull), fmt(r.x_ppt), fmt(r.x_phys)]
                   + [fmt(col[k]) for col in extra.values()])
    return buf.getvalue()


def figure_data(fig_id: str, resolution: int = 101, n_images: int = 10_000, seed: int = 42, v0: float = cl.DEFAULT_V0):
    """Rows for the Fig. 3 slices (with an LP column) or the Fig. 4 polygon and zero-lines."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if fig_id in FIGURES:
        name = FIGURES[fig_id]
        rows = cl.slice_boundary(name, resolution)
        embed = cl.SLICES[name][1]
        lp = [hull_membership_xmax(*embed(r.y), n_images=n_images, seed=seed) for r in rows]
        return rows, {"x_lp": lp}
    if fig_id == "fig4":
        verts = cl.fig4_polygon(v0)
        Ys = np.linspace(-0.25, 0.75, resolution)
        lines = {}
        for name, ln in cl.fig4_lines(v0).items():
            if name in ("bisep", "w", "ghz"):
                xs = (ln.c - ln.a * Ys) / ln.b
                lines[name] = [[float(Y), float(x)] for Y, x in zip(Ys, xs) if cl.in_physical_triangle(Y, x)]
        return {
            "v0": v0,
            "vertices": [{"Y": v.Y, "x": v.x, "lines": list(v.lines)} for v in verts],
            "zero_lines": lines,
        }
    raise ValueError(f"unknown figure {fig_id!r}; expected fig3a, fig3b, fig3c or fig4")


def round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def emit_figure(fig_id: str, resolution: int = 101, n_images: int = 10_000, seed: int = 42,
                v0: float = cl.DEFAULT_V0) -> str:
    """Figure data as CSV (fig3*) or JSON (fig4) text."""
    data = figure_data(fig_id, resolution, n_images, seed, v0)
    if fig_id == "fig4":
        return json.dumps(round_floats(data), indent=2, allow_nan=False) + "\n"
    rows, extra = data
    return boundary_csv(rows, extra, header_comment=f"{fig_id} seed={seed} n_images={n_images}")
