"""Small dense kernels: Hermitian eigensolver, partial transpose, HS distance,
upper convex hull and a tableau simplex.

Everything here works on plain numpy arrays and is sized for the 8x8 / 16x16
matrices and few-row LPs used elsewhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
PSD_TOL = 1e-10


class NotHermitianError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


def check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {m.shape}")
    dev = np.abs(m - m.conj().T)
    i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
    if dev[i, j] > tol:
        raise NotHermitianError(
            f"matrix not Hermitian: |M[{i},{j}] - conj(M[{j},{i}])| = {dev[i, j]:.3e} > {tol:g}"
        )


def _max_offdiag(a: np.ndarray) -> float:
    off = np.abs(a - np.diag(np.diag(a)))
    return float(off.max()) if off.size else 0.0


def eig_hermitian(m, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a complex Hermitian matrix, ascending, by cyclic Jacobi.

    Each rotation first removes the phase of the pivot element and then applies
    a real Givens rotation on the (p, q) plane.
    """
    a = np.array(m, dtype=complex)
    check_hermitian(a)
    n = a.shape[0]
    # symmetrize away sub-tolerance asymmetry so the rotations stay exact
    a = 0.5 * (a + a.conj().T)
    trace = float(np.trace(a).real)

    for _ in range(max_sweeps + 1):
        if _max_offdiag(a) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                phase = apq / r
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ g
                a[:, p] = cols[:, 0]
                a[:, q] = cols[:, 1]
                rows = g.conj().T @ a[[p, q], :]
                a[p, :] = rows[0]
                a[q, :] = rows[1]
                a[p, q] = 0.0
                a[q, p] = 0.0
    else:
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {_max_offdiag(a):.3e})"
        )

    w = np.sort(np.diag(a).real)
    if abs(w.sum() - trace) > 1e-10 * max(1.0, abs(trace)):
        raise ConvergenceError(f"eigenvalue sum {w.sum()!r} drifted from trace {trace!r}")
    return w


def min_eigenvalue(m) -> float:
    return float(eig_hermitian(m)[0])


def is_psd(m, tol: float = PSD_TOL) -> bool:
    return min_eigenvalue(m) >= -tol


def partial_transpose(m, qubit: int) -> np.ndarray:
    """Transpose the given qubit (1, 2 or 3; qubit 1 most significant) of an 8x8 operator."""
    m = np.asarray(m)
    if m.shape != (8, 8):
        raise ValueError(f"partial_transpose supports 8x8 (three-qubit) matrices only, got {m.shape}")
    if qubit not in (1, 2, 3):
        raise ValueError(f"qubit must be 1, 2 or 3, got {qubit!r}")
    t = m.reshape((2,) * 6)
    k = qubit - 1
    axes = list(range(6))
    axes[k], axes[k + 3] = axes[k + 3], axes[k]
    return t.transpose(axes).reshape(8, 8).copy()


def hs_distance(a, b) -> float:
    """sqrt(tr((A-B)^dag (A-B)) / 2)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    d = a - b
    return float(np.sqrt(max(np.vdot(d, d).real, 0.0) / 2.0))


@dataclass(frozen=True)
class Polyline2D:
    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self):
        hs = [h for h, _ in self.vertices]
        if any(b <= a for a, b in zip(hs, hs[1:])):
            raise ValueError("polyline vertices must be strictly increasing in h")

    @property
    def h(self) -> np.ndarray:
        return np.array([v[0] for v in self.vertices])

    @property
    def v(self) -> np.ndarray:
        return np.array([v[1] for v in self.vertices])

    def __call__(self, h):
        """Piecewise-linear interpolation; NaN outside the covered range."""
        return np.interp(h, self.h, self.v, left=np.nan, right=np.nan)


def upper_hull(points) -> Polyline2D:
    """Upper convex hull by Andrew's monotone chain. Collinear interior points are dropped."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise ValueError("upper_hull needs at least two (h, v) points")
    if not np.all(np.isfinite(pts)):
        raise ValueError("upper_hull got non-finite coordinates")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    # one point per abscissa: keep the highest
    keep = np.append(pts[1:, 0] != pts[:-1, 0], True)
    pts = pts[keep]
    if len(pts) < 2:
        raise ValueError("upper_hull needs at least two distinct abscissae")

    hull: list[tuple[float, float]] = []
    for h, v in pts:
        while len(hull) >= 2:
            (h0, v0), (h1, v1) = hull[-2], hull[-1]
            if (h1 - h0) * (v - v0) - (h - h0) * (v1 - v0) >= 0.0:
                hull.pop()
            else:
                break
        hull.append((float(h), float(v)))
    return Polyline2D(tuple(hull))


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: np.ndarray | None = None
    value: float | None = None
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def _pivot(t: np.ndarray, row: int, col: int) -> None:
    t[row] /= t[row, col]
    colv = t[:, col].copy()
    colv[row] = 0.0
    t -= np.outer(colv, t[row])


def _simplex(t: np.ndarray, basis: np.ndarray, ncols: int, tol: float, max_iter: int) -> tuple[str, int]:
    """Maximize the objective stored in the last row of the tableau (as reduced costs).

    Bland's rule: smallest-index entering column with positive reduced cost,
    ratio ties broken by smallest basic index.
    """
    m = t.shape[0] - 1
    for it in range(max_iter):
        red = t[-1, :ncols]
        cand = np.flatnonzero(red > tol)
        if cand.size == 0:
            return "optimal", it
        col = int(cand[0])
        a = t[:m, col]
        pos = a > tol
        if not pos.any():
            return "unbounded", it
        ratios = np.full(m, np.inf)
        ratios[pos] = t[:m, -1][pos] / a[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + tol * max(1.0, abs(best)))
        row = int(ties[np.argmin(basis[ties])])
        _pivot(t, row, col)
        basis[row] = col
    raise ConvergenceError(f"simplex exceeded {max_iter} iterations")


def lp_maximize(c, a_eq, b_eq, nonneg: bool = True, tol: float = 1e-11, max_iter: int = 50000) -> LPResult:
    """Maximize c.w subject to A w = b (and w >= 0 when ``nonneg``).

    Two-phase dense tableau simplex. Free variables (``nonneg=False``) are split
    into positive and negative parts.
    """
    c = np.asarray(c, dtype=float)
    a = np.atleast_2d(np.asarray(a_eq, dtype=float))
    b = np.asarray(b_eq, dtype=float).ravel()
    if a.shape != (b.size, c.size):
        raise ValueError(f"inconsistent LP dimensions: A {a.shape}, b {b.shape}, c {c.shape}")
    n_orig = c.size
    if not nonneg:
        c = np.concatenate([c, -c])
        a = np.hstack([a, -a])
    m, n = a.shape

    flip = b < 0
    a = np.where(flip[:, None], -a, a)
    b = np.where(flip, -b, b)

    # phase 1: artificials in columns n..n+m-1, rhs in the last column
    t = np.zeros((m + 1, n + m + 1))
    t[:m, :n] = a
    t[:m, n:n + m] = np.eye(m)
    t[:m, -1] = b
    # maximize -sum(artificials); reduced costs expressed in the artificial basis
    t[-1, :n] = a.sum(axis=0)
    t[-1, -1] = b.sum()
    basis = np.arange(n, n + m)
    status, it1 = _simplex(t, basis, n, tol, max_iter)
    if status != "optimal" or t[-1, -1] > 1e-9 * max(1.0, np.abs(b).max(initial=0.0)):
        return LPResult("infeasible", iterations=it1)

    # drive remaining artificials out of the basis where possible
    for row in range(m):
        if basis[row] >= n:
            nz = np.flatnonzero(np.abs(t[row, :n]) > tol)
            if nz.size:
                _pivot(t, row, int(nz[0]))
                basis[row] = int(nz[0])
    keep_rows = basis < n
    t = np.vstack([t[:m][keep_rows], t[-1:]])
    basis = basis[keep_rows]
    t = np.delete(t, np.s_[n:n + m], axis=1)

    # phase 2
    t[-1, :] = 0.0
    t[-1, :n] = c
    for row, col in enumerate(basis):
        t[-1] -= c[col] * t[row]
    status, it2 = _simplex(t, basis, n, tol, max_iter)
    if status != "optimal":
        return LPResult(status, iterations=it1 + it2)

    w = np.zeros(n)
    w[basis] = t[:-1, -1]
    w[np.abs(w) < 1e-15] = 0.0
    if not nonneg:
        w = w[:n_orig] - w[n_orig:]
        c = c[:n_orig]
    a_chk = np.atleast_2d(np.asarray(a_eq, dtype=float))
    resid = np.abs(a_chk @ w - np.asarray(b_eq, dtype=float).ravel()).max(initial=0.0)
    if resid > 1e-9:
        raise ConvergenceError(f"LP constraint residual {resid:.3e} exceeds 1e-9")
    return LPResult("optimal", w, float(c @ w), it1 + it2)
