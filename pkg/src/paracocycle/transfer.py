"""Discretized projective transfer operator of the block cocycle.

Directions in the cone {x >= y >= 0} are parametrized by the slope s = y/x in
[0, 1]. B_{m,n} maps (1, s) to (1 + mn + ns, m + s), so the image slope
(m + s)/(1 + mn + ns) stays in [0, 1] and

    (L f)(s) = sum_{m,n <= N} e^{-(m+n)P} ||B_{m,n} u_s||^t f(s'_{m,n}(s)),

with u_s the unit vector of slope s. Then L^k 1 (s) sums ||B_w u_s||^t over
depth-k block words, so log of the leading eigenvalue estimates the
truncated induced pressure. f is represented by its values on a uniform
grid with linear interpolation; none of this is certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, InvalidInputError

DEFAULT_RESOLUTION = 2048


@dataclass(frozen=True)
class ProjectiveGrid:
    """Uniform grid of slopes y/x in [0, 1]."""

    resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        if self.resolution < 2:
            raise InvalidInputError(f"grid resolution must be >= 2, got {self.resolution}")

    @property
    def slopes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.resolution)

    def refined(self) -> "ProjectiveGrid":
        """Twice the number of cells; every old node stays a node."""
        return ProjectiveGrid(2 * self.resolution - 1)

    def interpolate(self, values: np.ndarray, s) -> np.ndarray:
        return np.interp(s, self.slopes, values)


class BlockAction(NamedTuple):
    """Per-symbol weights and image slopes on a grid, shape (N*N, M)."""

    symbols: np.ndarray   # (N*N, 2) block lengths (m, n), row-major in m
    weight: np.ndarray
    image: np.ndarray


def block_action(t: float, N: int, grid: ProjectiveGrid, P: float = 0.0) -> BlockAction:
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    m, n = np.meshgrid(np.arange(1, N + 1, dtype=np.float64),
                       np.arange(1, N + 1, dtype=np.float64), indexing="ij")
    m, n = m.reshape(-1, 1), n.reshape(-1, 1)
    s = grid.slopes.reshape(1, -1)
    x = 1.0 + m * n + n * s
    y = m + s
    gain = np.hypot(x, y) / np.sqrt(1.0 + s * s)
    weight = np.exp(t * np.log(gain) - P * (m + n))
    symbols = np.column_stack([m.ravel(), n.ravel()]).astype(np.int64)
    return BlockAction(symbols, weight, y / x)


def _interp_columns(image: np.ndarray, M: int) -> tuple[np.ndarray, np.ndarray]:
    pos = image * (M - 1)
    left = np.minimum(np.floor(pos).astype(np.int64), M - 2)
    return left, pos - left


def transfer_matrix(action: BlockAction, M: int) -> np.ndarray:
    """Dense M x M matrix of L acting on grid values."""
    left, frac = _interp_columns(action.image, M)
    rows = np.broadcast_to(np.arange(M), left.shape)
    flat = rows * M + left
    w = action.weight
    mat = np.bincount(flat.ravel(), weights=(w * (1.0 - frac)).ravel(), minlength=M * M)
    mat += np.bincount((flat + 1).ravel(), weights=(w * frac).ravel(), minlength=M * M)
    return mat.reshape(M, M)


class TransferReport(NamedTuple):
    iterations: int
    residual: float
    converged: bool
    resolution: int
    N: int


class TransferResult(NamedTuple):
    log_lambda: float
    eigenfunction: np.ndarray
    report: TransferReport


def _power_iteration(mat: np.ndarray, tol: float, max_iter: int) -> tuple[float, np.ndarray, int, float]:
    h = np.ones(mat.shape[0])
    lam = 0.0
    for it in range(1, max_iter + 1):
        g = mat @ h
        lam = float(g.max())
        g /= lam
        step = float(np.abs(g - h).max())
        h = g
        if step < tol:
            resid = float(np.abs(mat @ h - lam * h).max()) / lam
            return lam, h, it, resid
    resid = float(np.abs(mat @ h - lam * h).max()) / lam
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} steps", residual=resid)


def transfer_eigenvalue(t: float, N: int, grid: ProjectiveGrid | None = None, tol: float = 1e-12,
                        max_iter: int = 10_000, P: float = 0.0) -> TransferResult:
    """Leading eigenvalue of the discretized operator, as log lambda (an estimate of g_N)."""
    grid = grid or ProjectiveGrid()
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    mat = transfer_matrix(block_action(t, N, grid, P), grid.resolution)
    lam, h, it, resid = _power_iteration(mat, tol, max_iter)
    return TransferResult(math.log(lam), h,
                          TransferReport(it, resid, True, grid.resolution, N))


class EigenData(NamedTuple):
    log_lambda: float
    right: np.ndarray
    left: np.ndarray
    action: BlockAction
    grid: ProjectiveGrid


def eigen_data(t: float, N: int, grid: ProjectiveGrid | None = None, tol: float = 1e-12,
               max_iter: int = 10_000, P: float = 0.0) -> EigenData:
    """Right and left leading eigenvectors of the discretized operator."""
    grid = grid or ProjectiveGrid()
    action = block_action(t, N, grid, P)
    mat = transfer_matrix(action, grid.resolution)
    lam, h, _, _ = _power_iteration(mat, tol, max_iter)
    _, nu, _, _ = _power_iteration(mat.T.copy(), tol, max_iter)
    return EigenData(math.log(lam), h, nu, action, grid)


def symbol_weights(data: EigenData) -> np.ndarray:
    """nu(L_a h) / (lambda nu(h)) per symbol a; these sum to 1."""
    a = data.action
    images = np.interp(a.image, data.grid.slopes, data.right)
    per_symbol = (a.weight * images) @ data.left
    return per_symbol / per_symbol.sum()


def extrapolated_log_lambda(t: float, N_pair: tuple[int, int] = (40, 80),
                            grid: ProjectiveGrid | None = None, P: float = 0.0,
                            tol: float = 1e-11) -> float:
    """Estimate of the untruncated g(t) from two truncations.

    The missing mass beyond N scales like N^{1+t} (row sums of (mn)^t), so
    g - g_N is modelled as c N^{1+t} and eliminated from N and 2N.
    """
    n1, n2 = N_pair
    g1 = transfer_eigenvalue(t, n1, grid, tol, P=P).log_lambda
    g2 = transfer_eigenvalue(t, n2, grid, tol, P=P).log_lambda
    r = (n2 / n1) ** (1.0 + t)
    return g2 + (g2 - g1) * r / (1.0 - r)
