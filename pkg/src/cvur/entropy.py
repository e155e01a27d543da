"""Differential and Renyi entropies of quadrature distributions.

Two evaluation paths share one interface:

* analytic, for Gaussian states, from closed forms in the covariance matrix;
* grid, for any density sampled on a tensor grid, by composite Simpson
  quadrature (``scipy.integrate.simpson``).

Quadrature densities of Fock states are built from Hermite functions
evaluated with the normalised three-term recurrence, which stays finite for
cutoffs well beyond 64.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .quadratures import QuadratureSet, pairwise_commuting, state_moments
from .states import FockState, GaussianState

__all__ = [
    "GriddedDensity",
    "grid_points",
    "hermite_functions",
    "quadrature_pdf",
    "gaussian_pdf",
    "differential_entropy",
    "renyi_entropy",
    "gaussian_entropy",
    "gaussian_renyi_entropy",
    "entropy_power",
    "gaussian_mutual_information",
    "relative_entropy_to_gaussian",
    "grid_moments",
    "NORMALISATION_TOL",
    "N_SIGMA",
]

NORMALISATION_TOL = 1e-6
N_SIGMA = 12.0
FOCK_TAIL = 6.0
DEFAULT_POINTS = {1: 2048, 2: 512}
_TINY = 1e-300


def grid_points(dims: int) -> int:
    """Default samples per axis; ``CVUR_GRID_POINTS`` overrides it."""
    env = os.environ.get("CVUR_GRID_POINTS")
    if env:
        points = int(env)
        if points < 3:
            raise ValueError(f"CVUR_GRID_POINTS must be >= 3, got {points}")
        return points
    return DEFAULT_POINTS[dims]


def _integrate(values: np.ndarray, axes) -> float:
    out = values
    for ax in reversed(axes):
        out = simpson(out, x=ax, axis=-1)
    return float(out)


@dataclass(frozen=True)
class GriddedDensity:
    """Probability density sampled on a 1-D or 2-D tensor grid."""

    axes: tuple
    values: np.ndarray

    def __post_init__(self):
        axes = tuple(np.asarray(ax, dtype=float) for ax in self.axes)
        values = np.asarray(self.values, dtype=float)
        if len(axes) not in (1, 2):
            raise ValueError(f"densities of {len(axes)} variables are not supported")
        if values.shape != tuple(ax.size for ax in axes):
            raise ValueError(f"values shape {values.shape} does not match the grid")
        if np.any(values < 0):
            raise ValueError("density has negative samples")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", values)

    @property
    def dims(self) -> int:
        return len(self.axes)

    @property
    def lo(self):
        return tuple(float(ax[0]) for ax in self.axes)

    @property
    def hi(self):
        return tuple(float(ax[-1]) for ax in self.axes)

    @property
    def points(self):
        return tuple(ax.size for ax in self.axes)

    def integral(self) -> float:
        return _integrate(self.values, self.axes)

    def integrate(self, f: np.ndarray) -> float:
        return _integrate(f, self.axes)

    def check_normalised(self, tol: float = NORMALISATION_TOL):
        total = self.integral()
        if abs(total - 1.0) > tol:
            raise ValueError(f"density integrates to {total:.9f}, not 1 within {tol:g}")

    def shifted(self, offset) -> "GriddedDensity":
        offset = np.broadcast_to(np.asarray(offset, dtype=float), (self.dims,))
        return GriddedDensity(tuple(ax + c for ax, c in zip(self.axes, offset)), self.values)

    def scaled(self, factor: float) -> "GriddedDensity":
        """Density of ``factor * X`` (1-D)."""
        if self.dims != 1:
            raise ValueError("scaling is implemented for 1-D densities")
        ax = self.axes[0] * factor
        values = self.values / abs(factor)
        if factor < 0:
            ax, values = ax[::-1], values[::-1]
        return GriddedDensity((ax,), values)


# ---------------------------------------------------------------------------
# densities


def hermite_functions(nmax: int, u) -> np.ndarray:
    """Normalised oscillator eigenfunctions ``phi_0 .. phi_{nmax-1}`` at ``u``.

    ``phi_{n+1} = sqrt(2/(n+1)) u phi_n - sqrt(n/(n+1)) phi_{n-1}`` starting from
    ``phi_0 = pi^{-1/4} exp(-u^2/2)``.
    """
    u = np.asarray(u, dtype=float)
    out = np.empty((nmax,) + u.shape)
    out[0] = np.pi**-0.25 * np.exp(-(u**2) / 2)
    if nmax > 1:
        out[1] = np.sqrt(2.0) * u * out[0]
    for n in range(1, nmax - 1):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * u * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def gaussian_pdf(mean, cov, *axes) -> np.ndarray:
    """Multivariate normal density on the tensor grid spanned by ``axes``."""
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    det = np.linalg.det(cov)
    if det <= 0:
        raise ValueError("covariance of the measured quadratures is singular")
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1) - mean
    quad = np.einsum("...i,ij,...j->...", mesh, np.linalg.inv(cov), mesh)
    return np.exp(-quad / 2) / np.sqrt((2 * np.pi) ** mean.size * det)


def _axis(center: float, half: float, points: int) -> np.ndarray:
    return np.linspace(center - half, center + half, points)


def _occupied_levels(state: FockState) -> int:
    # highest populated level + 1: sets the oscillator support, not the cutoff
    occupied = np.abs(state.tensor()) > 1e-15
    top = max(int(np.max(np.nonzero(np.any(occupied, axis=tuple(j for j in range(state.n) if j != k)))[0]))
              if state.n > 1 else int(np.max(np.nonzero(occupied)[0])) for k in range(state.n))
    return top + 1


def _mode_of_row(row: np.ndarray, n: int) -> int:
    support = np.flatnonzero((row[:n] != 0) | (row[n:] != 0))
    if support.size != 1:
        raise ValueError(
            "grid densities of Fock states need each quadrature to act on a single mode; "
            f"row {row.tolist()} acts on modes {support.tolist()}"
        )
    return int(support[0])


def quadrature_pdf(state, Q: QuadratureSet, points: int | None = None, n_sigma: float = N_SIGMA,
                   bounds=None) -> GriddedDensity:
    """Joint density of the commuting quadratures ``Q`` measured on ``state``.

    Gaussian states give the exact normal density with covariance
    ``Q gamma Q^T``. Fock states are handled for one quadrature of a one-mode
    state, or quadratures acting on distinct modes of a two-mode state.
    Gaussian grids span ``mean +- n_sigma`` standard deviations per axis.
    Fock grids span the oscillator support of the populated levels plus
    ``FOCK_TAIL`` (in units of the row norm); pass
    ``bounds=[(lo, hi), ...]`` to override.
    """
    if Q.n_modes != state.n:
        raise ValueError(f"quadratures act on {Q.n_modes} modes, state has {state.n}")
    if Q.n_out > 2:
        raise ValueError("grid densities are limited to two jointly measured quadratures")
    if not pairwise_commuting(Q):
        raise ValueError("jointly measured quadratures must commute")
    dims = Q.n_out
    points = grid_points(dims) if points is None else points
    mean, cov = state_moments(state)
    q_mean = Q.coeffs @ mean
    q_cov = Q.coeffs @ cov @ Q.coeffs.T
    sig = np.sqrt(np.diag(q_cov))
    if bounds is None:
        if isinstance(state, FockState):
            # oscillator support of the populated levels plus a Gaussian tail
            norms = np.linalg.norm(Q.coeffs, axis=1)
            half = norms * (np.sqrt(2 * _occupied_levels(state) + 1) + FOCK_TAIL)
        else:
            half = n_sigma * sig
        axes = tuple(_axis(c, h, points) for c, h in zip(q_mean, half))
    else:
        axes = tuple(np.linspace(lo, hi, points) for lo, hi in bounds)

    if isinstance(state, GaussianState):
        return GriddedDensity(axes, gaussian_pdf(q_mean, q_cov, *axes))
    if isinstance(state, FockState):
        return GriddedDensity(axes, _fock_pdf(state, Q, axes))
    raise TypeError(f"unsupported state type {type(state).__name__}")


def _fock_pdf(state: FockState, Q: QuadratureSet, axes) -> np.ndarray:
    n = state.n_modes
    modes = [_mode_of_row(row, n) for row in Q.coeffs]
    if len(set(modes)) != len(modes):
        raise ValueError("two quadratures on the same mode of a Fock state are not supported")
    psi = state.tensor()
    levels = np.arange(state.dim)
    basis = []
    for row, mode, ax in zip(Q.coeffs, modes, axes):
        a, ap = row[mode], row[n + mode]
        scale = np.hypot(a, ap)
        theta = np.arctan2(ap, a)
        phase = np.exp(-1j * theta * levels)
        psi = np.moveaxis(np.moveaxis(psi, mode, -1) * phase, -1, mode)
        # p_{cX}(v) = p_X(v / c) / c, folded into the wavefunction amplitude
        basis.append((mode, hermite_functions(state.dim, ax / scale) / np.sqrt(scale)))
    if n == 1:
        wave = basis[0][1].T @ psi
        return np.abs(wave) ** 2
    if len(basis) == 2:
        (m1, h1), (m2, h2) = basis
        if m1 == 1:
            psi = psi.T
        wave = h1.T @ psi @ h2
        return np.abs(wave) ** 2
    mode, h = basis[0]
    if mode == 1:
        psi = psi.T
    wave = h.T @ psi  # (points, other mode levels)
    return np.sum(np.abs(wave) ** 2, axis=1)


# ---------------------------------------------------------------------------
# entropies


def differential_entropy(d: GriddedDensity) -> float:
    """``-int p ln p`` in nats, with ``0 ln 0 = 0``."""
    d.check_normalised()
    p = d.values
    safe = np.where(p > _TINY, p, 1.0)
    integrand = np.where(p > _TINY, -p * np.log(safe), 0.0)
    return d.integrate(integrand)


def renyi_entropy(d: GriddedDensity, alpha: float) -> float:
    """``ln(int p^alpha) / (1 - alpha)``; ``alpha = 1`` is the Shannon entropy.

    ``alpha = inf`` gives the min-entropy ``-ln max p``, with the maximum
    refined by a quadratic fit of ``ln p`` around the best grid point.
    """
    if alpha <= 0:
        raise ValueError(f"Renyi order must be positive, got {alpha}")
    if alpha == 1:
        return differential_entropy(d)
    d.check_normalised()
    if math.isinf(alpha):
        return -_log_peak(d)
    return float(np.log(d.integrate(d.values**alpha)) / (1 - alpha))


def _log_peak(d: GriddedDensity) -> float:
    idx = np.unravel_index(int(np.argmax(d.values)), d.values.shape)
    log_max = float(np.log(d.values[idx]))
    if any(i == 0 or i == n - 1 for i, n in zip(idx, d.values.shape)):
        return log_max
    window = d.values[tuple(slice(i - 1, i + 2) for i in idx)]
    if np.any(window <= 0):
        return log_max
    f = np.log(window)
    steps = np.array([ax[1] - ax[0] for ax in d.axes])
    centre = (1,) * d.dims
    grad = np.empty(d.dims)
    hess = np.empty((d.dims, d.dims))
    for i in range(d.dims):
        up, down = list(centre), list(centre)
        up[i], down[i] = 2, 0
        grad[i] = (f[tuple(up)] - f[tuple(down)]) / (2 * steps[i])
        hess[i, i] = (f[tuple(up)] - 2 * f[centre] + f[tuple(down)]) / steps[i] ** 2
        for j in range(i):
            corner = lambda a, b: f[tuple(a if k == i else b if k == j else 1 for k in range(d.dims))]
            hess[i, j] = hess[j, i] = (corner(2, 2) - corner(2, 0) - corner(0, 2) + corner(0, 0)) / (4 * steps[i] * steps[j])
    if np.any(np.linalg.eigvalsh(hess) >= 0):
        return log_max
    shift = np.linalg.solve(hess, grad)
    if np.any(np.abs(shift) > steps):
        return log_max
    return max(log_max, float(f[centre] - 0.5 * grad @ shift))


def _check_pd(cov) -> np.ndarray:
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    try:
        np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise ValueError("covariance matrix is not positive definite") from None
    return cov


def gaussian_entropy(cov) -> float:
    """``ln((2 pi e)^m det cov) / 2``."""
    cov = _check_pd(cov)
    m = cov.shape[0]
    _, logdet = np.linalg.slogdet(cov)
    return 0.5 * (m * np.log(2 * np.pi * np.e) + logdet)


def gaussian_renyi_entropy(cov, alpha: float) -> float:
    """``ln((2 pi)^m det cov) / 2 + m ln(alpha) / (2 (alpha - 1))``; the last term vanishes at ``alpha = inf``."""
    if alpha <= 0:
        raise ValueError(f"Renyi order must be positive, got {alpha}")
    if alpha == 1:
        return gaussian_entropy(cov)
    cov = _check_pd(cov)
    m = cov.shape[0]
    _, logdet = np.linalg.slogdet(cov)
    offset = 0.0 if math.isinf(alpha) else m * np.log(alpha) / (2 * (alpha - 1))
    return 0.5 * (m * np.log(2 * np.pi) + logdet) + offset


def entropy_power(h: float, m: int = 1) -> float:
    """Variance of the isotropic Gaussian with entropy ``h`` over ``m`` variables."""
    if m < 1:
        raise ValueError(f"dimension must be >= 1, got {m}")
    return float(np.exp(2 * h / m) / (2 * np.pi * np.e))


def gaussian_mutual_information(gamma2) -> float:
    g = _check_pd(gamma2)
    if g.shape != (2, 2):
        raise ValueError(f"expected a 2x2 covariance matrix, got {g.shape}")
    return float(0.5 * np.log(g[0, 0] * g[1, 1] / np.linalg.det(g)))


def grid_moments(d: GriddedDensity):
    """Mean vector and covariance matrix estimated on the grid."""
    mesh = np.meshgrid(*d.axes, indexing="ij")
    mean = np.array([d.integrate(d.values * u) for u in mesh])
    cov = np.array([[d.integrate(d.values * (u - mu) * (v - nu)) for v, nu in zip(mesh, mean)]
                    for u, mu in zip(mesh, mean)])
    return mean, cov


def relative_entropy_to_gaussian(d: GriddedDensity) -> float:
    """``D(X || X_G) = h(X_G) - h(X)`` for the Gaussian ``X_G`` of equal variance."""
    if d.dims != 1:
        raise ValueError("non-Gaussianity is computed for 1-D densities")
    _, cov = grid_moments(d)
    return gaussian_entropy(cov) - differential_entropy(d)
