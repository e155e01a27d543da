"""Linear quadrature combinations, commutator matrices and their covariances.

A quadrature ``y = sum_k a_k x_k + a'_k p_k`` is stored as one row
``(a | a')`` of a coefficient matrix in xxpp ordering. Every commutator of
two such quadratures is a scalar multiple of ``i``, so only the real factor
``K~`` (with ``K = i K~``) is ever stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .states import FockState, GaussianState, fock_covariance

__all__ = [
    "QuadratureSet",
    "CommutatorMatrix",
    "GammaBlocks",
    "x_quadratures",
    "p_quadratures",
    "rotated_quadrature",
    "equidistributed_set",
    "from_symplectic",
    "stack",
    "commutator_matrix",
    "pairwise_commuting",
    "wedge_norm",
    "gamma_yz",
    "observables_moments",
    "state_moments",
    "COMMUTING_TOL",
]

COMMUTING_TOL = 1e-10


@dataclass(frozen=True)
class QuadratureSet:
    """``n_out`` quadratures of an ``n_modes``-mode system, one row ``(a | a')`` each."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim == 1:
            c = c[None, :]
        if c.ndim != 2 or c.shape[1] % 2 or c.shape[1] == 0:
            raise ValueError(f"coefficient matrix must be n_out x 2n, got shape {c.shape}")
        if np.any(np.all(c == 0, axis=1)):
            raise ValueError("quadrature set contains a zero row")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n_out(self) -> int:
        return self.coeffs.shape[0]

    @property
    def n_modes(self) -> int:
        return self.coeffs.shape[1] // 2

    @property
    def a(self) -> np.ndarray:
        """x-coefficients, one row per quadrature."""
        return self.coeffs[:, : self.n_modes]

    @property
    def ap(self) -> np.ndarray:
        """p-coefficients, one row per quadrature."""
        return self.coeffs[:, self.n_modes :]

    def __len__(self) -> int:
        return self.n_out

    def row(self, i: int) -> "QuadratureSet":
        return QuadratureSet(self.coeffs[i])

    def scaled(self, factors) -> "QuadratureSet":
        return QuadratureSet(self.coeffs * np.asarray(factors, dtype=float).reshape(-1, 1))


class CommutatorMatrix(NamedTuple):
    ktilde: np.ndarray

    @property
    def abs_det(self) -> float:
        return float(abs(np.linalg.det(self.ktilde)))


class GammaBlocks(NamedTuple):
    Gamma: np.ndarray
    Gamma_y: np.ndarray
    Gamma_z: np.ndarray
    Gamma_yz: np.ndarray


def x_quadratures(n: int = 1) -> QuadratureSet:
    return QuadratureSet(np.hstack([np.eye(n), np.zeros((n, n))]))


def p_quadratures(n: int = 1) -> QuadratureSet:
    return QuadratureSet(np.hstack([np.zeros((n, n)), np.eye(n)]))


def rotated_quadrature(theta: float, scale: float = 1.0) -> QuadratureSet:
    """``scale * (cos theta x + sin theta p)`` on one mode."""
    return QuadratureSet(scale * np.array([np.cos(theta), np.sin(theta)]))


def equidistributed_set(m: int) -> QuadratureSet:
    """``m`` rotated quadratures at angles ``2 pi (i - 1) / m``.

    For ``m = 2`` the two rows are ``x`` and ``-x``, which commute, so every
    bound built from them degenerates.
    """
    if m < 2:
        raise ValueError(f"need at least 2 quadratures, got {m}")
    phis = 2 * np.pi * np.arange(m) / m
    return QuadratureSet(np.column_stack([np.cos(phis), np.sin(phis)]))


def from_symplectic(S) -> QuadratureSet:
    """The output x-quadratures of the symplectic map ``S`` (its first n rows)."""
    S = np.asarray(S, dtype=float)
    return QuadratureSet(S[: S.shape[0] // 2])


def stack(*sets: QuadratureSet) -> QuadratureSet:
    modes = {s.n_modes for s in sets}
    if len(modes) != 1:
        raise ValueError(f"cannot stack quadratures over different mode counts {sorted(modes)}")
    return QuadratureSet(np.vstack([s.coeffs for s in sets]))


def _commutator_factors(Y: QuadratureSet, Z: QuadratureSet) -> np.ndarray:
    # [y_i, z_j] = i (a_i . b'_j - a'_i . b_j)
    return Y.a @ Z.ap.T - Y.ap @ Z.a.T


def commutator_matrix(Y: QuadratureSet, Z: QuadratureSet) -> CommutatorMatrix:
    """``K~_ij`` with ``[y_i, z_j] = i K~_ij``."""
    if Y.n_modes != Z.n_modes:
        raise ValueError(f"quadratures act on {Y.n_modes} and {Z.n_modes} modes")
    if Y.n_out != Z.n_out:
        raise ValueError(f"vectors have {Y.n_out} and {Z.n_out} components")
    return CommutatorMatrix(_commutator_factors(Y, Z))


def pairwise_commuting(Y: QuadratureSet, tol: float = COMMUTING_TOL) -> bool:
    return bool(np.max(np.abs(_commutator_factors(Y, Y))) <= tol)


def wedge_norm(a, b) -> float:
    """``|a ^ b| = sqrt(|a|^2 |b|^2 - (a . b)^2)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"vectors must be 1-D and of equal length, got {a.shape} and {b.shape}")
    if a.size < 2:
        raise ValueError("wedge product needs vectors of length >= 2")
    # the pairwise sum avoids cancellation when a and b are nearly parallel
    diff = np.outer(a, b) - np.outer(b, a)
    return float(np.sqrt(np.sum(np.triu(diff, 1) ** 2)))


def state_moments(state):
    """``(mean, cov)`` of a Gaussian or Fock state in xxpp ordering."""
    if isinstance(state, GaussianState):
        return state.mean, state.cov
    if isinstance(state, FockState):
        return fock_covariance(state)
    raise TypeError(f"unsupported state type {type(state).__name__}")


def _check_modes(state, Q: QuadratureSet):
    if Q.n_modes != state.n:
        raise ValueError(f"quadratures act on {Q.n_modes} modes, state has {state.n}")


def gamma_yz(state, Y: QuadratureSet, Z: QuadratureSet, tol: float = COMMUTING_TOL) -> GammaBlocks:
    """Covariance ``Gamma = M gamma M^T`` of ``R = (y, z)`` with its blocks."""
    for name, Q in (("Y", Y), ("Z", Z)):
        if not pairwise_commuting(Q, tol):
            raise ValueError(f"{name} is not a set of pairwise commuting quadratures")
        _check_modes(state, Q)
    _, cov = state_moments(state)
    M = np.vstack([Y.coeffs, Z.coeffs])
    G = M @ cov @ M.T
    G = (G + G.T) / 2
    k = Y.n_out
    return GammaBlocks(G, G[:k, :k].copy(), G[k:, k:].copy(), G[:k, k:].copy())


def observables_moments(state, R: QuadratureSet):
    """Covariance ``Gamma`` and commutator matrix ``C`` of measured observables.

    ``C_ij = -(i/2) <[R_i, R_j]> = (a_i . a'_j - a'_i . a_j) / 2`` is state independent.
    """
    _check_modes(state, R)
    _, cov = state_moments(state)
    G = R.coeffs @ cov @ R.coeffs.T
    C = _commutator_factors(R, R) / 2
    return (G + G.T) / 2, (C - C.T) / 2
