"""Symplectic linear algebra on phase space.

Conventions used throughout the package:

* hbar = 1, so ``[x, p] = i`` and the vacuum variance is 1/2.
* The canonical quadrature ordering is ``xxpp``, i.e. ``(x1, ..., xn, p1, ..., pn)``.
  The ``interleaved`` ordering ``(x1, p1, ..., xn, pn)`` is accepted at the
  boundary and converted with :func:`convert_ordering`.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

__all__ = [
    "Ordering",
    "symplectic_form",
    "is_symplectic",
    "rotation",
    "squeezer",
    "beamsplitter",
    "embed",
    "direct_sum",
    "unitary_to_symplectic",
    "random_symplectic",
    "williamson",
    "two_mode_symplectic_eigenvalues",
    "convert_ordering",
    "DEFAULT_R_MAX",
]

DEFAULT_R_MAX = 1.5
PAIRING_TOL = 1e-8


class Ordering(str, Enum):
    INTERLEAVED = "interleaved"
    XXPP = "xxpp"

    @classmethod
    def parse(cls, value) -> "Ordering":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown ordering {value!r}; expected 'xxpp' or 'interleaved'") from None


def _mode_count(dim: int) -> int:
    if dim % 2:
        raise ValueError(f"phase-space dimension must be even, got {dim}")
    return dim // 2


def symplectic_form(n: int, ordering: Ordering | str = Ordering.XXPP) -> np.ndarray:
    """Return the symplectic form for ``n`` modes.

    ``Omega = (+)_k [[0, 1], [-1, 0]]`` for the interleaved ordering and
    ``J = [[0, I], [-I, 0]]`` for xxpp.
    """
    if n < 1:
        raise ValueError(f"mode count must be >= 1, got {n}")
    ordering = Ordering.parse(ordering)
    if ordering is Ordering.XXPP:
        eye = np.eye(n)
        zero = np.zeros((n, n))
        return np.block([[zero, eye], [-eye, zero]])
    omega = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n), omega)


def is_symplectic(S, tol: float = 1e-10, ordering: Ordering | str = Ordering.XXPP) -> bool:
    """True iff ``max|S Omega S^T - Omega| <= tol``."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {S.shape}")
    n = _mode_count(S.shape[0])
    omega = symplectic_form(n, ordering)
    return bool(np.max(np.abs(S @ omega @ S.T - omega)) <= tol)


def rotation(theta: float) -> np.ndarray:
    """Phase-shift symplectic matrix ``[[cos, sin], [-sin, cos]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def squeezer(r: float, phi: float = 0.0) -> np.ndarray:
    """Single-mode squeezing matrix.

    The sign of the off-diagonal is chosen so that ``squeezer(r, phi) @ S.T / 2``
    reproduces the squeezed-state covariance

        gamma = 1/2 [[e^{-2r} cos^2 phi + e^{2r} sin^2 phi, sinh 2r sin 2phi],
                     [sinh 2r sin 2phi, e^{2r} cos^2 phi + e^{-2r} sin^2 phi]]

    so ``phi = 0`` squeezes x: ``squeezer(r, 0) = diag(e^{-r}, e^{r})``.
    """
    ch, sh = np.cosh(r), np.sinh(r)
    c2, s2 = np.cos(2 * phi), np.sin(2 * phi)
    return np.array([[ch - c2 * sh, s2 * sh], [s2 * sh, ch + c2 * sh]])


def beamsplitter(theta: float, phase: float = 0.0) -> np.ndarray:
    """Two-mode passive mixer in xxpp ordering (4x4)."""
    t = np.cos(theta)
    rr = np.exp(1j * phase) * np.sin(theta)
    U = np.array([[t, -np.conj(rr)], [rr, t]])
    return unitary_to_symplectic(U)


def unitary_to_symplectic(U) -> np.ndarray:
    """Orthogonal symplectic matrix (xxpp) of the passive map ``a -> U a``."""
    U = np.asarray(U, dtype=complex)
    re, im = U.real, U.imag
    return np.block([[re, -im], [im, re]])


def embed(S_local, modes, n: int) -> np.ndarray:
    """Embed a ``2k x 2k`` xxpp matrix acting on ``modes`` into ``n`` modes."""
    S_local = np.asarray(S_local, dtype=float)
    modes = list(np.atleast_1d(modes))
    k = len(modes)
    if S_local.shape != (2 * k, 2 * k):
        raise ValueError(f"local matrix shape {S_local.shape} does not match {k} mode(s)")
    if len(set(modes)) != k or min(modes) < 0 or max(modes) >= n:
        raise ValueError(f"invalid mode indices {modes} for {n} modes")
    idx = np.array(modes + [m + n for m in modes])
    S = np.eye(2 * n)
    S[np.ix_(idx, idx)] = S_local
    return S


def direct_sum(*blocks) -> np.ndarray:
    """xxpp direct sum of single-mode (or xxpp multi-mode) matrices."""
    n = sum(np.asarray(b).shape[0] // 2 for b in blocks)
    S = np.eye(2 * n)
    start = 0
    for b in blocks:
        b = np.asarray(b, dtype=float)
        k = b.shape[0] // 2
        S = embed(b, list(range(start, start + k)), n) @ S
        start += k
    return S


def _generator(seed) -> np.random.Generator:
    # Philox is counter-based; SeedSequence makes integer and tuple seeds splittable.
    if isinstance(seed, np.random.Generator):
        return seed
    entropy = list(seed) if isinstance(seed, (tuple, list)) else [int(seed)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def _random_passive(n: int, rng: np.random.Generator) -> np.ndarray:
    S = direct_sum(*[rotation(a) for a in rng.uniform(0, 2 * np.pi, n)])
    for i in range(n):
        for j in range(i + 1, n):
            theta, phase = rng.uniform(0, 2 * np.pi, 2)
            S = embed(beamsplitter(theta, phase), [i, j], n) @ S
    return direct_sum(*[rotation(a) for a in rng.uniform(0, 2 * np.pi, n)]) @ S


def random_symplectic(n: int, seed=0, r_max: float = DEFAULT_R_MAX) -> np.ndarray:
    """Seeded random symplectic matrix ``O1 @ (+)_i squeezer(r_i, 0) @ O2`` (xxpp).

    ``O1`` and ``O2`` are products of single-mode phase shifts and two-mode
    mixers with angles uniform in ``[0, 2 pi)``; squeezings are uniform in
    ``[0, r_max]``. Draws come from ``Philox(SeedSequence(seed))`` in a fixed
    order (O2 angles, squeezings, O1 angles), so a given seed gives the same
    matrix on every platform numpy supports.
    """
    if n < 1:
        raise ValueError(f"mode count must be >= 1, got {n}")
    rng = _generator(seed)
    O2 = _random_passive(n, rng)
    rs = rng.uniform(0.0, r_max, n)
    O1 = _random_passive(n, rng)
    return O1 @ direct_sum(*[squeezer(r, 0.0) for r in rs]) @ O2


def williamson(gamma, ordering: Ordering | str = Ordering.XXPP) -> np.ndarray:
    """Symplectic eigenvalues of ``gamma`` in descending order.

    Computed as the moduli of the eigenvalues of ``i Omega gamma``; each value
    appears twice and the pairs are merged.
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {gamma.shape}")
    n = _mode_count(gamma.shape[0])
    scale = max(np.max(np.abs(gamma)), 1.0)
    if np.max(np.abs(gamma - gamma.T)) > 1e-12 * scale:
        raise ValueError("covariance matrix is not symmetric")
    try:
        np.linalg.cholesky(gamma)
    except np.linalg.LinAlgError:
        raise ValueError("covariance matrix is not positive definite") from None
    omega = symplectic_form(n, ordering)
    ev = np.sort(np.abs(np.linalg.eigvals(1j * omega @ gamma)))
    pairs = ev.reshape(n, 2)
    mismatch = np.max(np.abs(pairs[:, 0] - pairs[:, 1]) / np.maximum(pairs[:, 1], 1.0))
    if mismatch > PAIRING_TOL:
        raise ValueError(f"symplectic eigenvalues failed to pair (mismatch {mismatch:.2e})")
    return pairs.mean(axis=1)[::-1].copy()


def two_mode_symplectic_eigenvalues(gamma, ordering: Ordering | str = Ordering.XXPP) -> np.ndarray:
    """Closed-form ``nu_+, nu_-`` of a two-mode covariance matrix.

    ``nu_pm^2 = (Delta +- sqrt(Delta^2 - 4 det gamma)) / 2`` with
    ``Delta = det A + det B + 2 det C`` for the mode blocks ``[[A, C], [C^T, B]]``.
    """
    g = np.asarray(gamma, dtype=float)
    if g.shape != (4, 4):
        raise ValueError(f"expected a 4x4 covariance matrix, got {g.shape}")
    g = convert_ordering(g, ordering, Ordering.INTERLEAVED)
    A, B, C = g[:2, :2], g[2:, 2:], g[:2, 2:]
    delta = np.linalg.det(A) + np.linalg.det(B) + 2 * np.linalg.det(C)
    disc = np.sqrt(max(delta**2 - 4 * np.linalg.det(g), 0.0))
    return np.sqrt(np.array([(delta + disc) / 2, (delta - disc) / 2]))


def _permutation(n: int) -> np.ndarray:
    # perm[k] = interleaved index of the k-th xxpp entry
    return np.concatenate([2 * np.arange(n), 2 * np.arange(n) + 1])


def convert_ordering(M, src: Ordering | str, dst: Ordering | str) -> np.ndarray:
    """Re-order a phase-space vector or matrix between ``xxpp`` and ``interleaved``."""
    M = np.asarray(M)
    src, dst = Ordering.parse(src), Ordering.parse(dst)
    n = _mode_count(M.shape[0])
    if M.ndim == 2 and M.shape[1] != M.shape[0]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if src is dst:
        return M.copy()
    perm = _permutation(n)
    if src is Ordering.XXPP:
        perm = np.argsort(perm)
    if M.ndim == 1:
        return M[perm]
    return M[np.ix_(perm, perm)]
